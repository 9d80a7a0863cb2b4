from itertools import product

import pytest
from hypothesis import settings, strategies as st

from mwdowker.relation import FilteredRelation, Relation

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@st.composite
def relations(draw, min_arity=1, max_arity=3, max_size=3):
    m = draw(st.integers(min_arity, max_arity))
    dims = [draw(st.integers(1, max_size)) for _ in range(m)]
    cells = list(product(*(range(n) for n in dims)))
    chosen = draw(st.lists(st.sampled_from(cells), unique=True, max_size=len(cells)))
    return Relation.from_tuples(dims, chosen)


@st.composite
def filtered_relations(draw, min_arity=2, max_arity=3, max_size=3, full=False):
    r = draw(relations(min_arity, max_arity, max_size))
    cells = list(product(*(range(n) for n in r.dims))) if full else sorted(r.tuples)
    values = {t: draw(st.integers(0, 6)) / 2 for t in cells}
    return FilteredRelation.from_values(r.dims, values)


_ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def criterion():
    """Record one PASS/FAIL line per acceptance criterion and fail the test on FAIL."""

    def record(number, ok, detail, elapsed=None, limit=None):
        timing = ""
        if elapsed is not None:
            timing = f" [{elapsed:.2f}s" + (f" < {limit}s" if limit else "") + "]"
            if limit is not None and elapsed >= limit:
                ok = False
        line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}{timing}"
        _ACCEPTANCE_LINES.append(line)
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
