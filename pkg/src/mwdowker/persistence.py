"""Sublevel filtrations of the relation complexes and their persistence diagrams.

A filtered relation ``r`` gives the nested family ``R^t = {x : r(x) <= t}``.
Each construction below assigns every cell the first threshold at which it
appears, so the sublevel sets of the filtered complex are exactly the
complexes of ``R^t``.
"""

from __future__ import annotations

import csv
import io
import math
from collections import Counter
from dataclasses import dataclass
from itertools import product as cartesian
from typing import Callable, Hashable, Sequence

from .chains import Column
from .relation import FilteredRelation, Relation, RelationError, sublevel
from .simplicial import (
    SimplicialComplex,
    boundary_faces,
    cuboid,
    faces_up_to,
    multiway_dowker,
    simplex_key,
)

INF = math.inf


@dataclass(frozen=True)
class FilteredComplex:
    """Cells in filtration order with boundaries as indices into that order.

    ``cells[i] = (cell, dim, value)``.  Homology is tracked through ``d_max``;
    the complex carries cells up to ``d_max + 1`` so deaths in ``d_max`` are seen.
    """

    cells: tuple[tuple[Hashable, int, float], ...]
    boundaries: tuple[Column, ...]
    d_max: int

    def __post_init__(self):
        if len(self.cells) != len(self.boundaries):
            raise ValueError("every cell needs a boundary column")

    def __len__(self) -> int:
        return len(self.cells)

    def values(self) -> dict[Hashable, float]:
        return {c: v for c, _, v in self.cells}

    def monotonicity_failures(self) -> list[tuple[Hashable, Hashable]]:
        """``(face, cell)`` pairs where the face enters later, or after in the order."""
        bad = []
        for i, (cell, _, v) in enumerate(self.cells):
            for j in self.boundaries[i]:
                if j >= i or self.cells[j][2] > v:
                    bad.append((self.cells[j][0], cell))
        return bad

    def is_monotone(self) -> bool:
        return not self.monotonicity_failures()

    def sublevel_cells(self, t: float) -> set:
        return {c for c, _, v in self.cells if v <= t}


def filtered_simplicial(values: dict, d_max: int) -> FilteredComplex:
    """Order simplices by (value, dimension, vertices) and wire up the boundaries."""
    if d_max < 0:
        raise ValueError("d_max must be nonnegative")
    ordered = sorted(values, key=lambda s: (values[s],) + simplex_key(s))
    index = {s: i for i, s in enumerate(ordered)}
    bounds = []
    for s in ordered:
        bounds.append(tuple(sorted(index[f] for f in boundary_faces(s))))
    cells = tuple((s, len(s) - 1, values[s]) for s in ordered)
    return FilteredComplex(cells, tuple(bounds), d_max)


def _projection_box(rho) -> list[tuple[int, ...]]:
    m = len(rho[0])
    return [sorted({v[k] for v in rho}) for k in range(m)]


def cuboid_value(fr: FilteredRelation, rho) -> float:
    """Largest value over the projection box of ``rho`` (infinite if it leaves ``R``)."""
    vals = fr.values
    return max(vals.get(x, INF) for x in cartesian(*_projection_box(rho)))


def multiway_dowker_value(fr: FilteredRelation, axis: int, zeta) -> float:
    """Best witness over atoms of ``axis`` of the largest value on box × {atom}."""
    vals = fr.values
    box = _projection_box(zeta)
    best = INF
    for atom in range(len(fr.axes[axis])):
        worst = -INF
        for x in cartesian(*box):
            v = vals.get(x[:axis] + (atom,) + x[axis:], INF)
            if v > worst:
                worst = v
                if worst >= best:
                    break
        best = min(best, worst)
    return best


def filtered_cuboid(fr: FilteredRelation, d_max: int) -> FilteredComplex:
    simplices = faces_up_to(cuboid(fr.support()), d_max + 1)
    return filtered_simplicial({s: cuboid_value(fr, s) for s in simplices}, d_max)


def filtered_multiway_dowker(fr: FilteredRelation, axis: int | str, d_max: int) -> FilteredComplex:
    k = fr.support().axis(axis)
    if fr.arity < 2:
        raise RelationError("multiway Dowker filtrations need arity at least 2")
    simplices = faces_up_to(multiway_dowker(fr.support(), k), d_max + 1)
    return filtered_simplicial({s: multiway_dowker_value(fr, k, s) for s in simplices}, d_max)


def values_by_recomputation(
    fr: FilteredRelation, build: Callable[[Relation], SimplicialComplex], d_max: int
) -> dict:
    """First threshold at which each simplex appears, rebuilding the complex each time.

    Slow but independent of the value formulas; used as the test oracle.
    """
    first: dict = {}
    for t in fr.thresholds():
        for s in faces_up_to(build(sublevel(fr, t)), d_max + 1):
            first.setdefault(s, t)
    return first


# ---------------------------------------------------------------------------
# diagrams


@dataclass(frozen=True)
class PersistenceDiagram:
    """Per-dimension sorted multiset of ``(birth, death)``; death may be ``inf``."""

    bars: tuple[tuple[tuple[float, float], ...], ...]

    def __post_init__(self):
        for dim in self.bars:
            for b, d in dim:
                if b > d:
                    raise ValueError(f"bar ({b}, {d}) dies before it is born")

    def __getitem__(self, dim: int) -> tuple[tuple[float, float], ...]:
        return self.bars[dim]

    def __len__(self) -> int:
        return len(self.bars)

    def infinite_count(self, dim: int) -> int:
        return sum(1 for _, d in self.bars[dim] if d == INF)

    def to_json(self) -> dict:
        return {
            str(dim): [[b, None if d == INF else d] for b, d in bars] for dim, bars in enumerate(self.bars)
        }

    def to_csv(self) -> str:
        out = io.StringIO()
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["dim", "birth", "death"])
        for dim, bars in enumerate(self.bars):
            for b, d in bars:
                w.writerow([dim, b, "inf" if d == INF else d])
        return out.getvalue()


def persistence_diagram(fc: FilteredComplex) -> PersistenceDiagram:
    """Standard column reduction over F2; bars of zero length are dropped.

    Reports dimensions ``0 .. d_max``.
    """
    bad = fc.monotonicity_failures()
    if bad:
        face, cell = bad[0]
        raise ValueError(f"filtration is not monotone: face {face!r} enters after {cell!r}")
    pivot_owner: dict[int, int] = {}
    paired: set[int] = set()
    bars: list[list[tuple[float, float]]] = [[] for _ in range(fc.d_max + 1)]
    for j, col in enumerate(fc.boundaries):
        c = 0
        for i in col:
            c ^= 1 << i
        while c:
            p = c.bit_length() - 1
            q = pivot_owner.get(p)
            if q is None:
                break
            c ^= q
        if not c:
            continue
        p = c.bit_length() - 1
        pivot_owner[p] = c
        paired.update((p, j))
        _, dim, birth = fc.cells[p]
        death = fc.cells[j][2]
        if dim <= fc.d_max and birth < death:
            bars[dim].append((birth, death))
    for i, (_, dim, v) in enumerate(fc.cells):
        if i not in paired and dim <= fc.d_max:
            bars[dim].append((v, INF))
    return PersistenceDiagram(tuple(tuple(sorted(b)) for b in bars))


def diagrams_equal(a: PersistenceDiagram, b: PersistenceDiagram) -> bool:
    """Exact multiset equality in every dimension both diagrams report."""
    n = max(len(a), len(b))
    for dim in range(n):
        x = Counter(a.bars[dim]) if dim < len(a) else Counter()
        y = Counter(b.bars[dim]) if dim < len(b) else Counter()
        if x != y:
            return False
    return True


def diagram_from_json(data: dict) -> PersistenceDiagram:
    n = max((int(k) for k in data), default=-1) + 1
    bars = [[] for _ in range(n)]
    for k, pairs in data.items():
        bars[int(k)] = sorted((float(b), INF if d is None else float(d)) for b, d in pairs)
    return PersistenceDiagram(tuple(tuple(b) for b in bars))


def filtered_diagrams(fr: FilteredRelation, d_max: int, axes: Sequence[int] | None = None) -> dict[str, PersistenceDiagram]:
    """Diagrams of the cuboid filtration and of each requested multiway Dowker filtration."""
    axes = range(fr.arity) if axes is None else axes
    out = {"cuboid": persistence_diagram(filtered_cuboid(fr, d_max))}
    for k in axes:
        name = fr.axes[k].label
        out[f"dowker/{name}"] = persistence_diagram(filtered_multiway_dowker(fr, k, d_max))
    return out
