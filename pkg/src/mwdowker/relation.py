"""Multiway relations, filtered relations and the relations derived from them.

Atoms are dense integer indices per axis; labels are only kept for I/O.
Axes are numbered from 0.
"""

from __future__ import annotations

import io
import json
import math
from dataclasses import dataclass
from itertools import product as _cartesian
from types import MappingProxyType
from typing import Hashable, Iterable, Mapping, Sequence

DEFAULT_NAMES = "IJKLMNOP"


class RelationError(ValueError):
    """Invalid relation data or an invalid axis/atom reference."""


class RelationParseError(RelationError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)


@dataclass(frozen=True)
class IndexSet:
    label: str
    elements: tuple[Hashable, ...]

    def __post_init__(self):
        if not self.elements:
            raise RelationError(f"index set {self.label!r} is empty")
        if len(set(self.elements)) != len(self.elements):
            raise RelationError(f"index set {self.label!r} has repeated elements")

    def __len__(self) -> int:
        return len(self.elements)

    @classmethod
    def range(cls, label: str, n: int) -> "IndexSet":
        return cls(label, tuple(range(n)))


def default_axes(dims: Sequence[int], names: Sequence[str] | None = None) -> tuple[IndexSet, ...]:
    if names is None:
        names = _default_names(len(dims))
    return tuple(IndexSet.range(name, n) for name, n in zip(names, dims))


def _default_names(m: int) -> list[str]:
    if m <= len(DEFAULT_NAMES):
        return list(DEFAULT_NAMES[:m])
    return [f"I{k + 1}" for k in range(m)]


def _check_tuples(axes: Sequence[IndexSet], tuples: Iterable[tuple[int, ...]]) -> None:
    sizes = [len(a) for a in axes]
    for t in tuples:
        if len(t) != len(sizes):
            raise RelationError(f"tuple {t} does not have arity {len(sizes)}")
        for k, (i, n) in enumerate(zip(t, sizes)):
            if not isinstance(i, int) or not 0 <= i < n:
                raise RelationError(f"tuple {t}: index {i} out of range for axis {k}")


@dataclass(frozen=True)
class Relation:
    """A relation ``R ⊆ I_1 × ... × I_m`` stored as a set of index tuples."""

    axes: tuple[IndexSet, ...]
    tuples: frozenset[tuple[int, ...]]

    def __post_init__(self):
        if not self.axes:
            raise RelationError("a relation needs at least one axis")
        object.__setattr__(self, "axes", tuple(self.axes))
        object.__setattr__(self, "tuples", frozenset(tuple(t) for t in self.tuples))
        _check_tuples(self.axes, self.tuples)

    @classmethod
    def from_tuples(
        cls, dims: Sequence[int], tuples: Iterable[Sequence[int]], names: Sequence[str] | None = None
    ) -> "Relation":
        return cls(default_axes(dims, names), frozenset(tuple(t) for t in tuples))

    @property
    def arity(self) -> int:
        return len(self.axes)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(len(a) for a in self.axes)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(a.label for a in self.axes)

    def __len__(self) -> int:
        return len(self.tuples)

    def __contains__(self, t) -> bool:
        return tuple(t) in self.tuples

    def __iter__(self):
        return iter(sorted(self.tuples))

    def axis(self, key: int | str) -> int:
        return resolve_axis(self.axes, key)

    def issubset(self, other: "Relation") -> bool:
        return self.tuples <= other.tuples


def resolve_axis(axes: Sequence[IndexSet], key: int | str) -> int:
    """Axis position from a 0-based index or an axis label."""
    if isinstance(key, str) and not key.lstrip("-").isdigit():
        for k, a in enumerate(axes):
            if a.label == key:
                return k
        raise RelationError(f"no axis named {key!r}")
    k = int(key)
    if not 0 <= k < len(axes):
        raise RelationError(f"axis {k} out of range for arity {len(axes)}")
    return k


@dataclass(frozen=True)
class FilteredRelation:
    """Real values on some tuples; absent tuples never enter the filtration."""

    axes: tuple[IndexSet, ...]
    values: Mapping[tuple[int, ...], float]

    def __post_init__(self):
        object.__setattr__(self, "axes", tuple(self.axes))
        vals = {tuple(t): float(v) for t, v in self.values.items()}
        _check_tuples(self.axes, vals)
        for t, v in vals.items():
            if not math.isfinite(v):
                raise RelationError(f"value for {t} is not finite")
        object.__setattr__(self, "values", MappingProxyType(vals))

    @classmethod
    def from_values(
        cls, dims: Sequence[int], values: Mapping[Sequence[int], float], names: Sequence[str] | None = None
    ) -> "FilteredRelation":
        return cls(default_axes(dims, names), {tuple(t): v for t, v in values.items()})

    @property
    def arity(self) -> int:
        return len(self.axes)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(len(a) for a in self.axes)

    def support(self) -> Relation:
        return Relation(self.axes, frozenset(self.values))

    def thresholds(self) -> list[float]:
        return sorted(set(self.values.values()))

    def __eq__(self, other):
        if not isinstance(other, FilteredRelation):
            return NotImplemented
        return self.axes == other.axes and dict(self.values) == dict(other.values)

    def __hash__(self):
        return hash((self.axes, frozenset(self.values.items())))


# ---------------------------------------------------------------------------
# derived relations


def sublevel(fr: FilteredRelation, t: float) -> Relation:
    return Relation(fr.axes, frozenset(x for x, v in fr.values.items() if v <= t))


def _drop(t: tuple[int, ...], k: int) -> tuple[int, ...]:
    return t[:k] + t[k + 1 :]


def slice(r: Relation, axis: int | str, atom: int) -> Relation:
    """Tuples of ``r`` whose ``axis`` component equals ``atom``, with that axis removed."""
    k = r.axis(axis)
    if r.arity < 2:
        raise RelationError("slicing needs arity at least 2")
    if not 0 <= atom < len(r.axes[k]):
        raise RelationError(f"atom {atom} out of range for axis {k}")
    return Relation(_drop(r.axes, k), frozenset(_drop(t, k) for t in r.tuples if t[k] == atom))


def project(r: Relation, axis: int | str) -> Relation:
    """Drop one axis: the union of all slices along it."""
    k = r.axis(axis)
    if r.arity < 2:
        raise RelationError("cannot project a unary relation")
    return Relation(_drop(r.axes, k), frozenset(_drop(t, k) for t in r.tuples))


def product_axis(a: IndexSet, b: IndexSet) -> IndexSet:
    """The index set ``a × b``; element ``(x, y)`` has index ``x * len(b) + y``."""
    return IndexSet(f"{a.label}×{b.label}", tuple(_cartesian(a.elements, b.elements)))


def rebracket(r: Relation, kept: int | str) -> Relation:
    """Ternary ``R`` as a binary relation between ``kept`` and the other two axes.

    Keeping axis I gives ``{(i, (j, k))}``; the second axis is the product of the
    remaining axes in their original order.
    """
    if r.arity != 3:
        raise RelationError("rebracketing is only defined for ternary relations")
    k = r.axis(kept)
    a, b = [x for x in range(3) if x != k]
    nb = len(r.axes[b])
    axes = (r.axes[k], product_axis(r.axes[a], r.axes[b]))
    return Relation(axes, frozenset((t[k], t[a] * nb + t[b]) for t in r.tuples))


def product(r1: Relation, r2: Relation) -> Relation:
    return Relation(r1.axes + r2.axes, frozenset(s + t for s in r1.tuples for t in r2.tuples))


def permute(r: Relation, order: Sequence[int]) -> Relation:
    """Reorder axes: new axis ``n`` is old axis ``order[n]``."""
    if sorted(order) != list(range(r.arity)):
        raise RelationError(f"{order} is not a permutation of the axes")
    return Relation(
        tuple(r.axes[k] for k in order), frozenset(tuple(t[k] for k in order) for t in r.tuples)
    )


# ---------------------------------------------------------------------------
# parsing and serialization


def parse_relation(source, format: str = "text") -> Relation | FilteredRelation:
    """Parse a relation from bytes, str or a binary/text stream.

    Text grammar::

        # comment
        dims n1 n2 ... nm
        names A B C          (optional)
        labels k a b c ...   (optional, one per axis)
        i1 i2 ... im [value]
    """
    if hasattr(source, "read"):
        source = source.read()
    if isinstance(source, bytes):
        source = source.decode("utf-8")
    if format == "json":
        return _parse_json(source)
    if format != "text":
        raise RelationError(f"unknown format {format!r}")
    return _parse_text(source)


def _parse_text(text: str) -> Relation | FilteredRelation:
    dims: list[int] | None = None
    names: list[str] | None = None
    labels: dict[int, list[str]] = {}
    rows: list[tuple[int, tuple[int, ...], float | None]] = []
    for lineno, raw in enumerate(io.StringIO(text), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        words = line.split()
        head = words[0]
        if head == "dims":
            if dims is not None:
                raise RelationParseError("repeated dims header", lineno)
            try:
                dims = [int(w) for w in words[1:]]
            except ValueError:
                raise RelationParseError("dims must be integers", lineno) from None
            if not dims or any(n <= 0 for n in dims):
                raise RelationParseError("dims must be positive integers", lineno)
            continue
        if dims is None:
            raise RelationParseError("expected 'dims' header before data", lineno)
        if head == "names":
            if len(words) - 1 != len(dims):
                raise RelationParseError("names must list one name per axis", lineno)
            names = words[1:]
            continue
        if head == "labels":
            try:
                k = int(words[1])
            except (IndexError, ValueError):
                raise RelationParseError("labels line needs an axis number", lineno) from None
            if not 0 <= k < len(dims):
                raise RelationParseError(f"labels for axis {k} out of range", lineno)
            if len(words) - 2 != dims[k]:
                raise RelationParseError(f"axis {k} needs {dims[k]} labels", lineno)
            labels[k] = words[2:]
            continue
        m = len(dims)
        if len(words) not in (m, m + 1):
            raise RelationParseError(f"expected {m} indices and an optional value", lineno)
        try:
            t = tuple(int(w) for w in words[:m])
        except ValueError:
            raise RelationParseError("indices must be integers", lineno) from None
        for k, (i, n) in enumerate(zip(t, dims)):
            if not 0 <= i < n:
                raise RelationParseError(f"index {i} out of range for axis {k} (size {n})", lineno)
        value = None
        if len(words) == m + 1:
            try:
                value = float(words[m])
            except ValueError:
                raise RelationParseError("value must be a real number", lineno) from None
            if not math.isfinite(value):
                raise RelationParseError("value must be finite", lineno)
        rows.append((lineno, t, value))
    if dims is None:
        raise RelationParseError("missing 'dims' header")
    return _assemble(dims, names, labels, rows)


def _assemble(dims, names, labels, rows) -> Relation | FilteredRelation:
    names = names or _default_names(len(dims))
    axes = tuple(
        IndexSet(names[k], tuple(labels[k]) if k in labels else tuple(range(n)))
        for k, n in enumerate(dims)
    )
    has_value = {v is not None for _, _, v in rows}
    if len(has_value) > 1:
        first = rows[0][2] is not None
        line = next(ln for ln, _, v in rows if (v is not None) != first)
        raise RelationParseError("values must be given on every tuple line or on none", line)
    seen: dict[tuple[int, ...], int] = {}
    for ln, t, _ in rows:
        if t in seen:
            raise RelationParseError(f"duplicate tuple {t} (first on line {seen[t]})", ln)
        seen[t] = ln
    if has_value == {True}:
        return FilteredRelation(axes, {t: v for _, t, v in rows})
    return Relation(axes, frozenset(t for _, t, _ in rows))


def _parse_json(text: str) -> Relation | FilteredRelation:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise RelationParseError(f"invalid JSON: {exc.msg}", exc.lineno) from None
    if not isinstance(doc, dict) or "dims" not in doc:
        raise RelationParseError("JSON relation needs a 'dims' field")
    dims = doc["dims"]
    if not isinstance(dims, list) or not dims or not all(isinstance(n, int) and n > 0 for n in dims):
        raise RelationParseError("'dims' must be a nonempty list of positive integers")
    names = doc.get("names")
    if names is not None and len(names) != len(dims):
        raise RelationParseError("'names' must list one name per axis")
    labels = {}
    for k, labs in enumerate(doc.get("labels") or []):
        if labs is None:
            continue
        if len(labs) != dims[k]:
            raise RelationParseError(f"axis {k} needs {dims[k]} labels")
        labels[k] = [lab if isinstance(lab, (str, int)) else tuple(lab) for lab in labs]
    tuples = doc.get("tuples", [])
    values = doc.get("values")
    if values is not None and len(values) != len(tuples):
        raise RelationParseError("'values' must have one entry per tuple")
    rows = []
    for n, t in enumerate(tuples):
        if not isinstance(t, list) or len(t) != len(dims) or not all(isinstance(i, int) for i in t):
            raise RelationParseError(f"tuple #{n} is not a list of {len(dims)} integers")
        for k, (i, size) in enumerate(zip(t, dims)):
            if not 0 <= i < size:
                raise RelationParseError(f"tuple #{n}: index {i} out of range for axis {k}")
        value = None
        if values is not None:
            value = float(values[n])
            if not math.isfinite(value):
                raise RelationParseError(f"tuple #{n}: value must be finite")
        rows.append((n, tuple(t), value))
    if values is not None and not rows:
        return FilteredRelation(_assemble(dims, names, labels, rows).axes, {})
    return _assemble(dims, names, labels, rows)


def _label_json(x):
    return list(x) if isinstance(x, tuple) else x


def relation_to_json(r: Relation | FilteredRelation) -> dict:
    doc = {
        "dims": list(r.dims),
        "names": [a.label for a in r.axes],
        "labels": [[_label_json(e) for e in a.elements] for a in r.axes],
    }
    if isinstance(r, FilteredRelation):
        items = sorted(r.values.items())
        doc["tuples"] = [list(t) for t, _ in items]
        doc["values"] = [v for _, v in items]
    else:
        doc["tuples"] = [list(t) for t in sorted(r.tuples)]
    return doc


def relation_to_text(r: Relation | FilteredRelation) -> str:
    lines = ["dims " + " ".join(str(n) for n in r.dims), "names " + " ".join(a.label for a in r.axes)]
    for k, a in enumerate(r.axes):
        if a.elements != tuple(range(len(a))):
            lines.append(f"labels {k} " + " ".join(str(e) for e in a.elements))
    if isinstance(r, FilteredRelation):
        for t, v in sorted(r.values.items()):
            lines.append(" ".join(map(str, t)) + f" {v!r}")
    else:
        for t in sorted(r.tuples):
            lines.append(" ".join(map(str, t)))
    return "\n".join(lines) + "\n"


def load_relation(path, format: str | None = None) -> Relation | FilteredRelation:
    path = str(path)
    if format is None:
        format = "json" if path.endswith(".json") else "text"
    with open(path, "rb") as fh:
        return parse_relation(fh, format)
