"""Prod-complexes: down-sets of ``ΔI_1 × ... × ΔI_m`` and their F2 chains.

A prod-simplex is a tuple of ``m`` sorted, nonempty tuples of atom indices.
Complexes keep only their maximal prod-simplices; faces are enumerated on
demand up to an explicit dimension.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from itertools import product as cartesian
from typing import Callable, Iterable, Sequence

from . import _limits
from .chains import ChainComplex, ChainMap, map_from_cells
from .relation import IndexSet, Relation, resolve_axis

ProdSimplex = tuple[tuple[int, ...], ...]


def prod_simplex(*parts: Iterable[int]) -> ProdSimplex:
    return tuple(tuple(sorted(set(p))) for p in parts)


def dimension(sigma: ProdSimplex) -> int:
    return sum(len(part) - 1 for part in sigma)


def cell_key(sigma: ProdSimplex):
    return (dimension(sigma), sigma)


def is_face(sigma: ProdSimplex, tau: ProdSimplex) -> bool:
    """``sigma ≤ tau`` componentwise."""
    return all(set(a) <= set(b) for a, b in zip(sigma, tau))


def maximalize(cells: Iterable[ProdSimplex]) -> tuple[ProdSimplex, ...]:
    """Drop every cell lying below another; result sorted canonically."""
    uniq = set(cells)
    ordered = sorted(uniq, key=lambda s: -sum(len(p) for p in s))
    kept: list[tuple[ProdSimplex, tuple[frozenset, ...]]] = []
    for s in ordered:
        sets = tuple(frozenset(p) for p in s)
        if any(all(a <= b for a, b in zip(sets, other)) for _, other in kept):
            continue
        kept.append((s, sets))
    return tuple(sorted((s for s, _ in kept), key=cell_key))


def box_vertices(sigma: ProdSimplex):
    return cartesian(*sigma)


@dataclass(frozen=True)
class ProdComplex:
    """Down-closed set of prod-simplices, stored as its maximal elements."""

    axes: tuple[IndexSet, ...]
    maximal: tuple[ProdSimplex, ...]

    def __post_init__(self):
        object.__setattr__(self, "axes", tuple(self.axes))
        cells = [prod_simplex(*s) for s in self.maximal]
        sizes = [len(a) for a in self.axes]
        for s in cells:
            if len(s) != len(sizes):
                raise ValueError(f"prod-simplex {s} has {len(s)} parts, expected {len(sizes)}")
            for part, n in zip(s, sizes):
                if not part:
                    raise ValueError(f"prod-simplex {s} has an empty part")
                if part[0] < 0 or part[-1] >= n:
                    raise ValueError(f"prod-simplex {s} has atoms out of range")
        object.__setattr__(self, "maximal", maximalize(cells))

    @property
    def order(self) -> int:
        return len(self.axes)

    def __contains__(self, sigma) -> bool:
        return contains(self, sigma)

    def is_empty(self) -> bool:
        return not self.maximal

    def dim(self) -> int:
        return max((dimension(s) for s in self.maximal), default=-1)

    def vertices(self) -> frozenset[tuple[int, ...]]:
        return frozenset(v for s in self.maximal for v in box_vertices(s))

    def axis(self, key: int | str) -> int:
        return resolve_axis(self.axes, key)

    def to_json(self) -> dict:
        return {
            "kind": "prod-complex",
            "axes": [{"name": a.label, "size": len(a)} for a in self.axes],
            "maximal": [[list(p) for p in s] for s in self.maximal],
        }


# ---------------------------------------------------------------------------
# Dowker relational product


def dowker_product(r: Relation) -> ProdComplex:
    """All inclusion-maximal boxes ``σ_1 × ... × σ_m ⊆ R``.

    Recursion on the first axis: for a maximal box the remaining parts form a
    maximal box of ``N(σ_1) = ∩_{i ∈ σ_1} slice(R, 0, i)``, and ``σ_1`` is
    everything whose slice contains that box.  So it suffices to walk the
    closure of the slices under intersection and recurse on each member.
    """
    boxes = _maximal_boxes(frozenset(r.tuples), r.arity)
    return ProdComplex(r.axes, tuple(tuple(tuple(sorted(p)) for p in b) for b in boxes))


@lru_cache(maxsize=4096)
def _maximal_boxes(tuples: frozenset, m: int) -> frozenset:
    if not tuples:
        return frozenset()
    if m == 1:
        return frozenset({(frozenset(t[0] for t in tuples),)})
    slices: dict[int, set] = {}
    for t in tuples:
        slices.setdefault(t[0], set()).add(t[1:])
    frozen = {a: frozenset(s) for a, s in slices.items()}
    generators = set(frozen.values())
    closed = set(generators)
    frontier = list(generators)
    while frontier:
        nxt = []
        for X in frontier:
            for S in generators:
                Y = X & S
                if Y and Y not in closed:
                    closed.add(Y)
                    nxt.append(Y)
        frontier = nxt
    result = set()
    for X in closed:
        for rest in _maximal_boxes(X, m - 1):
            verts = list(cartesian(*rest))
            first = frozenset(a for a, S in frozen.items() if all(v in S for v in verts))
            result.add((first,) + rest)
    return frozenset(result)


# ---------------------------------------------------------------------------
# quotients and membership


def _drop(seq, k: int):
    return seq[:k] + seq[k + 1 :]


def quotient(p: ProdComplex, axis: int | str) -> ProdComplex:
    """Delete the ``axis``-th part of every prod-simplex."""
    k = p.axis(axis)
    if p.order < 2:
        raise ValueError("cannot take a Dowkerian quotient of an order-1 complex")
    return ProdComplex(_drop(p.axes, k), tuple(_drop(s, k) for s in p.maximal))


def iterated_quotient(p: ProdComplex, axes: Iterable[int | str]) -> ProdComplex:
    """Delete several parts at once; must leave at least one axis."""
    drop = {p.axis(a) for a in axes}
    if len(drop) >= p.order:
        raise ValueError("cannot quotient out every axis")
    keep = [k for k in range(p.order) if k not in drop]
    return ProdComplex(
        tuple(p.axes[k] for k in keep), tuple(tuple(s[k] for k in keep) for s in p.maximal)
    )


def contains(p: ProdComplex, sigma: Sequence[Iterable[int]]) -> bool:
    if len(sigma) != p.order:
        raise ValueError(f"prod-simplex has {len(sigma)} parts, complex has order {p.order}")
    sets = [set(part) for part in sigma]
    if not all(sets):
        return False
    return any(all(a <= set(b) for a, b in zip(sets, m)) for m in p.maximal)


def _subboxes(box: ProdSimplex, budget: int):
    """Every sub-box of ``box`` of dimension at most ``budget``."""
    if not box:
        yield ()
        return
    head, rest = box[0], box[1:]
    for size in range(1, min(len(head), budget + 1) + 1):
        for part in combinations(head, size):
            for tail in _subboxes(rest, budget - (size - 1)):
                yield (part,) + tail


def cells_up_to(p: ProdComplex, d: int) -> list[ProdSimplex]:
    """All prod-simplices of dimension ``<= d``, sorted by (dimension, parts)."""
    if d < 0:
        raise ValueError("dimension cap must be nonnegative")
    cells: set[ProdSimplex] = set()
    for box in p.maximal:
        cells.update(_subboxes(box, d))
        _limits.check(len(cells))
    return sorted(cells, key=cell_key)


def facets(sigma: ProdSimplex):
    for k, part in enumerate(sigma):
        if len(part) < 2:
            continue
        for i in range(len(part)):
            yield sigma[:k] + (part[:i] + part[i + 1 :],) + sigma[k + 1 :]


def chain_complex_from_cells(cells: Sequence, dim: Callable, faces: Callable, top: int) -> ChainComplex:
    """Assemble an F2 chain complex from cells sorted canonically."""
    basis: list[list] = [[] for _ in range(top + 1)]
    for c in cells:
        d = dim(c)
        if d <= top:
            basis[d].append(c)
    index = [{c: i for i, c in enumerate(b)} for b in basis]
    bounds = []
    for d in range(top + 1):
        if d == 0:
            bounds.append(((),) * len(basis[0]))
            continue
        below = index[d - 1]
        cols = []
        for c in basis[d]:
            rows: set[int] = set()
            for f in faces(c):
                rows.symmetric_difference_update((below[f],))
            cols.append(tuple(sorted(rows)))
        bounds.append(tuple(cols))
    return ChainComplex(tuple(tuple(b) for b in basis), tuple(bounds))


def cellular_chain_complex(p: ProdComplex, d_max: int, top: int | None = None) -> ChainComplex:
    """Cellular F2 chains through degree ``d_max + 1`` (homology reliable to ``d_max``).

    Over F2 the product boundary is the Leibniz sum of the factor boundaries.
    ``top`` overrides the highest degree built.
    """
    if d_max < 0:
        raise ValueError("d_max must be nonnegative")
    top = d_max + 1 if top is None else top
    return chain_complex_from_cells(cells_up_to(p, top), dimension, facets, top)


def prod_map_image(sigma: ProdSimplex, maps: Sequence[Callable[[int], int] | None]) -> ProdSimplex | None:
    """Image cell of a prod-map, or None when some factor collapses its part.

    ``None`` in ``maps`` means the factor maps to a point and is deleted.
    """
    out = []
    for part, f in zip(sigma, maps):
        if f is None:
            if len(part) > 1:
                return None
            continue
        img = {f(a) for a in part}
        if len(img) != len(part):
            return None
        out.append(tuple(sorted(img)))
    return tuple(out)


def prod_chain_map(
    source: ChainComplex, target: ChainComplex, maps: Sequence[Callable[[int], int] | None]
) -> ChainMap:
    """Cellular chain map of a prod-map ``(f_1, ..., f_m)`` over F2."""
    return map_from_cells(source, target, lambda s: prod_map_image(s, maps))


def quotient_chain_map(p: ProdComplex, axis: int | str, d_max: int) -> ChainMap:
    """Chain map of the Dowkerian quotient ``P -> P/I_k``.

    A cell survives iff its ``k``-th part is a single atom.  The source is
    built through ``d_max`` only, which is all the cone needs.
    """
    k = p.axis(axis)
    q = quotient(p, k)
    src = cellular_chain_complex(p, d_max, top=d_max)
    tgt = cellular_chain_complex(q, d_max)
    maps = [(lambda a: a)] * p.order
    maps[k] = None
    return prod_chain_map(src, tgt, maps)
