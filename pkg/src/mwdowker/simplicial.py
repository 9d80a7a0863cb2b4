"""Simplicial complexes built from relations and prod-complexes.

Vertices are tuples of atom indices, one per axis of the vertex universe, so
complexes on ``I`` and on ``I × J × K`` share one representation.  A simplex
is a sorted tuple of vertices.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from itertools import product as cartesian
from types import MappingProxyType
from typing import Callable, Iterable, Mapping, Sequence

from . import _limits
from .chains import ChainComplex, ChainMap, IntegerHomology, integer_homology, map_from_cells
from .prodcomplex import ProdComplex, chain_complex_from_cells, dowker_product, quotient
from .relation import IndexSet, Relation, RelationError, resolve_axis
from .relation import slice as relation_slice

Vertex = tuple[int, ...]
Simplex = tuple[Vertex, ...]


def simplex(vertices: Iterable[Vertex]) -> Simplex:
    return tuple(sorted(set(map(tuple, vertices))))


def simplex_key(s: Simplex):
    return (len(s) - 1, s)


def maximalize(simplices: Iterable[Simplex]) -> tuple[Simplex, ...]:
    uniq = {simplex(s) for s in simplices}
    ordered = sorted(uniq, key=lambda s: -len(s))
    kept: list[tuple[Simplex, frozenset]] = []
    for s in ordered:
        fs = frozenset(s)
        if any(fs <= other for _, other in kept):
            continue
        kept.append((s, fs))
    return tuple(sorted((s for s, _ in kept), key=simplex_key))


@dataclass(frozen=True)
class SimplicialComplex:
    """Down-set of simplices on the product of ``axes``, kept as maximal faces."""

    axes: tuple[IndexSet, ...]
    maximal: tuple[Simplex, ...]

    def __post_init__(self):
        object.__setattr__(self, "axes", tuple(self.axes))
        sizes = [len(a) for a in self.axes]
        for s in self.maximal:
            if not s:
                raise ValueError("empty simplex")
            for v in s:
                if len(v) != len(sizes) or not all(0 <= i < n for i, n in zip(v, sizes)):
                    raise ValueError(f"vertex {v} is not in the vertex universe")
        object.__setattr__(self, "maximal", maximalize(self.maximal))

    def __contains__(self, rho) -> bool:
        return contains_simplex(self, rho)

    def is_empty(self) -> bool:
        return not self.maximal

    def dim(self) -> int:
        return max((len(s) - 1 for s in self.maximal), default=-1)

    def vertices(self) -> frozenset[Vertex]:
        return frozenset(v for s in self.maximal for v in s)

    def to_json(self) -> dict:
        return {
            "kind": "simplicial-complex",
            "universe": [{"name": a.label, "size": len(a)} for a in self.axes],
            "maximal": [[list(v) for v in s] for s in self.maximal],
        }


def contains_simplex(s: SimplicialComplex, rho: Iterable[Vertex]) -> bool:
    rho = frozenset(map(tuple, rho))
    if not rho:
        return False
    return any(rho <= frozenset(m) for m in s.maximal)


def faces_up_to(s: SimplicialComplex, d: int) -> list[Simplex]:
    """All simplices of dimension ``<= d``, sorted by (dimension, vertices)."""
    if d < 0:
        raise ValueError("dimension cap must be nonnegative")
    faces: set[Simplex] = set()
    for m in s.maximal:
        for size in range(1, min(len(m), d + 1) + 1):
            faces.update(combinations(m, size))
            _limits.check(len(faces))
    return sorted(faces, key=simplex_key)


def boundary_faces(rho: Simplex):
    if len(rho) < 2:
        return
    for i in range(len(rho)):
        yield rho[:i] + rho[i + 1 :]


def simplicial_chain_complex(s: SimplicialComplex, d_max: int, top: int | None = None) -> ChainComplex:
    """F2 simplicial chains through degree ``d_max + 1`` (or ``top`` if given)."""
    if d_max < 0:
        raise ValueError("d_max must be nonnegative")
    top = d_max + 1 if top is None else top
    return chain_complex_from_cells(faces_up_to(s, top), lambda r: len(r) - 1, boundary_faces, top)


def integer_simplicial_homology(s: SimplicialComplex, d_max: int) -> IntegerHomology:
    """Integer homology through ``d_max`` from signed boundaries (Smith normal form)."""
    top = d_max + 1
    faces = faces_up_to(s, top)
    basis = [[f for f in faces if len(f) - 1 == d] for d in range(top + 1)]
    index = [{f: i for i, f in enumerate(b)} for b in basis]
    mats = [[]]
    for d in range(1, top + 1):
        M = [[0] * len(basis[d]) for _ in basis[d - 1]]
        for j, rho in enumerate(basis[d]):
            for i, face in enumerate(boundary_faces(rho)):
                M[index[d - 1][face]][j] = -1 if i % 2 else 1
        mats.append(M)
    return integer_homology([len(b) for b in basis], mats)


# ---------------------------------------------------------------------------
# constructions


def simplexify(p: ProdComplex) -> SimplicialComplex:
    """Replace every box ``(σ_1, ..., σ_m)`` by the simplex ``σ_1 × ... × σ_m``."""
    return SimplicialComplex(p.axes, tuple(simplex(cartesian(*box)) for box in p.maximal))


def cuboid(r: Relation) -> SimplicialComplex:
    """Simplices ``ρ`` whose projection box ``ρ_1 × ... × ρ_m`` lies in ``R``."""
    return simplexify(dowker_product(r))


def multiway_dowker(r: Relation, axis: int | str) -> SimplicialComplex:
    """Union over atoms of the ``axis`` of the cuboid complexes of the slices."""
    k = r.axis(axis)
    if r.arity < 2:
        raise RelationError("multiway Dowker complexes need arity at least 2")
    faces = []
    for atom in range(len(r.axes[k])):
        faces.extend(cuboid(relation_slice(r, k, atom)).maximal)
    return SimplicialComplex(r.axes[:k] + r.axes[k + 1 :], tuple(faces))


def multiway_dowker_via_quotient(r: Relation, axis: int | str) -> SimplicialComplex:
    return simplexify(quotient(dowker_product(r), axis))


def classic_dowker(r: Relation, side: str = "first") -> SimplicialComplex:
    """Dowker complex of a binary relation on its first or second set.

    ``first``: sets ``σ ⊆ I`` with ``σ × {j} ⊆ R`` for some ``j``.
    """
    if r.arity != 2:
        raise RelationError("classic Dowker complexes need a binary relation")
    if side not in ("first", "second"):
        raise ValueError("side must be 'first' or 'second'")
    own, other = (0, 1) if side == "first" else (1, 0)
    witnessed: dict[int, list[Vertex]] = {}
    for t in r.tuples:
        witnessed.setdefault(t[other], []).append((t[own],))
    return SimplicialComplex((r.axes[own],), tuple(simplex(vs) for vs in witnessed.values()))


def relabel(s: SimplicialComplex, fn: Callable[[Vertex], Vertex], axes: Sequence[IndexSet]) -> SimplicialComplex:
    """Image of ``s`` under an injective vertex relabelling."""
    return SimplicialComplex(tuple(axes), tuple(simplex(fn(v) for v in m) for m in s.maximal))


# ---------------------------------------------------------------------------
# simplicial maps


@dataclass(frozen=True)
class SimplicialMap:
    source: SimplicialComplex
    target: SimplicialComplex
    vertex_function: Mapping[Vertex, Vertex]

    def __post_init__(self):
        object.__setattr__(self, "vertex_function", MappingProxyType(dict(self.vertex_function)))

    @classmethod
    def from_function(
        cls, source: SimplicialComplex, target: SimplicialComplex, fn: Callable[[Vertex], Vertex]
    ) -> "SimplicialMap":
        return cls(source, target, {v: tuple(fn(v)) for v in source.vertices()})

    def __call__(self, v: Vertex) -> Vertex:
        return self.vertex_function[v]

    def image(self, rho: Iterable[Vertex]) -> Simplex:
        return simplex(self.vertex_function[v] for v in rho)

    def is_simplicial(self) -> bool:
        return all(contains_simplex(self.target, self.image(m)) for m in self.source.maximal)

    def is_surjective(self) -> bool:
        images = [frozenset(self.image(m)) for m in self.source.maximal]
        return all(any(frozenset(t) <= img for img in images) for t in self.target.maximal)


def compose_maps(g: SimplicialMap, f: SimplicialMap) -> SimplicialMap:
    return SimplicialMap(f.source, g.target, {v: g(w) for v, w in f.vertex_function.items()})


def simplicial_quotient_map(r: Relation, axis: int | str) -> SimplicialMap:
    """``cuboid(R) -> Dowker_{/k}(R)`` induced by deleting component ``k``."""
    k = r.axis(axis)
    if r.arity < 2:
        raise RelationError("simplicial quotient maps need arity at least 2")
    return SimplicialMap.from_function(cuboid(r), multiway_dowker(r, k), lambda v: v[:k] + v[k + 1 :])


def product_vertex_map(maps: Sequence[Callable[[int], int]]) -> Callable[[Vertex], Vertex]:
    return lambda v: tuple(f(a) for f, a in zip(maps, v))


def simplexify_map(
    source: ProdComplex, target: ProdComplex, maps: Sequence[Callable[[int], int]]
) -> SimplicialMap:
    """``simp(f)`` for a prod-map ``f = (f_1, ..., f_m)``: the product vertex function."""
    return SimplicialMap.from_function(simplexify(source), simplexify(target), product_vertex_map(maps))


def chain_map(
    f: SimplicialMap,
    d_max: int,
    source_chains: ChainComplex | None = None,
    target_chains: ChainComplex | None = None,
) -> ChainMap:
    """F2 chain map of ``f``: ``ρ -> f(ρ)`` when ``f`` is injective on ``ρ``, else 0.

    A default source is built through ``d_max`` and a default target through
    ``d_max + 1``; that is enough for ``H_d(f)`` and the cone up to ``d_max``.
    """
    if not f.is_simplicial():
        raise ValueError("vertex function is not simplicial")
    A = source_chains if source_chains is not None else simplicial_chain_complex(f.source, d_max, top=d_max)
    B = target_chains if target_chains is not None else simplicial_chain_complex(f.target, d_max)

    def image(rho):
        img = f.image(rho)
        return img if len(img) == len(rho) else None

    return map_from_cells(A, B, image)


def inclusion(sub: SimplicialComplex, sup: SimplicialComplex) -> SimplicialMap:
    return SimplicialMap.from_function(sub, sup, lambda v: v)


def is_subcomplex(sub: SimplicialComplex, sup: SimplicialComplex) -> bool:
    return all(contains_simplex(sup, m) for m in sub.maximal)


def axis_of(s: SimplicialComplex, key: int | str) -> int:
    return resolve_axis(s.axes, key)
