"""Example relations shipped with the package, and the code that generates them.

The cube relations are enumerated from the face poset of the unit cube:
vertices are bit triples ``xyz``, edges join vertices differing in one
coordinate, and faces fix one coordinate to 0 or 1.
"""

from __future__ import annotations

import random
from importlib import resources
from itertools import combinations

from .relation import FilteredRelation, IndexSet, Relation, load_relation

DATA_FILES = ("fig2.rel", "hexagon.rel", "cube-VF.rel", "cube-flag-VEF.rel", "cube-flag-filtered.rel")


def data_path(name: str):
    return resources.files("mwdowker") / "data" / name


def load(name: str):
    with resources.as_file(data_path(name)) as p:
        return load_relation(p)


def _bits(v: int) -> tuple[int, int, int]:
    return (v >> 2) & 1, (v >> 1) & 1, v & 1


def cube_vertices() -> list[str]:
    return ["".join(map(str, _bits(v))) for v in range(8)]


def cube_edges() -> list[tuple[int, int]]:
    return [(a, b) for a, b in combinations(range(8), 2) if bin(a ^ b).count("1") == 1]


def cube_faces() -> list[tuple[int, int]]:
    """``(coordinate, value)``; coordinate 0 is x."""
    return [(c, s) for c in range(3) for s in (0, 1)]


def _on_face(v: int, face: tuple[int, int]) -> bool:
    c, s = face
    return _bits(v)[c] == s


def _axes():
    verts = cube_vertices()
    v = IndexSet("V", tuple(f"v{x}" for x in verts))
    e = IndexSet("E", tuple(f"e{verts[a]}-{verts[b]}" for a, b in cube_edges()))
    f = IndexSet("F", tuple(f"{'xyz'[c]}{s}" for c, s in cube_faces()))
    return v, e, f


def cube_incidence() -> Relation:
    """Vertex-face incidence of the cube: 24 pairs."""
    v, _, f = _axes()
    faces = cube_faces()
    pairs = {(x, k) for x in range(8) for k, face in enumerate(faces) if _on_face(x, face)}
    return Relation((v, f), frozenset(pairs))


def cube_flags() -> Relation:
    """Flags ``v ⊂ e ⊂ f`` of the cube."""
    v, e, f = _axes()
    edges, faces = cube_edges(), cube_faces()
    flags = set()
    for k, face in enumerate(faces):
        for j, (a, b) in enumerate(edges):
            if _on_face(a, face) and _on_face(b, face):
                flags.add((a, j, k))
                flags.add((b, j, k))
    return Relation((v, e, f), frozenset(flags))


def cube_flags_filtered(seed: int = 6) -> FilteredRelation:
    """The cube flags with values drawn from ``{0, 0.5, ..., 4.5}`` by a seeded generator."""
    r = cube_flags()
    rng = random.Random(seed)
    return FilteredRelation(r.axes, {t: rng.randrange(10) / 2 for t in sorted(r.tuples)})


def hexagon() -> Relation:
    """Six of the eight cells of a 2×2×2 array; its relational product is a hexagon."""
    tuples = {(0, 0, 0), (1, 0, 0), (1, 1, 0), (0, 0, 1), (0, 1, 1), (1, 1, 1)}
    return Relation.from_tuples((2, 2, 2), tuples)


def fig2() -> Relation:
    """A small binary relation whose two Dowker complexes each carry one loop."""
    i = IndexSet("I", ("a", "b", "c", "d"))
    j = IndexSet("J", ("R", "G", "B"))
    pairs = {(0, 0), (1, 0), (1, 1), (2, 1), (2, 2), (0, 2), (3, 1)}
    return Relation((i, j), frozenset(pairs))


GENERATORS = {
    "fig2.rel": fig2,
    "hexagon.rel": hexagon,
    "cube-VF.rel": cube_incidence,
    "cube-flag-VEF.rel": cube_flags,
    "cube-flag-filtered.rel": cube_flags_filtered,
}
