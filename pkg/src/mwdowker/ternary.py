"""The complexes, homotopy-type classes and natural transformations of a ternary relation.

For a ternary ``R ⊆ I × J × K`` there are twenty-two simplicial complexes built
from ``R``, its rebracketings ``R_(YZ) ⊆ X × (Y × Z)`` and its projections
``R_XY``.  They fall into seven homotopy types.  Twelve natural maps between
those types are realized as subcomplex inclusions on a common vertex set, so
their homotopy cofibers can be read off as relative homology.

Complexes are grouped by vertex universe:

* ``I × J × K``: the cuboid complex and the three ``rect(R_(YZ))``
* ``Y × Z`` for each pair: ``Dowker_/X(R)``, ``Dowker_YxZ(R_(YZ))``, ``rect(R_YZ)``
* ``X`` for each axis: ``Dowker_X(R_(YZ))``, ``Dowker_X(R_XY)``, ``Dowker_X(R_XZ)``
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .chains import (
    BettiVector,
    ChainComplex,
    ChainMap,
    betti,
    cone_maps,
    compose,
    induced_map_rank,
    is_quasi_iso,
    les_pair_defects,
    les_triple_defects,
    mapping_cone,
    relative_betti,
)
from .prodcomplex import dowker_product, iterated_quotient
from .relation import Relation, RelationError, project, rebracket
from .simplicial import (
    SimplicialComplex,
    SimplicialMap,
    chain_map,
    classic_dowker,
    cuboid,
    faces_up_to,
    inclusion,
    is_subcomplex,
    multiway_dowker,
    relabel,
    simplexify,
    simplicial_chain_complex,
)


def _others(x: int) -> tuple[int, int]:
    a, b = [k for k in range(3) if k != x]
    return a, b


@dataclass
class TernaryAtlas:
    relation: Relation
    d_max: int
    complexes: dict[str, SimplicialComplex]
    universe: dict[str, str]
    classes: dict[str, list[str]]
    bracket_equalities: list[dict]
    _chains: dict[str, ChainComplex] = field(default_factory=dict, repr=False)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(a.label for a in self.relation.axes)

    def chains(self, name: str) -> ChainComplex:
        if name not in self._chains:
            self._chains[name] = simplicial_chain_complex(self.complexes[name], self.d_max)
        return self._chains[name]

    def betti(self, name: str) -> BettiVector:
        return betti(self.chains(name))

    def class_of(self, name: str) -> str:
        for cls, members in self.classes.items():
            if name in members:
                return cls
        raise KeyError(name)

    def class_betti(self) -> dict[str, dict]:
        out = {}
        for cls, members in self.classes.items():
            vectors = {m: list(self.betti(m)) for m in members}
            distinct = {tuple(v) for v in vectors.values()}
            out[cls] = {
                "members": members,
                "betti": vectors[members[0]],
                "consistent": len(distinct) == 1,
            }
        return out


# names ---------------------------------------------------------------------


def cuboid_name() -> str:
    return "cuboid(R)"


def rect_bracket_name(n, x) -> str:
    y, z = _others(x)
    return f"rect(R_({n[y]}{n[z]}))"


def quotient_dowker_name(n, x) -> str:
    return f"Dowker_/{n[x]}(R)"


def pair_dowker_name(n, x) -> str:
    y, z = _others(x)
    return f"Dowker_{n[y]}x{n[z]}(R_({n[y]}{n[z]}))"


def single_bracket_name(n, x) -> str:
    y, z = _others(x)
    return f"Dowker_{n[x]}(R_({n[y]}{n[z]}))"


def rect_projection_name(n, a, b) -> str:
    a, b = sorted((a, b))
    return f"rect(R_{n[a]}{n[b]})"


def single_projection_name(n, x, other) -> str:
    a, b = sorted((x, other))
    return f"Dowker_{n[x]}(R_{n[a]}{n[b]})"


def top_class(n) -> str:
    return "dowker(R)"


def iterated_class(n, x) -> str:
    y, z = _others(x)
    return f"dowker(R)/({n[y]},{n[z]})"


def projection_class(n, a, b) -> str:
    a, b = sorted((a, b))
    return f"dowker(R_{n[a]}{n[b]})"


# construction --------------------------------------------------------------


def build_atlas(r: Relation, d_max: int = 3) -> TernaryAtlas:
    if r.arity != 3:
        raise RelationError("the ternary atlas needs a relation of arity 3")
    n = tuple(a.label for a in r.axes)
    dims = r.dims
    full = "".join(n)
    complexes: dict[str, SimplicialComplex] = {}
    universe: dict[str, str] = {}
    classes: dict[str, list[str]] = {top_class(n): [cuboid_name()]}

    complexes[cuboid_name()] = cuboid(r)
    universe[cuboid_name()] = full

    for x in range(3):
        y, z = _others(x)
        nz = dims[z]
        bracket = rebracket(r, x)

        def flatten(v, x=x, y=y, z=z, nz=nz):
            out = [0, 0, 0]
            out[x], out[y], out[z] = v[0], v[1] // nz, v[1] % nz
            return tuple(out)

        name = rect_bracket_name(n, x)
        complexes[name] = relabel(cuboid(bracket), flatten, r.axes)
        universe[name] = full

        name = quotient_dowker_name(n, x)
        complexes[name] = multiway_dowker(r, x)
        universe[name] = n[y] + n[z]
        classes[top_class(n)].append(name)

        name = pair_dowker_name(n, x)
        complexes[name] = relabel(
            classic_dowker(bracket, "second"), lambda v, nz=nz: (v[0] // nz, v[0] % nz), (r.axes[y], r.axes[z])
        )
        universe[name] = n[y] + n[z]

        name = single_bracket_name(n, x)
        complexes[name] = classic_dowker(bracket, "first")
        universe[name] = n[x]

        classes[iterated_class(n, x)] = [rect_bracket_name(n, x), pair_dowker_name(n, x), name]

    for a, b in combinations(range(3), 2):
        (w,) = [k for k in range(3) if k not in (a, b)]
        proj = project(r, w)
        rect = rect_projection_name(n, a, b)
        complexes[rect] = cuboid(proj)
        universe[rect] = n[a] + n[b]
        first, second = single_projection_name(n, a, b), single_projection_name(n, b, a)
        complexes[first] = classic_dowker(proj, "first")
        complexes[second] = classic_dowker(proj, "second")
        universe[first], universe[second] = n[a], n[b]
        classes[projection_class(n, a, b)] = [rect, first, second]

    p = dowker_product(r)
    equalities = []
    for x in range(3):
        lhs = simplexify(iterated_quotient(p, _others(x)))
        rhs = complexes[single_bracket_name(n, x)]
        equalities.append(
            {
                "lhs": iterated_class(n, x),
                "rhs": single_bracket_name(n, x),
                "equal": lhs.maximal == rhs.maximal,
            }
        )
    return TernaryAtlas(r, d_max, complexes, universe, classes, equalities)


def subcomplex_inclusions(atlas: TernaryAtlas) -> list[dict]:
    """The generic inclusions within each vertex-universe block, each checked cell by cell."""
    n = atlas.names
    pairs = []
    for x in range(3):
        pairs.append((cuboid_name(), rect_bracket_name(n, x)))
    for x in range(3):
        y, z = _others(x)
        pairs.append((quotient_dowker_name(n, x), pair_dowker_name(n, x)))
        pairs.append((quotient_dowker_name(n, x), rect_projection_name(n, y, z)))
    for x in range(3):
        for other in _others(x):
            pairs.append((single_bracket_name(n, x), single_projection_name(n, x, other)))
    return [
        {"sub": a, "sup": b, "holds": is_subcomplex(atlas.complexes[a], atlas.complexes[b])}
        for a, b in pairs
    ]


# natural transformations ---------------------------------------------------


@dataclass
class NaturalTransformation:
    key: str
    kind: str  # top, mid or composite
    source: str
    target: str
    realizations: list[tuple[str, str]]  # (larger complex, subcomplex)

    @property
    def pair(self) -> tuple[str, str]:
        return self.realizations[0]


def transformation_list(atlas: TernaryAtlas) -> list[NaturalTransformation]:
    n = atlas.names
    arrows = []
    for x in range(3):
        arrows.append(
            NaturalTransformation(
                n[x],
                "top",
                top_class(n),
                iterated_class(n, x),
                [(rect_bracket_name(n, x), cuboid_name()), (pair_dowker_name(n, x), quotient_dowker_name(n, x))],
            )
        )
    for x in range(3):
        for other in _others(x):
            a, b = sorted((x, other))
            arrows.append(
                NaturalTransformation(
                    f"{n[x]}>{n[a]}{n[b]}",
                    "mid",
                    iterated_class(n, x),
                    projection_class(n, a, b),
                    [(single_projection_name(n, x, other), single_bracket_name(n, x))],
                )
            )
    for a, b in combinations(range(3), 2):
        (w,) = [k for k in range(3) if k not in (a, b)]
        arrows.append(
            NaturalTransformation(
                f"{n[a]}{n[b]}",
                "composite",
                top_class(n),
                projection_class(n, a, b),
                [(rect_projection_name(n, a, b), quotient_dowker_name(n, w))],
            )
        )
    return arrows


def find_transformation(atlas: TernaryAtlas, key: str) -> NaturalTransformation:
    for t in transformation_list(atlas):
        if t.key == key:
            return t
    keys = ", ".join(t.key for t in transformation_list(atlas))
    raise KeyError(f"no map named {key!r}; choose from {keys}")


def pair_betti(atlas: TernaryAtlas, big: str, small: str) -> BettiVector:
    """Relative Betti numbers of ``(big, small)`` in degrees ``0 .. d_max``."""
    K = atlas.chains(big)
    return relative_betti(K, faces_up_to(atlas.complexes[small], K.top))


def inclusion_chain_map(atlas: TernaryAtlas, big: str, small: str) -> ChainMap:
    f = inclusion(atlas.complexes[small], atlas.complexes[big])
    return chain_map(f, atlas.d_max, atlas.chains(small), atlas.chains(big))


def projection_map(atlas: TernaryAtlas, x: int) -> SimplicialMap:
    """``cuboid(R) -> Dowker_X(R_(YZ))`` induced by ``(i, j, k) -> x``-component."""
    n = atlas.names
    return SimplicialMap.from_function(
        atlas.complexes[cuboid_name()], atlas.complexes[single_bracket_name(n, x)], lambda v: (v[x],)
    )


def projection_chain_map(atlas: TernaryAtlas, x: int) -> ChainMap:
    n = atlas.names
    f = projection_map(atlas, x)
    return chain_map(f, atlas.d_max, atlas.chains(cuboid_name()), atlas.chains(single_bracket_name(n, x)))


def natural_transformations(atlas: TernaryAtlas) -> list[dict]:
    """Relative Betti numbers of every realization of the twelve maps."""
    out = []
    for t in transformation_list(atlas):
        realizations = []
        for big, small in t.realizations:
            f = inclusion_chain_map(atlas, big, small)
            realizations.append(
                {
                    "pair": [big, small],
                    "chain_map_valid": f.is_valid(),
                    "relative_betti": list(pair_betti(atlas, big, small)),
                }
            )
        vectors = {tuple(r["relative_betti"]) for r in realizations}
        entry = {
            "map": t.key,
            "kind": t.kind,
            "source": t.source,
            "target": t.target,
            "realizations": realizations,
            "relative_betti": realizations[0]["relative_betti"],
            "realizations_agree": len(vectors) == 1,
        }
        if t.kind == "top":
            x = atlas.names.index(t.key)
            cone = betti(mapping_cone(projection_chain_map(atlas, x)))
            entry["projection_cone_betti"] = list(cone)[: len(entry["relative_betti"])]
            entry["realizations_agree"] &= tuple(entry["projection_cone_betti"]) in vectors
        out.append(entry)
    return out


def les_check(K: ChainComplex, L_cells) -> bool:
    """Exactness of the long exact sequence of a subcomplex pair."""
    return not les_pair_defects(K, L_cells)


def les_check_triple(f: ChainMap, g: ChainMap) -> bool:
    """Exactness for the cofibers of ``f``, ``g∘f`` and ``g``."""
    return not les_triple_defects(f, g)


def les_checks(atlas: TernaryAtlas) -> list[dict]:
    """Pair sequences for every realization plus triple sequences for top-then-mid routes.

    The triple uses ``f: cuboid(R) -> Dowker_X(R_(YZ))`` (vertex projection)
    followed by the inclusion ``g`` into ``Dowker_X(R_XY)``.  Since the arrow
    diagram commutes up to homotopy, ``g∘f`` must induce the same ranks as the
    subcomplex realization of the composite arrow, and its cone must carry the
    same Betti numbers.
    """
    n = atlas.names
    out = []
    for t in transformation_list(atlas):
        for big, small in t.realizations:
            K = atlas.chains(big)
            defects = les_pair_defects(K, faces_up_to(atlas.complexes[small], K.top))
            out.append({"kind": "pair", "map": t.key, "pair": [big, small], "exact": not defects, "defects": defects})
    for x in range(3):
        f = projection_chain_map(atlas, x)
        for other in _others(x):
            (w,) = [k for k in range(3) if k not in (x, other)]
            target = single_projection_name(n, x, other)
            g = inclusion_chain_map(atlas, target, single_bracket_name(n, x))
            defects = les_triple_defects(f, g)
            gf = compose(g, f)
            rect = rect_projection_name(n, x, other)
            composite = inclusion_chain_map(atlas, rect, quotient_dowker_name(n, w))
            top = min(gf.reliable_top, composite.reliable_top)
            ranks_gf = [induced_map_rank(gf, d) for d in range(top + 1)]
            ranks_sub = [induced_map_rank(composite, d) for d in range(top + 1)]
            cone = list(betti(mapping_cone(gf)))
            rel = list(pair_betti(atlas, rect, quotient_dowker_name(n, w)))
            k = min(len(cone), len(rel))
            a, b = sorted((x, other))
            out.append(
                {
                    "kind": "triple",
                    "route": f"{n[x]} then {n[x]}>{n[a]}{n[b]}",
                    "composite": f"{n[a]}{n[b]}",
                    "exact": not defects,
                    "defects": defects,
                    "composite_ranks": ranks_gf,
                    "realization_ranks": ranks_sub,
                    "cone_betti": cone[:k],
                    "realization_betti": rel[:k],
                    "route_agrees": ranks_gf == ranks_sub and cone[:k] == rel[:k],
                }
            )
    return out


def quotient_is_equivalence(atlas: TernaryAtlas) -> list[dict]:
    """The Dowker equivalences inside each iterated-quotient class, as cone checks."""
    n = atlas.names
    out = []
    for x in range(3):
        rect = rect_bracket_name(n, x)
        single = single_bracket_name(n, x)
        f = SimplicialMap.from_function(atlas.complexes[rect], atlas.complexes[single], lambda v, x=x: (v[x],))
        cert = is_quasi_iso(chain_map(f, atlas.d_max, target_chains=atlas.chains(single)))
        out.append({"map": f"{rect} -> {single}", **cert.to_json()})
    return out


def atlas_report(r: Relation, d_max: int = 3) -> dict:
    atlas = build_atlas(r, d_max)
    inclusions = subcomplex_inclusions(atlas)
    complexes = {
        name: {
            "universe": atlas.universe[name],
            "class": atlas.class_of(name),
            "betti": list(atlas.betti(name)),
            "maximal_faces": len(atlas.complexes[name].maximal),
            "dim": atlas.complexes[name].dim(),
        }
        for name in atlas.complexes
    }
    return {
        "axes": list(atlas.names),
        "d_max": d_max,
        "classes": atlas.class_betti(),
        "complexes": complexes,
        "bracket_equalities": atlas.bracket_equalities,
        "inclusions": inclusions,
        "transformations": natural_transformations(atlas),
        "les_checks": les_checks(atlas),
        "equivalences": quotient_is_equivalence(atlas),
    }


def report_ok(report: dict) -> bool:
    return (
        len(report["classes"]) == 7
        and len(report["complexes"]) == 22
        and len(report["transformations"]) == 12
        and all(c["consistent"] for c in report["classes"].values())
        and all(e["equal"] for e in report["bracket_equalities"])
        and all(i["holds"] for i in report["inclusions"])
        and all(t["realizations_agree"] for t in report["transformations"])
        and all(r["chain_map_valid"] for t in report["transformations"] for r in t["realizations"])
        and all(c["exact"] for c in report["les_checks"])
        and all(c.get("route_agrees", True) for c in report["les_checks"])
        and all(e["quasi_isomorphism"] for e in report["equivalences"])
    )
