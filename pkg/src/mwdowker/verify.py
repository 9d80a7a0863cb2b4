"""Invariant checks on a single relation, and seeded random corpora to run them on."""

from __future__ import annotations

import random
from itertools import combinations
from itertools import product as cartesian

from .chains import betti, is_quasi_iso
from .persistence import diagrams_equal, filtered_diagrams
from .prodcomplex import (
    ProdComplex,
    box_vertices,
    cellular_chain_complex,
    dowker_product,
    iterated_quotient,
    prod_chain_map,
    quotient,
)
from .relation import FilteredRelation, IndexSet, Relation, rebracket
from .simplicial import (
    chain_map,
    classic_dowker,
    multiway_dowker,
    multiway_dowker_via_quotient,
    simplexify,
    simplicial_chain_complex,
    simplicial_quotient_map,
)


def random_relation(rng: random.Random, dims, density: float) -> Relation:
    cells = cartesian(*(range(n) for n in dims))
    return Relation.from_tuples(dims, [t for t in cells if rng.random() < density])


def random_filtered(rng: random.Random, dims) -> FilteredRelation:
    """Every tuple present, values i.i.d. uniform on [0, 1)."""
    return FilteredRelation.from_values(dims, {t: rng.random() for t in cartesian(*(range(n) for n in dims))})


def corpus(seed: int, count: int, arities=(2, 3, 4), densities=(0.2, 0.5, 0.8), max_size: int = 4):
    """Relations cycling through arities and densities with axis sizes uniform in 1..max_size."""
    rng = random.Random(seed)
    out = []
    for n in range(count):
        m = arities[n % len(arities)]
        density = densities[(n // len(arities)) % len(densities)]
        dims = [rng.randint(1, max_size) for _ in range(m)]
        out.append(random_relation(rng, dims, density))
    return out


def corpus_d_max(r: Relation) -> int:
    """Degree cap used for corpus runs: 3 up to arity 3, 2 beyond."""
    return 3 if r.arity <= 3 else 2


def with_stray_box(q: ProdComplex) -> ProdComplex:
    """``q`` plus one isolated vertex on a fresh atom of the first axis."""
    first = q.axes[0]
    axes = (IndexSet(first.label, first.elements + ("stray",)),) + q.axes[1:]
    stray = ((len(first),),) + tuple(((0,),) * (q.order - 1))
    return ProdComplex(axes, q.maximal + (stray,))


def _result(name: str, ok: bool, **detail) -> dict:
    return {"check": name, "ok": bool(ok), **detail}


def boxes_are_maximal(r: Relation, p: ProdComplex) -> bool:
    tuples = r.tuples
    for box in p.maximal:
        if not all(v in tuples for v in box_vertices(box)):
            return False
        for k, part in enumerate(box):
            for a in range(r.dims[k]):
                if a in part:
                    continue
                grown = box[:k] + (tuple(sorted(part + (a,))),) + box[k + 1 :]
                if all(v in tuples for v in box_vertices(grown)):
                    return False
    return True


def check_relation(r: Relation, d_max: int = 3, inject_fault: bool = False) -> list[dict]:
    """Run the invariant suite on ``r``; each entry names a check and whether it passed.

    With ``inject_fault`` the quotient targets get a stray vertex, so the
    quasi-isomorphism checks must fail.
    """
    results = []
    p = dowker_product(r)
    results.append(_result("dowker_boxes_maximal", boxes_are_maximal(r, p)))
    cells = cellular_chain_complex(p, d_max)
    results.append(_result("boundary_squares_to_zero", cells.is_valid()))

    squash = [("dowker(R)", p)]
    if r.arity >= 2:
        source = cellular_chain_complex(p, d_max, top=d_max)
        for k in range(r.arity):
            name = r.axes[k].label
            q = quotient(p, k)
            squash.append((f"dowker(R)/{name}", q))
            if inject_fault:
                q = with_stray_box(q)
            maps = [(lambda a: a)] * r.arity
            maps[k] = None
            psi = prod_chain_map(source, cellular_chain_complex(q, d_max), maps)
            results.append(_quasi_iso_result(f"psi_{name}", psi))

            phi = simplicial_quotient_map(r, k)
            target = phi.target
            if inject_fault:
                target = simplexify(with_stray_box(quotient(p, k)))
            f = chain_map(phi, d_max, target_chains=simplicial_chain_complex(target, d_max))
            results.append(_quasi_iso_result(f"phi_{name}", f))

            same = multiway_dowker(r, k).maximal == multiway_dowker_via_quotient(r, k).maximal
            results.append(_result(f"dowker_{name}_slices_match_quotient", same))

    for name, q in squash:
        a = betti(cellular_chain_complex(q, d_max))
        b = betti(simplicial_chain_complex(simplexify(q), d_max))
        results.append(_result(f"squash_{name}", a.values == b.values, prod=list(a), simplicial=list(b)))

    if r.arity >= 3:
        for k, l in combinations(range(r.arity), 2):
            direct = iterated_quotient(p, (k, l))
            one = quotient(quotient(p, l), k)
            two = quotient(quotient(p, k), l - 1)
            ok = direct.maximal == one.maximal == two.maximal
            results.append(_result(f"quotient_order_{r.axes[k].label}{r.axes[l].label}", ok))

    if r.arity == 3:
        for x in range(3):
            others = [k for k in range(3) if k != x]
            lhs = simplexify(iterated_quotient(p, others))
            rhs = classic_dowker(rebracket(r, x), "first")
            results.append(_result(f"iterated_equals_dowker_{r.axes[x].label}", lhs.maximal == rhs.maximal))

    if r.arity == 2:
        for k, side in ((1, "first"), (0, "second")):
            same = simplexify(quotient(p, k)).maximal == classic_dowker(r, side).maximal
            results.append(_result(f"classic_dowker_{side}_is_quotient", same))
    return results


def _quasi_iso_result(name, f) -> dict:
    if not f.is_valid():
        return _result(name, False, reason="not a chain map")
    cert = is_quasi_iso(f)
    return _result(name, cert.ok, cone_betti=list(cert.cone_betti))


def check_filtered(fr: FilteredRelation, d_max: int = 2) -> list[dict]:
    """Cuboid and multiway Dowker filtrations must give equal diagrams."""
    if fr.arity < 2:
        return []
    diagrams = filtered_diagrams(fr, d_max)
    ref = diagrams["cuboid"]
    return [
        _result(f"persistence_{name}", diagrams_equal(ref, d))
        for name, d in diagrams.items()
        if name != "cuboid"
    ]
