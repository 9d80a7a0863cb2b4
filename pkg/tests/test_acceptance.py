"""End-to-end acceptance checks, one test per criterion.

Each test records a single PASS/FAIL line; the lines are repeated in the
terminal summary under "acceptance criteria".
"""

import random
import time
from itertools import product

import naive
from mwdowker import bundled
from mwdowker.chains import betti, is_quasi_iso
from mwdowker.persistence import diagrams_equal, filtered_cuboid, filtered_diagrams, filtered_multiway_dowker
from mwdowker.prodcomplex import (
    cellular_chain_complex,
    cells_up_to,
    contains,
    dowker_product,
    iterated_quotient,
    quotient,
    quotient_chain_map,
)
from mwdowker.relation import FilteredRelation, Relation, rebracket
from mwdowker.simplicial import (
    chain_map,
    classic_dowker,
    cuboid,
    faces_up_to,
    multiway_dowker,
    simplexify,
    simplicial_chain_complex,
    simplicial_quotient_map,
)
from mwdowker.ternary import build_atlas, find_transformation, pair_betti
from mwdowker.verify import corpus, corpus_d_max, random_filtered, random_relation

CORPUS_SEED = 2024
CORPUS_SIZE = 216


def prod_betti(p, d_max):
    return betti(cellular_chain_complex(p, d_max)).values


def simp_betti(s, d_max):
    return betti(simplicial_chain_complex(s, d_max)).values


def test_cube_incidence_is_a_sphere(criterion):
    start = time.perf_counter()
    r = bundled.cube_incidence()
    got = {
        "dowker(R_VF)": prod_betti(dowker_product(r), 2),
        "Dowker_V": simp_betti(classic_dowker(r, "first"), 2),
        "Dowker_F": simp_betti(classic_dowker(r, "second"), 2),
    }
    elapsed = time.perf_counter() - start
    ok = all(b == (1, 0, 1) for b in got.values())
    criterion(1, ok, f"cube V-F incidence betti {got}", elapsed, 1)


def test_cube_flags_punctured_sphere(criterion):
    start = time.perf_counter()
    r = bundled.cube_flags()
    p = dowker_product(r)
    got = {"dowker(R)": prod_betti(p, 2)}
    for k, name in enumerate(r.names):
        got[f"dowker(R)/{name}"] = prod_betti(quotient(p, k), 2)
    elapsed = time.perf_counter() - start
    ok = all(b[:2] == (1, 13) for b in got.values())
    criterion(2, ok, f"cube flags betti {got}", elapsed, 5)


def test_iterated_quotients_are_skeleta(criterion):
    # (remaining axis, skeleton name, vertices, edges) of the named polyhedra
    skeleta = {"V": ("cube", 8, 12), "E": ("cuboctahedron", 12, 24), "F": ("octahedron", 6, 12)}
    r = bundled.cube_flags()
    p = dowker_product(r)
    ok = True
    parts = []
    for keep, (shape, v, e) in skeleta.items():
        euler = e - v + 1
        x = r.axis(keep)
        q = iterated_quotient(p, [k for k in range(3) if k != x])
        s = simplexify(q)
        faces = faces_up_to(s, 1)
        counts = (sum(len(f) == 1 for f in faces), sum(len(f) == 2 for f in faces))
        b = prod_betti(q, 2)
        ok &= s.dim() == 1 and counts == (v, e) and b == (1, euler, 0)
        parts.append(f"{shape} b1={b[1]} (E-V+1={euler})")
    criterion(3, ok, "; ".join(parts))


def test_cofiber_is_bouquet_of_spheres(criterion):
    atlas = build_atlas(bundled.cube_flags(), 3)
    t = find_transformation(atlas, "VF")
    rel = [pair_betti(atlas, big, small).values[:3] for big, small in t.realizations]
    ok = bool(rel) and all(b == (0, 0, 14) for b in rel)
    criterion(4, ok, f"relative betti of {t.source} -> {t.target}: {rel[0]} over {len(rel)} realizations")


def test_hexagon_second_collapse_fails(criterion):
    r = bundled.hexagon()
    p = dowker_product(r)
    whole = prod_betti(p, 1)
    single = [prod_betti(quotient(p, k), 1) for k in range(3)]
    double = [prod_betti(iterated_quotient(p, pair), 1) for pair in ((0, 1), (0, 2), (1, 2))]
    ok = whole == (1, 1) and all(b == (1, 1) for b in single) and all(b == (1, 0) for b in double)
    criterion(5, ok, f"dowker {whole}, single quotients {single}, iterated {double}")


def test_quotient_maps_are_quasi_isomorphisms(criterion):
    rels = corpus(CORPUS_SEED, CORPUS_SIZE)
    start = time.perf_counter()
    failures = []
    checked = 0
    for n, r in enumerate(rels):
        d = corpus_d_max(r)
        p = dowker_product(r)
        for k in range(r.arity):
            psi = quotient_chain_map(p, k, d)
            phi = chain_map(simplicial_quotient_map(r, k), d)
            checked += 2
            if not (psi.is_valid() and is_quasi_iso(psi)):
                failures.append((n, f"psi_{k}"))
            if not (phi.is_valid() and is_quasi_iso(phi)):
                failures.append((n, f"phi_{k}"))
    elapsed = time.perf_counter() - start
    arities = sorted({r.arity for r in rels})
    criterion(
        6,
        not failures and len(rels) >= 200,
        f"{checked} quotient maps on {len(rels)} relations (arities {arities}), failures {failures[:5]}",
        elapsed,
        60,
    )


def test_squashing_preserves_betti(criterion):
    failures = []
    checked = 0
    for n, r in enumerate(corpus(CORPUS_SEED, CORPUS_SIZE)):
        d = corpus_d_max(r)
        p = dowker_product(r)
        for q in [p] + [quotient(p, k) for k in range(r.arity)]:
            checked += 1
            if prod_betti(q, d) != simp_betti(simplexify(q), d):
                failures.append(n)
    criterion(7, not failures, f"{checked} prod-complexes vs simplexifications, failures {failures[:5]}")


def test_persistence_diagrams_agree(criterion):
    rng = random.Random(CORPUS_SEED)
    start = time.perf_counter()
    failures = []
    bars = 0
    count = 50
    for n in range(count):
        diagrams = filtered_diagrams(random_filtered(rng, (3, 3, 3)), 2)
        ref = diagrams["cuboid"]
        bars += sum(len(ref[d]) for d in range(3))
        if len(diagrams) != 4 or not all(diagrams_equal(ref, x) for x in diagrams.values()):
            failures.append(n)
    elapsed = time.perf_counter() - start
    criterion(8, not failures, f"{count} filtered 3x3x3 relations, {bars} bars, failures {failures}", elapsed, 30)


def test_iterated_quotient_is_bracketed_dowker(criterion):
    rng = random.Random(CORPUS_SEED + 9)
    failures = []
    count = 120
    for n in range(count):
        dims = [rng.randint(1, 4) for _ in range(3)]
        r = random_relation(rng, dims, rng.choice((0.2, 0.5, 0.8)))
        p = dowker_product(r)
        for x in range(3):
            lhs = simplexify(iterated_quotient(p, [k for k in range(3) if k != x])).maximal
            rhs = classic_dowker(rebracket(r, x), "first").maximal
            if lhs != rhs:
                failures.append((n, x))
    criterion(9, not failures, f"{count} ternary relations x 3 axes, failures {failures[:5]}")


# brute-force oracle comparison


def small_instances(limit=500, seed=CORPUS_SEED):
    """Every relation on shapes with at most four cells, then seeded samples of larger shapes."""
    shapes = [dims for m in (1, 2, 3) for dims in product(range(1, 4), repeat=m)]
    out = []
    big = []
    for dims in shapes:
        cells = list(product(*(range(n) for n in dims)))
        if len(cells) <= 4:
            for mask in range(2 ** len(cells)):
                out.append((dims, {c for i, c in enumerate(cells) if mask >> i & 1}))
        else:
            big.append((dims, cells))
    rng = random.Random(seed)
    while len(out) < limit:
        dims, cells = big[len(out) % len(big)]
        density = rng.choice((0.3, 0.6, 0.9))
        out.append((dims, {c for c in cells if rng.random() < density}))
    return out


def oracle_mismatches(dims, tuples, rng):
    r = Relation.from_tuples(dims, tuples)
    p = dowker_product(r)
    bad = []
    for parts in product(*(list(naive.nonempty_subsets(range(n))) for n in dims)):
        if contains(p, parts) != naive.box_inside(parts, tuples):
            bad.append("contains")
            break
    if set(cells_up_to(p, 2)) != naive.prod_cells(dims, tuples, 2):
        bad.append("prod cells")
    if prod_betti(p, 1) != naive.prod_betti(naive.prod_cells(dims, tuples, 2), 1):
        bad.append("prod betti")
    cub = naive.cuboid_simplices(tuples, 2)
    if set(faces_up_to(cuboid(r), 2)) != cub:
        bad.append("cuboid simplices")
    if simp_betti(cuboid(r), 1) != naive.simplicial_betti(cub, 1):
        bad.append("cuboid betti")
    if len(dims) >= 2:
        for k in range(len(dims)):
            dk = naive.dowker_simplices(dims, tuples, k, 2)
            s = multiway_dowker(r, k)
            if set(faces_up_to(s, 2)) != dk:
                bad.append(f"dowker_{k} simplices")
            if simp_betti(s, 1) != naive.simplicial_betti(dk, 1):
                bad.append(f"dowker_{k} betti")
    if tuples and len(dims) >= 2:
        fr = FilteredRelation.from_values(dims, {t: rng.randint(0, 3) / 2 for t in sorted(tuples)})
        values = dict(fr.values)
        if filtered_cuboid(fr, 1).values() != naive.first_appearance(values, naive.cuboid_simplices, 2):
            bad.append("cuboid filtration")
        for k in range(len(dims)):
            oracle = naive.first_appearance(values, lambda t, d: naive.dowker_simplices(dims, t, k, d), 2)
            if filtered_multiway_dowker(fr, k, 1).values() != oracle:
                bad.append(f"dowker_{k} filtration")
    return bad


def test_brute_force_oracle(criterion):
    instances = small_instances()
    rng = random.Random(CORPUS_SEED + 10)
    failures = []
    start = time.perf_counter()
    for n, (dims, tuples) in enumerate(instances):
        bad = oracle_mismatches(dims, tuples, rng)
        if bad:
            failures.append((n, dims, bad))
    elapsed = time.perf_counter() - start
    criterion(
        10,
        not failures,
        f"{len(instances)} relations with m<=3 and sizes<=3 against naive enumeration, failures {failures[:3]}",
        elapsed,
    )
