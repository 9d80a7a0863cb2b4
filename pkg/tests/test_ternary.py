from itertools import product

import pytest
from hypothesis import given, settings

from conftest import relations
from mwdowker.bundled import cube_flags, hexagon
from mwdowker.relation import Relation, RelationError
from mwdowker.simplicial import faces_up_to
from mwdowker.ternary import (
    atlas_report,
    build_atlas,
    find_transformation,
    les_check,
    natural_transformations,
    report_ok,
    subcomplex_inclusions,
    transformation_list,
)


@pytest.fixture(scope="module")
def flag_report():
    return atlas_report(cube_flags(), 3)


def test_atlas_shape(flag_report):
    assert len(flag_report["complexes"]) == 22
    assert len(flag_report["classes"]) == 7
    assert len(flag_report["transformations"]) == 12
    assert report_ok(flag_report)


def test_flag_class_betti(flag_report):
    classes = flag_report["classes"]
    assert classes["dowker(R)"]["betti"][:2] == [1, 13]
    assert classes["dowker(R)/(E,F)"]["betti"][:2] == [1, 5]
    assert classes["dowker(R)/(V,F)"]["betti"][:2] == [1, 13]
    assert classes["dowker(R)/(V,E)"]["betti"][:2] == [1, 7]
    assert classes["dowker(R_VF)"]["betti"][:3] == [1, 0, 1]
    assert all(c["consistent"] for c in classes.values())


def test_flag_cofiber_of_vf(flag_report):
    (vf,) = [t for t in flag_report["transformations"] if t["map"] == "VF"]
    assert vf["relative_betti"][:3] == [0, 0, 14]


def test_hexagon_atlas():
    rep = atlas_report(hexagon(), 2)
    assert report_ok(rep)
    classes = rep["classes"]
    assert classes["dowker(R)"]["betti"] == [1, 1, 0]
    for a, b in [("J", "K"), ("I", "K"), ("I", "J")]:
        assert classes[f"dowker(R)/({a},{b})"]["betti"] == [1, 0, 0]


def test_hexagon_top_pair_consistent_with_ranks():
    atlas = build_atlas(hexagon(), 2)
    for t in transformation_list(atlas):
        for big, small in t.realizations:
            K = atlas.chains(big)
            assert les_check(K, faces_up_to(atlas.complexes[small], K.top))


def test_single_tuple_everything_trivial():
    atlas = build_atlas(Relation.from_tuples((1, 1, 1), [(0, 0, 0)]), 2)
    for name in atlas.complexes:
        assert atlas.betti(name).values == (1, 0, 0)
    for t in natural_transformations(atlas):
        assert t["relative_betti"] == [0, 0, 0]


def test_full_box_inclusions():
    r = Relation.from_tuples((2, 2, 2), product(range(2), repeat=3))
    atlas = build_atlas(r, 2)
    assert all(i["holds"] for i in subcomplex_inclusions(atlas))
    for s in atlas.complexes.values():
        assert len(s.maximal) == 1


def test_needs_ternary():
    with pytest.raises(RelationError):
        build_atlas(Relation.from_tuples((2, 2), [(0, 0)]))


def test_map_lookup():
    atlas = build_atlas(hexagon(), 1)
    assert find_transformation(atlas, "I").kind == "top"
    assert find_transformation(atlas, "J>IJ").kind == "mid"
    assert find_transformation(atlas, "IK").kind == "composite"
    with pytest.raises(KeyError):
        find_transformation(atlas, "Q")


@settings(max_examples=25)
@given(relations(min_arity=3, max_arity=3))
def test_random_atlas_invariants(r):
    rep = atlas_report(r, 2)
    assert report_ok(rep), rep


@settings(max_examples=40)
@given(relations(min_arity=3, max_arity=3))
def test_bracket_equalities_and_inclusions(r):
    atlas = build_atlas(r, 1)
    assert all(e["equal"] for e in atlas.bracket_equalities)
    assert all(i["holds"] for i in subcomplex_inclusions(atlas))
