import pytest

from mwdowker import bundled
from mwdowker.relation import parse_relation


@pytest.mark.parametrize("name", bundled.DATA_FILES)
def test_data_file_matches_generator(name):
    assert bundled.load(name) == bundled.GENERATORS[name]()


def test_cube_counts():
    assert len(bundled.cube_vertices()) == 8
    assert len(bundled.cube_edges()) == 12
    assert len(bundled.cube_faces()) == 6
    assert len(bundled.cube_incidence()) == 24


def test_flag_count_by_enumeration():
    # every face has four vertices, each on two edges of that face
    assert len(bundled.cube_flags()) == 6 * 4 * 2


def test_flags_are_chains():
    r = bundled.cube_flags()
    edges, faces = bundled.cube_edges(), bundled.cube_faces()
    for v, e, f in r.tuples:
        assert v in edges[e]
        c, s = faces[f]
        assert all((x >> (2 - c)) & 1 == s for x in edges[e])


def test_filtered_flags_share_support():
    fr = bundled.cube_flags_filtered()
    assert fr.support() == bundled.cube_flags()
    assert set(fr.values.values()) <= {n / 2 for n in range(10)}


def test_text_headers_parse():
    text = bundled.data_path("hexagon.rel").read_text()
    assert text.startswith("#")
    assert len(parse_relation(text)) == 6
