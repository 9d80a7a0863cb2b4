import json
import subprocess
import sys

import pytest

from mwdowker import bundled
from mwdowker.cli import main


def data(name):
    return str(bundled.data_path(name))


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    return code, json.loads(out)


def test_build_hexagon(capsys):
    code, doc = run_json(capsys, "build", "--construction", "dowker", data("hexagon.rel"))
    assert code == 0 and doc["count"] == 6


def test_build_single_tuple(capsys, tmp_path):
    p = tmp_path / "one.rel"
    p.write_text("dims 1 1 1\n0 0 0\n")
    code, doc = run_json(capsys, "build", "--construction", "cuboid", str(p))
    assert doc["maximal"] == [[[0, 0, 0]]]


def test_build_classic_dowker(capsys):
    code, doc = run_json(capsys, "build", "-c", "classic-dowker", "--side", "first", data("fig2.rel"))
    assert code == 0
    assert doc["maximal"] == [[[0], [1]], [[0], [2]], [[1], [2], [3]]]


def test_homology_vf_and_flags(capsys):
    _, doc = run_json(capsys, "homology", "-c", "dowker", data("cube-VF.rel"))
    assert doc["betti"][:3] == [1, 0, 1]
    _, doc = run_json(capsys, "homology", "-c", "quotient", "--axis", "V", data("cube-flag-VEF.rel"))
    assert doc["betti"][:2] == [1, 13]
    assert doc["unknown_from_degree"] == 4


def test_homology_iterated_and_integer(capsys):
    _, doc = run_json(capsys, "homology", "-c", "quotient", "--axis", "E,F", data("cube-flag-VEF.rel"))
    assert doc["betti"][:2] == [1, 5]
    _, doc = run_json(capsys, "homology", "-c", "cuboid", "--field", "Z", data("cube-VF.rel"))
    assert doc["betti"][:3] == [1, 0, 1] and doc["torsion"] == [[], [], [], []]


def test_homology_empty_relation(capsys, tmp_path):
    p = tmp_path / "empty.rel"
    p.write_text("dims 2 2\n")
    _, doc = run_json(capsys, "homology", str(p))
    assert doc["betti"] == [0, 0, 0, 0]


def test_verify_file_and_random(capsys):
    code, doc = run_json(capsys, "verify", data("hexagon.rel"))
    assert code == 0 and doc["passed"]
    code, doc = run_json(
        capsys, "verify", "--random", "50", "--dims", "3,3,3", "--density", "0.4", "--seed", "7", "--d-max", "2"
    )
    assert code == 0 and doc["instances"] == 50 and not doc["failures"]


def test_verify_parallel_matches_serial(capsys):
    args = ["verify", "--random", "6", "--dims", "2,3,2", "--seed", "3", "--d-max", "2"]
    _, serial, _ = run(capsys, *args)
    _, parallel, _ = run(capsys, *args, "--jobs", "2")
    assert serial == parallel


def test_verify_filtered_input(capsys):
    code, doc = run_json(capsys, "verify", data("cube-flag-filtered.rel"), "--d-max", "2")
    assert code == 0
    assert any(c["check"].startswith("persistence_") for c in doc["details"][0]["checks"])


def test_inject_fault_fails(capsys):
    code, doc = run_json(capsys, "verify", data("hexagon.rel"), "--inject-fault")
    assert code == 1
    assert {f["check"] for f in doc["failures"]} >= {"psi_K", "phi_K"}


def test_persist_all_axes(capsys):
    code, doc = run_json(capsys, "persist", data("cube-flag-filtered.rel"), "--axis", "all", "--d-max", "2")
    assert code == 0 and doc["all_equal"]
    assert set(doc["diagrams"]) == {"cuboid", "dowker/V", "dowker/E", "dowker/F"}
    first = doc["diagrams"]["cuboid"]
    assert all(d == first for d in doc["diagrams"].values())


def test_persist_csv(capsys):
    code, out, _ = run(capsys, "persist", data("cube-flag-filtered.rel"), "--axis", "V", "--csv", "--d-max", "1")
    assert out.splitlines()[0] == "complex,dim,birth,death"


def test_persist_needs_values(capsys):
    code, _, err = run(capsys, "persist", data("hexagon.rel"))
    assert code == 2 and "input error" in err


def test_ternary_report(capsys):
    code, doc = run_json(capsys, "ternary", data("cube-flag-VEF.rel"))
    assert code == 0 and doc["passed"]
    assert len(doc["classes"]) == 7 and len(doc["transformations"]) == 12
    assert {"classes", "complexes", "transformations", "les_checks"} <= set(doc)


def test_cofiber_vf(capsys):
    code, doc = run_json(capsys, "cofiber", data("cube-flag-VEF.rel"), "--map", "VF")
    assert code == 0 and doc["relative_betti"][:3] == [0, 0, 14]


def test_deterministic_output(capsys):
    args = ["ternary", data("hexagon.rel"), "--d-max", "2"]
    _, a, _ = run(capsys, *args)
    _, b, _ = run(capsys, *args)
    assert a == b


def test_output_file_and_pretty(capsys, tmp_path):
    out = tmp_path / "o.json"
    code, stdout, err = run(capsys, "homology", data("hexagon.rel"), "-o", str(out), "--pretty")
    assert code == 0 and stdout == ""
    assert json.loads(out.read_text())["betti"][:2] == [1, 1]
    assert "betti" in err


@pytest.mark.parametrize(
    "argv, code",
    [
        (["homology", "missing.rel"], 2),
        (["homology", "-c", "quotient", "--axis", "Q", "HEX"], 3),
        (["homology", "-c", "quotient", "HEX"], 3),
        (["homology", "-c", "classic-dowker", "HEX"], 3),
        (["homology", "HEX", "--d-max", "0"], 3),
        (["cofiber", "HEX", "--map", "nope"], 3),
        (["verify"], 3),
        (["frobnicate"], 3),
    ],
)
def test_exit_codes(argv, code, capsys):
    argv = [data("hexagon.rel") if a == "HEX" else a for a in argv]
    try:
        got = main(argv)
    except SystemExit as exc:
        got = exc.code
    assert got == code
    capsys.readouterr()


def test_parse_error_exit(capsys, tmp_path):
    p = tmp_path / "bad.rel"
    p.write_text("dims 2\n5\n")
    code, _, err = run(capsys, "homology", str(p))
    assert code == 2 and "line 2" in err


def test_cell_limit_exit(capsys, monkeypatch):
    monkeypatch.setenv("MWD_MAX_CELLS", "10")
    code, _, err = run(capsys, "homology", data("cube-flag-VEF.rel"))
    assert code == 4 and "MWD_MAX_CELLS" in err


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "mwdowker", "build", data("hexagon.rel")], capture_output=True, text=True
    )
    assert proc.returncode == 0 and json.loads(proc.stdout)["count"] == 6
