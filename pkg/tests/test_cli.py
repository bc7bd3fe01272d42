import json
import pathlib
import random

import pytest
from click.testing import CliRunner

from flagdual.cli import main
from flagdual.exactalg import GF, Mat, format_matrix
from flagdual.grassflag import random_hf_section

GOLDEN = pathlib.Path(__file__).parent / "golden" / "verify_script_matrix.json"


@pytest.fixture()
def runner():
    return CliRunner()


def test_duality_build(runner, tmp_path):
    res = runner.invoke(main, ["duality", "build", "--out", str(tmp_path)])
    assert res.exit_code == 0, res.output
    quad = (tmp_path / "quadrics.txt").read_text().strip().splitlines()
    quint = (tmp_path / "quintics.txt").read_text().strip().splitlines()
    assert len([l for l in quad if not l.startswith("#")]) == 5
    assert len([l for l in quint if not l.startswith("#")]) == 3


def test_duality_nonbirational(runner, tmp_path):
    out = tmp_path / "cert.json"
    res = runner.invoke(main, ["duality", "nonbirational", "--prime", "17",
                               "--report", str(out)])
    assert res.exit_code == 0, res.output
    rep = json.loads(out.read_text())
    assert rep["status"] == "certified_empty"
    assert rep["saturation_result"] == "unit"
    assert {"status", "dim_commutant", "symmetric", "saturation_result"} <= set(rep)


def test_duality_selfdual(runner):
    res = runner.invoke(main, ["duality", "selfdual", "--samples", "20"])
    assert res.exit_code == 0, res.output
    assert json.loads(res.output)["all_non_selfdual"]


def test_bwb_cohomology(runner):
    res = runner.invoke(main, ["bwb", "cohomology", "--space", "F",
                               "--weight", "2,2|1|0,0"])
    assert res.exit_code == 0
    assert json.loads(res.output) == {"0": 75}


def test_bwb_lemma_grid(runner):
    res = runner.invoke(main, ["bwb", "lemma", "--name", "vanishingQO",
                               "--range", "0..7"])
    assert res.exit_code == 0, res.output
    assert "PASS" in res.output


def test_mutations_replay(runner, tmp_path):
    out = tmp_path / "log.json"
    res = runner.invoke(main, ["mutations", "replay", "--log", str(out)])
    assert res.exit_code == 0, res.output
    rep = json.loads(out.read_text())
    assert rep["final_matches_display"] and rep["braid_inverse_identity"]
    assert len(rep["log"]) == rep["moves_applied"]


def test_mutations_check_collection(runner):
    res = runner.invoke(main, ["mutations", "check-collection",
                               "--name", "kuznetsov25"])
    assert res.exit_code == 0, res.output


def test_motivic_commands(runner, tmp_path):
    out = tmp_path / "count.json"
    res = runner.invoke(main, ["motivic", "count", "--q", "2",
                               "--report", str(out)])
    assert res.exit_code == 0, res.output
    rep = json.loads(out.read_text())
    assert rep["identity_X"] and rep["identity_Y"] and rep["X_equals_Y"]
    assert runner.invoke(main, ["motivic", "degree"]).exit_code == 0
    assert runner.invoke(main, ["motivic", "l-relation"]).exit_code == 0


def test_glsm_stability_sampling(runner, tmp_path):
    out = tmp_path / "glsm.json"
    res = runner.invoke(main, ["glsm", "stability", "--chamber", "minus",
                               "--samples", "50", "--seed", "7",
                               "--report", str(out)])
    assert res.exit_code == 0, res.output
    rep = json.loads(out.read_text())
    assert rep["stats"]["semistable"] > 0


def test_glsm_stability_point_input(runner, tmp_path):
    pt = tmp_path / "point.mat"
    rows = [[1, 0, 0], [0, 1, 0], [0, 0, 1], [0, 0, 0], [0, 0, 0], [0, 0, 0]]
    pt.write_text("\n".join(" ".join(str(x) for x in r) for r in rows) + "\n")
    res = runner.invoke(main, ["glsm", "stability", "--chamber", "minus",
                               "--point", str(pt)])
    assert res.exit_code == 0, res.output
    rep = json.loads(res.output)
    assert rep["point"]["semistable"] is False      # omega = 0
    assert rep["point"]["instability"]["valid"]


def test_custom_section_file(runner, tmp_path):
    rng = random.Random(5)
    s = random_hf_section(GF(17), rng)
    path = tmp_path / "S.mat"
    path.write_text(format_matrix(s.mat))
    res = runner.invoke(main, ["duality", "nonbirational", "--prime", "17",
                               "--section", str(path)])
    assert res.exit_code == 0, res.output
    assert json.loads(res.output)["route"] == "reduced"


def test_verify_paper_matches_golden(runner, tmp_path):
    out = tmp_path / "verify.json"
    res = runner.invoke(main, ["verify-paper", "--report", str(out)])
    assert res.exit_code == 0, res.output
    got = json.loads(out.read_text())
    expected = json.loads(GOLDEN.read_text())
    assert got == expected
