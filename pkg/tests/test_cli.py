import json
import subprocess
import sys

import numpy as np
import pytest

from priortomo import jsonio
from priortomo.cli import run
from priortomo.opsys import Povm, statistics
from priortomo.premise import Premise, random_premise_state
from priortomo.pure import james_expectations


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def james3(tmp_path, capsys):
    path = tmp_path / "james3.json"
    assert call(capsys, "build", "--premise", "pure", "--dim", "3", "--out", str(path))[0] == 0
    return path


def test_bounds_table(capsys):
    code, out, _ = call(capsys, "bounds", "--premise", "pure", "--dmax", "7")
    assert code == 0
    rows = [line.split() for line in out.strip().splitlines()[1:]]
    assert [int(r[3]) for r in rows] == [3, 7, 9, 15, 17, 22]
    code, out, _ = call(capsys, "bounds", "--dmax", "8", "--json")
    doc = json.loads(out)
    assert doc[-1]["exact"] is None and doc[-1]["lower"] == 23


def test_bounds_single(capsys):
    code, out, _ = call(capsys, "bounds", "--premise", "grassmann:2", "--dim", "4", "--json")
    assert code == 0 and json.loads(out)["lower"] == 13
    assert call(capsys, "bounds", "--premise", "rank:1")[0] == 1


def test_build_rank(capsys):
    code, out, _ = call(capsys, "build", "--premise", "rank:1", "--dim", "4")
    assert code == 0
    doc = json.loads(out)
    assert len(doc["effects"]) == 12
    rep = doc["report"]
    assert rep["witness_dim"] == 4 and rep["sampled_min_rank"] >= 3
    assert jsonio.scheme_from_json(doc).n_outcomes == 12


def test_build_variants(capsys):
    assert len(json.loads(call(capsys, "build", "--premise", "pure", "--dim", "4")[1])["observables"]) == 11
    doc = json.loads(call(capsys, "build", "--premise", "pure", "--dim", "3", "--scheme", "james-povm")[1])
    assert len(doc["effects"]) == 8
    assert len(json.loads(call(capsys, "build", "--premise", "realpure", "--dim", "3")[1])["observables"]) == 4
    assert call(capsys, "build", "--premise", "realpure", "--dim", "4")[0] == 1
    assert call(capsys, "build", "--premise", "rank:2", "--dim", "4")[0] == 1
    assert call(capsys, "build", "--premise", "bogus", "--dim", "4")[0] == 1


def test_verify_antidiagonal_scheme(james3, capsys):
    code, out, _ = call(capsys, "verify", "--scheme", str(james3), "--premise", "pure")
    assert code == 0 and json.loads(out)["verdict"] == "Certified"


def test_verify_refuted(tmp_path, capsys):
    a = np.array([np.eye(3) / 2, np.eye(3) / 2])
    path = tmp_path / "trivial.json"
    path.write_text(jsonio.dumps(jsonio.scheme_to_json(Povm(a))))
    code, out, _ = call(capsys, "verify", "--scheme", str(path), "--premise", "pure", "--trials", "8")
    assert code == 2 and json.loads(out)["verdict"] == "Refuted"
    code, out, _ = call(capsys, "verify", "--scheme", str(path), "--premise", "realpure", "--trials", "50")
    assert code == 2 and json.loads(out)["verdict"] == "SampledFail"


def test_reconstruct_pure_from_expectations(tmp_path, capsys):
    x = np.array([0.0, 0.6, 0.8j])
    stats = tmp_path / "e.json"
    stats.write_text(jsonio.dumps(jsonio.vector_to_json(james_expectations(x))))
    code, out, _ = call(capsys, "reconstruct", "--scheme", "james", "--stats", str(stats))
    assert code == 0
    xh = jsonio.amplitudes_from_json(json.loads(out))
    assert abs(np.vdot(xh, x)) ** 2 == pytest.approx(1, abs=1e-10)
    stats.write_text(jsonio.dumps(jsonio.vector_to_json([0.5, 2.0, 0.0])))
    assert call(capsys, "reconstruct", "--scheme", "james", "--stats", str(stats))[0] == 3


def test_stats_and_reconstruct_rank(tmp_path, capsys):
    povm = tmp_path / "p.json"
    call(capsys, "build", "--premise", "rank:1", "--dim", "4", "--out", str(povm))
    rho = random_premise_state(Premise.pure(4), 5)
    state = tmp_path / "rho.json"
    state.write_text(jsonio.dumps(jsonio.matrix_to_json(rho)))
    code, out, _ = call(capsys, "stats", "--scheme", str(povm), "--state", str(state))
    assert code == 0
    probs = tmp_path / "probs.json"
    probs.write_text(out)
    assert np.allclose(json.loads(out)["values"], statistics(jsonio.scheme_from_json(jsonio.load(povm)), rho))
    code, out, _ = call(capsys, "reconstruct", "--scheme", str(povm), "--stats", str(probs), "--rank", "1")
    assert code == 0
    doc = json.loads(out)
    assert doc["converged"] and np.linalg.norm(jsonio.matrix_from_json(doc["state"]) - rho) <= 1e-6
    assert call(capsys, "reconstruct", "--scheme", str(povm), "--stats", str(probs))[0] == 1


def test_reconstruct_non_convergence(tmp_path, capsys):
    povm = tmp_path / "p.json"
    call(capsys, "build", "--premise", "rank:1", "--dim", "4", "--out", str(povm))
    probs = tmp_path / "mixed.json"
    a = jsonio.scheme_from_json(jsonio.load(povm))
    probs.write_text(jsonio.dumps(jsonio.vector_to_json(statistics(a, np.eye(4) / 4))))
    code, out, _ = call(capsys, "reconstruct", "--scheme", str(povm), "--stats", str(probs), "--rank", "1", "--starts", "2")
    assert code == 3 and not json.loads(out)["converged"]


def test_random_observable_experiment_deterministic(capsys):
    args = ("mane", "--premise", "pure", "--dim", "3", "--m", "9", "--pairs", "500", "--seed", "4")
    c1, o1, _ = call(capsys, *args)
    c2, o2, _ = call(capsys, *args)
    assert c1 == 0 and o1 == o2
    assert json.loads(o1)["details"]["generic_regime"]


def test_depolarized_premise(tmp_path, capsys):
    sigma = tmp_path / "sigma.json"
    sigma.write_text(jsonio.dumps(jsonio.matrix_to_json(np.eye(2) / 2)))
    code, out, _ = call(capsys, "mane", "--premise", f"depol:{sigma}", "--m", "4", "--pairs", "100")
    assert code == 0 and json.loads(out)["details"]["minkowski_dim"] == 3
    assert call(capsys, "mane", "--premise", "depol", "--m", "4")[0] == 1


def test_roman(capsys):
    code, out, _ = call(capsys, "roman", "--n", "5")
    lines = out.strip().splitlines()
    assert code == 0 and lines[0] == "y1,y2,y3" and len(lines) == 6


def test_usage_errors(capsys):
    assert call(capsys)[0] == 1
    assert call(capsys, "frobnicate")[0] == 1
    assert call(capsys, "roman", "--n", "0")[0] == 1
    assert call(capsys, "verify", "--scheme", "/nonexistent.json", "--premise", "pure")[0] == 1
    assert call(capsys, "--help")[0] == 0


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "priortomo", "bounds", "--dmax", "3"], capture_output=True, text=True)
    assert out.returncode == 0 and out.stdout.splitlines()[-1].split() == ["3", "7", "7", "7"]
