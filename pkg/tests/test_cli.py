import io
import json
import subprocess
import sys

import numpy as np
import pytest

from projeu import documents
from projeu.cli import main


def run(*argv):
    out = io.StringIO()
    code = main([str(a) for a in argv], out=out)
    return code, out.getvalue()


def write(tmp_path, name, doc):
    path = tmp_path / name
    path.write_text(json.dumps(doc), encoding="utf-8")
    return path


class TestEval:
    def test_allais_lottery(self, data_dir):
        code, out = run("eval", data_dir / "allais.json", data_dir / "allais_lottery_a.json")
        assert code == 0 and out == "1.8\n"

    def test_ellsberg_act_alpha_zero(self, data_dir):
        code, out = run(
            "eval",
            data_dir / "ellsberg_alpha0.json",
            data_dir / "ellsberg_act_G.json",
            "--belief",
            data_dir / "ellsberg_belief.json",
        )
        assert code == 0 and float(out) == pytest.approx(1 / 3, abs=1e-12)

    def test_act_defaults_to_uniform_belief(self, data_dir):
        _, with_belief = run(
            "eval", data_dir / "ellsberg_alpha05.json", data_dir / "ellsberg_act_G.json",
            "--belief", data_dir / "ellsberg_belief.json",
        )
        _, default = run("eval", data_dir / "ellsberg_alpha05.json", data_dir / "ellsberg_act_G.json")
        assert with_belief == default

    def test_dimension_mismatch_exits_2(self, data_dir, tmp_path):
        lot = write(tmp_path, "l.json", {"kind": "lottery", "schema_version": 1, "amplitudes": [1, 0]})
        code, _ = run("eval", data_dir / "allais.json", lot)
        assert code == 2

    def test_target_kind(self, data_dir):
        code, _ = run("eval", data_dir / "allais.json", data_dir / "ellsberg_belief.json")
        assert code == 1

    def test_unreadable_file_exits_1(self, data_dir, tmp_path):
        code, _ = run("eval", data_dir / "allais.json", tmp_path / "missing.json")
        assert code == 1


class TestDecompose:
    def test_vnm_diagonal(self, data_dir):
        code, out = run("decompose", data_dir / "allais_vnm.json")
        assert code == 0
        assert out.splitlines()[0] == "eigenvalues: [13, 10, 0]"
        assert "attitude: vnm-diagonal" in out

    def test_indefinite(self, tmp_path):
        m = write(tmp_path, "m.json", {"kind": "payoff_matrix", "schema_version": 1, "n": 2, "entries": [[1, 1], [1, 0]]})
        assert "attitude: indefinite" in run("decompose", m)[1]

    def test_allais_reconstruction(self, data_dir):
        code, out = run("decompose", data_dir / "allais.json")
        assert code == 0 and "reconstruction: PASS" in out

    @pytest.mark.parametrize("name, tag", [("convex", "risk-preferring"), ("concave", "uncertainty-preferring"), ("indefinite", "indefinite")])
    def test_shipped_attitudes(self, data_dir, name, tag):
        assert f"attitude: {tag}\n" in run("decompose", data_dir / f"{name}.json")[1]


class TestScenarios:
    def test_allais(self):
        code, out = run("allais")
        assert code == 0
        assert out == "u(a) = 1.8\nu(b) = 1.63397459622\nu(c) = 9.6\nu(d) = 10\nA ≻ B, D ≻ C\n"

    def test_ellsberg_positive(self):
        code, out = run("ellsberg", "--alpha", "0.5")
        assert code == 0 and out.endswith("R ≻ G, R̄ ≻ Ḡ\n")

    def test_ellsberg_negative(self):
        assert run("ellsberg", "--alpha", "-0.5")[1].endswith("R ≺ G, R̄ ≺ Ḡ\n")

    def test_ellsberg_zero_indifferent(self):
        code, out = run("ellsberg", "--alpha", "0")
        assert out.endswith("R ~ G, R̄ ~ Ḡ\n")
        assert "u(G) = 0.333333333333\n" in out and "u(Ḡ) = 0.666666666667\n" in out

    def test_default_alpha(self):
        assert run("ellsberg")[1] == run("ellsberg", "--alpha", "0.5")[1]

    @pytest.mark.parametrize("argv", [("allais",), ("ellsberg", "--alpha", "0.25")])
    def test_byte_stable_across_processes(self, argv):
        cmd = [sys.executable, "-m", "projeu.cli", *argv]
        a = subprocess.run(cmd, capture_output=True, check=True).stdout
        b = subprocess.run(cmd, capture_output=True, check=True).stdout
        assert a == b and a.decode("utf-8") == run(*argv)[1]


class TestTriangle:
    def test_stdout(self, tmp_path):
        m = write(tmp_path, "m.json", {"kind": "payoff_matrix", "schema_version": 1, "n": 3, "entries": np.diag([1.0, 0, 0]).tolist()})
        code, out = run("triangle", m, "--resolution", 2)
        lines = out.splitlines()
        assert code == 0 and lines[0] == "p1,p2,p3,utility" and len(lines) == 7
        for line in lines[1:]:
            p1, _, _, u = map(float, line.split(","))
            assert u == p1

    def test_output_file(self, data_dir, tmp_path):
        target = tmp_path / "allais.csv"
        code, out = run("triangle", data_dir / "allais.json", "--resolution", 20, "--output", target)
        assert code == 0 and out == ""
        rows = target.read_text().splitlines()
        assert len(rows) == 1 + 21 * 22 // 2
        assert rows[-1] == "1,0,0,13"

    def test_wrong_dimension_exits_2(self, data_dir):
        assert run("triangle", data_dir / "ellsberg_alpha0.json")[0] == 2

    def test_bad_resolution_exits_2(self, data_dir):
        assert run("triangle", data_dir / "allais.json", "--resolution", 1)[0] == 2


class TestSolve:
    def test_matching_pennies(self, data_dir):
        code, out = run("solve", data_dir / "matching_pennies.json")
        assert code == 0 and out.startswith("converged: yes\n")
        for line in out.splitlines()[3:]:
            probs = line.split("probabilities ")[1].strip("[]").split(", ")
            assert np.allclose([float(p) for p in probs], 0.5, atol=1e-6)

    def test_coordination(self, data_dir):
        code, out = run("solve", data_dir / "coordination.json")
        assert code == 0 and "residual: 0\n" in out
        players = out.splitlines()[3:]
        assert all(line.endswith("probabilities [1, 0]") for line in players) or all(
            line.endswith("probabilities [0, 1]") for line in players
        )

    def test_ellsberg_pennies_with_restarts(self, data_dir):
        assert run("solve", data_dir / "ellsberg_pennies.json", "--restarts")[0] == 0

    def test_nonconvergence_exits_3(self, data_dir):
        code, out = run("solve", data_dir / "coordination.json", "--max-iter", 0)
        assert code == 3 and out.startswith("converged: no\n") and "player 1:" in out

    def test_malformed_game_exits_1(self, tmp_path):
        bad = tmp_path / "g.json"
        bad.write_text('{"kind": "game", "schema_version": 1, "players": 2,')
        assert run("solve", bad)[0] == 1


def test_usage_error_exits_1():
    with pytest.raises(SystemExit) as err:
        main(["decompose"])
    assert err.value.code == 1


def test_written_documents_reload(tmp_path, data_dir):
    for f in data_dir.glob("*.json"):
        obj = documents.load(f)
        documents.dump(obj, tmp_path / f.name)
        assert documents.load(tmp_path / f.name) == obj
