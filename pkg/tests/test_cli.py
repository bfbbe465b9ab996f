import json
import os
import subprocess
import sys

import pytest

from conftest import FIG5, FIG7
from qlaguerre.cli import main
from qlaguerre.polyring import from_json_obj, parse


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestComputationVerbs:
    def test_linearize_derangement(self, capsys):
        assert run(capsys, "linearize", "1,1,1", "--method", "derangement") == (0, "y^2*q + y\n", "")

    def test_laguerre_two(self, capsys):
        code, out, _ = run(capsys, "laguerre", "2", "--method", "recurrence")
        assert code == 0
        assert parse(out) == parse("x^2 - y*q*x - 2*y*x - x + y^2*q + y^2")

    def test_moment_zero(self, capsys):
        assert run(capsys, "moment", "0")[1] == "1\n"

    @pytest.mark.parametrize(
        "verb,arg,methods",
        [
            ("laguerre", "4", ["recurrence", "combinatorial"]),
            ("moment", "5", ["permutation", "matching", "motzkin"]),
            ("linearize", "2,1,2", ["functional", "signed-sum", "derangement"]),
        ],
    )
    def test_methods_agree(self, capsys, verb, arg, methods):
        outs = {run(capsys, verb, arg, "--method", m)[1] for m in methods}
        assert len(outs) == 1

    def test_json_round_trip(self, capsys):
        text = run(capsys, "laguerre", "3")[1]
        code, out, _ = run(capsys, "laguerre", "3", "--format", "json")
        assert code == 0
        assert from_json_obj(json.loads(out)) == parse(text)

    def test_global_format_flag(self, capsys):
        out = run(capsys, "--format", "json", "moment", "1")[1]
        assert json.loads(out) == [{"x": 0, "y": 1, "q": 0, "coeff": 1}]

    def test_derangements(self, capsys):
        code, out, _ = run(capsys, "derangements", "1,1,1")
        assert code == 0
        assert out.splitlines() == ["2 3 1 wex=2 CR=1", "3 1 2 wex=1 CR=0"]
        rows = json.loads(run(capsys, "derangements", "1,1,1", "--format", "json")[1])
        assert rows[0] == {"perm": [2, 3, 1], "wex": 2, "cr": 1}


class TestPhi:
    def test_from_file(self, capsys, tmp_path):
        path = tmp_path / "m.json"
        path.write_text(FIG7.to_json())
        code, out, _ = run(capsys, "phi", str(path), "--format", "json")
        assert code == 0
        obj = json.loads(out)
        assert obj["trace"] == {"case": "Case2b", "toggled_edge": 5, "chosen_i": 6, "chosen_i_prime": 5}
        assert obj["output"]["marked"] == [2, 3, 4, 5, 6]

    def test_from_stdin(self, capsys, monkeypatch):
        import io

        monkeypatch.setattr(sys, "stdin", io.StringIO(FIG5.to_json()))
        code, out, _ = run(capsys, "phi", "-")
        assert code == 0
        assert out.splitlines()[:2] == ["case: Case1", "toggled: e_3 = (3,2)"]

    def test_invalid_structure(self, capsys, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text('{"composition": [1, 1], "edges": [[1, 2], [2, 1]], "marked": []}')
        code, _, err = run(capsys, "phi", str(path))
        assert code == 2 and "must be marked" in err

    def test_missing_file(self, capsys, tmp_path):
        assert run(capsys, "phi", str(tmp_path / "nope.json"))[0] == 2


class TestVerify:
    @pytest.mark.parametrize(
        "suite", ["lemma-ov", "laguerre-eq", "moments-eq", "involution", "linearization"]
    )
    def test_small_ranges_pass(self, capsys, suite):
        code, out, _ = run(capsys, "verify", suite, "--max-n", "4", "--format", "json")
        report = json.loads(out)
        assert code == 0
        assert report["passed"] and report["counterexample"] is None
        assert report["suite"] == suite and report["range"] == {"max_n": 4}

    def test_text_summary(self, capsys):
        code, out, _ = run(capsys, "verify", "involution", "--max-n", "3")
        assert code == 0 and out.startswith("PASS involution (N <= 3)")

    def test_limit_is_exit_one(self, capsys):
        code, out, err = run(capsys, "verify", "involution", "--max-n", "8")
        assert code == 1 and out == "" and "exceeds the limit" in err

    def test_env_override(self, capsys, monkeypatch):
        monkeypatch.setenv("QLAG_MAX_N", "2")
        assert run(capsys, "moment", "3")[0] == 1

    def test_failed_report_needs_counterexample(self):
        from qlaguerre.suites import VerifyReport

        with pytest.raises(ValueError):
            VerifyReport("x", 1, passed=False)


class TestUsage:
    @pytest.mark.parametrize(
        "argv",
        [
            [],
            ["laguerre"],
            ["laguerre", "-1"],
            ["moment", "2", "--method", "bogus"],
            ["linearize", "1,0"],
            ["verify", "nosuch"],
            ["laguerre", "2", "--format", "xml"],
        ],
    )
    def test_usage_errors_exit_two(self, capsys, argv):
        with pytest.raises(SystemExit) as exc:
            main(argv)
        assert exc.value.code == 2
        assert capsys.readouterr().err


def test_module_entry_point_and_numpy_backend():
    env = dict(os.environ, QLAG_DISABLE_NUMBA="1")
    proc = subprocess.run(
        [sys.executable, "-m", "qlaguerre", "linearize", "2,2", "--method", "signed-sum"],
        capture_output=True, text=True, env=env, check=True,
    )
    assert parse(proc.stdout) == parse("y^2*q^2 + 2*y^2*q + y^2")
    proc = subprocess.run(
        [sys.executable, "-c", "import qlaguerre; print(qlaguerre.BACKEND)"],
        capture_output=True, text=True, env=env, check=True,
    )
    assert proc.stdout.strip() == "numpy"
