import json

import pytest

from dynstar.cli import run


def _capture(capsys, argv):
    code = run(argv)
    out = capsys.readouterr().out
    lines = out.splitlines()
    report = json.loads("\n".join(lines[1:])) if len(lines) > 1 else {}
    return code, lines[0] if lines else "", report


class TestClassify:
    def test_levi_with_u(self, capsys):
        code, head, rep = _capture(capsys, [
            "classify", "--type", "A", "--rank", "2",
            "--delta", "a1", "--u", "pm-a1", "--canonical"])
        assert code == 0
        assert head == "classify: PASS"
        assert rep["ok"]
        assert rep["coefficients"]["(1,0)"] == "0"
        assert rep["coefficients"]["(0,1)"] == "(1)/(2)"

    def test_generic_t(self, capsys):
        code, _, rep = _capture(capsys, [
            "classify", "--type", "A", "--rank", "2",
            "--delta", "a1", "--t", "a1=t1", "--canonical"])
        assert code == 0
        assert rep["coefficients"]["(1,0)"] == "(t1+1)/(2*t1-2)"

    def test_bad_family(self, capsys):
        code = run(["classify", "--type", "E", "--rank", "2", "--delta", "a1"])
        assert code == 2
        assert "error" in capsys.readouterr().err

    def test_bad_token(self, capsys):
        code = run(["classify", "--type", "A", "--rank", "2", "--delta", "b1"])
        assert code == 2

    def test_t_one_outside_u(self, capsys):
        code = run(["classify", "--type", "A", "--rank", "2",
                    "--delta", "a1", "--t", "a1=1"])
        assert code == 2


class TestVerifyAndLagrangian:
    def test_verify_with_recovery(self, capsys):
        code, _, rep = _capture(capsys, [
            "verify-rmatrix", "--type", "A", "--rank", "2",
            "--delta", "a1", "--u", "pm-a1", "--recover", "--canonical"])
        assert code == 0
        assert rep["in_M_Omega"] and rep["quasi_unitary"]
        assert rep["witnesses"]

    def test_lagrangian_report(self, capsys):
        code, _, rep = _capture(capsys, [
            "lagrangian", "--type", "A", "--rank", "2",
            "--delta", "a1", "--u", "pm-a1", "--canonical"])
        assert code == 0
        assert rep["dim"] == 8
        assert rep["diag_intersection_dim"] == 4


class TestTwistCommands:
    def test_abrr_check(self, capsys):
        code, _, rep = _capture(capsys, ["abrr-check", "--order", "3",
                                         "--canonical"])
        assert code == 0
        assert rep["cocycle"]["ok"] and rep["counit_ok"] and rep["h_invariant"]

    def test_cdybe_check(self, capsys):
        code, _, rep = _capture(capsys, ["cdybe-check", "--canonical"])
        assert code == 0
        assert rep["classical_limit_is_u_lambda"]
        assert rep["cdybe"]["ok"]

    def test_project_twist(self, capsys):
        code, _, rep = _capture(capsys, ["project-twist", "--order", "3",
                                         "--canonical"])
        assert code == 0
        assert rep["matches_closed_form"]
        assert rep["axioms"]["ok"]


class TestStar:
    def test_single_identity(self, capsys):
        code, _, rep = _capture(capsys, ["star", "--identity", "casimir",
                                         "--canonical"])
        assert code == 0
        assert rep["identity"] == "casimir"

    def test_unknown_identity_is_schema_error(self, capsys):
        # argparse rejects the choice before the command runs
        with pytest.raises(SystemExit) as e:
            run(["star", "--identity", "bogus"])
        assert e.value.code == 2


class TestVermaOracle:
    def test_match(self, capsys):
        code, _, rep = _capture(capsys, ["verma-oracle", "--v", "2", "--w", "4",
                                         "--canonical"])
        assert code == 0
        assert rep["status"] == "match"

    def test_mutation_fails_with_exit_1(self, capsys):
        code, head, rep = _capture(capsys, ["verma-oracle", "--mutate",
                                            "--canonical"])
        assert code == 1
        assert head == "verma-oracle: FAIL"
        assert rep["status"] == "mismatch"

    def test_odd_weight_rejected(self, capsys):
        assert run(["verma-oracle", "--v", "3"]) == 2


class TestPlumbing:
    def test_no_command_prints_help(self, capsys):
        assert run([]) == 2

    def test_canonical_is_deterministic(self, capsys):
        argv = ["classify", "--type", "B", "--rank", "2", "--delta", "a1",
                "--canonical"]
        run(argv)
        first = capsys.readouterr().out
        run(argv)
        second = capsys.readouterr().out
        assert first == second
        assert "elapsed_seconds" not in first

    def test_timing_present_without_canonical(self, capsys):
        _, _, rep = _capture(capsys, ["cdybe-check", "--order", "1"])
        assert "elapsed_seconds" in rep

    def test_json_out(self, capsys, tmp_path):
        target = tmp_path / "report.json"
        code, _, rep = _capture(capsys, [
            "abrr-check", "--order", "2", "--canonical",
            "--json-out", str(target)])
        assert code == 0
        on_disk = json.loads(target.read_text())
        assert on_disk == rep

    def test_job_file(self, capsys, tmp_path):
        job = tmp_path / "job.json"
        job.write_text(json.dumps({
            "command": "classify", "type": "A", "rank": 2,
            "delta": "a1", "u": "pm-a1", "canonical": True}))
        code, head, rep = _capture(capsys, ["--job", str(job)])
        assert code == 0
        assert rep["command"] == "classify"
        assert rep["ok"]

    def test_job_file_missing_command(self, capsys, tmp_path):
        job = tmp_path / "job.json"
        job.write_text(json.dumps({"rank": 2}))
        assert run(["--job", str(job)]) == 2
        assert "missing command" in capsys.readouterr().err

    def test_job_file_unreadable(self, capsys, tmp_path):
        assert run(["--job", str(tmp_path / "absent.json")]) == 2
