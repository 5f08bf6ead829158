from __future__ import annotations

import pytest

from stverif.cli import ERROR, OK, VIOLATED, main


@pytest.fixture
def run(capsys):
    def _run(*argv):
        code = main([str(a) for a in argv])
        out, err = capsys.readouterr()
        return code, out, err
    return _run


class TestParse:
    def test_clean(self, run, corpus):
        code, out, _ = run("parse", corpus / "fdback_simplified.scl")
        assert code == OK and "FDBACK_simplified" in out

    def test_type_error(self, run, tmp_path):
        f = tmp_path / "bad.scl"
        f.write_text("FUNCTION_BLOCK f VAR x : BOOL; END_VAR\nx := 1;\nEND_FUNCTION_BLOCK\n")
        code, _, err = run("parse", f)
        assert code == ERROR and "TypeMismatch" in err and "bad.scl:2:" in err

    def test_missing_file(self, run, tmp_path):
        code, _, err = run("parse", tmp_path / "nope.scl")
        assert code == ERROR and "IOError" in err


class TestSimulate:
    def test_reference_diagram(self, run, corpus, tmp_path):
        out = tmp_path / "trace.csv"
        code, _, _ = run("simulate", corpus / "fdback_sim.case", corpus / "fdback_diagram.csv", "--out", out)
        assert code == OK
        lines = out.read_text().splitlines()
        col = lines[0].split(",").index("ERROR")
        assert [line.split(",")[col] for line in lines[1:]] == ["FALSE", "FALSE", "FALSE", "TRUE", "TRUE", "FALSE"]

    def test_module_1(self, run, corpus, tmp_path):
        rows = tmp_path / "in.csv"
        rows.write_text("cycle\n1\n2\n3\n")
        code, out, _ = run("simulate", corpus / "module1.case", rows)
        assert code == OK
        lines = out.splitlines()
        col = lines[0].split(",").index("v_1")
        assert [line.split(",")[col] for line in lines[1:]] == ["FALSE"] * 3

    def test_empty_inputs(self, run, corpus, tmp_path):
        rows = tmp_path / "in.csv"
        rows.write_text("")
        code, _, err = run("simulate", corpus / "fdback_sim.case", rows)
        assert code == ERROR and "no input rows" in err

    def test_missing_input(self, run, corpus, tmp_path):
        rows = tmp_path / "in.csv"
        rows.write_text("cycle,ON,FEEDBACK\n1,1,1\n")
        code, _, err = run("simulate", corpus / "fdback_sim.case", rows)
        assert code == ERROR and "MissingInput" in err


class TestHarness:
    def test_writes_six_assertions(self, run, corpus, tmp_path):
        code, _, _ = run("harness", corpus / "fdback_diagram.csv", "--fb", "FDBACK_simplified",
                         "--source", corpus / "fdback_simplified.scl", "--out", tmp_path)
        assert code == OK
        text = (tmp_path / "fdback_diagram_harness.scl").read_text()
        assert [f"assertion{k};" in text for k in range(1, 7)] == [True] * 6

    def test_idempotent(self, run, corpus, tmp_path):
        args = ("harness", corpus / "fdback_diagram.csv", "--fb", "FDBACK_simplified",
                "--source", corpus / "fdback_simplified.scl", "--out", tmp_path)
        run(*args)
        first = (tmp_path / "fdback_diagram_harness.scl").read_bytes()
        run(*args)
        assert (tmp_path / "fdback_diagram_harness.scl").read_bytes() == first

    def test_signal_not_in_block(self, run, corpus, tmp_path):
        d = tmp_path / "d.csv"
        d.write_text("signal,dir,1\nPOWER,in,1\nERROR,out,0\n")
        code, _, err = run("harness", d, "--fb", "FDBACK_simplified", "--source", corpus / "fdback_simplified.scl")
        assert code == ERROR and "SignalNotInInterface" in err

    def test_unknown_block(self, run, corpus):
        code, _, _ = run("harness", corpus / "fdback_diagram.csv", "--fb", "nope",
                         "--source", corpus / "fdback_simplified.scl")
        assert code == ERROR


class TestVerify:
    @pytest.mark.parametrize("case, expected", [
        ("fdback.case", OK),
        ("module2.case", VIOLATED),
        ("module2_assume.case", OK),
        ("module1.case", OK),
        ("priorities.case", VIOLATED),
        ("malformed.case", ERROR),
    ])
    def test_corpus_matrix(self, run, corpus, tmp_path, case, expected):
        code, _, _ = run("verify", corpus / case, "--out", tmp_path)
        assert code == expected

    def test_fdback_report(self, run, corpus, tmp_path):
        code, out, _ = run("verify", corpus / "fdback.case", "--out", tmp_path)
        assert code == OK and "ALL SATISFIED" in out
        report = (tmp_path / "fdback_report.md").read_text()
        assert "| assertion6 | Satisfied | 6 |" in report

    def test_priorities_witness(self, run, corpus, tmp_path):
        code, _, _ = run("verify", corpus / "priorities.case", "--out", tmp_path)
        assert code == VIOLATED
        rows = (tmp_path / "priorities_r1_r2.csv").read_text().splitlines()
        assert "v1_up,in,1" in rows and "v1_down,in,1" in rows and "v_out,out,0" in rows

    def test_small_budget(self, run, corpus, tmp_path):
        code, _, err = run("verify", corpus / "fdback.case", "--out", tmp_path, "--budget", "2")
        assert code == ERROR and "BudgetExceeded" in err

    def test_overrides(self, run, corpus, tmp_path):
        code, _, _ = run("verify", corpus / "fdback.case", "--out", tmp_path, "--unwind", "3")
        assert code == OK
        assert "unwinding (K): 3" in (tmp_path / "fdback_report.md").read_text()

    def test_bad_budget_flag(self, run, corpus):
        with pytest.raises(SystemExit) as exc:
            run("verify", corpus / "fdback.case", "--budget", "0")
        assert exc.value.code == 2


class TestCheckReq:
    def test_ambiguous_modes_refused(self, run, req_dir, tmp_path):
        code, _, err = run("check-req", req_dir / "modes_ambiguous.sm", "--source", req_dir / "op_modes.scl",
                           "--fb", "op_modes", "--map", req_dir / "op_modes.map", "--out", tmp_path)
        assert code == ERROR
        assert "determinism conflict in state Manual" in err
        assert "completeness gap in state Forced" in err

    def test_ambiguous_modes_allowed(self, run, req_dir, tmp_path):
        code, _, _ = run("check-req", req_dir / "modes_ambiguous.sm", "--source", req_dir / "op_modes.scl",
                         "--fb", "op_modes", "--map", req_dir / "op_modes.map", "--out", tmp_path,
                         "--allow-incomplete")
        assert code in (OK, VIOLATED)
        assert "determinism conflict" in (tmp_path / "modes_ambiguous_report.md").read_text()

    def test_prioritized_modes(self, run, req_dir, tmp_path):
        code, _, _ = run("check-req", req_dir / "modes.sm", "--source", req_dir / "op_modes.scl",
                         "--fb", "op_modes", "--map", req_dir / "op_modes.map", "--out", tmp_path)
        assert code == OK

    def test_interlock(self, run, req_dir, tmp_path):
        code, _, _ = run("check-req", req_dir / "interlock.cem.csv", "--source", req_dir / "cem_impl.scl",
                         "--fb", "cem_impl", "--out", tmp_path)
        assert code == OK

    def test_mutant(self, run, req_dir, tmp_path):
        code, _, _ = run("check-req", req_dir / "two_modes.sm", "--source", req_dir / "two_modes_mutant.scl",
                         "--fb", "two_modes", "--map", req_dir / "two_modes.map", "--out", tmp_path)
        assert code == VIOLATED

    def test_unknown_kind(self, run, req_dir, tmp_path):
        f = tmp_path / "table.csv"
        f.write_text((req_dir / "interlock.cem.csv").read_text())
        code, _, err = run("check-req", f, "--source", req_dir / "cem_impl.scl", "--fb", "cem_impl")
        assert code == ERROR and "--kind" in err
        code, _, _ = run("check-req", f, "--source", req_dir / "cem_impl.scl", "--fb", "cem_impl",
                         "--kind", "cem", "--out", tmp_path)
        assert code == OK
