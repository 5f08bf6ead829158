from __future__ import annotations

import re

import pytest

from stverif.bmc import VerificationCase, explore
from stverif.frontend import parse_expression
from stverif.report import Report, Timing, counterexample_file, render_report, write_report

SECTIONS = ["## Case", "## Settings", "## Verdicts", "## Counterexamples", "## Timing"]


def _report(program, assertion, timing=None, assumptions=()):
    case = VerificationCase(program, "module_2", 100, 2,
                            assumptions=tuple((f"a{k}", parse_expression(a)) for k, a in enumerate(assumptions)),
                            assertions=(("r3", parse_expression(assertion)),))
    return Report.from_exploration("module2", {"entry": "module_2"}, explore(case), timing)


def _strip_timing(text: str) -> str:
    return text.split("## Timing")[0]


class TestReport:
    def test_violated(self, modules_program, tmp_path):
        r = _report(modules_program, "v_2 = TRUE")
        assert not r.all_satisfied and r.summary == "1 of 1 assertions VIOLATED: r3"
        path = write_report(r, tmp_path)
        text = path.read_text()
        (link,) = re.findall(r"\[([^\]]+\.csv)\]\(", text)
        assert (tmp_path / link).read_text() == "signal,dir,1\nv_1,in,1\nv_2,out,0\n"
        assert link == counterexample_file("module2", "r3")

    def test_satisfied(self, modules_program):
        r = _report(modules_program, "v_2 = TRUE", assumptions=["v_1 = FALSE"])
        assert r.all_satisfied and r.summary == "ALL SATISFIED"
        assert "None." in render_report(r)

    def test_vacuity_flag(self, modules_program):
        r = _report(modules_program, "v_2 = TRUE", assumptions=["FALSE"])
        assert r.summary.startswith("ALL SATISFIED (vacuous from cycle 1")

    def test_section_order(self, modules_program):
        text = render_report(_report(modules_program, "v_2 = TRUE"))
        positions = [text.index(s) for s in SECTIONS]
        assert positions == sorted(positions)

    def test_deterministic_modulo_timing(self, modules_program, tmp_path):
        a = write_report(_report(modules_program, "v_2 = TRUE", Timing(1, 2, 3)), tmp_path / "a").read_text()
        b = write_report(_report(modules_program, "v_2 = TRUE", Timing(9, 8, 7)), tmp_path / "b").read_text()
        assert a != b and _strip_timing(a) == _strip_timing(b)

    @pytest.mark.parametrize("case_id, assertion, name", [
        ("fdback", "assertion1", "fdback_assertion1.csv"),
        ("my case", "a/b", "my_case_a_b.csv"),
    ])
    def test_counterexample_names(self, case_id, assertion, name):
        assert counterexample_file(case_id, assertion) == name
