"""Markdown verification reports with counterexample CSVs next to them."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from stverif import __version__
from stverif.bmc import Exploration, Verdict, render_counterexample


@dataclass
class Timing:
    parse_ms: float = 0.0
    lower_ms: float = 0.0
    verify_ms: float = 0.0


@dataclass
class Report:
    case_id: str
    settings: Dict[str, object]
    verdicts: List[Verdict]
    timing: Timing = field(default_factory=Timing)
    states: Optional[int] = None
    vacuous_from: Optional[int] = None
    notes: Tuple[str, ...] = ()
    counterexamples: Dict[str, str] = field(default_factory=dict)  # assertion -> file name
    version: str = __version__

    @classmethod
    def from_exploration(cls, case_id: str, settings: Dict[str, object], ex: Exploration,
                         timing: Optional[Timing] = None, notes: Sequence[str] = ()) -> "Report":
        return cls(case_id, settings, list(ex.verdicts), timing or Timing(), ex.states,
                   ex.vacuous_from, tuple(notes))

    @property
    def all_satisfied(self) -> bool:
        return not any(v.violated for v in self.verdicts)

    @property
    def summary(self) -> str:
        if self.all_satisfied:
            line = "ALL SATISFIED"
        else:
            bad = [v.assertion for v in self.verdicts if v.violated]
            line = f"{len(bad)} of {len(self.verdicts)} assertions VIOLATED: {', '.join(bad)}"
        if self.vacuous_from is not None:
            line += f" (vacuous from cycle {self.vacuous_from}: assumptions exclude every execution)"
        return line


def _safe(name: str) -> str:
    return re.sub(r"[^A-Za-z0-9_.-]+", "_", name)


def counterexample_file(case_id: str, assertion: str) -> str:
    return f"{_safe(case_id)}_{_safe(assertion)}.csv"


def render_report(r: Report) -> str:
    lines = [f"# Verification report: {r.case_id}", "", "## Case", "",
             f"- case: `{r.case_id}`", f"- tool version: {r.version}", "", "## Settings", ""]
    for k, v in r.settings.items():
        lines.append(f"- {k}: {v}")
    lines += ["", "## Verdicts", "", "| Assertion | Status | Bound | Counterexample |",
              "|---|---|---|---|"]
    for v in r.verdicts:
        link = ""
        if v.violated:
            f = r.counterexamples.get(v.assertion, counterexample_file(r.case_id, v.assertion))
            link = f"[{f}]({f}) (cycle {v.counterexample.violation_cycle})"
        lines.append(f"| {v.assertion} | {v.status} | {v.bound} | {link} |")
    lines += ["", f"**{r.summary}**", ""]
    if r.states is not None:
        lines += [f"Distinct states explored: {r.states}", ""]
    for n in r.notes:
        lines += [n, ""]
    lines += ["## Counterexamples", ""]
    violated = [v for v in r.verdicts if v.violated]
    if not violated:
        lines += ["None.", ""]
    for v in violated:
        lines += [f"### {v.assertion}", "", "```", render_counterexample(v).rstrip(), "```", ""]
    lines += ["## Timing", "", f"- parse: {r.timing.parse_ms:.1f} ms",
              f"- lower: {r.timing.lower_ms:.1f} ms", f"- verify: {r.timing.verify_ms:.1f} ms", ""]
    return "\n".join(lines)


def write_report(r: Report, out_dir) -> Path:
    """Write ``<case>_report.md`` and one CSV per violated assertion into ``out_dir``."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for v in r.verdicts:
        if v.violated:
            name = counterexample_file(r.case_id, v.assertion)
            (out / name).write_text(render_counterexample(v), encoding="utf-8")
            r.counterexamples[v.assertion] = name
    path = out / f"{_safe(r.case_id)}_report.md"
    path.write_text(render_report(r), encoding="utf-8")
    return path
