"""Command line: ``stverif parse|simulate|harness|verify|check-req``.

Exit codes: 0 success (all assertions satisfied), 1 some assertion violated,
2 any error (diagnostics go to stderr).
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path
from typing import List, Optional

from stverif import __version__
from stverif.bmc import DEFAULT_BUDGET, VerificationCase, build_case, explore, load_case_file
from stverif.errors import SourceError, StverifError
from stverif.frontend import load_program, load_units
from stverif.harness import generate_harness, load_timing_diagram
from stverif.report import Report, Timing, write_report
from stverif.requirements import check_sm_completeness, check_sm_determinism, load_requirement, parse_mapping
from stverif.requirements.checker import DEFAULT_CHECK_BOUND, KINDS, requirement_case
from stverif.requirements.state_machine import format_witness
from stverif.semantics import inputs_from_csv, lower_to_cfa, run_trace, trace_to_csv

OK, VIOLATED, ERROR = 0, 1, 2


class UsageError(Exception):
    pass


def _ms(t0: float) -> float:
    return (time.perf_counter() - t0) * 1000


def cmd_parse(args) -> int:
    program = load_program(args.paths)
    names = ", ".join(b.name for b in program.blocks) or "none"
    print(f"ok: {len(args.paths)} file(s), function blocks: {names}")
    return OK


def _diagram_inputs(text: str, fill: bool):
    d = load_timing_diagram(text)
    return [{s.name: (fill if s.cells[k] is None else s.cells[k]) for s in d.inputs}
            for k in range(d.cycles)]


def cmd_simulate(args) -> int:
    cf = load_case_file(args.case)
    program = load_program(cf.sources)
    t_cycle = args.t_cycle_ms or cf.t_cycle_ms
    automaton = lower_to_cfa(program, cf.entry, t_cycle)
    text = Path(args.inputs).read_text(encoding="utf-8")
    if text.lstrip().lower().startswith("signal,dir"):
        rows = _diagram_inputs(text, args.unconstrained == "1")
    else:
        rows = inputs_from_csv(text)
    if not rows:
        raise UsageError(f"{args.inputs}: no input rows")
    trace = run_trace(automaton, rows)
    out = trace_to_csv(automaton, trace)
    if args.out:
        Path(args.out).write_text(out, encoding="utf-8")
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(out)
    return OK


def cmd_harness(args) -> int:
    diagram_path = Path(args.diagram)
    d = load_timing_diagram(diagram_path.read_text(encoding="utf-8"))
    program = load_program(args.source)
    target = program.block(args.fb)
    if target is None:
        raise UsageError(f"no function block named {args.fb!r} in the given sources")
    h = generate_harness(d, target)
    out_dir = Path(args.out) if args.out else diagram_path.parent
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / f"{diagram_path.stem}_harness.scl"
    path.write_text(h.text, encoding="utf-8")
    print(f"wrote {path} (entry {h.driver}, {len(h.assertions)} assertions)")
    return OK


def _run(case: VerificationCase, args, parse_ms: float, case_id: str, extra_settings=None,
         notes=()) -> int:
    t0 = time.perf_counter()
    automaton = case.automaton()
    lower_ms = _ms(t0)
    t0 = time.perf_counter()
    ex = explore(case, args.budget, args.seed_order, automaton)
    verify_ms = _ms(t0)
    settings = {"entry": case.entry, "cycle time": f"{case.t_cycle} ms", "unwinding (K)": case.K,
                "state budget": args.budget, "input order": args.seed_order}
    settings.update(extra_settings or {})
    report = Report.from_exploration(case_id, settings, ex, Timing(parse_ms, lower_ms, verify_ms), notes)
    out_dir = Path(args.out) if args.out else Path(f"{case_id}_out")
    path = write_report(report, out_dir)
    print(report.summary)
    print(f"report: {path}")
    return OK if report.all_satisfied else VIOLATED


def cmd_verify(args) -> int:
    t0 = time.perf_counter()
    cf = load_case_file(args.case)
    program = load_program(cf.sources)
    case = build_case(cf, program, args.t_cycle_ms, args.unwind)
    parse_ms = _ms(t0)
    settings = {"sources": ", ".join(p.name for p in cf.sources)}
    return _run(case, args, parse_ms, cf.name, settings)


def cmd_check_req(args) -> int:
    t0 = time.perf_counter()
    req = load_requirement(args.requirement, args.kind, args.exclusive)
    notes: List[str] = []
    if req.kind == "sm":
        conflicts = check_sm_determinism(req.spec)
        gaps = check_sm_completeness(req.spec)
        for c in conflicts:
            msg = (f"determinism conflict in state {c.state}: '{c.first}' and '{c.second}' "
                   f"both fire under {format_witness(c.witness)}")
            print(msg, file=sys.stderr)
            notes.append(msg)
        for g in gaps:
            msg = f"completeness gap in state {g.state}: no transition fires under {format_witness(g.witness)}"
            print(msg, file=sys.stderr)
            notes.append(msg)
        if (conflicts or gaps) and not args.allow_incomplete:
            print("error: RequirementError: state machine is not well formed "
                  "(pass --allow-incomplete to verify anyway)", file=sys.stderr)
            return ERROR
    mapping = parse_mapping(Path(args.map).read_text(encoding="utf-8")) if args.map else None
    case = requirement_case(req, load_units(args.source), args.fb, mapping, args.t_cycle_ms or 100,
                            args.unwind or DEFAULT_CHECK_BOUND, args.allow_incomplete,
                            name=Path(args.requirement).name)
    parse_ms = _ms(t0)
    case_id = Path(args.requirement).name.split(".")[0]
    settings = {"requirement": f"{Path(args.requirement).name} ({req.kind})", "target": args.fb}
    return _run(case, args, parse_ms, case_id, settings, notes)


def _positive(text: str) -> int:
    v = int(text)
    if v <= 0:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="stverif", description="Bounded verification of Structured Text function blocks.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("parse", help="parse and type-check source files")
    sp.add_argument("paths", nargs="+")
    sp.set_defaults(func=cmd_parse)

    sp = sub.add_parser("simulate", help="run a case's entry block on concrete inputs")
    sp.add_argument("case")
    sp.add_argument("inputs", help="cycle,<input>... CSV or a timing diagram")
    sp.add_argument("--out", help="trace CSV path (default: stdout)")
    sp.add_argument("--t-cycle-ms", type=_positive)
    sp.add_argument("--unconstrained", choices=("0", "1"), default="0",
                    help="value used for U cells of a timing diagram")
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("harness", help="generate a harness block from a timing diagram")
    sp.add_argument("diagram")
    sp.add_argument("--fb", required=True, help="function block under test")
    sp.add_argument("--source", action="append", required=True, help="source file (repeatable)")
    sp.add_argument("--out", help="output directory (default: next to the diagram)")
    sp.set_defaults(func=cmd_harness)

    def engine_flags(sp):
        sp.add_argument("--out", help="report directory")
        sp.add_argument("--budget", type=_positive, default=DEFAULT_BUDGET, help="maximum number of distinct states")
        sp.add_argument("--seed-order", choices=("decl", "name"), default="decl",
                        help="input enumeration order for choosing counterexamples")
        sp.add_argument("--unwind", type=_positive, help="override the number of cycles")
        sp.add_argument("--t-cycle-ms", type=_positive, help="override the cycle time")

    sp = sub.add_parser("verify", help="verify a case file")
    sp.add_argument("case")
    engine_flags(sp)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("check-req", help="check a program against a requirement")
    sp.add_argument("requirement")
    sp.add_argument("--source", action="append", required=True, help="source file (repeatable)")
    sp.add_argument("--fb", required=True, help="function block under test")
    sp.add_argument("--map", help="mapping from requirement names to program names")
    sp.add_argument("--kind", choices=KINDS, help="requirement kind (default: from the file name)")
    sp.add_argument("--exclusive", action="store_true", help="I/O matrix inputs are mutually exclusive")
    sp.add_argument("--allow-incomplete", action="store_true",
                    help="verify even if the state machine is not deterministic or complete")
    engine_flags(sp)
    sp.set_defaults(func=cmd_check_req)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SourceError as exc:
        print(exc.diagnostic(), file=sys.stderr)
    except StverifError as exc:
        print(f"error: {exc.code}: {exc}", file=sys.stderr)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
    except OSError as exc:
        print(f"error: IOError: {exc.strerror or exc}: {exc.filename or ''}".rstrip(": "), file=sys.stderr)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
    return ERROR


if __name__ == "__main__":
    sys.exit(main())
