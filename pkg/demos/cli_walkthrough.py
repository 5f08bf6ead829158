"""The command line end to end, on a scratch copy of the corpus.

Each step prints the command, its exit code (0 satisfied, 1 violated,
2 error) and the first lines of its output.

Run with ``python3 demos/cli_walkthrough.py``.
"""

from __future__ import annotations

import shutil
import subprocess
import sys
import tempfile
from pathlib import Path

from stverif.corpus import ROOT


def stverif(*args: str, cwd: Path) -> None:
    cmd = [sys.executable, "-m", "stverif.cli", *args]
    done = subprocess.run(cmd, cwd=cwd, capture_output=True, text=True)
    print(f"$ stverif {' '.join(args)}  -> exit {done.returncode}")
    for line in (done.stdout + done.stderr).splitlines()[:8]:
        print(f"    {line}")


def main() -> None:
    with tempfile.TemporaryDirectory() as tmp:
        work = Path(tmp) / "corpus"
        shutil.copytree(ROOT, work, ignore=shutil.ignore_patterns("__pycache__", "*.py"))
        req = "requirements"
        stverif("parse", "fdback_simplified.scl", "call_fdback_simplified.scl", cwd=work)
        stverif("simulate", "fdback_sim.case", "fdback_diagram.csv", cwd=work)
        stverif("harness", "fdback_diagram.csv", "--fb", "FDBACK_simplified",
                "--source", "fdback_simplified.scl", cwd=work)
        stverif("verify", "fdback.case", "--out", "reports", cwd=work)
        stverif("verify", "priorities.case", "--out", "reports", cwd=work)
        stverif("verify", "malformed.case", cwd=work)
        stverif("check-req", f"{req}/modes_ambiguous.sm", "--source", f"{req}/op_modes.scl", "--fb", "op_modes",
                "--map", f"{req}/op_modes.map", cwd=work)
        stverif("check-req", f"{req}/modes.sm", "--source", f"{req}/op_modes.scl", "--fb", "op_modes",
                "--map", f"{req}/op_modes.map", "--out", "reports", cwd=work)
        print("\nreport for the priorities case:\n")
        print((work / "reports" / "priorities_report.md").read_text())


if __name__ == "__main__":
    main()
