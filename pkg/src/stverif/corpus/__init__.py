"""Example programs, timing diagrams, cases and requirements."""

from __future__ import annotations

from pathlib import Path

ROOT = Path(__file__).resolve().parent
REQUIREMENTS = ROOT / "requirements"


def path(name: str) -> Path:
    """Absolute path of a corpus file, e.g. ``path("fdback.case")``."""
    p = ROOT / name
    if not p.exists():
        raise FileNotFoundError(p)
    return p
