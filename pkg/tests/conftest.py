from __future__ import annotations

from pathlib import Path

import pytest

from stverif.corpus import REQUIREMENTS, ROOT
from stverif.frontend import load_program


@pytest.fixture(scope="session")
def corpus() -> Path:
    return ROOT


@pytest.fixture(scope="session")
def req_dir() -> Path:
    return REQUIREMENTS


@pytest.fixture(scope="session")
def fdback_program(corpus):
    return load_program([corpus / "fdback_simplified.scl"])


@pytest.fixture(scope="session")
def harness_program(corpus):
    return load_program([corpus / "fdback_simplified.scl", corpus / "call_fdback_simplified.scl"])


@pytest.fixture(scope="session")
def modules_program(corpus):
    return load_program([corpus / "modules.scl"])
