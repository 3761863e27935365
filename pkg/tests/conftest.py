from __future__ import annotations

from pathlib import Path

import pytest

from faultflow.harness.program import load_program
from faultflow.trace import parse_trace
from faultflow.workspace import Workspace, ingest

REPO = Path(__file__).resolve().parents[1]
FIXTURES = REPO / "fixtures"
COMD_DIR = FIXTURES / "comd_case"
PROGRAMS = FIXTURES / "programs"


@pytest.fixture(scope="session")
def comd_golden():
    return parse_trace(Path(COMD_DIR / "golden.trace").read_text(encoding="utf-8"))


@pytest.fixture(scope="session")
def comd_faulty():
    return parse_trace(Path(COMD_DIR / "faulty_0001.trace").read_text(encoding="utf-8"))


@pytest.fixture(scope="session")
def comd_workspace(tmp_path_factory) -> Workspace:
    root = tmp_path_factory.mktemp("comd_ws")
    ingest(sorted(COMD_DIR.glob("*.trace")), root)
    return Workspace.open(root)


@pytest.fixture(scope="session")
def loop10_program():
    return load_program(PROGRAMS / "loop10.fasm")


@pytest.fixture(scope="session")
def nested_calls_program():
    return load_program(PROGRAMS / "nested_calls.fasm")


@pytest.fixture(scope="session")
def diamond_program():
    return load_program(PROGRAMS / "diamond.fasm")
