#!/usr/bin/env python3
"""Capture live API payloads from the comd_case workspace for the UI tests.

The frontend test suite replays these exact service responses through a
mocked fetch, keeping the UI contract checks hermetic while still using
real data.  Rerun after changing the fixture traces or any wire schema.
"""

from __future__ import annotations

import sys
import tempfile
from pathlib import Path

REPO = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(REPO / "src"))

from fastapi.testclient import TestClient  # noqa: E402

from faultflow.service import create_app  # noqa: E402
from faultflow.workspace import ingest  # noqa: E402

OUT = REPO / "frontend" / "tests" / "fixtures"

CAPTURES = {
    "runs.json": "/api/runs",
    "functions_fault_0001.json": "/api/runs/fault_0001/functions",
    "functions_golden.json": "/api/runs/golden/functions",
    "graph_42_t0_diff.json": "/api/runs/fault_0001/functions/42/graph?threshold=0&view=diff",
    "graph_42_t350_diff.json": "/api/runs/fault_0001/functions/42/graph?threshold=350&view=diff",
    "graph_42_t0_global.json": "/api/runs/fault_0001/functions/42/graph?threshold=0&view=global",
    "graph_43_t0_diff.json": "/api/runs/fault_0001/functions/43/graph?threshold=0&view=diff",
    "graph_1_t0_diff.json": "/api/runs/fault_0001/functions/1/graph?threshold=0&view=diff",
    "graph_155_t0_diff.json": "/api/runs/fault_0001/functions/155/graph?threshold=0&view=diff",
    "ranking_top5.json": "/api/campaign/ranking?top=5",
}


def main() -> None:
    with tempfile.TemporaryDirectory() as tmp:
        ingest(sorted((REPO / "fixtures" / "comd_case").glob("*.trace")), Path(tmp))
        client = TestClient(create_app(Path(tmp)))
        OUT.mkdir(parents=True, exist_ok=True)
        for name, url in CAPTURES.items():
            resp = client.get(url)
            resp.raise_for_status()
            (OUT / name).write_bytes(resp.content)
            print(f"wrote {OUT / name} ({len(resp.content)} bytes)")


if __name__ == "__main__":
    main()
