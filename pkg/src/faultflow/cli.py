"""Command-line client for the analysis pipeline.

Thin wrappers only: each subcommand parses arguments and delegates to
the core package (or starts the HTTP service); no analysis logic lives
here.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from faultflow.cvg import criticality_ranking
from faultflow.harness.campaign import CampaignError, run_campaign
from faultflow.harness.interp import DEFAULT_STEP_LIMIT
from faultflow.harness.program import InvalidProgramError, load_program
from faultflow.trace import TraceError, render_trace
from faultflow.workspace import Workspace, WorkspaceError, ingest, next_version_dir, persist_version


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="faultflow", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="parse traces from a directory into a new workspace version")
    p.add_argument("directory", type=Path, help="directory containing *.trace files")
    p.add_argument("--workspace", type=Path, required=True)

    p = sub.add_parser("campaign", help="run a seeded fault-injection campaign and ingest it")
    p.add_argument("--program", type=Path, required=True, help="toy program assembly (.fasm)")
    p.add_argument("--runs", type=int, required=True, help="number of faulty runs")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--workspace", type=Path, required=True)
    p.add_argument("--inputs", type=int, nargs="*", default=[], help="program input values")
    p.add_argument("--step-limit", type=int, default=DEFAULT_STEP_LIMIT)

    p = sub.add_parser("diff", help="export one function's faulty-vs-golden graph")
    p.add_argument("--workspace", type=Path, required=True)
    p.add_argument("--golden", required=True, help="golden run id (must match the workspace)")
    p.add_argument("--faulty", required=True, help="faulty run id")
    p.add_argument("--function", required=True, help="function name")
    p.add_argument("--threshold", type=int, default=0)
    p.add_argument("--format", choices=["json", "svg", "dot"], default="json")
    p.add_argument("--out", type=Path, help="output file (stdout when omitted)")

    p = sub.add_parser("serve", help="serve the workspace over HTTP")
    p.add_argument("--workspace", type=Path, required=True)
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--frontend", type=Path, help="directory of built frontend assets to serve at /")

    p = sub.add_parser("rank", help="top-k critical edges of one function's campaign CVG")
    p.add_argument("--workspace", type=Path, required=True)
    p.add_argument("--function", required=True, help="function name")
    p.add_argument("--top", type=int, default=10)

    return parser


def cmd_ingest(args) -> int:
    paths = sorted(Path(args.directory).glob("*.trace"))
    if not paths:
        print(f"no *.trace files in {args.directory}", file=sys.stderr)
        return 2
    summary = ingest(paths, args.workspace)
    print(summary.describe())
    return 0


def cmd_campaign(args) -> int:
    program = load_program(args.program)
    traces = []
    manifest = run_campaign(
        program,
        list(args.inputs),
        n=args.runs,
        seed=args.seed,
        step_limit=args.step_limit,
        sink=traces.append,
    )
    trace_dir = Path(args.workspace) / "traces" / manifest.campaign_id
    trace_dir.mkdir(parents=True, exist_ok=True)
    for run in traces:
        (trace_dir / f"{run.run_id}.trace").write_text(render_trace(run), encoding="utf-8")
    golden = traces[0]
    version = persist_version(next_version_dir(Path(args.workspace)), golden, traces[1:], manifest)
    outcomes = [r.outcome.classification for r in manifest.runs if r.outcome is not None]
    print(f"campaign {manifest.campaign_id}: 1 golden + {len(traces) - 1} faulty runs")
    for kind in ("benign", "sdc", "crash"):
        print(f"  {kind}: {outcomes.count(kind)}")
    print(f"traces: {trace_dir}")
    print(f"workspace version: {version}")
    return 0


def cmd_diff(args) -> int:
    ws = Workspace.open(args.workspace)
    golden_id = ws.golden_run_id()
    if args.golden != golden_id:
        print(f"workspace golden run is {golden_id!r}, not {args.golden!r}", file=sys.stderr)
        return 2
    payload = ws.export(args.faulty, args.function, args.format, threshold=args.threshold)
    if args.out:
        args.out.write_bytes(payload)
        print(f"wrote {args.out}")
    else:
        sys.stdout.buffer.write(payload)
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from faultflow.service import create_app

    frontend = args.frontend
    if frontend is None:
        candidate = Path.cwd() / "frontend" / "dist"
        frontend = candidate if candidate.is_dir() else None
    app = create_app(args.workspace, frontend_dir=frontend)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


def cmd_rank(args) -> int:
    ws = Workspace.open(args.workspace)
    index = ws.function_index_by_name(args.function)
    cvg = ws.cvg(index)
    print(f"function {args.function} ({len(cvg.run_ids)} runs accumulated)")
    for (frm, to), score in criticality_ranking(cvg, args.top):
        vec = cvg.edges[(frm, to)]
        print(f"  {score:6.4f}  {frm} -> {to}  freq={vec.freq:.2f} max={vec.max_w} mean={vec.mean_w:.2f}")
    return 0


_COMMANDS = {
    "ingest": cmd_ingest,
    "campaign": cmd_campaign,
    "diff": cmd_diff,
    "serve": cmd_serve,
    "rank": cmd_rank,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (WorkspaceError, TraceError, InvalidProgramError, CampaignError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
