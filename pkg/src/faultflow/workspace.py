"""Workspace persistence and campaign orchestration.

A workspace root holds immutable version directories (v0001, v0002,
...); every ingest creates the next version and never rewrites an old
one.  All artifacts are canonical JSON, computed eagerly at ingest
time, so the HTTP service and the exporters only ever read persisted
bytes and identical inputs always produce byte-identical workspaces.

Version directory layout::

    v0001/
      manifest.json                 campaign manifest (faults/outcomes when known)
      runs.json                     run index served by /api/runs
      ranking.json                  campaign-wide edge criticality ranking
      cvg/<index>.json              per-function critical vector graphs
      cvg_layout/<index>.json
      runs/<run_id>/run.json        parsed trace
      runs/<run_id>/functions.json  per-function match/differ statuses
      runs/<run_id>/lsg/<index>.json
      runs/<run_id>/layout/<index>.json       golden run only (global view)
      runs/<run_id>/diff/<index>.json         faulty runs only
      runs/<run_id>/diff_layout/<index>.json  faulty runs only
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from pathlib import Path

from faultflow import jsonio
from faultflow.cvg import CVG, accumulate
from faultflow.diff import MATCH, DiffLSG, FunctionStatus, diff_lsg, function_statuses
from faultflow.harness.campaign import CampaignManifest, CampaignRun, symbol_digest
from faultflow.layout import LayoutGraph, StyledGraph, anomaly_map, layout
from faultflow.lsg import LSG, build_all_lsgs, edge_key
from faultflow.render import render_dot, render_svg
from faultflow.trace import (
    FAULTY,
    GOLDEN,
    RunTrace,
    TraceError,
    format_addr,
    parse_trace,
    render_trace,
    run_from_json,
    run_to_json,
    validate_run,
)

VIEW_DIFF = "diff"
VIEW_GLOBAL = "global"
VIEW_CVG = "cvg"


class WorkspaceError(Exception):
    pass


class NoGoldenRunError(WorkspaceError):
    pass


class MultipleGoldenRunsError(WorkspaceError):
    pass


class WorkspaceNotIngestedError(WorkspaceError):
    pass


class NotFoundError(WorkspaceError):
    pass


@dataclass(slots=True)
class IngestSummary:
    version_dir: Path
    golden_run_id: str
    runs_accepted: list[str]
    function_count: int
    faulty_count: int
    findings: list[str] = field(default_factory=list)  # per-file rejections

    def describe(self) -> str:
        lines = [
            f"workspace version: {self.version_dir}",
            f"runs accepted: {len(self.runs_accepted)} "
            f"(golden {self.golden_run_id!r} + {self.faulty_count} faulty)",
            f"functions: {self.function_count}",
        ]
        if self.findings:
            lines.append(f"rejected inputs: {len(self.findings)}")
            lines.extend(f"  - {f}" for f in self.findings)
        return "\n".join(lines)


def _fn_file(index: int) -> str:
    return f"{index:04d}.json"


def next_version_dir(root: Path) -> Path:
    root.mkdir(parents=True, exist_ok=True)
    existing = sorted(p.name for p in root.glob("v[0-9][0-9][0-9][0-9]") if p.is_dir())
    n = int(existing[-1][1:]) + 1 if existing else 1
    return root / f"v{n:04d}"


def latest_version_dir(root: Path) -> Path:
    existing = sorted(p.name for p in Path(root).glob("v[0-9][0-9][0-9][0-9]") if (Path(root) / p.name).is_dir())
    if not existing:
        raise WorkspaceNotIngestedError(f"workspace {root} has no ingested version")
    return Path(root) / existing[-1]


def ingest(trace_paths: list[Path], workspace_root: Path) -> IngestSummary:
    """Parse, validate, and persist a set of traces as a new workspace version.

    Per-file parse/validation failures are recorded in the summary without
    aborting the remaining files; exactly one golden run must survive.
    """
    accepted: list[RunTrace] = []
    findings: list[str] = []
    for path in trace_paths:
        path = Path(path)
        try:
            with open(path, "r", encoding="utf-8", newline="") as fh:
                run = parse_trace(fh)
        except (OSError, TraceError) as exc:
            findings.append(f"{path}: {exc}")
            continue
        report = validate_run(run)
        if not report.ok:
            findings.append(f"{path}: {report.findings[0].message}")
            continue
        accepted.append(run)

    goldens = [r for r in accepted if r.kind == GOLDEN]
    if not goldens:
        raise NoGoldenRunError("no golden run among the accepted traces")
    if len(goldens) > 1:
        raise MultipleGoldenRunsError(f"{len(goldens)} golden runs among the accepted traces")
    golden = goldens[0]

    digest = symbol_digest(golden)
    faulty_runs: list[RunTrace] = []
    for run in accepted:
        if run.kind != FAULTY:
            continue
        if symbol_digest(run) != digest:
            findings.append(f"run {run.run_id!r}: symbol table differs from golden run")
            continue
        faulty_runs.append(run)

    manifest = CampaignManifest(
        campaign_id="ingest-" + _ingest_digest(golden, faulty_runs),
        golden_run_id=golden.run_id,
        symbol_digest=digest,
        runs=[CampaignRun(run_id=golden.run_id, kind=GOLDEN)]
        + [CampaignRun(run_id=r.run_id, kind=FAULTY) for r in faulty_runs],
    )
    version = persist_version(next_version_dir(Path(workspace_root)), golden, faulty_runs, manifest)
    return IngestSummary(
        version_dir=version,
        golden_run_id=golden.run_id,
        runs_accepted=[golden.run_id] + [r.run_id for r in faulty_runs],
        function_count=len(golden.symbols),
        faulty_count=len(faulty_runs),
        findings=findings,
    )


def _ingest_digest(golden: RunTrace, faulty_runs: list[RunTrace]) -> str:
    h = hashlib.sha256()
    for run in [golden] + faulty_runs:
        h.update(render_trace(run).encode("utf-8"))
    return h.hexdigest()[:12]


def persist_version(
    version_dir: Path,
    golden: RunTrace,
    faulty_runs: list[RunTrace],
    manifest: CampaignManifest,
) -> Path:
    """Eagerly compute and write every artifact for one workspace version."""
    version_dir.mkdir(parents=True, exist_ok=False)
    jsonio.write_canonical(version_dir / "manifest.json", manifest.to_json())

    runs_index = []
    for run in [golden] + faulty_runs:
        entry = {"run_id": run.run_id, "kind": run.kind, "injection": None}
        if run.injection is not None:
            entry["injection"] = {
                "function_index": run.injection.function_index,
                "dynamic_event_index": run.injection.dynamic_event_index,
                "bit": run.injection.bit,
            }
        runs_index.append(entry)
    jsonio.write_canonical(version_dir / "runs.json", runs_index)

    golden_lsgs = build_all_lsgs(golden)
    _persist_run(version_dir, golden, golden_lsgs)
    golden_dir = version_dir / "runs" / golden.run_id
    all_match = [
        FunctionStatus(function_index=rec.index, name=rec.name, status=MATCH, is_injection_site=False)
        for rec in golden.symbols
    ]
    jsonio.write_canonical(golden_dir / "functions.json", [s.to_json() for s in all_match])
    for idx, lsg in golden_lsgs.items():
        jsonio.write_canonical(golden_dir / "layout" / _fn_file(idx), layout(lsg).to_json())

    diffs_by_function: dict[int, list[DiffLSG]] = {rec.index: [] for rec in golden.symbols}
    for run in faulty_runs:
        lsgs = build_all_lsgs(run)
        _persist_run(version_dir, run, lsgs)
        run_dir = version_dir / "runs" / run.run_id
        statuses = function_statuses(golden, run)
        jsonio.write_canonical(run_dir / "functions.json", [s.to_json() for s in statuses])
        for idx in sorted(lsgs):
            diff = diff_lsg(golden_lsgs[idx], lsgs[idx])
            diffs_by_function[idx].append(diff)
            jsonio.write_canonical(run_dir / "diff" / _fn_file(idx), diff.to_json())
            jsonio.write_canonical(run_dir / "diff_layout" / _fn_file(idx), layout(diff).to_json())

    if faulty_runs:
        ranking = []
        run_ids = [r.run_id for r in faulty_runs]
        for idx in sorted(diffs_by_function):
            cvg = accumulate(diffs_by_function[idx], run_ids=run_ids)
            jsonio.write_canonical(version_dir / "cvg" / _fn_file(idx), cvg.to_json())
            jsonio.write_canonical(version_dir / "cvg_layout" / _fn_file(idx), layout(cvg).to_json())
            for edge, vec in cvg.edges.items():
                ranking.append(
                    {
                        "function_index": idx,
                        "function_name": cvg.function_name,
                        "from": edge[0],
                        "to": edge[1],
                        "score": vec.score,
                        "freq": vec.freq,
                        "max_w": vec.max_w,
                        "mean_w": vec.mean_w,
                    }
                )
        ranking.sort(
            key=lambda e: (
                -e["score"],
                -e["freq"],
                -e["max_w"],
                e["function_index"],
                edge_key((e["from"], e["to"])),
            )
        )
        jsonio.write_canonical(version_dir / "ranking.json", ranking)
    else:
        jsonio.write_canonical(version_dir / "ranking.json", [])

    return version_dir


def _persist_run(version_dir: Path, run: RunTrace, lsgs: dict[int, LSG]) -> None:
    run_dir = version_dir / "runs" / run.run_id
    jsonio.write_canonical(run_dir / "run.json", run_to_json(run))
    for idx in sorted(lsgs):
        jsonio.write_canonical(run_dir / "lsg" / _fn_file(idx), lsgs[idx].to_json())


class Workspace:
    """Read-only view over one ingested workspace version."""

    def __init__(self, version_dir: Path):
        self.version_dir = Path(version_dir)

    @classmethod
    def open(cls, root: Path) -> "Workspace":
        return cls(latest_version_dir(Path(root)))

    # -- raw bytes (what the HTTP service streams) --

    def _read(self, relative: str) -> bytes:
        path = self.version_dir / relative
        if not path.is_file():
            raise NotFoundError(f"no artifact at {relative}")
        return path.read_bytes()

    def runs_index_bytes(self) -> bytes:
        return self._read("runs.json")

    def statuses_bytes(self, run_id: str) -> bytes:
        return self._read(f"runs/{run_id}/functions.json")

    def ranking_bytes(self) -> bytes:
        return self._read("ranking.json")

    # -- typed artifacts --

    def manifest(self) -> CampaignManifest:
        return CampaignManifest.from_json(jsonio.read_json(self.version_dir / "manifest.json"))

    def runs_index(self) -> list[dict]:
        return jsonio.read_json(self.version_dir / "runs.json")

    def run(self, run_id: str) -> RunTrace:
        data = jsonio.read_json(self._path(f"runs/{run_id}/run.json"))
        run = run_from_json(data)
        report = validate_run(run)
        if not report.ok:
            raise WorkspaceError(f"stored run {run_id!r} fails validation: {report.findings[0].message}")
        return run

    def golden_run_id(self) -> str:
        for entry in self.runs_index():
            if entry["kind"] == GOLDEN:
                return entry["run_id"]
        raise WorkspaceError("workspace has no golden run")

    def lsg(self, run_id: str, index: int) -> LSG:
        return LSG.from_json(jsonio.read_json(self._path(f"runs/{run_id}/lsg/{_fn_file(index)}")))

    def diff(self, run_id: str, index: int) -> DiffLSG:
        return DiffLSG.from_json(jsonio.read_json(self._path(f"runs/{run_id}/diff/{_fn_file(index)}")))

    def cvg(self, index: int) -> CVG:
        return CVG.from_json(jsonio.read_json(self._path(f"cvg/{_fn_file(index)}")))

    def layout_for(self, kind: str, run_id: str | None, index: int) -> LayoutGraph:
        if kind == VIEW_GLOBAL:
            rel = f"runs/{run_id}/layout/{_fn_file(index)}"
        elif kind == VIEW_DIFF:
            rel = f"runs/{run_id}/diff_layout/{_fn_file(index)}"
        else:
            rel = f"cvg_layout/{_fn_file(index)}"
        return LayoutGraph.from_json(jsonio.read_json(self._path(rel)))

    def statuses(self, run_id: str) -> list[dict]:
        return jsonio.read_json(self._path(f"runs/{run_id}/functions.json"))

    def _path(self, relative: str) -> Path:
        path = self.version_dir / relative
        if not path.is_file():
            raise NotFoundError(f"no artifact at {relative}")
        return path

    # -- derived, still deterministic --

    def function_index_by_name(self, name: str) -> int:
        golden = self.run(self.golden_run_id())
        for rec in golden.symbols:
            if rec.name == name:
                return rec.index
        raise NotFoundError(f"no function named {name!r}")

    def source_info(self) -> dict[int, dict[str, dict]]:
        """function index -> block id -> {file, line_start, line_end}."""
        golden = self.run(self.golden_run_id())
        info: dict[int, dict[str, dict]] = {}
        for rec in golden.symbols:
            if not rec.source_file or not rec.source_line_map:
                continue
            info[rec.index] = {
                format_addr(addr): {"file": rec.source_file, "line_start": start, "line_end": end}
                for addr, (start, end) in rec.source_line_map.items()
            }
        return info

    def styled(self, run_id: str, index: int, threshold: int, view: str) -> StyledGraph:
        if view == VIEW_GLOBAL:
            golden_id = self.golden_run_id()
            graph = self.lsg(golden_id, index)
            lay = self.layout_for(VIEW_GLOBAL, golden_id, index)
        elif view == VIEW_DIFF:
            graph = self.diff(run_id, index)
            lay = self.layout_for(VIEW_DIFF, run_id, index)
        else:
            raise NotFoundError(f"unknown view {view!r}")
        return anomaly_map(graph, threshold, lay)

    def styled_cvg(self, index: int, threshold: int) -> StyledGraph:
        graph = self.cvg(index)
        lay = self.layout_for(VIEW_CVG, None, index)
        return anomaly_map(graph, threshold, lay)

    def styled_json(self, run_id: str, index: int, threshold: int, view: str) -> dict:
        styled = self.styled(run_id, index, threshold, view)
        return self._decorate(styled, run_id=run_id, view=view)

    def styled_cvg_json(self, index: int, threshold: int) -> dict:
        styled = self.styled_cvg(index, threshold)
        return self._decorate(styled, run_id=None, view=VIEW_CVG)

    def _decorate(self, styled: StyledGraph, run_id: str | None, view: str) -> dict:
        data = styled.to_json()
        data["run_id"] = run_id
        data["view"] = view
        per_block = self.source_info().get(styled.function_index, {})
        for node in data["nodes"]:
            node["source"] = per_block.get(node["id"])
        return data

    def export(self, run_id: str, function: str | int, fmt: str, threshold: int = 0) -> bytes:
        """json | svg | dot rendering of one function's graph for one run.

        json returns the persisted artifact bytes unchanged (DiffLSG for
        faulty runs, LSG for the golden run).
        """
        index = function if isinstance(function, int) else self.function_index_by_name(function)
        run_kind = None
        for entry in self.runs_index():
            if entry["run_id"] == run_id:
                run_kind = entry["kind"]
        if run_kind is None:
            raise NotFoundError(f"no run {run_id!r} in workspace")
        view = VIEW_DIFF if run_kind == FAULTY else VIEW_GLOBAL

        if fmt == "json":
            if view == VIEW_DIFF:
                return self._read(f"runs/{run_id}/diff/{_fn_file(index)}")
            return self._read(f"runs/{run_id}/lsg/{_fn_file(index)}")
        styled = self.styled(run_id, index, threshold, view)
        if fmt == "svg":
            return render_svg(styled).encode("utf-8")
        if fmt == "dot":
            return render_dot(styled).encode("utf-8")
        raise NotFoundError(f"unknown export format {fmt!r}")
