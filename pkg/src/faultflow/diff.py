"""Golden-vs-faulty differencing of Loop Sensitive Graphs.

Edge weights are absolute differences of execution counts, with edges
missing from one run counted as zero.  A function matches only when
both runs produced the same edge set with identical counts; any weight
or topology difference marks it as differing.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from faultflow.lsg import HEAD, TAIL, LSG, edge_key, node_key
from faultflow.trace import FAULTY, RunTrace

MATCH = "match"
DIFFER = "differ"


class FunctionMismatchError(Exception):
    def __init__(self, golden_index: int, faulty_index: int):
        super().__init__(f"cannot diff function {golden_index} against function {faulty_index}")


class SymbolTableMismatchError(Exception):
    pass


class MissingInjectionSiteError(Exception):
    pass


@dataclass(frozen=True, slots=True)
class DiffEdge:
    weight: int
    golden_count: int
    faulty_count: int


@dataclass(slots=True)
class DiffLSG:
    function_index: int
    function_name: str
    golden_invocations: int
    faulty_invocations: int
    nodes: set[str] = field(default_factory=lambda: {HEAD, TAIL})
    edges: dict[tuple[str, str], DiffEdge] = field(default_factory=dict)

    def max_weight(self) -> int:
        return max((e.weight for e in self.edges.values()), default=0)

    def is_match(self) -> bool:
        # Under the absent-as-zero rule an edge unique to one run always has
        # nonzero weight, so all-zero weights imply identical edge sets.
        return all(e.weight == 0 for e in self.edges.values())

    def to_json(self) -> dict:
        return {
            "function_index": self.function_index,
            "function_name": self.function_name,
            "golden_invocations": self.golden_invocations,
            "faulty_invocations": self.faulty_invocations,
            "nodes": sorted(self.nodes, key=node_key),
            "edges": [
                {
                    "from": frm,
                    "to": to,
                    "weight": self.edges[(frm, to)].weight,
                    "golden_count": self.edges[(frm, to)].golden_count,
                    "faulty_count": self.edges[(frm, to)].faulty_count,
                }
                for frm, to in sorted(self.edges, key=edge_key)
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "DiffLSG":
        diff = cls(
            function_index=int(data["function_index"]),
            function_name=data["function_name"],
            golden_invocations=int(data["golden_invocations"]),
            faulty_invocations=int(data["faulty_invocations"]),
            nodes=set(data["nodes"]),
            edges={
                (e["from"], e["to"]): DiffEdge(
                    weight=int(e["weight"]),
                    golden_count=int(e["golden_count"]),
                    faulty_count=int(e["faulty_count"]),
                )
                for e in data["edges"]
            },
        )
        for (frm, to), edge in diff.edges.items():
            if edge.weight != abs(edge.golden_count - edge.faulty_count):
                raise ValueError(f"edge {frm}->{to} weight {edge.weight} is not |golden-faulty|")
        return diff


@dataclass(frozen=True, slots=True)
class FunctionStatus:
    function_index: int
    name: str
    status: str  # MATCH | DIFFER
    is_injection_site: bool

    def to_json(self) -> dict:
        return {
            "function_index": self.function_index,
            "name": self.name,
            "status": self.status,
            "is_injection_site": self.is_injection_site,
        }


def diff_lsg(golden: LSG, faulty: LSG) -> DiffLSG:
    """Per-edge |golden - faulty| over the union of both edge sets."""
    if golden.function_index != faulty.function_index:
        raise FunctionMismatchError(golden.function_index, faulty.function_index)
    diff = DiffLSG(
        function_index=golden.function_index,
        function_name=golden.function_name,
        golden_invocations=golden.invocations,
        faulty_invocations=faulty.invocations,
        nodes=golden.nodes | faulty.nodes,
    )
    for edge in golden.edges.keys() | faulty.edges.keys():
        g = golden.edges.get(edge, 0)
        f = faulty.edges.get(edge, 0)
        diff.edges[edge] = DiffEdge(weight=abs(g - f), golden_count=g, faulty_count=f)
    return diff


def function_statuses(golden_run: RunTrace, faulty_run: RunTrace) -> list[FunctionStatus]:
    """Match/differ status per function, in definition order, with the injection marker."""
    from faultflow.harness.campaign import symbol_digest
    from faultflow.lsg import build_all_lsgs

    if symbol_digest(golden_run) != symbol_digest(faulty_run):
        raise SymbolTableMismatchError("golden and faulty runs carry different symbol tables")
    if faulty_run.kind == FAULTY and faulty_run.injection is None:
        raise MissingInjectionSiteError(f"faulty run {faulty_run.run_id!r} carries no injection site")

    injection_index = faulty_run.injection.function_index if faulty_run.injection else None
    golden_lsgs = build_all_lsgs(golden_run)
    faulty_lsgs = build_all_lsgs(faulty_run)
    statuses = []
    for rec in golden_run.symbols:
        diff = diff_lsg(golden_lsgs[rec.index], faulty_lsgs[rec.index])
        statuses.append(
            FunctionStatus(
                function_index=rec.index,
                name=rec.name,
                status=MATCH if diff.is_match() else DIFFER,
                is_injection_site=rec.index == injection_index,
            )
        )
    return statuses


def affected_count(statuses: list[FunctionStatus]) -> int:
    return sum(1 for s in statuses if s.status == DIFFER)
