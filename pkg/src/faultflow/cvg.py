"""Critical Vector Graph: campaign-wide accumulation of per-run diffs.

Each edge carries the vector of per-run diff weights (zero where a run
never produced the edge) plus aggregates: activation frequency, max,
mean, and a criticality score normalized by the graph-wide maximum
weight.  Rankings over those scores expose the most fault-sensitive
control-flow transitions of a function.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from faultflow.diff import DiffLSG
from faultflow.lsg import HEAD, TAIL, edge_key, node_key


class EmptyCampaignError(Exception):
    pass


class FunctionMismatchError(Exception):
    pass


@dataclass(slots=True)
class EdgeVector:
    weights: list[int]
    freq: float = 0.0
    max_w: int = 0
    mean_w: float = 0.0
    score: float = 0.0


@dataclass(slots=True)
class CVG:
    function_index: int
    function_name: str
    run_ids: list[str]
    nodes: set[str] = field(default_factory=lambda: {HEAD, TAIL})
    edges: dict[tuple[str, str], EdgeVector] = field(default_factory=dict)

    def global_max(self) -> int:
        return max((vec.max_w for vec in self.edges.values()), default=0)

    def to_json(self) -> dict:
        return {
            "function_index": self.function_index,
            "function_name": self.function_name,
            "run_ids": list(self.run_ids),
            "nodes": sorted(self.nodes, key=node_key),
            "edges": [
                {
                    "from": frm,
                    "to": to,
                    "weights": list(self.edges[(frm, to)].weights),
                    "freq": self.edges[(frm, to)].freq,
                    "max_w": self.edges[(frm, to)].max_w,
                    "mean_w": self.edges[(frm, to)].mean_w,
                    "score": self.edges[(frm, to)].score,
                }
                for frm, to in sorted(self.edges, key=edge_key)
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "CVG":
        cvg = cls(
            function_index=int(data["function_index"]),
            function_name=data["function_name"],
            run_ids=list(data["run_ids"]),
            nodes=set(data["nodes"]),
            edges={
                (e["from"], e["to"]): EdgeVector(
                    weights=[int(w) for w in e["weights"]],
                    freq=float(e["freq"]),
                    max_w=int(e["max_w"]),
                    mean_w=float(e["mean_w"]),
                    score=float(e["score"]),
                )
                for e in data["edges"]
            },
        )
        for (frm, to), vec in cvg.edges.items():
            if len(vec.weights) != len(cvg.run_ids):
                raise ValueError(f"edge {frm}->{to} vector length {len(vec.weights)} != run count {len(cvg.run_ids)}")
        return cvg


def accumulate(diffs: list[DiffLSG], run_ids: list[str] | None = None) -> CVG:
    """Fold an ordered list of one function's DiffLSGs into its CVG.

    `run_ids` labels the vector positions; defaults to diff_0000.. when
    the caller tracks run identity elsewhere.
    """
    if not diffs:
        raise EmptyCampaignError("cannot accumulate an empty list of diffs")
    first = diffs[0]
    for d in diffs[1:]:
        if d.function_index != first.function_index:
            raise FunctionMismatchError(
                f"diff for function {d.function_index} mixed into CVG of function {first.function_index}"
            )
    if run_ids is None:
        run_ids = [f"diff_{i:04d}" for i in range(len(diffs))]
    if len(run_ids) != len(diffs):
        raise ValueError(f"{len(run_ids)} run ids for {len(diffs)} diffs")

    cvg = CVG(function_index=first.function_index, function_name=first.function_name, run_ids=list(run_ids))
    n = len(diffs)
    for i, diff in enumerate(diffs):
        cvg.nodes |= diff.nodes
        for edge, de in diff.edges.items():
            vec = cvg.edges.get(edge)
            if vec is None:
                vec = cvg.edges[edge] = EdgeVector(weights=[0] * n)
            vec.weights[i] = de.weight

    global_max = max((max(vec.weights) for vec in cvg.edges.values()), default=0)
    for vec in cvg.edges.values():
        vec.freq = sum(1 for w in vec.weights if w > 0) / n
        vec.max_w = max(vec.weights)
        vec.mean_w = sum(vec.weights) / n
        vec.score = vec.freq * (vec.max_w / global_max) if global_max > 0 else 0.0
    return cvg


def criticality_ranking(cvg: CVG, k: int) -> list[tuple[tuple[str, str], float]]:
    """Top-k edges by score; ties fall back to freq, max weight, then edge order."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    ranked = sorted(
        cvg.edges.items(),
        key=lambda item: (-item[1].score, -item[1].freq, -item[1].max_w, edge_key(item[0])),
    )
    return [(edge, vec.score) for edge, vec in ranked[:k]]


def block_criticality(cvg: CVG) -> dict[str, float]:
    """Block score = max score of its incident edges (head/tail included)."""
    scores = {node: 0.0 for node in cvg.nodes}
    for (frm, to), vec in cvg.edges.items():
        scores[frm] = max(scores[frm], vec.score)
        scores[to] = max(scores[to], vec.score)
    return scores
