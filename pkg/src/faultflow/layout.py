"""Render preparation: layered graph layout and threshold styling.

Layout is deterministic Sugiyama-style layering: back edges are found
by depth-first traversal from head (neighbors visited in canonical
block order), ranks come from longest paths over the remaining DAG,
within-rank order from a fixed number of barycenter sweeps, and
coordinates from a plain grid.  The anomaly-mapping stage then colors
edges gray or red against a weight threshold, with red intensity
scaled by the graph's maximum weight.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field

from faultflow.cvg import CVG
from faultflow.diff import DiffLSG
from faultflow.lsg import HEAD, TAIL, LSG, edge_key, node_key

ROW_HEIGHT = 90.0
COL_WIDTH = 140.0
BARYCENTER_SWEEPS = 4

GRAY = "gray"
RED = "red"

STYLE_HEAD = "head_yellow"
STYLE_TAIL = "tail_red"
STYLE_BLOCK = "block_default"


class MissingHeadTailError(Exception):
    pass


class LayoutMismatchError(Exception):
    pass


@dataclass(frozen=True, slots=True)
class LayoutNode:
    rank: int
    x: float
    y: float


@dataclass(slots=True)
class LayoutGraph:
    nodes: dict[str, LayoutNode]
    reversed_edges: set[tuple[str, str]]
    edges: list[tuple[str, str]]
    width: float
    height: float

    def to_json(self) -> dict:
        return {
            "canvas": {"width": self.width, "height": self.height},
            "nodes": [
                {"id": nid, "rank": self.nodes[nid].rank, "x": self.nodes[nid].x, "y": self.nodes[nid].y}
                for nid in sorted(self.nodes, key=node_key)
            ],
            "edges": [
                {"from": frm, "to": to, "reversed": (frm, to) in self.reversed_edges}
                for frm, to in sorted(self.edges, key=edge_key)
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "LayoutGraph":
        return cls(
            nodes={n["id"]: LayoutNode(rank=int(n["rank"]), x=float(n["x"]), y=float(n["y"])) for n in data["nodes"]},
            reversed_edges={(e["from"], e["to"]) for e in data["edges"] if e["reversed"]},
            edges=[(e["from"], e["to"]) for e in data["edges"]],
            width=float(data["canvas"]["width"]),
            height=float(data["canvas"]["height"]),
        )


def styling_weight(graph, edge: tuple[str, str]) -> int:
    """The weight the anomaly mapping styles by, per graph flavor."""
    if isinstance(graph, LSG):
        return graph.edges[edge]
    if isinstance(graph, DiffLSG):
        return graph.edges[edge].weight
    if isinstance(graph, CVG):
        return graph.edges[edge].max_w
    raise TypeError(f"unsupported graph type {type(graph).__name__}")


def _classify_back_edges(nodes: set[str], adjacency: dict[str, list[str]]) -> set[tuple[str, str]]:
    """Iterative DFS from head; an edge into a node on the active stack is a back edge."""
    WHITE, GRAY_STATE, BLACK = 0, 1, 2
    color = {n: WHITE for n in nodes}
    reversed_edges: set[tuple[str, str]] = set()

    roots = [HEAD] + [n for n in sorted(nodes, key=node_key) if n != HEAD]
    for root in roots:
        if color[root] != WHITE:
            continue
        stack: list[tuple[str, int]] = [(root, 0)]
        color[root] = GRAY_STATE
        while stack:
            node, i = stack[-1]
            succs = adjacency[node]
            if i < len(succs):
                stack[-1] = (node, i + 1)
                nxt = succs[i]
                if color[nxt] == GRAY_STATE:
                    reversed_edges.add((node, nxt))
                elif color[nxt] == WHITE:
                    color[nxt] = GRAY_STATE
                    stack.append((nxt, 0))
            else:
                color[node] = BLACK
                stack.pop()
    return reversed_edges


def layout(graph, row_height: float = ROW_HEIGHT, col_width: float = COL_WIDTH) -> LayoutGraph:
    """Deterministic layered layout of an LSG, DiffLSG, or CVG."""
    nodes = set(graph.nodes)
    if HEAD not in nodes or TAIL not in nodes:
        raise MissingHeadTailError(f"graph for function {graph.function_index} lacks head or tail")
    edges = sorted(graph.edges.keys(), key=edge_key)

    adjacency: dict[str, list[str]] = {n: [] for n in nodes}
    for frm, to in edges:
        adjacency[frm].append(to)
    for succs in adjacency.values():
        succs.sort(key=node_key)

    reversed_edges = _classify_back_edges(nodes, adjacency)
    forward = [(frm, to) for frm, to in edges if (frm, to) not in reversed_edges]

    # Longest-path ranks over the acyclic forward edges (Kahn order, ties by
    # canonical node order for full determinism).
    preds: dict[str, list[str]] = {n: [] for n in nodes}
    out_deg = {n: 0 for n in nodes}
    in_deg = {n: 0 for n in nodes}
    for frm, to in forward:
        preds[to].append(frm)
        out_deg[frm] += 1
        in_deg[to] += 1

    ranks: dict[str, int] = {}
    ready = [(node_key(n), n) for n in nodes if in_deg[n] == 0]
    heapq.heapify(ready)
    while ready:
        _, node = heapq.heappop(ready)
        if node == HEAD:
            ranks[node] = 0
        elif preds[node]:
            ranks[node] = max(ranks[p] + 1 for p in preds[node])
        else:
            ranks[node] = 1
        for nxt in adjacency[node]:
            if (node, nxt) in reversed_edges:
                continue
            in_deg[nxt] -= 1
            if in_deg[nxt] == 0:
                heapq.heappush(ready, (node_key(nxt), nxt))

    # Tail closes the graph: pin it to the maximum rank (its lack of
    # outgoing edges makes the raise always safe).
    max_rank = max(ranks.values())
    ranks[TAIL] = max(ranks[TAIL], max_rank, 1)
    max_rank = ranks[TAIL] if ranks[TAIL] > max_rank else max_rank

    order: dict[int, list[str]] = {r: [] for r in range(max_rank + 1)}
    for node in sorted(nodes, key=node_key):
        order[ranks[node]].append(node)

    neighbors_in: dict[str, list[str]] = {n: [] for n in nodes}
    neighbors_out: dict[str, list[str]] = {n: [] for n in nodes}
    for frm, to in edges:
        neighbors_out[frm].append(to)
        neighbors_in[to].append(frm)

    slot = {n: i for r in order for i, n in enumerate(order[r])}

    def sweep(rank_range, neighbor_side, lower: bool) -> None:
        for r in rank_range:
            row = order[r]
            if len(row) < 2:
                continue
            def bary(node: str) -> float:
                related = [
                    slot[nb]
                    for nb in neighbor_side[node]
                    if (ranks[nb] < r if lower else ranks[nb] > r)
                ]
                if not related:
                    return float(slot[node])
                return sum(related) / len(related)
            row.sort(key=lambda n: (bary(n), node_key(n)))
            for i, n in enumerate(row):
                slot[n] = i

    for _ in range(BARYCENTER_SWEEPS):
        sweep(range(1, max_rank + 1), neighbors_in, lower=True)
        sweep(range(max_rank - 1, -1, -1), neighbors_out, lower=False)

    widest = max(len(row) for row in order.values())
    width = widest * col_width
    height = (max_rank + 1) * row_height

    placed: dict[str, LayoutNode] = {}
    for r in range(max_rank + 1):
        row = order[r]
        offset = (width - len(row) * col_width) / 2 + col_width / 2
        for i, node in enumerate(row):
            placed[node] = LayoutNode(rank=r, x=offset + i * col_width, y=row_height / 2 + r * row_height)

    return LayoutGraph(nodes=placed, reversed_edges=reversed_edges, edges=list(edges), width=width, height=height)


@dataclass(frozen=True, slots=True)
class StyledNode:
    id: str
    rank: int
    x: float
    y: float
    style: str  # STYLE_HEAD | STYLE_TAIL | STYLE_BLOCK


@dataclass(frozen=True, slots=True)
class StyledEdge:
    frm: str
    to: str
    weight: int
    style: str  # GRAY | RED
    intensity: float | None  # in (0, 1] for red edges
    reversed: bool
    detail: tuple  # extra (key, value) pairs surfaced to tooltips


@dataclass(slots=True)
class StyledGraph:
    function_index: int
    function_name: str
    threshold: int
    max_weight: int
    width: float
    height: float
    nodes: list[StyledNode] = field(default_factory=list)
    edges: list[StyledEdge] = field(default_factory=list)

    def red_edges(self) -> list[StyledEdge]:
        return [e for e in self.edges if e.style == RED]

    def to_json(self) -> dict:
        return {
            "function_index": self.function_index,
            "function_name": self.function_name,
            "threshold": self.threshold,
            "max_weight": self.max_weight,
            "canvas": {"width": self.width, "height": self.height},
            "nodes": [
                {"id": n.id, "rank": n.rank, "x": n.x, "y": n.y, "style": n.style}
                for n in self.nodes
            ],
            "edges": [
                dict(
                    {
                        "from": e.frm,
                        "to": e.to,
                        "weight": e.weight,
                        "style": e.style,
                        "intensity": e.intensity,
                        "reversed": e.reversed,
                    },
                    **dict(e.detail),
                )
                for e in self.edges
            ],
        }


def _edge_detail(graph, edge: tuple[str, str]) -> tuple:
    if isinstance(graph, LSG):
        return (("count", graph.edges[edge]),)
    if isinstance(graph, DiffLSG):
        de = graph.edges[edge]
        return (("golden_count", de.golden_count), ("faulty_count", de.faulty_count))
    vec = graph.edges[edge]
    return (("freq", vec.freq), ("mean_w", vec.mean_w), ("runs", len(vec.weights)))


def anomaly_map(graph, threshold: int, layout_graph: LayoutGraph) -> StyledGraph:
    """Classify edges gray/red against the threshold over a prepared layout."""
    if threshold < 0:
        raise ValueError(f"threshold must be non-negative, got {threshold}")
    if set(layout_graph.nodes) != set(graph.nodes) or set(layout_graph.edges) != set(graph.edges.keys()):
        raise LayoutMismatchError(
            f"layout was not produced from this graph (function {graph.function_index})"
        )

    max_weight = max((styling_weight(graph, e) for e in graph.edges), default=0)
    styled = StyledGraph(
        function_index=graph.function_index,
        function_name=graph.function_name,
        threshold=threshold,
        max_weight=max_weight,
        width=layout_graph.width,
        height=layout_graph.height,
    )
    for nid in sorted(graph.nodes, key=node_key):
        ln = layout_graph.nodes[nid]
        style = STYLE_HEAD if nid == HEAD else STYLE_TAIL if nid == TAIL else STYLE_BLOCK
        styled.nodes.append(StyledNode(id=nid, rank=ln.rank, x=ln.x, y=ln.y, style=style))
    for frm, to in sorted(graph.edges.keys(), key=edge_key):
        weight = styling_weight(graph, (frm, to))
        red = weight > threshold
        styled.edges.append(
            StyledEdge(
                frm=frm,
                to=to,
                weight=weight,
                style=RED if red else GRAY,
                intensity=(weight / max_weight) if red else None,
                reversed=(frm, to) in layout_graph.reversed_edges,
                detail=_edge_detail(graph, (frm, to)),
            )
        )
    return styled
