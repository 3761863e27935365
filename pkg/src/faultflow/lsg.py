"""Loop Sensitive Graph construction from run traces.

One LSG per function per run: basic-block nodes plus synthetic head
and tail, edges weighted by dynamic transition counts so loop
iterations multiply edge weight.  Blocks executed by callees are
attributed to the callee's own frame, never interleaved into the
caller's sequence.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from faultflow.trace import BLOCK, CALL, RunTrace, format_addr, parse_addr

HEAD = "head"
TAIL = "tail"


class UnknownFunctionError(Exception):
    def __init__(self, index: int):
        super().__init__(f"run declares no function with index {index}")
        self.index = index


def node_key(node_id: str) -> tuple[int, int]:
    """Canonical sort order: head, blocks ascending by address, tail."""
    if node_id == HEAD:
        return (0, 0)
    if node_id == TAIL:
        return (2, 0)
    return (1, parse_addr(node_id))


def edge_key(edge: tuple[str, str]) -> tuple[tuple[int, int], tuple[int, int]]:
    return (node_key(edge[0]), node_key(edge[1]))


@dataclass(slots=True)
class LSG:
    function_index: int
    function_name: str
    invocations: int
    nodes: set[str] = field(default_factory=lambda: {HEAD, TAIL})
    edges: dict[tuple[str, str], int] = field(default_factory=dict)

    def max_count(self) -> int:
        return max(self.edges.values(), default=0)

    def to_json(self) -> dict:
        return {
            "function_index": self.function_index,
            "function_name": self.function_name,
            "invocations": self.invocations,
            "nodes": sorted(self.nodes, key=node_key),
            "edges": [
                {"from": frm, "to": to, "count": self.edges[(frm, to)]}
                for frm, to in sorted(self.edges, key=edge_key)
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "LSG":
        lsg = cls(
            function_index=int(data["function_index"]),
            function_name=data["function_name"],
            invocations=int(data["invocations"]),
            nodes=set(data["nodes"]),
            edges={(e["from"], e["to"]): int(e["count"]) for e in data["edges"]},
        )
        validate_lsg(lsg)
        return lsg


def validate_lsg(lsg: LSG) -> None:
    """Structural invariants checked when an LSG is built or reloaded."""
    if HEAD not in lsg.nodes or TAIL not in lsg.nodes:
        raise ValueError("LSG must contain exactly one head and one tail node")
    incoming: dict[str, int] = {}
    outgoing: dict[str, int] = {}
    for (frm, to), count in lsg.edges.items():
        if count < 1:
            raise ValueError(f"edge {frm}->{to} has non-positive count {count}")
        if to == HEAD:
            raise ValueError("edge into head")
        if frm == TAIL:
            raise ValueError("edge out of tail")
        if frm not in lsg.nodes or to not in lsg.nodes:
            raise ValueError(f"edge {frm}->{to} references a node outside the node set")
        outgoing[frm] = outgoing.get(frm, 0) + count
        incoming[to] = incoming.get(to, 0) + count
    for node in lsg.nodes:
        if node in (HEAD, TAIL):
            continue
        if incoming.get(node, 0) != outgoing.get(node, 0):
            raise ValueError(
                f"flow conservation violated at {node}: in={incoming.get(node, 0)} out={outgoing.get(node, 0)}"
            )
    if outgoing.get(HEAD, 0) != lsg.invocations or incoming.get(TAIL, 0) != lsg.invocations:
        raise ValueError(
            f"head/tail totals disagree with invocation count {lsg.invocations}: "
            f"head out={outgoing.get(HEAD, 0)} tail in={incoming.get(TAIL, 0)}"
        )


def _bump(edges: dict[tuple[str, str], int], frm: str, to: str) -> None:
    key = (frm, to)
    edges[key] = edges.get(key, 0) + 1


def build_lsg(run: RunTrace, function_index: int) -> LSG:
    """Build the LSG of one function by stack replay over the run's events."""
    if function_index < 0 or function_index >= len(run.symbols):
        raise UnknownFunctionError(function_index)

    lsg = LSG(
        function_index=function_index,
        function_name=run.symbols[function_index].name,
        invocations=0,
    )
    # Stack frames: previous block id for target-function frames, None marks
    # a frame of some other function.
    stack: list[list] = []
    for ev in run.events:
        if ev.kind == CALL:
            if ev.function_index == function_index:
                lsg.invocations += 1
                stack.append([True, None])
            else:
                stack.append([False, None])
        elif ev.kind == BLOCK:
            frame = stack[-1]
            if frame[0]:
                block = format_addr(ev.block)
                lsg.nodes.add(block)
                _bump(lsg.edges, HEAD if frame[1] is None else frame[1], block)
                frame[1] = block
        else:  # RETURN
            frame = stack.pop()
            if frame[0]:
                _bump(lsg.edges, HEAD if frame[1] is None else frame[1], TAIL)
    validate_lsg(lsg)
    return lsg


def build_all_lsgs(run: RunTrace) -> dict[int, LSG]:
    """One LSG per declared function; never-invoked functions yield empty graphs."""
    lsgs = {
        rec.index: LSG(function_index=rec.index, function_name=rec.name, invocations=0)
        for rec in run.symbols
    }
    # Frames carry (function_index, previous block id).
    stack: list[list] = []
    for ev in run.events:
        if ev.kind == CALL:
            lsgs[ev.function_index].invocations += 1
            stack.append([ev.function_index, None])
        elif ev.kind == BLOCK:
            frame = stack[-1]
            lsg = lsgs[frame[0]]
            block = format_addr(ev.block)
            lsg.nodes.add(block)
            _bump(lsg.edges, HEAD if frame[1] is None else frame[1], block)
            frame[1] = block
        else:  # RETURN
            frame = stack.pop()
            lsg = lsgs[frame[0]]
            _bump(lsg.edges, HEAD if frame[1] is None else frame[1], TAIL)
    for lsg in lsgs.values():
        validate_lsg(lsg)
    return lsgs
