"""Deterministic SVG and Graphviz-dot renderings of styled graphs."""

from __future__ import annotations

from faultflow.layout import GRAY, RED, STYLE_HEAD, STYLE_TAIL, StyledGraph

NODE_W = 96.0
NODE_H = 34.0

_NODE_FILL = {STYLE_HEAD: "#f1c40f", STYLE_TAIL: "#e74c3c"}
_EDGE_COLOR = {GRAY: "#b8c0c8", RED: "#c0392b"}


def _f(value: float) -> str:
    return f"{value:.1f}"


def render_svg(styled: StyledGraph) -> str:
    """Nodes as rounded labeled rectangles, edges as straight weighted segments."""
    pos = {n.id: (n.x, n.y) for n in styled.nodes}
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_f(styled.width)}" height="{_f(styled.height)}" '
        f'viewBox="0 0 {_f(styled.width)} {_f(styled.height)}">',
        f'  <g class="edges">',
    ]
    for e in styled.edges:
        x1, y1 = pos[e.frm]
        x2, y2 = pos[e.to]
        color = _EDGE_COLOR[e.style]
        opacity = 1.0 if e.style == GRAY else 0.35 + 0.65 * (e.intensity or 0.0)
        dash = ' stroke-dasharray="6 3"' if e.reversed else ""
        mx, my = (x1 + x2) / 2, (y1 + y2) / 2
        lines.append(
            f'    <g class="edge {e.style}">'
            f'<line x1="{_f(x1)}" y1="{_f(y1)}" x2="{_f(x2)}" y2="{_f(y2)}" '
            f'stroke="{color}" stroke-width="2" stroke-opacity="{opacity:.3f}"{dash}/>'
            f'<text x="{_f(mx)}" y="{_f(my)}" font-size="11" fill="{color}">{e.weight}</text>'
            f"</g>"
        )
    lines.append("  </g>")
    lines.append('  <g class="nodes">')
    for n in styled.nodes:
        fill = _NODE_FILL.get(n.style, "#eef2f5")
        kind = "head" if n.style == STYLE_HEAD else "tail" if n.style == STYLE_TAIL else "block"
        lines.append(
            f'    <g class="node {kind}">'
            f'<rect x="{_f(n.x - NODE_W / 2)}" y="{_f(n.y - NODE_H / 2)}" '
            f'width="{_f(NODE_W)}" height="{_f(NODE_H)}" rx="6" fill="{fill}" stroke="#49545e"/>'
            f'<text x="{_f(n.x)}" y="{_f(n.y + 4)}" font-size="12" text-anchor="middle" '
            f'font-family="monospace">{n.id}</text>'
            f"</g>"
        )
    lines.append("  </g>")
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def render_dot(styled: StyledGraph, graph_name: str | None = None) -> str:
    """Graphviz digraph; blocks are boxes, head/tail are filled ovals."""
    name = graph_name or styled.function_name
    lines = [f'digraph "{name}" {{', "  rankdir=TB;"]
    for n in styled.nodes:
        if n.style == STYLE_HEAD:
            attrs = 'shape=oval style=filled fillcolor="#f1c40f"'
        elif n.style == STYLE_TAIL:
            attrs = 'shape=oval style=filled fillcolor="#e74c3c"'
        else:
            attrs = "shape=box"
        lines.append(f'  "{n.id}" [{attrs}];')
    for e in styled.edges:
        color = _EDGE_COLOR[e.style]
        lines.append(f'  "{e.frm}" -> "{e.to}" [label="{e.weight}" color="{color}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
