// Graph View: node-link rendering of a styled graph at the coordinates and
// colors the server produced. No client-side layout, weighting, or color
// classification happens here; every visual attribute is read off the
// payload.

import type { StyledEdge, StyledGraph, StyledNode } from "./api.js";

const SVG_NS = "http://www.w3.org/2000/svg";
const NODE_W = 96;
const NODE_H = 34;

function edgeTooltip(edge: StyledEdge): string {
    const parts = [`weight ${edge.weight}`];
    if (edge.golden_count !== undefined && edge.faulty_count !== undefined) {
        parts.push(`golden ${edge.golden_count}`, `faulty ${edge.faulty_count}`);
    }
    if (edge.count !== undefined) {
        parts.push(`count ${edge.count}`);
    }
    if (edge.freq !== undefined) {
        parts.push(`freq ${edge.freq}`);
    }
    return parts.join(", ");
}

function nodeTooltip(node: StyledNode): string {
    if (node.source) {
        return `${node.id} — ${node.source.file}:${node.source.line_start}-${node.source.line_end}`;
    }
    return node.id;
}

export function renderGraphView(container: HTMLElement, graph: StyledGraph | null): void {
    container.textContent = "";
    container.classList.add("graph-view");
    if (graph === null) {
        const empty = document.createElement("div");
        empty.className = "no-data";
        empty.textContent = "no graph selected";
        container.appendChild(empty);
        return;
    }
    if (graph.edges.length === 0) {
        const empty = document.createElement("div");
        empty.className = "no-data";
        empty.textContent = `${graph.function_name}: no recorded executions`;
        container.appendChild(empty);
        return;
    }

    const svg = document.createElementNS(SVG_NS, "svg");
    svg.setAttribute("viewBox", `0 0 ${graph.canvas.width} ${graph.canvas.height}`);
    svg.setAttribute("width", String(graph.canvas.width));
    svg.setAttribute("height", String(graph.canvas.height));

    const position = new Map(graph.nodes.map((n) => [n.id, n]));

    for (const edge of graph.edges) {
        const from = position.get(edge.from)!;
        const to = position.get(edge.to)!;
        const group = document.createElementNS(SVG_NS, "g");
        group.setAttribute("class", `edge ${edge.style}` + (edge.reversed ? " reversed" : ""));
        group.dataset.from = edge.from;
        group.dataset.to = edge.to;
        group.dataset.weight = String(edge.weight);

        const line = document.createElementNS(SVG_NS, "line");
        line.setAttribute("x1", String(from.x));
        line.setAttribute("y1", String(from.y));
        line.setAttribute("x2", String(to.x));
        line.setAttribute("y2", String(to.y));
        if (edge.intensity !== null) {
            line.setAttribute("stroke-opacity", String(edge.intensity));
        }
        const title = document.createElementNS(SVG_NS, "title");
        title.textContent = edgeTooltip(edge);
        line.appendChild(title);
        group.appendChild(line);

        const label = document.createElementNS(SVG_NS, "text");
        label.setAttribute("x", String((from.x + to.x) / 2));
        label.setAttribute("y", String((from.y + to.y) / 2));
        label.setAttribute("class", "edge-label");
        label.textContent = String(edge.weight);
        group.appendChild(label);

        svg.appendChild(group);
    }

    for (const node of graph.nodes) {
        const group = document.createElementNS(SVG_NS, "g");
        group.setAttribute("class", `node ${node.style}`);
        group.dataset.id = node.id;

        const rect = document.createElementNS(SVG_NS, "rect");
        rect.setAttribute("x", String(node.x - NODE_W / 2));
        rect.setAttribute("y", String(node.y - NODE_H / 2));
        rect.setAttribute("width", String(NODE_W));
        rect.setAttribute("height", String(NODE_H));
        rect.setAttribute("rx", "6");
        const title = document.createElementNS(SVG_NS, "title");
        title.textContent = nodeTooltip(node);
        rect.appendChild(title);
        group.appendChild(rect);

        const label = document.createElementNS(SVG_NS, "text");
        label.setAttribute("x", String(node.x));
        label.setAttribute("y", String(node.y + 4));
        label.setAttribute("class", "node-label");
        label.textContent = node.id;
        group.appendChild(label);

        svg.appendChild(group);
    }

    container.appendChild(svg);
}
