// Panel wiring: one shared ViewState drives the Function View dot strip,
// the Function List, the Weight Threshold slider, and the Graph View.
// All analytical values (statuses, weights, layout, colors) come from the
// HTTP API; this module only routes selections and refetches.

import { ApiClient, type FunctionStatus, type RunSummary, type ViewMode } from "./api.js";
import { renderFunctionList } from "./function_list.js";
import { renderFunctionView } from "./function_view.js";
import { renderGraphView } from "./graph_view.js";
import { Store } from "./state.js";
import { renderThresholdSlider } from "./threshold_slider.js";

export interface AppElements {
    runSelect: HTMLSelectElement;
    viewToggle: HTMLElement;
    functionView: HTMLElement;
    functionList: HTMLElement;
    threshold: HTMLElement;
    graphView: HTMLElement;
    statusLine: HTMLElement;
}

export class App {
    readonly store = new Store();
    runs: RunSummary[] = [];
    statuses: FunctionStatus[] = [];

    constructor(private readonly elements: AppElements, private readonly api: ApiClient) {
        this.store.subscribe(() => this.render());
    }

    async start(): Promise<void> {
        this.runs = await this.api.runs();
        const firstFaulty = this.runs.find((r) => r.kind === "faulty") ?? this.runs[0];
        this.renderRunSelect();
        if (firstFaulty) {
            await this.selectRun(firstFaulty.run_id);
        }
    }

    async selectRun(runId: string): Promise<void> {
        const run = this.runs.find((r) => r.run_id === runId);
        this.statuses = await this.api.functionStatuses(runId);
        const initial =
            this.statuses.find((s) => s.is_injection_site)?.function_index ??
            this.statuses[0]?.function_index ??
            null;
        this.store.update({
            selectedRun: runId,
            selectedFunction: initial,
            viewMode: run?.kind === "golden" ? "global" : "diff",
        });
        await this.refetchGraph();
    }

    async selectFunction(index: number): Promise<void> {
        if (index === this.store.state.selectedFunction) {
            return;
        }
        this.store.update({ selectedFunction: index });
        await this.refetchGraph();
    }

    async setThreshold(threshold: number): Promise<void> {
        this.store.update({ threshold });
        await this.refetchGraph();
    }

    async setViewMode(mode: ViewMode): Promise<void> {
        if (mode === this.store.state.viewMode) {
            return;
        }
        this.store.update({ viewMode: mode });
        await this.refetchGraph();
    }

    async refetchGraph(): Promise<void> {
        const { selectedRun, selectedFunction, threshold, viewMode } = this.store.state;
        if (selectedRun === null || selectedFunction === null) {
            return;
        }
        const token = this.store.nextRequest();
        try {
            const graph = await this.api.graph(selectedRun, selectedFunction, threshold, viewMode);
            if (this.store.acceptGraph(token, graph) && threshold > graph.max_weight) {
                // keep the slider invariant: threshold within [0, max weight]
                this.store.update({ threshold: graph.max_weight });
            }
        } catch (err) {
            if (this.store.acceptGraph(token, null)) {
                this.elements.statusLine.textContent = `request failed: ${String(err)}`;
            }
        }
    }

    private renderRunSelect(): void {
        const select = this.elements.runSelect;
        select.textContent = "";
        for (const run of this.runs) {
            const option = document.createElement("option");
            option.value = run.run_id;
            option.textContent = `${run.run_id} (${run.kind})`;
            select.appendChild(option);
        }
        select.addEventListener("change", () => void this.selectRun(select.value));
    }

    private renderViewToggle(): void {
        const container = this.elements.viewToggle;
        container.textContent = "";
        container.classList.add("view-toggle");
        const run = this.runs.find((r) => r.run_id === this.store.state.selectedRun);
        for (const mode of ["global", "diff"] as ViewMode[]) {
            const button = document.createElement("button");
            button.type = "button";
            button.dataset.mode = mode;
            button.textContent = mode === "global" ? "Global view" : "Diff view";
            button.className = this.store.state.viewMode === mode ? "active" : "";
            button.disabled = mode === "diff" && run?.kind === "golden";
            button.addEventListener("click", () => void this.setViewMode(mode));
            container.appendChild(button);
        }
    }

    render(): void {
        const { selectedFunction, threshold } = this.store.state;
        const onSelect = (index: number) => void this.selectFunction(index);
        renderFunctionView(this.elements.functionView, this.statuses, selectedFunction, onSelect);
        renderFunctionList(this.elements.functionList, this.statuses, selectedFunction, onSelect);
        this.renderViewToggle();
        renderThresholdSlider(
            this.elements.threshold,
            this.store.graph?.max_weight ?? 0,
            threshold,
            (value) => void this.setThreshold(value),
        );
        renderGraphView(this.elements.graphView, this.store.graph);
        if (this.store.graph) {
            const red = this.store.graph.edges.filter((e) => e.style === "red").length;
            this.elements.statusLine.textContent =
                `${this.store.graph.function_name} — ${this.store.graph.view} view, ` +
                `threshold ${this.store.graph.threshold}, ${red} red edge${red === 1 ? "" : "s"}`;
        }
    }
}

export function gatherElements(doc: Document): AppElements {
    const pick = <T extends HTMLElement>(id: string): T => {
        const el = doc.getElementById(id);
        if (!el) {
            throw new Error(`missing #${id}`);
        }
        return el as T;
    };
    return {
        runSelect: pick<HTMLSelectElement>("run-select"),
        viewToggle: pick("view-toggle"),
        functionView: pick("function-view"),
        functionList: pick("function-list"),
        threshold: pick("threshold"),
        graphView: pick("graph-view"),
        statusLine: pick("status-line"),
    };
}

export async function mountApp(api: ApiClient = new ApiClient()): Promise<App> {
    const app = new App(gatherElements(document), api);
    await app.start();
    return app;
}

declare global {
    interface Window {
        faultflowApp?: Promise<App>;
    }
}

if (typeof document !== "undefined" && document.getElementById("graph-view") && !("vitest" in globalThis)) {
    window.faultflowApp = mountApp();
}
