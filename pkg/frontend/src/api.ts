// Typed client for the analysis service. The UI renders these payloads
// verbatim: weights, statuses, coordinates, and colors are never computed
// on the client side.

export interface Injection {
    function_index: number;
    dynamic_event_index: number;
    bit: number;
}

export interface RunSummary {
    run_id: string;
    kind: "golden" | "faulty";
    injection: Injection | null;
}

export interface FunctionStatus {
    function_index: number;
    name: string;
    status: "match" | "differ";
    is_injection_site: boolean;
}

export interface SourceRef {
    file: string;
    line_start: number;
    line_end: number;
}

export interface StyledNode {
    id: string;
    rank: number;
    x: number;
    y: number;
    style: "head_yellow" | "tail_red" | "block_default";
    source: SourceRef | null;
}

export interface StyledEdge {
    from: string;
    to: string;
    weight: number;
    style: "gray" | "red";
    intensity: number | null;
    reversed: boolean;
    golden_count?: number;
    faulty_count?: number;
    count?: number;
    freq?: number;
    mean_w?: number;
    runs?: number;
}

export interface StyledGraph {
    function_index: number;
    function_name: string;
    run_id: string | null;
    view: "diff" | "global" | "cvg";
    threshold: number;
    max_weight: number;
    canvas: { width: number; height: number };
    nodes: StyledNode[];
    edges: StyledEdge[];
}

export type ViewMode = "diff" | "global";

export class ApiError extends Error {
    constructor(readonly status: number, readonly code: string, message: string) {
        super(message);
    }
}

async function getJson<T>(url: string): Promise<T> {
    const resp = await fetch(url);
    if (!resp.ok) {
        let code = "http_error";
        let message = resp.statusText;
        try {
            const body = await resp.json();
            code = body.code ?? code;
            message = body.message ?? message;
        } catch {
            // non-JSON error body; keep the status text
        }
        throw new ApiError(resp.status, code, message);
    }
    return (await resp.json()) as T;
}

export class ApiClient {
    constructor(readonly base: string = "") {}

    runs(): Promise<RunSummary[]> {
        return getJson(`${this.base}/api/runs`);
    }

    functionStatuses(runId: string): Promise<FunctionStatus[]> {
        return getJson(`${this.base}/api/runs/${encodeURIComponent(runId)}/functions`);
    }

    graph(runId: string, index: number, threshold: number, view: ViewMode): Promise<StyledGraph> {
        const id = encodeURIComponent(runId);
        return getJson(`${this.base}/api/runs/${id}/functions/${index}/graph?threshold=${threshold}&view=${view}`);
    }
}
