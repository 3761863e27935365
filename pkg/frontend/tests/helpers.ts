// Shared test plumbing: fixture payloads captured from the real service
// (tools/capture_api_fixtures.py) and a fetch mock that replays them while
// recording every requested URL.

import { readFileSync } from "node:fs";
import { fileURLToPath } from "node:url";
import path from "node:path";

const FIXTURE_DIR = path.dirname(fileURLToPath(import.meta.url)) + "/fixtures";

export function fixture<T = any>(name: string): T {
    return JSON.parse(readFileSync(path.join(FIXTURE_DIR, name), "utf-8")) as T;
}

export interface MockFetch {
    requests: string[];
    restore: () => void;
}

// Routes map a URL (path + query, as the ApiClient builds it) to a payload
// or to a function producing one; unknown URLs yield a 404 envelope like
// the real service.
export function installMockFetch(routes: Record<string, unknown | (() => unknown)>): MockFetch {
    const requests: string[] = [];
    const original = globalThis.fetch;

    globalThis.fetch = (async (input: unknown) => {
        const url = String(input);
        requests.push(url);
        const hit = routes[url];
        if (hit === undefined) {
            return {
                ok: false,
                status: 404,
                statusText: "Not Found",
                json: async () => ({ code: "not_found", message: `no route for ${url}` }),
            };
        }
        const payload = typeof hit === "function" ? (hit as () => unknown)() : hit;
        return { ok: true, status: 200, statusText: "OK", json: async () => payload };
    }) as typeof fetch;

    return {
        requests,
        restore: () => {
            globalThis.fetch = original;
        },
    };
}

export function appDom(): void {
    document.body.innerHTML = `
        <select id="run-select"></select>
        <span id="status-line"></span>
        <section id="function-view"></section>
        <div id="view-toggle"></div>
        <div id="threshold"></div>
        <section id="graph-view"></section>
        <aside id="function-list"></aside>
    `;
}

export const COMD_ROUTES: Record<string, unknown> = {
    "/api/runs": fixture("runs.json"),
    "/api/runs/fault_0001/functions": fixture("functions_fault_0001.json"),
    "/api/runs/golden/functions": fixture("functions_golden.json"),
    "/api/runs/fault_0001/functions/42/graph?threshold=0&view=diff": fixture("graph_42_t0_diff.json"),
    "/api/runs/fault_0001/functions/42/graph?threshold=350&view=diff": fixture("graph_42_t350_diff.json"),
    "/api/runs/fault_0001/functions/42/graph?threshold=0&view=global": fixture("graph_42_t0_global.json"),
    "/api/runs/fault_0001/functions/43/graph?threshold=0&view=diff": fixture("graph_43_t0_diff.json"),
    "/api/runs/fault_0001/functions/1/graph?threshold=0&view=diff": fixture("graph_1_t0_diff.json"),
    "/api/runs/fault_0001/functions/155/graph?threshold=0&view=diff": fixture("graph_155_t0_diff.json"),
};
