// View state shared by every panel, plus request sequencing so a slow
// response for an old selection can never clobber the current graph.

import type { StyledGraph, ViewMode } from "./api.js";

export interface ViewState {
    selectedRun: string | null;
    selectedFunction: number | null;
    threshold: number;
    viewMode: ViewMode;
}

export type Listener = () => void;

export class Store {
    state: ViewState = { selectedRun: null, selectedFunction: null, threshold: 0, viewMode: "diff" };
    graph: StyledGraph | null = null;

    private listeners: Listener[] = [];
    private requestSeq = 0;

    subscribe(listener: Listener): void {
        this.listeners.push(listener);
    }

    update(patch: Partial<ViewState>): void {
        this.state = { ...this.state, ...patch };
        this.notify();
    }

    // Returns a token; the matching acceptGraph call wins only while the
    // token is still the latest one issued.
    nextRequest(): number {
        return ++this.requestSeq;
    }

    acceptGraph(token: number, graph: StyledGraph | null): boolean {
        if (token !== this.requestSeq) {
            return false; // stale response, discard
        }
        this.graph = graph;
        this.notify();
        return true;
    }

    private notify(): void {
        for (const listener of this.listeners) {
            listener();
        }
    }
}
