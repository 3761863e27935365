import { beforeEach, describe, expect, it, vi } from "vitest";

import type { FunctionStatus } from "../src/api.js";
import { renderFunctionList } from "../src/function_list.js";
import { renderFunctionView } from "../src/function_view.js";
import { fixture } from "./helpers.js";

const statuses = fixture<FunctionStatus[]>("functions_fault_0001.json");

describe("function list", () => {
    let container: HTMLElement;

    beforeEach(() => {
        document.body.innerHTML = '<div id="fl"></div><div id="fv"></div>';
        container = document.getElementById("fl")!;
    });

    it("renders one named row per function, in definition order", () => {
        renderFunctionList(container, statuses, null, () => {});
        const rows = [...container.querySelectorAll<HTMLElement>(".fn-row")];
        expect(rows.length).toBe(157);
        expect(rows.map((r) => r.querySelector(".fn-name")!.textContent)).toEqual(statuses.map((s) => s.name));
    });

    it("marks the injection-site row", () => {
        renderFunctionList(container, statuses, null, () => {});
        const marked = container.querySelectorAll(".fn-injection");
        expect(marked.length).toBe(1);
        expect(marked[0].closest(".fn-row")!.querySelector(".fn-name")!.textContent).toBe("setVcm_omp_fn.o");
    });

    it("clicking row k selects function k", () => {
        const onSelect = vi.fn();
        renderFunctionList(container, statuses, null, onSelect);
        container.querySelector<HTMLElement>('.fn-row[data-index="7"]')!.click();
        expect(onSelect).toHaveBeenCalledWith(7);
    });

    it("list and dot-strip orders are identical", () => {
        const dots = document.getElementById("fv")!;
        renderFunctionList(container, statuses, null, () => {});
        renderFunctionView(dots, statuses, null, () => {});
        const rowOrder = [...container.querySelectorAll<HTMLElement>(".fn-row")].map((r) => r.dataset.index);
        const dotOrder = [...dots.querySelectorAll<HTMLElement>(".dot")].map((d) => d.dataset.index);
        expect(rowOrder).toEqual(dotOrder);
    });

    it("status colors mirror the served statuses", () => {
        renderFunctionList(container, statuses, null, () => {});
        const rows = [...container.querySelectorAll<HTMLElement>(".fn-row")];
        rows.forEach((row, i) => {
            expect(row.classList.contains(statuses[i].status)).toBe(true);
        });
    });
});
