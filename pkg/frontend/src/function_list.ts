// Function List: the same functions in the same order as the dot strip,
// with names, status colors, and the injection marker; selection is kept
// in sync with the Function View.

import type { FunctionStatus } from "./api.js";

export function renderFunctionList(
    container: HTMLElement,
    statuses: FunctionStatus[],
    selected: number | null,
    onSelect: (index: number) => void,
): void {
    container.textContent = "";
    container.classList.add("function-list");
    for (const status of statuses) {
        const row = document.createElement("div");
        row.className = `fn-row ${status.status}` + (status.function_index === selected ? " selected" : "");
        row.dataset.index = String(status.function_index);

        const name = document.createElement("span");
        name.className = "fn-name";
        name.textContent = status.name;
        row.appendChild(name);

        if (status.is_injection_site) {
            const marker = document.createElement("span");
            marker.className = "fn-injection";
            marker.textContent = "▼ injected";
            row.appendChild(marker);
        }

        row.addEventListener("click", () => onSelect(status.function_index));
        container.appendChild(row);
    }
}
