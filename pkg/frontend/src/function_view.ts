// Function View: one dot per function in definition order, green when the
// function matches the golden run, red when it differs, with a triangle
// marker over the injection site. Wraps onto multiple rows for large
// programs.

import type { FunctionStatus } from "./api.js";

export function renderFunctionView(
    container: HTMLElement,
    statuses: FunctionStatus[],
    selected: number | null,
    onSelect: (index: number) => void,
): void {
    container.textContent = "";
    container.classList.add("function-view");
    for (const status of statuses) {
        const slot = document.createElement("span");
        slot.className = "dot-slot";

        const marker = document.createElement("span");
        marker.className = "marker" + (status.is_injection_site ? " triangle" : "");
        marker.textContent = status.is_injection_site ? "▼" : "";
        slot.appendChild(marker);

        const dot = document.createElement("button");
        dot.type = "button";
        dot.className = `dot ${status.status}` + (status.function_index === selected ? " selected" : "");
        dot.dataset.index = String(status.function_index);
        dot.title = `${status.name} (${status.status})`;
        dot.addEventListener("click", () => onSelect(status.function_index));
        slot.appendChild(dot);

        container.appendChild(slot);
    }
}
