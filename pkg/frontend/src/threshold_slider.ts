// Weight Threshold slider: range [0, max weight of the current graph].
// Moving it refetches the styled graph at the new threshold; the client
// itself never reclassifies edges.

export function renderThresholdSlider(
    container: HTMLElement,
    maxWeight: number,
    value: number,
    onChange: (threshold: number) => void,
): void {
    container.textContent = "";
    container.classList.add("threshold-slider");

    const label = document.createElement("label");
    label.textContent = "Weight Threshold";
    container.appendChild(label);

    const slider = document.createElement("input");
    slider.type = "range";
    slider.min = "0";
    slider.max = String(maxWeight);
    slider.step = "1";
    slider.value = String(Math.min(value, maxWeight));
    container.appendChild(slider);

    const readout = document.createElement("span");
    readout.className = "threshold-value";
    readout.textContent = slider.value;
    container.appendChild(readout);

    slider.addEventListener("input", () => {
        readout.textContent = slider.value;
    });
    slider.addEventListener("change", () => {
        onChange(Number(slider.value));
    });
}
