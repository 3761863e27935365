import { beforeEach, describe, expect, it, vi } from "vitest";

import { renderThresholdSlider } from "../src/threshold_slider.js";

describe("weight threshold slider", () => {
    let container: HTMLElement;

    beforeEach(() => {
        document.body.innerHTML = '<div id="t"></div>';
        container = document.getElementById("t")!;
    });

    it("spans [0, max weight of the current graph]", () => {
        renderThresholdSlider(container, 351, 0, () => {});
        const slider = container.querySelector("input")!;
        expect(slider.min).toBe("0");
        expect(slider.max).toBe("351");
    });

    it("clamps the displayed value to the range", () => {
        renderThresholdSlider(container, 10, 500, () => {});
        expect(container.querySelector("input")!.value).toBe("10");
    });

    it("reports changes with the numeric threshold", () => {
        const onChange = vi.fn();
        renderThresholdSlider(container, 351, 0, onChange);
        const slider = container.querySelector("input")!;
        slider.value = "350";
        slider.dispatchEvent(new Event("change"));
        expect(onChange).toHaveBeenCalledWith(350);
    });

    it("updates the readout while sliding", () => {
        renderThresholdSlider(container, 351, 17, () => {});
        const slider = container.querySelector("input")!;
        expect(container.querySelector(".threshold-value")!.textContent).toBe("17");
        slider.value = "42";
        slider.dispatchEvent(new Event("input"));
        expect(container.querySelector(".threshold-value")!.textContent).toBe("42");
    });
});
