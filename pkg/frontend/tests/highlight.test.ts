import { describe, expect, it } from "vitest";

import type { Highlight } from "../src/api.js";
import { segmentText, tooltipFor } from "../src/highlight.js";

const h = (cls: string, start: number, end: number): Highlight => ({
  class: cls,
  classification: "negative",
  span: [start, end],
  phrase: "x",
});

describe("segmentText", () => {
  it("splits around a single span and reassembles the exact text", () => {
    const text = "Keine Pleuraergüsse nachweisbar";
    const segments = segmentText(text, [h("pleural_effusion", 6, 19)]);
    expect(segments.map((s) => s.text).join("")).toBe(text);
    const marked = segments.filter((s) => s.covering.length > 0);
    expect(marked).toHaveLength(1);
    expect(marked[0]!.text).toBe("Pleuraergüsse");
  });

  it("merges identical spans from two classes into one segment", () => {
    const text = "Keine Infiltrate";
    const segments = segmentText(text, [
      h("lung_opacity", 6, 16),
      h("pneumonia", 6, 16),
    ]);
    const marked = segments.filter((s) => s.covering.length > 0);
    expect(marked).toHaveLength(1);
    expect(marked[0]!.covering.map((c) => c.class).sort()).toEqual([
      "lung_opacity",
      "pneumonia",
    ]);
  });

  it("flattens partially overlapping spans without losing text", () => {
    const text = "abcdefgh";
    const segments = segmentText(text, [h("a", 0, 4), h("b", 2, 6)]);
    expect(segments.map((s) => s.text).join("")).toBe(text);
    const onlyA = segments.find((s) => s.start === 0)!;
    const both = segments.find((s) => s.start === 2)!;
    const onlyB = segments.find((s) => s.start === 4)!;
    expect(onlyA.covering.map((c) => c.class)).toEqual(["a"]);
    expect(both.covering.map((c) => c.class).sort()).toEqual(["a", "b"]);
    expect(onlyB.covering.map((c) => c.class)).toEqual(["b"]);
  });

  it("marks conflict spans even without a highlight", () => {
    const text = "Keine Stauung";
    const segments = segmentText(text, [], [[6, 13]]);
    const conflicted = segments.filter((s) => s.conflicted);
    expect(conflicted).toHaveLength(1);
    expect(conflicted[0]!.text).toBe("Stauung");
  });

  it("clips out-of-range spans instead of crashing", () => {
    const text = "kurz";
    const segments = segmentText(text, [h("a", 2, 99)]);
    expect(segments.map((s) => s.text).join("")).toBe(text);
  });
});

describe("tooltipFor", () => {
  it("lists display name and classification per covering highlight", () => {
    const tip = tooltipFor(
      [h("lung_opacity", 0, 1), h("pneumonia", 0, 1)],
      { lung_opacity: "Lung opacity", pneumonia: "Pneumonia" },
    );
    expect(tip).toBe("Lung opacity: negative, Pneumonia: negative");
  });
});
