/**
 * Span segmentation for rendering highlights inside the original report text.
 *
 * Spans are character offsets into the exact text the server sent; the client
 * never re-tokenizes. Overlapping spans (for example one phrase shared by two
 * classes) are flattened into non-overlapping segments, each knowing every
 * highlight that covers it.
 */
import type { Highlight } from "./api.js";

export interface Segment {
  text: string;
  start: number;
  end: number;
  /** Highlights covering this segment; empty for plain text. */
  covering: Highlight[];
  /** True when a save conflict marked this segment for review. */
  conflicted: boolean;
}

export function segmentText(
  text: string,
  highlights: Highlight[],
  conflictSpans: [number, number][] = [],
): Segment[] {
  const clip = (value: number) => Math.max(0, Math.min(text.length, value));
  const bounds = new Set<number>([0, text.length]);
  for (const h of highlights) {
    bounds.add(clip(h.span[0]));
    bounds.add(clip(h.span[1]));
  }
  for (const [start, end] of conflictSpans) {
    bounds.add(clip(start));
    bounds.add(clip(end));
  }
  const points = [...bounds].sort((a, b) => a - b);
  const segments: Segment[] = [];
  for (let i = 0; i + 1 < points.length; i++) {
    const start = points[i]!;
    const end = points[i + 1]!;
    if (start === end) continue;
    const covering = highlights.filter(
      (h) => clip(h.span[0]) <= start && end <= clip(h.span[1]),
    );
    const conflicted = conflictSpans.some(
      ([s, e]) => clip(s) <= start && end <= clip(e),
    );
    segments.push({ text: text.slice(start, end), start, end, covering, conflicted });
  }
  return segments;
}

/** Tooltip text: "Lung opacity: negative, Pneumonia: negative". */
export function tooltipFor(covering: Highlight[], displayNames: Record<string, string>): string {
  return covering
    .map((h) => `${displayNames[h.class] ?? h.class}: ${h.classification}`)
    .join(", ");
}
