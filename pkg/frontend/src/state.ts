/**
 * Label grid state: one 4-way selection per observation class.
 *
 * Exactly one option is selected per class at all times; "none" is the
 * default, so a submission is always total. Pure data, no DOM.
 */
import type { LabelValue, StoredAnnotation } from "./api.js";

export const CLASSES: readonly string[] = [
  "atelectasis",
  "cardiomegaly",
  "consolidation",
  "edema",
  "enlarged_cardiomediastinum",
  "fracture",
  "lung_lesion",
  "lung_opacity",
  "no_finding",
  "pleural_effusion",
  "pleural_other",
  "pneumonia",
  "pneumothorax",
  "support_devices",
];

export const DISPLAY_NAMES: Record<string, string> = {
  atelectasis: "Atelectasis",
  cardiomegaly: "Cardiomegaly",
  consolidation: "Consolidation",
  edema: "Edema",
  enlarged_cardiomediastinum: "Enlarged cardiomediastinum",
  fracture: "Fracture",
  lung_lesion: "Lung lesion",
  lung_opacity: "Lung opacity",
  no_finding: "No finding",
  pleural_effusion: "Pleural effusion",
  pleural_other: "Pleural other",
  pneumonia: "Pneumonia",
  pneumothorax: "Pneumothorax",
  support_devices: "Support devices",
};

export const OPTIONS: readonly LabelValue[] = [
  "positive",
  "negative",
  "uncertain",
  "none",
];

export class LabelGridState {
  private labels = new Map<string, LabelValue>();
  marked = false;
  comment = "";
  dirty = false;
  /** Revision of the stored annotation this grid was loaded from (0 = fresh). */
  baseRevision = 0;

  constructor() {
    this.reset();
  }

  reset(): void {
    for (const cls of CLASSES) this.labels.set(cls, "none");
    this.marked = false;
    this.comment = "";
    this.dirty = false;
    this.baseRevision = 0;
  }

  /** Restore a stored annotation (PREVIOUS navigation), keeping its revision. */
  restore(annotation: StoredAnnotation): void {
    this.reset();
    for (const cls of CLASSES) {
      this.labels.set(cls, annotation.labels[cls] ?? "none");
    }
    this.marked = annotation.marked;
    this.comment = annotation.comment ?? "";
    this.baseRevision = annotation.revision;
    this.dirty = false;
  }

  get(cls: string): LabelValue {
    return this.labels.get(cls) ?? "none";
  }

  set(cls: string, value: LabelValue): void {
    if (!CLASSES.includes(cls)) throw new Error(`unknown class ${cls}`);
    this.labels.set(cls, value);
    this.dirty = true;
  }

  /** The complete 14-class selection; total by construction. */
  toLabels(): Record<string, LabelValue> {
    const out: Record<string, LabelValue> = {};
    for (const cls of CLASSES) out[cls] = this.get(cls);
    return out;
  }

  /** Revision the next save must carry. */
  nextRevision(): number {
    return this.baseRevision + 1;
  }
}
