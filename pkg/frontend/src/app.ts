/**
 * The annotation single-page app: report pane with highlights on the left,
 * the 14-class label grid on the right, two-phase save with conflict review.
 *
 * All labeling logic lives on the server; this component only renders server
 * state and replays user input against the documented JSON API.
 */
import {
  ApiClient,
  type Highlight,
  type LabelValue,
  type ReportPayload,
  type SaveConflict,
} from "./api.js";
import { segmentText, tooltipFor } from "./highlight.js";
import { CLASSES, DISPLAY_NAMES, OPTIONS, LabelGridState } from "./state.js";

export class AnnotationApp {
  readonly grid = new LabelGridState();
  private report: ReportPayload | null = null;
  private pendingConflicts: SaveConflict[] | null = null;

  private readonly progressEl: HTMLElement;
  private readonly viewPositionEl: HTMLElement;
  private readonly reportTextEl: HTMLElement;
  private readonly bannerEl: HTMLElement;
  private readonly gridBody: HTMLTableSectionElement;
  private readonly markedInput: HTMLInputElement;
  private readonly commentInput: HTMLTextAreaElement;
  private readonly saveButton: HTMLButtonElement;
  private readonly previousButton: HTMLButtonElement;
  private readonly dialogEl: HTMLElement;

  constructor(
    private readonly root: HTMLElement,
    private readonly api: ApiClient,
  ) {
    root.innerHTML = `
      <header>
        <h1>Thorax Befund Annotation</h1>
        <span class="progress">Fortschritt: -/-</span>
      </header>
      <div class="banner" hidden></div>
      <main>
        <section class="report-pane">
          <h2 class="view-position"></h2>
          <div class="report-text" lang="de"></div>
        </section>
        <section class="grid-pane">
          <table class="label-grid">
            <thead>
              <tr>
                <th>Label</th><th>Positive</th><th>Negative</th>
                <th>Uncertain</th><th>None</th><th></th>
              </tr>
            </thead>
            <tbody></tbody>
          </table>
          <label class="mark-row">
            <input type="checkbox" class="marked" /> Mark for inspection
          </label>
          <textarea class="comment" placeholder="Kommentar"></textarea>
          <div class="actions">
            <button class="previous">PREVIOUS</button>
            <button class="save">SAVE</button>
          </div>
        </section>
      </main>
      <div class="dialog" hidden></div>
    `;
    this.progressEl = root.querySelector(".progress")!;
    this.viewPositionEl = root.querySelector(".view-position")!;
    this.reportTextEl = root.querySelector(".report-text")!;
    this.bannerEl = root.querySelector(".banner")!;
    this.gridBody = root.querySelector("tbody")!;
    this.markedInput = root.querySelector(".marked")!;
    this.commentInput = root.querySelector(".comment")!;
    this.saveButton = root.querySelector(".save")!;
    this.previousButton = root.querySelector(".previous")!;
    this.dialogEl = root.querySelector(".dialog")!;

    this.buildGrid();
    this.saveButton.addEventListener("click", () => void this.submitSave());
    this.previousButton.addEventListener("click", () => void this.loadPrevious());
    this.markedInput.addEventListener("change", () => {
      this.grid.marked = this.markedInput.checked;
      this.grid.dirty = true;
    });
    this.commentInput.addEventListener("input", () => {
      this.grid.comment = this.commentInput.value;
      this.grid.dirty = true;
    });
  }

  /** Load progress and the next unannotated report. */
  async start(): Promise<void> {
    await this.refreshProgress();
    const report = await this.api.nextReport();
    if (report === null) {
      this.renderDone();
      return;
    }
    this.showReport(report);
  }

  // -- rendering -------------------------------------------------------------

  private buildGrid(): void {
    for (const cls of CLASSES) {
      const row = document.createElement("tr");
      row.dataset["class"] = cls;
      row.tabIndex = 0;
      const name = document.createElement("th");
      name.textContent = DISPLAY_NAMES[cls] ?? cls;
      row.appendChild(name);
      for (const option of OPTIONS) {
        const cell = document.createElement("td");
        const radio = document.createElement("input");
        radio.type = "radio";
        radio.name = `label-${cls}`;
        radio.value = option;
        radio.checked = option === "none";
        radio.addEventListener("change", () => this.onSelect(cls, option));
        cell.appendChild(radio);
        row.appendChild(cell);
      }
      const addCell = document.createElement("td");
      const addButton = document.createElement("button");
      addButton.textContent = "ADD NEW";
      addButton.className = "add-new";
      addButton.addEventListener("click", () => this.openPhraseDialog(cls));
      addCell.appendChild(addButton);
      row.appendChild(addCell);
      // keyboard shortcuts 1-4 select the options of the focused row
      row.addEventListener("keydown", (event) => {
        const index = Number.parseInt(event.key, 10) - 1;
        const option = OPTIONS[index];
        if (option !== undefined) {
          this.onSelect(cls, option);
          this.syncGridInputs();
        }
      });
      this.gridBody.appendChild(row);
    }
  }

  private onSelect(cls: string, option: LabelValue): void {
    this.grid.set(cls, option);
    // editing after a conflict review restarts the two-phase save
    this.pendingConflicts = null;
    this.hideBanner();
    this.renderReportText();
  }

  private syncGridInputs(): void {
    for (const cls of CLASSES) {
      const selected = this.grid.get(cls);
      const inputs = this.gridBody.querySelectorAll<HTMLInputElement>(
        `input[name="label-${cls}"]`,
      );
      inputs.forEach((input) => {
        input.checked = input.value === selected;
      });
    }
    this.markedInput.checked = this.grid.marked;
    this.commentInput.value = this.grid.comment;
  }

  private showReport(report: ReportPayload): void {
    this.report = report;
    this.pendingConflicts = null;
    this.dialogEl.hidden = true;
    if (report.annotation) {
      this.grid.restore(report.annotation);
    } else {
      this.grid.reset();
    }
    this.syncGridInputs();
    this.hideBanner();
    this.viewPositionEl.textContent = report.view_position ?? "";
    this.previousButton.disabled = report.prev_id === null;
    this.renderReportText();
  }

  private renderReportText(): void {
    if (!this.report) return;
    const conflictSpans: [number, number][] = (this.pendingConflicts ?? [])
      .filter((c) => c.kind === "recognized_but_none")
      .flatMap((c) => c.evidence);
    const segments = segmentText(
      this.report.text,
      this.report.highlights,
      conflictSpans,
    );
    this.reportTextEl.replaceChildren();
    for (const segment of segments) {
      if (segment.covering.length === 0 && !segment.conflicted) {
        this.reportTextEl.appendChild(document.createTextNode(segment.text));
        continue;
      }
      const mark = document.createElement("mark");
      mark.textContent = segment.text;
      mark.dataset["start"] = String(segment.start);
      mark.dataset["end"] = String(segment.end);
      mark.dataset["classes"] = segment.covering.map((h) => h.class).join(" ");
      mark.title = tooltipFor(segment.covering, DISPLAY_NAMES);
      if (segment.conflicted) mark.classList.add("conflict");
      for (const h of segment.covering) mark.classList.add(`label-${h.classification}`);
      this.reportTextEl.appendChild(mark);
    }
  }

  private renderDone(): void {
    this.report = null;
    this.viewPositionEl.textContent = "";
    this.reportTextEl.textContent = "Alle Befunde annotiert.";
    this.saveButton.disabled = true;
    this.previousButton.disabled = true;
    this.showBanner("done", "Alle Befunde sind annotiert.");
  }

  private async refreshProgress(): Promise<void> {
    const progress = await this.api.progress();
    this.progressEl.textContent = `Fortschritt: ${progress.completed}/${progress.total}`;
  }

  // -- save flow ---------------------------------------------------------------

  async submitSave(): Promise<void> {
    if (!this.report) return;
    const confirm = this.pendingConflicts !== null;
    const outcome = await this.api.save(this.report.report_id, {
      labels: this.grid.toLabels(),
      marked: this.grid.marked,
      comment: this.grid.comment || null,
      revision: this.grid.nextRevision(),
      confirm,
    });
    if (outcome.status === "conflicts") {
      this.pendingConflicts = outcome.conflicts;
      this.renderReportText();
      this.renderConflictBanner(outcome.conflicts);
      const unrecognized = outcome.conflicts.find(
        (c) => c.kind === "selected_but_unrecognized",
      );
      if (unrecognized) this.openPhraseDialog(unrecognized.class);
      return;
    }
    if (outcome.status === "stale") {
      this.showBanner(
        "stale",
        `Der Befund wurde zwischenzeitlich gespeichert (Revision ${outcome.storedRevision}). ` +
          "Bitte neu laden.",
        { reload: true },
      );
      return;
    }
    if (outcome.status === "saved") {
      this.pendingConflicts = null;
      await this.refreshProgress();
      const next = await this.api.nextReport();
      if (next === null) {
        this.renderDone();
      } else {
        this.showReport(next);
      }
    }
  }

  private renderConflictBanner(conflicts: SaveConflict[]): void {
    const parts: string[] = [];
    for (const conflict of conflicts) {
      const name = DISPLAY_NAMES[conflict.class] ?? conflict.class;
      if (conflict.kind === "recognized_but_none") {
        parts.push(`${name}: erkannte Phrase ist mit "None" annotiert (markiert).`);
      } else {
        parts.push(`${name}: annotiert, aber keine Phrase erkannt.`);
      }
    }
    this.showBanner(
      "conflicts",
      parts.join(" ") + " Erneut SAVE klicken, um zu bestätigen.",
    );
  }

  // -- previous navigation ------------------------------------------------------

  async loadPrevious(): Promise<void> {
    if (!this.report || this.report.prev_id === null) return;
    const previous = await this.api.getReport(this.report.prev_id);
    this.showReport(previous);
  }

  /** Reload the current report (stale-revision recovery). */
  async reloadCurrent(): Promise<void> {
    if (!this.report) return;
    this.showReport(await this.api.getReport(this.report.report_id));
  }

  // -- add-phrase dialog ---------------------------------------------------------

  openPhraseDialog(cls: string): void {
    this.dialogEl.hidden = false;
    this.dialogEl.innerHTML = `
      <form class="phrase-form">
        <h3>Add a new phrase</h3>
        <p>Phrase für <strong>${DISPLAY_NAMES[cls] ?? cls}</strong></p>
        <input type="text" name="surface" placeholder="z.B. Infiltrat*" required />
        <select name="polarity">
          <option value="positive">positive</option>
          <option value="negative">negative</option>
          <option value="uncertain">uncertain</option>
        </select>
        <div class="dialog-note" aria-live="polite"></div>
        <button type="submit">Hinzufügen</button>
        <button type="button" class="cancel">Abbrechen</button>
      </form>
    `;
    const form = this.dialogEl.querySelector("form")!;
    const note = this.dialogEl.querySelector(".dialog-note")!;
    this.dialogEl.querySelector(".cancel")!.addEventListener("click", () => {
      this.dialogEl.hidden = true;
    });
    form.addEventListener("submit", (event) => {
      event.preventDefault();
      const surface = (form.elements.namedItem("surface") as HTMLInputElement).value;
      const polarity = (form.elements.namedItem("polarity") as HTMLSelectElement)
        .value as "positive" | "negative" | "uncertain";
      void this.api.addPhrase(cls, polarity, surface).then(async (alreadyPresent) => {
        if (alreadyPresent) {
          note.textContent = "Phrase ist bereits vorhanden.";
          return;
        }
        this.dialogEl.hidden = true;
        await this.reloadHighlights();
      });
    });
  }

  /** Re-fetch the current report so new phrases show up as highlights. */
  private async reloadHighlights(): Promise<void> {
    if (!this.report) return;
    const fresh = await this.api.getReport(this.report.report_id);
    this.report = { ...fresh, annotation: this.report.annotation };
    this.renderReportText();
  }

  // -- banner --------------------------------------------------------------------

  private showBanner(
    kind: string,
    message: string,
    options: { reload?: boolean } = {},
  ): void {
    this.bannerEl.hidden = false;
    this.bannerEl.dataset["kind"] = kind;
    this.bannerEl.textContent = message;
    if (options.reload) {
      const button = document.createElement("button");
      button.textContent = "Neu laden";
      button.className = "reload";
      button.addEventListener("click", () => void this.reloadCurrent());
      this.bannerEl.appendChild(button);
    }
  }

  private hideBanner(): void {
    this.bannerEl.hidden = true;
    this.bannerEl.textContent = "";
  }

  get currentReportId(): string | null {
    return this.report?.report_id ?? null;
  }
}
