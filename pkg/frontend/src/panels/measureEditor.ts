/** Measure editor: data distribution beside the live similarity curve.
 *
 * The histogram comes from the summary endpoint, the curve from the preview
 * endpoint; dragging the degree control asks the server to preview the draft
 * degree (no curve math happens here). Commit issues the measure PUT citing
 * the synchronized model version; a conflict keeps the draft and shows a
 * reload prompt.
 */

import { renderDistribution } from "../charts.js";
import { fmt2 } from "../format.js";
import type { WorkbenchSession } from "../session.js";
import type { PreviewDoc, SummaryDoc } from "../types.js";

export class MeasureEditor {
  private summary: SummaryDoc | null = null;
  private preview: PreviewDoc | null = null;

  constructor(
    private readonly session: WorkbenchSession,
    private readonly container: HTMLElement,
  ) {}

  /** Current degree: the draft if one exists, else the committed measure. */
  degreeOf(attribute: string): number {
    const draft = this.session.draftMeasure(attribute);
    if (draft && draft.type === "polynomial" && draft.degree !== undefined) {
      return draft.degree;
    }
    const committed = this.session.committedMeasure(attribute);
    if (committed && committed.type === "polynomial" && committed.degree !== undefined) {
      return committed.degree;
    }
    return 2.0;
  }

  async open(attribute: string): Promise<void> {
    const casebase = this.session.selectedCasebase;
    if (!casebase) {
      throw new Error("select a case base first");
    }
    this.summary = await this.session.api.getSummary(casebase, attribute, 20, true);
    const draft = this.session.hasDraft(attribute) ? this.degreeOf(attribute) : undefined;
    this.preview = await this.session.api.getPreview(attribute, 60, draft);
    this.render(attribute);
  }

  async setDegree(attribute: string, degree: number): Promise<void> {
    this.session.setDraftMeasure(attribute, { type: "polynomial", degree });
    this.preview = await this.session.api.getPreview(attribute, 60, degree);
    this.render(attribute);
  }

  async commit(attribute: string): Promise<void> {
    const outcome = await this.session.commitMeasure(attribute);
    if (outcome.status === "committed") {
      this.preview = await this.session.api.getPreview(attribute, 60);
    }
    this.render(attribute);
  }

  render(attribute: string): void {
    const root = this.container;
    root.replaceChildren();
    root.dataset.attribute = attribute;
    root.dataset.modelVersion = String(this.session.modelVersion);

    const head = document.createElement("div");
    head.className = "editor-head";
    head.textContent = `${attribute} - model v${this.session.modelVersion}`;
    root.appendChild(head);

    if (this.session.conflict) {
      const prompt = document.createElement("div");
      prompt.className = "conflict-prompt";
      prompt.dataset.role = "conflict";
      prompt.textContent =
        `Model changed on the server (now v${this.session.conflict.currentVersion}). ` +
        "Reload to continue; your draft is kept.";
      root.appendChild(prompt);
    }

    const plot = document.createElement("div");
    plot.className = "editor-plot";
    if (this.summary) {
      renderDistribution(plot, this.summary, this.preview);
    }
    root.appendChild(plot);

    const controls = document.createElement("div");
    controls.className = "editor-controls";
    const degree = this.degreeOf(attribute);

    const slider = document.createElement("input");
    slider.type = "range";
    slider.min = "0.25";
    slider.max = "6";
    slider.step = "0.25";
    slider.value = String(degree);
    slider.dataset.role = "degree";
    slider.addEventListener("change", () => {
      void this.setDegree(attribute, Number(slider.value));
    });
    controls.appendChild(slider);

    const readout = document.createElement("span");
    readout.className = "degree-readout";
    readout.dataset.role = "degree-readout";
    readout.textContent = `degree ${fmt2(degree)}${this.session.hasDraft(attribute) ? " (draft)" : ""}`;
    controls.appendChild(readout);

    const commit = document.createElement("button");
    commit.textContent = "Commit measure";
    commit.dataset.role = "commit";
    commit.disabled = !this.session.hasDraft(attribute);
    commit.addEventListener("click", () => {
      void this.commit(attribute);
    });
    controls.appendChild(commit);

    root.appendChild(controls);
  }
}
