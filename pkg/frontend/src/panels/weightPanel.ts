/** Weight panel: one input per problem attribute, raw and normalized shown.
 *
 * Edits stay in the session draft until "Commit weights" issues the PUT.
 * Negative input never reaches the server: the session rejects it and the
 * field is flagged. Normalized values for the draft are a plain display
 * division; committed similarity numbers always come from the server.
 */

import { fmt2 } from "../format.js";
import type { WorkbenchSession } from "../session.js";

export class WeightPanel {
  message = "";

  constructor(
    private readonly session: WorkbenchSession,
    private readonly container: HTMLElement,
  ) {}

  async commit(): Promise<void> {
    const outcome = await this.session.commitWeights();
    if (outcome.status === "invalid") {
      this.message = outcome.message;
    } else if (outcome.status === "conflict") {
      this.message = "model changed on the server; reload to continue (draft kept)";
    } else {
      this.message = `committed as v${outcome.version}`;
    }
    this.render();
  }

  render(): void {
    const root = this.container;
    root.replaceChildren();
    root.dataset.modelVersion = String(this.session.modelVersion);

    const weights = this.session.weights();
    const names = this.session.problemAttributes();
    const total = names.reduce((acc, name) => acc + (weights[name] ?? 0), 0);

    const table = document.createElement("table");
    table.className = "weight-table";
    const header = table.insertRow();
    for (const text of ["attribute", "raw", "normalized"]) {
      const cell = document.createElement("th");
      cell.textContent = text;
      header.appendChild(cell);
    }

    for (const name of names) {
      const row = table.insertRow();
      row.dataset.attribute = name;
      row.insertCell().textContent = name;

      const input = document.createElement("input");
      input.type = "number";
      input.min = "0";
      input.step = "0.1";
      input.value = String(weights[name] ?? 0);
      input.dataset.role = "weight";
      input.addEventListener("change", () => {
        const value = Number(input.value);
        try {
          this.session.setDraftWeight(name, value);
          input.classList.remove("invalid");
          this.message = "";
        } catch {
          input.classList.add("invalid");
          this.message = `weight for ${name} must be >= 0`;
        }
        this.render();
      });
      row.insertCell().appendChild(input);

      const normalized = row.insertCell();
      normalized.dataset.role = "normalized";
      normalized.textContent = total > 0 ? fmt2((weights[name] ?? 0) / total) : "--";
    }
    root.appendChild(table);

    const commit = document.createElement("button");
    commit.textContent = "Commit weights";
    commit.dataset.role = "commit";
    commit.disabled = !this.session.weightsDirty;
    commit.addEventListener("click", () => {
      void this.commit();
    });
    root.appendChild(commit);

    if (this.message) {
      const note = document.createElement("div");
      note.className = "panel-message";
      note.dataset.role = "message";
      note.textContent = this.message;
      root.appendChild(note);
    }
  }
}
