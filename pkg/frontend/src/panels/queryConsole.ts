/** Query console: one form field per problem attribute (blank = missing),
 * a ranked result table, and the three-panel decomposition for selected rows.
 */

import { renderDecomposition } from "../charts.js";
import { ApiError } from "../api.js";
import { fmt2 } from "../format.js";
import type { WorkbenchSession } from "../session.js";
import type { QueryValues } from "../types.js";

export class QueryConsole {
  error = "";
  fieldErrors = new Map<string, string>();

  constructor(
    private readonly session: WorkbenchSession,
    private readonly container: HTMLElement,
    private readonly decompositionContainer: HTMLElement,
  ) {}

  /** Read the form into query values; blank fields become missing. */
  collect(): QueryValues {
    const values: QueryValues = {};
    const inputs = this.container.querySelectorAll<HTMLInputElement>("input[data-attribute]");
    inputs.forEach((input) => {
      const name = input.dataset.attribute as string;
      const raw = input.value.trim();
      if (!raw) {
        values[name] = null;
        return;
      }
      const descriptor = this.session.model?.schema.find((d) => d.name === name);
      values[name] = descriptor?.kind === "numeric" ? Number(raw) : raw;
    });
    return values;
  }

  async submit(k = 5): Promise<void> {
    this.error = "";
    this.fieldErrors.clear();
    this.session.pinQuery(this.collect());
    try {
      await this.session.runQuery(k);
    } catch (err) {
      if (err instanceof ApiError) {
        // violations that name an attribute render inline at that field
        for (const violation of err.violations) {
          if (violation.attribute) {
            this.fieldErrors.set(violation.attribute, violation.message);
          }
        }
        if (this.fieldErrors.size === 0) {
          this.error = err.message;
        }
      } else {
        this.error = String(err);
      }
    }
    this.render();
  }

  async showDecomposition(top: number): Promise<void> {
    const chart = await this.session.openDecomposition(top);
    renderDecomposition(this.decompositionContainer, chart);
  }

  render(): void {
    const root = this.container;
    const previous = this.session.pinnedQuery ?? {};
    root.replaceChildren();
    root.dataset.modelVersion = String(this.session.modelVersion);

    const form = document.createElement("div");
    form.className = "query-form";
    for (const name of this.session.problemAttributes()) {
      const field = document.createElement("label");
      field.className = "query-field";
      field.textContent = name;
      const input = document.createElement("input");
      input.dataset.attribute = name;
      const pinned = previous[name];
      input.value = pinned === null || pinned === undefined ? "" : String(pinned);
      input.placeholder = "(missing)";
      field.appendChild(input);
      const fieldError = this.fieldErrors.get(name);
      if (fieldError) {
        input.classList.add("invalid");
        const note = document.createElement("span");
        note.className = "field-error";
        note.dataset.role = "field-error";
        note.textContent = fieldError;
        field.appendChild(note);
      }
      form.appendChild(field);
    }
    root.appendChild(form);

    const submit = document.createElement("button");
    submit.dataset.role = "submit";
    submit.textContent = "Retrieve";
    submit.addEventListener("click", () => {
      void this.submit();
    });
    root.appendChild(submit);

    if (this.error) {
      const note = document.createElement("div");
      note.className = "panel-message error";
      note.dataset.role = "error";
      note.textContent = this.error;
      root.appendChild(note);
    }

    const result = this.session.lastResult;
    if (!result) {
      return;
    }
    const table = document.createElement("table");
    table.className = "result-table";
    table.dataset.role = "results";
    const header = table.insertRow();
    for (const text of ["rank", "case", "score"]) {
      const cell = document.createElement("th");
      cell.textContent = text;
      header.appendChild(cell);
    }
    result.entries.forEach((entry, index) => {
      const row = table.insertRow();
      row.dataset.caseId = entry.case_id;
      row.dataset.score = fmt2(entry.score);
      row.insertCell().textContent = String(index + 1);
      row.insertCell().textContent = entry.case_id;
      row.insertCell().textContent = fmt2(entry.score);
      row.addEventListener("click", () => {
        void this.showDecomposition(Math.min(3, result.entries.length));
      });
    });
    root.appendChild(table);
  }
}
