/** Bootstrap: bind the session to the service and mount the three panels. */

import { ApiClient } from "./api.js";
import { WorkbenchSession } from "./session.js";
import { MeasureEditor } from "./panels/measureEditor.js";
import { WeightPanel } from "./panels/weightPanel.js";
import { QueryConsole } from "./panels/queryConsole.js";

function must(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (!node) {
    throw new Error(`missing #${id}`);
  }
  return node;
}

async function boot(): Promise<void> {
  const base = (document.body.dataset.apiBase ?? "").replace(/\/$/, "");
  const session = new WorkbenchSession(new ApiClient(base));
  const editor = new MeasureEditor(session, must("measure-editor"));
  const weights = new WeightPanel(session, must("weight-panel"));
  const console_ = new QueryConsole(session, must("query-console"), must("decomposition"));

  await session.sync();

  const status = must("status");
  const refreshStatus = () => {
    status.textContent = `model v${session.modelVersion}` + (
      session.selectedCasebase ? ` | case base: ${session.selectedCasebase}` : ""
    );
  };
  refreshStatus();

  const casebaseSelect = must("casebase-select") as HTMLSelectElement;
  const attributeSelect = must("attribute-select") as HTMLSelectElement;

  const refreshCasebases = async () => {
    const listing = await session.api.listCasebases();
    casebaseSelect.replaceChildren(
      ...listing.casebases.map((cb) => {
        const option = document.createElement("option");
        option.value = cb.name;
        option.textContent = `${cb.name} (${cb.cases})`;
        return option;
      }),
    );
    if (listing.casebases.length && !session.selectedCasebase) {
      session.selectedCasebase = listing.casebases[0].name;
      casebaseSelect.value = session.selectedCasebase;
    }
    refreshStatus();
  };

  const refreshAttributes = () => {
    attributeSelect.replaceChildren(
      ...session
        .problemAttributes()
        .filter((name) => {
          const d = session.model?.schema.find((x) => x.name === name);
          return d?.kind === "numeric";
        })
        .map((name) => {
          const option = document.createElement("option");
          option.value = name;
          option.textContent = name;
          return option;
        }),
    );
  };

  casebaseSelect.addEventListener("change", () => {
    session.selectedCasebase = casebaseSelect.value;
    refreshStatus();
  });
  attributeSelect.addEventListener("change", () => {
    void editor.open(attributeSelect.value);
  });

  const uploadInput = must("csv-file") as HTMLInputElement;
  must("upload").addEventListener("click", () => {
    const file = uploadInput.files?.[0];
    if (!file) {
      return;
    }
    void (async () => {
      const text = await file.text();
      const name = file.name.replace(/\.csv$/i, "").replace(/[^A-Za-z0-9_-]/g, "-");
      const solution = (must("solution-column") as HTMLInputElement).value || "Outcome";
      const zeroMissing = (must("zero-missing") as HTMLInputElement).value
        .split(",")
        .map((s) => s.trim())
        .filter(Boolean);
      await session.api.uploadCasebase(name, solution, zeroMissing, text);
      await session.sync();
      await refreshCasebases();
      session.selectedCasebase = name;
      casebaseSelect.value = name;
      refreshAttributes();
      weights.render();
      console_.render();
      if (attributeSelect.value) {
        await editor.open(attributeSelect.value);
      }
      refreshStatus();
    })();
  });

  await refreshCasebases();
  refreshAttributes();
  weights.render();
  console_.render();
  if (attributeSelect.value && session.selectedCasebase) {
    await editor.open(attributeSelect.value);
  }
}

void boot();
