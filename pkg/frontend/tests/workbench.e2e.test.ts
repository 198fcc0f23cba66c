// @vitest-environment jsdom
//
// Scripted workbench loop against a live engine service:
// edit the Age degree, commit, submit a pinned query, open the decomposition,
// check the displayed bars sum to the displayed score at 2-decimal rounding,
// and confirm a server-side re-query returns the same score.

import { spawn, type ChildProcess } from "node:child_process";
import { mkdtempSync, rmSync } from "node:fs";
import { createServer } from "node:net";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { WorkbenchSession } from "../src/session.js";
import { MeasureEditor } from "../src/panels/measureEditor.js";
import { QueryConsole } from "../src/panels/queryConsole.js";

const PYTHON = process.env.CASEWISE_PYTHON ?? "python3";

let service: ChildProcess;
let projectDir: string;
let baseUrl: string;

function freePort(): Promise<number> {
  return new Promise((resolve, reject) => {
    const probe = createServer();
    probe.once("error", reject);
    probe.listen(0, "127.0.0.1", () => {
      const address = probe.address();
      if (address && typeof address === "object") {
        const port = address.port;
        probe.close(() => resolve(port));
      } else {
        probe.close(() => reject(new Error("no port")));
      }
    });
  });
}

async function waitForService(url: string, attempts = 100): Promise<void> {
  for (let i = 0; i < attempts; i += 1) {
    try {
      const response = await fetch(`${url}/api/v1/model`);
      if (response.ok) {
        return;
      }
    } catch {
      // not up yet
    }
    await new Promise((resolve) => setTimeout(resolve, 150));
  }
  throw new Error(`service at ${url} did not come up`);
}

/** Small deterministic clinic dataset with an Age column (blank = nothing). */
function clinicCsv(rows = 48): string {
  const lines = ["Age,Glucose,BMI,Outcome"];
  let state = 1234567;
  const next = () => {
    state = (state * 48271) % 2147483647;
    return state / 2147483647;
  };
  for (let i = 0; i < rows; i += 1) {
    const risk = next();
    const age = Math.round(21 + risk * 50 + next() * 8);
    const glucose = next() < 0.05 ? 0 : Math.round(85 + risk * 90 + next() * 20);
    const bmi = (19 + risk * 18 + next() * 5).toFixed(1);
    const outcome = risk + next() * 0.3 > 0.75 ? 1 : 0;
    lines.push(`${age},${glucose},${bmi},${outcome}`);
  }
  return lines.join("\n") + "\n";
}

beforeAll(async () => {
  projectDir = mkdtempSync(join(tmpdir(), "workbench-"));
  const port = await freePort();
  baseUrl = `http://127.0.0.1:${port}`;
  service = spawn(PYTHON, [
    "-m",
    "casewise.cli",
    "serve",
    "--project",
    projectDir,
    "--port",
    String(port),
  ]);
  await waitForService(baseUrl);
});

afterAll(() => {
  service?.kill();
  rmSync(projectDir, { recursive: true, force: true });
});

describe("workbench loop", () => {
  it("edits, commits, queries and decomposes against the live service", async () => {
    const session = new WorkbenchSession(
      new ApiClient(baseUrl, (input, init) => fetch(input, init)),
    );

    // fresh project, then seed it with the clinic data
    await session.sync();
    expect(session.modelVersion).toBe(0);
    const upload = await session.api.uploadCasebase(
      "clinic",
      "Outcome",
      ["Glucose"],
      clinicCsv(),
    );
    expect(upload.cases).toBe(48);
    await session.sync();
    expect(session.modelVersion).toBe(1);
    session.selectedCasebase = "clinic";

    // measure editor: histogram + curve, drag the degree, commit
    const editorHost = document.createElement("div");
    const editor = new MeasureEditor(session, editorHost);
    await editor.open("Age");
    expect(editorHost.querySelectorAll("rect.hist-bar").length).toBeGreaterThan(0);
    expect(editorHost.querySelectorAll("polyline.measure-curve").length).toBe(1);
    expect(editor.degreeOf("Age")).toBe(2.0);

    await editor.setDegree("Age", 1.0); // draft only
    expect(session.hasDraft("Age")).toBe(true);
    expect(session.modelVersion).toBe(1);

    await editor.commit("Age");
    expect(session.modelVersion).toBe(2);
    expect(session.hasDraft("Age")).toBe(false);
    const committed = session.committedMeasure("Age");
    expect(committed?.degree).toBe(1.0);

    // the UI shows the version it synchronized with
    expect(editorHost.dataset.modelVersion).toBe("2");

    // query console: pin a reference query and retrieve
    const consoleHost = document.createElement("div");
    const decompositionHost = document.createElement("div");
    const console_ = new QueryConsole(session, consoleHost, decompositionHost);
    session.pinQuery({ Age: 42, Glucose: 130, BMI: 30.0 });
    const result = await session.runQuery(3);
    expect(result.model_version).toBe(2);
    expect(result.entries.length).toBe(3);
    console_.render();
    const renderedRows = consoleHost.querySelectorAll("table[data-role=results] tr[data-case-id]");
    expect(renderedRows.length).toBe(3);

    // decomposition: displayed bars sum to the displayed score (2 decimals)
    await console_.showDecomposition(3);
    const blocks = decompositionHost.querySelectorAll<HTMLElement>(".decomp-row");
    expect(blocks.length).toBe(3);
    blocks.forEach((block) => {
      const shownScore = Number(block.dataset.score);
      const displayed = Array.from(
        block.querySelectorAll<HTMLElement>(
          '[data-panel="weighted_contribution"] .bar-row:not(.missing)',
        ),
      ).map((row) => Number(row.dataset.display));
      const sum = displayed.reduce((a, b) => a + b, 0);
      expect(Math.abs(sum - shownScore)).toBeLessThanOrEqual(0.005 * (displayed.length + 1));
    });
    expect(decompositionHost.dataset.modelVersion).toBe("2");

    // server-side re-query with the same inputs returns the same score
    const again = await session.api.retrieve("clinic", { Age: 42, Glucose: 130, BMI: 30.0 }, 3);
    expect(again.entries[0].score).toBe(result.entries[0].score);
    expect(again.entries.map((e) => e.case_id)).toEqual(
      result.entries.map((e) => e.case_id),
    );

    // a query equal to a stored case displays rank 1 with score 1.00
    const row = clinicCsv()
      .split("\n")
      .slice(1)
      .map((line) => line.split(","))
      .find((cells) => cells.length === 4 && cells[1] !== "0")!;
    session.pinQuery({ Age: Number(row[0]), Glucose: Number(row[1]), BMI: Number(row[2]) });
    await session.runQuery(3);
    console_.render();
    const topRow = consoleHost.querySelector<HTMLElement>(
      "table[data-role=results] tr[data-case-id]",
    )!;
    expect(topRow.dataset.score).toBe("1.00");
  });

  it("surfaces a conflict as a reload prompt and keeps the draft", async () => {
    const session = new WorkbenchSession(
      new ApiClient(baseUrl, (input, init) => fetch(input, init)),
    );
    await session.sync();
    session.selectedCasebase = "clinic";

    const editorHost = document.createElement("div");
    const editor = new MeasureEditor(session, editorHost);
    await editor.open("Age");
    await editor.setDegree("Age", 3.0);

    // someone else commits first
    const rival = new WorkbenchSession(
      new ApiClient(baseUrl, (input, init) => fetch(input, init)),
    );
    await rival.sync();
    rival.setDraftWeight("Age", 2.0);
    const rivalOutcome = await rival.commitWeights();
    expect(rivalOutcome.status).toBe("committed");

    await editor.commit("Age");
    expect(session.conflict).not.toBeNull();
    expect(session.draftMeasure("Age")).toEqual({ type: "polynomial", degree: 3.0 });
    expect(editorHost.querySelector('[data-role="conflict"]')?.textContent).toContain("Reload");

    // reload and retry: the draft survives the sync
    await session.sync();
    const retry = await session.commitMeasure("Age");
    expect(retry.status).toBe("committed");
  });
});
