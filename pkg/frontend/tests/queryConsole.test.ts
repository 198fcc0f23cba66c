// @vitest-environment jsdom
import { describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { WorkbenchSession } from "../src/session.js";
import { QueryConsole } from "../src/panels/queryConsole.js";
import type { ModelDoc } from "../src/types.js";

const MODEL: ModelDoc = {
  kind: "similarity-model",
  version: 2,
  schema: [
    { name: "Age", kind: "numeric", role: "problem", min: 20, max: 80 },
    { name: "Color", kind: "symbolic", role: "problem", symbols: ["red", "green"] },
    { name: "Outcome", kind: "symbolic", role: "solution", symbols: ["0", "1"] },
  ],
  measures: [
    { attribute: "Age", type: "polynomial", degree: 2 },
    {
      attribute: "Color",
      type: "table",
      symbols: ["red", "green"],
      entries: [
        [1, 0],
        [0, 1],
      ],
    },
  ],
  amalgamation: { mode: "weighted_sum", weights: { Age: 1, Color: 1 } },
};

function scripted(responses: Array<{ status: number; body: unknown }>) {
  const fetcher = async (): Promise<Response> => {
    const next = responses.shift();
    if (!next) {
      throw new Error("unexpected request");
    }
    return new Response(JSON.stringify(next.body), {
      status: next.status,
      headers: { "content-type": "application/json" },
    });
  };
  return new WorkbenchSession(new ApiClient("http://unit.test", fetcher));
}

describe("QueryConsole", () => {
  it("renders one field per problem attribute, blank meaning missing", async () => {
    const session = scripted([{ status: 200, body: MODEL }]);
    await session.sync();
    session.selectedCasebase = "demo";
    const host = document.createElement("div");
    const console_ = new QueryConsole(session, host, document.createElement("div"));
    console_.render();
    const inputs = host.querySelectorAll("input[data-attribute]");
    expect(Array.from(inputs).map((i) => (i as HTMLElement).dataset.attribute)).toEqual([
      "Age",
      "Color",
    ]);

    (inputs[0] as HTMLInputElement).value = "42";
    expect(console_.collect()).toEqual({ Age: 42, Color: null });
  });

  it("renders server validation errors inline at the named field", async () => {
    const session = scripted([
      { status: 200, body: MODEL },
      {
        status: 422,
        body: {
          error: "value 'blue' not in symbol set of attribute 'Color'",
          violations: [
            {
              rule: "unknown-symbol",
              attribute: "Color",
              message: "value 'blue' not in symbol set of attribute 'Color'",
            },
          ],
        },
      },
    ]);
    await session.sync();
    session.selectedCasebase = "demo";
    const host = document.createElement("div");
    const console_ = new QueryConsole(session, host, document.createElement("div"));
    console_.render();
    const colorInput = host.querySelector<HTMLInputElement>('input[data-attribute="Color"]')!;
    colorInput.value = "blue";

    await console_.submit(3);

    const flagged = host.querySelector<HTMLInputElement>('input[data-attribute="Color"]')!;
    expect(flagged.classList.contains("invalid")).toBe(true);
    const note = host.querySelector('[data-role="field-error"]');
    expect(note?.textContent).toContain("not in symbol set");
    // the untouched field carries no error
    expect(
      host.querySelector<HTMLInputElement>('input[data-attribute="Age"]')!.classList.contains(
        "invalid",
      ),
    ).toBe(false);
  });
});
