/** Workbench session state: drafts, commits, optimistic concurrency.
 *
 * Draft edits live only here until the engineer commits them; every commit
 * cites the model version the session last synchronized with. A 409 keeps
 * the draft intact and surfaces a conflict the UI turns into a reload
 * prompt - drafts are never silently merged or dropped.
 */

import { ApiClient, ApiError } from "./api.js";
import type {
  ChartSetDoc,
  MeasureDoc,
  ModelDoc,
  QueryValues,
  ResultDoc,
  ViolationDoc,
} from "./types.js";

export type CommitOutcome =
  | { status: "committed"; version: number }
  | { status: "conflict"; currentVersion: number | null }
  | { status: "invalid"; violations: ViolationDoc[]; message: string };

export class WorkbenchSession {
  model: ModelDoc | null = null;
  selectedCasebase: string | null = null;
  pinnedQuery: QueryValues | null = null;
  lastResult: ResultDoc | null = null;
  lastChartSet: ChartSetDoc | null = null;
  conflict: { currentVersion: number | null } | null = null;

  private draftMeasures = new Map<string, MeasureDoc>();
  private draftWeights: Record<string, number> | null = null;

  constructor(readonly api: ApiClient) {}

  /** The server model version this session last synchronized with. */
  get modelVersion(): number {
    return this.model ? this.model.version : 0;
  }

  async sync(): Promise<ModelDoc> {
    this.model = await this.api.getModel();
    this.conflict = null;
    return this.model;
  }

  problemAttributes(): string[] {
    if (!this.model) {
      return [];
    }
    return this.model.schema.filter((d) => d.role === "problem").map((d) => d.name);
  }

  committedMeasure(attribute: string): MeasureDoc | null {
    return this.model?.measures.find((m) => m.attribute === attribute) ?? null;
  }

  // -- drafts (local only; nothing reaches the server until commit) ----------

  setDraftMeasure(attribute: string, measure: MeasureDoc): void {
    this.draftMeasures.set(attribute, measure);
  }

  draftMeasure(attribute: string): MeasureDoc | null {
    return this.draftMeasures.get(attribute) ?? null;
  }

  hasDraft(attribute: string): boolean {
    return this.draftMeasures.has(attribute);
  }

  setDraftWeight(attribute: string, weight: number): void {
    if (!Number.isFinite(weight) || weight < 0) {
      throw new RangeError(`weight for ${attribute} must be a number >= 0`);
    }
    if (!this.draftWeights) {
      this.draftWeights = { ...(this.model?.amalgamation.weights ?? {}) };
    }
    this.draftWeights[attribute] = weight;
  }

  weights(): Record<string, number> {
    return this.draftWeights ?? { ...(this.model?.amalgamation.weights ?? {}) };
  }

  get weightsDirty(): boolean {
    return this.draftWeights !== null;
  }

  // -- commits ---------------------------------------------------------------

  async commitMeasure(attribute: string): Promise<CommitOutcome> {
    const draft = this.draftMeasures.get(attribute);
    if (!draft) {
      return { status: "invalid", violations: [], message: "no draft to commit" };
    }
    const outcome = await this.commit(() =>
      this.api.putMeasure(attribute, this.modelVersion, draft),
    );
    if (outcome.status === "committed") {
      this.draftMeasures.delete(attribute);
    }
    return outcome;
  }

  async commitWeights(): Promise<CommitOutcome> {
    if (!this.draftWeights) {
      return { status: "invalid", violations: [], message: "no weight changes to commit" };
    }
    const draft = this.draftWeights;
    const outcome = await this.commit(() => this.api.putWeights(this.modelVersion, draft));
    if (outcome.status === "committed") {
      this.draftWeights = null;
    }
    return outcome;
  }

  private async commit(send: () => Promise<ModelDoc>): Promise<CommitOutcome> {
    try {
      this.model = await send();
      this.conflict = null;
      return { status: "committed", version: this.model.version };
    } catch (error) {
      if (error instanceof ApiError && error.status === 409) {
        this.conflict = { currentVersion: error.currentVersion };
        return { status: "conflict", currentVersion: error.currentVersion };
      }
      if (error instanceof ApiError && error.status === 422) {
        return { status: "invalid", violations: error.violations, message: error.message };
      }
      throw error;
    }
  }

  // -- queries and decomposition ----------------------------------------------

  pinQuery(values: QueryValues): void {
    this.pinnedQuery = { ...values };
  }

  async runQuery(k: number, values?: QueryValues): Promise<ResultDoc> {
    if (!this.selectedCasebase) {
      throw new Error("no case base selected");
    }
    const query = values ?? this.pinnedQuery;
    if (!query) {
      throw new Error("no query to run");
    }
    this.lastResult = await this.api.retrieve(this.selectedCasebase, query, k);
    this.lastChartSet = null;
    return this.lastResult;
  }

  async openDecomposition(top: number): Promise<ChartSetDoc> {
    this.lastChartSet = await this.api.getDecomposition(top);
    return this.lastChartSet;
  }
}
