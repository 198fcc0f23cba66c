/** Thin typed client over the engine's /api/v1 endpoints. */

import type {
  CasebaseInfoDoc,
  ChartSetDoc,
  MeasureDoc,
  ModelDoc,
  PreviewDoc,
  QueryValues,
  ResultDoc,
  SummaryDoc,
  UploadResponseDoc,
  ViolationDoc,
} from "./types.js";

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

/** Non-2xx response; 409/422 carry the structured body the UI surfaces. */
export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly body: Record<string, unknown>,
  ) {
    super(typeof body.error === "string" ? body.error : `request failed (${status})`);
  }

  get violations(): ViolationDoc[] {
    return Array.isArray(this.body.violations) ? (this.body.violations as ViolationDoc[]) : [];
  }

  get currentVersion(): number | null {
    return typeof this.body.current_version === "number" ? this.body.current_version : null;
  }
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(method: string, path: string, body?: unknown, raw?: string): Promise<T> {
    const init: RequestInit = { method };
    if (raw !== undefined) {
      init.body = raw;
      init.headers = { "content-type": "text/csv" };
    } else if (body !== undefined) {
      init.body = JSON.stringify(body);
      init.headers = { "content-type": "application/json" };
    }
    const response = await this.fetchImpl(`${this.baseUrl}/api/v1${path}`, init);
    const payload = (await response.json().catch(() => ({}))) as Record<string, unknown>;
    if (!response.ok) {
      throw new ApiError(response.status, payload);
    }
    return payload as T;
  }

  getModel(): Promise<ModelDoc> {
    return this.request("GET", "/model");
  }

  putModel(doc: ModelDoc): Promise<ModelDoc> {
    return this.request("PUT", "/model", doc);
  }

  putMeasure(attribute: string, baseVersion: number, measure: MeasureDoc): Promise<ModelDoc> {
    return this.request("PUT", `/model/measures/${encodeURIComponent(attribute)}`, {
      version: baseVersion,
      measure,
    });
  }

  putWeights(baseVersion: number, weights: Record<string, number>): Promise<ModelDoc> {
    return this.request("PUT", "/model/weights", { version: baseVersion, weights });
  }

  listCasebases(): Promise<{ model_version: number; casebases: CasebaseInfoDoc[] }> {
    return this.request("GET", "/casebases");
  }

  uploadCasebase(
    name: string,
    solution: string,
    zeroMissing: string[],
    csv: string,
  ): Promise<UploadResponseDoc> {
    const params = new URLSearchParams({ name, solution });
    if (zeroMissing.length) {
      params.set("zeroMissing", zeroMissing.join(","));
    }
    return this.request("POST", `/casebases?${params.toString()}`, undefined, csv);
  }

  getSummary(
    casebase: string,
    attribute: string,
    bins = 20,
    groupBySolution = false,
  ): Promise<SummaryDoc> {
    const params = new URLSearchParams({ bins: String(bins) });
    if (groupBySolution) {
      params.set("groupBySolution", "true");
    }
    return this.request(
      "GET",
      `/casebases/${encodeURIComponent(casebase)}/summary/${encodeURIComponent(attribute)}?${params}`,
    );
  }

  retrieve(casebase: string, query: QueryValues, k: number): Promise<ResultDoc> {
    return this.request("POST", "/retrieval", { casebase, query, k });
  }

  getDecomposition(top: number): Promise<ChartSetDoc> {
    return this.request("GET", `/charts/decomposition?top=${top}`);
  }

  getPreview(attribute: string, samples = 60, draftDegree?: number): Promise<PreviewDoc> {
    const params = new URLSearchParams({ samples: String(samples) });
    if (draftDegree !== undefined) {
      params.set("degree", String(draftDegree));
    }
    return this.request(
      "GET",
      `/measures/${encodeURIComponent(attribute)}/preview?${params.toString()}`,
    );
  }
}
