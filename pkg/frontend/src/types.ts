/** Document shapes served by the engine's /api/v1 endpoints. */

export type AttributeKind = "numeric" | "symbolic";
export type AttributeRole = "problem" | "solution";

export interface DescriptorDoc {
  name: string;
  kind: AttributeKind;
  role: AttributeRole;
  min?: number | null;
  max?: number | null;
  symbols?: string[];
}

export interface MeasureDoc {
  attribute?: string;
  type: "polynomial" | "step" | "table";
  degree?: number;
  threshold?: number;
  symbols?: string[];
  entries?: number[][];
}

export interface ModelDoc {
  kind: string;
  version: number;
  schema: DescriptorDoc[];
  measures: MeasureDoc[];
  amalgamation: { mode: string; weights: Record<string, number> };
}

export interface ViolationDoc {
  rule: string;
  attribute: string | null;
  message: string;
}

export interface BinDoc {
  lower: number;
  upper: number;
  count: number;
}

export interface SummaryDoc {
  kind: string;
  attribute: string;
  total: number;
  count: number;
  missing: number;
  min: number | null;
  max: number | null;
  mean: number | null;
  stddev: number | null;
  bins: BinDoc[];
  groups: Record<string, BinDoc[]> | null;
  model_version?: number;
}

export interface ExplanationRowDoc {
  attribute: string;
  local_sim: number | null;
  weight_raw: number;
  weight_normalized: number | null;
  contribution: number | null;
  missing: boolean;
}

export interface EntryDoc {
  case_id: string;
  score: number;
  explanation: { no_overlap: boolean; rows: ExplanationRowDoc[] };
}

export interface ResultDoc {
  kind: string;
  model_version: number;
  k: number;
  query: { values: Record<string, number | string | null> };
  entries: EntryDoc[];
}

export interface ChartRowDoc {
  rank: number;
  case_id: string;
  score: number;
  panels: {
    weighted_contribution: (number | null)[];
    local_similarity: (number | null)[];
    weight: (number | null)[];
  };
  weights_normalized: (number | null)[];
}

export interface ChartSetDoc {
  kind: string;
  model_version: number;
  attributes: string[];
  rows: ChartRowDoc[];
}

export interface PreviewPointDoc {
  value: number;
  similarity: number;
}

export interface PreviewDoc {
  kind: string;
  attribute: string;
  reference: number;
  points: PreviewPointDoc[];
  model_version?: number;
}

export interface CasebaseInfoDoc {
  name: string;
  cases: number;
}

export interface UploadResponseDoc {
  name: string;
  cases: number;
  model_version: number;
}

export type QueryValues = Record<string, number | string | null>;
