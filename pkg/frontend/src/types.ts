/** Wire types for the flexq HTTP API. */

export interface TraceStep {
  stage: string;
  input: string;
  outcome: string;
}

export type TranslationSource = "pipeline" | "knowledge-base";

export interface TranslateResponse {
  query_id: string;
  sql: string;
  source: TranslationSource;
  trace: TraceStep[];
  warnings: string[];
}

export type CellValue = string | number | null;

export interface ResultColumn {
  table: string;
  field: string;
}

export interface ResultSetPayload {
  columns: ResultColumn[];
  rows: CellValue[][];
  rowCount: number;
}

export type Verdict = "accept" | "reject";

export interface FeedbackResponse {
  status: "pending" | "accepted" | "rejected";
  accepts: number;
  rejects: number;
}

export interface SchemaField {
  name: string;
  dtype: string;
}

export interface SchemaTable {
  name: string;
  primaryKey: string;
  fields: SchemaField[];
  rowCount: number;
}

export interface SchemaPayload {
  tables: SchemaTable[];
}

export interface ErrorCandidate {
  candidate: string;
  distance: number;
}

/** Stage-annotated pipeline error carried in 4xx response details. */
export interface ApiErrorPayload {
  stage: string;
  code: string;
  message: string;
  candidates?: ErrorCandidate[];
  remedy?: { action: string; hint: string; [key: string]: string };
}
