/** Wire schema served by GET /schema. */

export interface Constraints {
  min: number | null;
  max: number | null;
  step: number | null;
  options: string[] | null;
  extensions: string[] | null;
  must_exist: boolean | null;
  max_length: number | null;
}

export type WireValue = number | boolean | string | string[] | null;

export interface WireElement {
  name: string;
  kind: string;
  label: string;
  constraints: Constraints;
  default: WireValue;
  current: WireValue | { filename: string; size: number };
  help: string | null;
}

export interface WireSchema {
  title: string;
  version: number;
  elements: WireElement[];
}

export const SUPPORTED_SCHEMA_VERSION = 1;

export type SubmitError = { name: string; rule: string; message: string };

export type SubmitResponse =
  | { ok: true }
  | { ok: false; errors: SubmitError[] }
  | { error: string };

export type Phase = "loading" | "editing" | "submitting" | "done" | "cancelled";
