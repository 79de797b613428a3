/**
 * Client-side mirror of the server's validation rules.
 *
 * Advisory only: the server stays authoritative, and any disagreement
 * between this predicate and POST /values is a bug (covered by the
 * agreement property test). Verdicts therefore track the server's
 * accept/reject behaviour for JSON wire values, including its numeric
 * string grammar (optional sign, underscore digit grouping).
 */

import type { Constraints, WireElement, WireValue } from "./types";

const INT_KINDS = new Set(["int_range", "int_text", "bounded_int_text"]);
const FLOAT_KINDS = new Set([
  "float_range",
  "float_text",
  "bounded_float_text",
]);
const TEXT_KINDS = new Set(["text", "text_area"]);

const INT_RE = /^[+-]?\d(?:_?\d)*$/;
const FLOAT_RE =
  /^[+-]?(?:\d(?:_?\d)*(?:\.(?:\d(?:_?\d)*)?)?|\.\d(?:_?\d)*)(?:[eE][+-]?\d(?:_?\d)*)?$/;
const FLOAT_WORD_RE = /^[+-]?(?:inf|infinity|nan)$/i;

function parseIntStrict(text: string): number | null {
  const t = text.trim();
  if (!INT_RE.test(t)) return null;
  return Number(t.replace(/_/g, ""));
}

function parseFloatStrict(text: string): number | null {
  const t = text.trim();
  if (FLOAT_WORD_RE.test(t)) return t.toLowerCase().includes("nan") ? NaN : Infinity;
  if (!FLOAT_RE.test(t)) return null;
  return Number(t.replace(/_/g, ""));
}

function roundHalfUp(x: number): number {
  return Math.floor(x + 0.5);
}

function quantize(value: number, lo: number, step: number): number {
  return lo + roundHalfUp((value - lo) / step) * step;
}

function suffixOf(name: string): string {
  const base = name.split("/").pop() ?? "";
  const dot = base.lastIndexOf(".");
  return dot > 0 ? base.slice(dot) : "";
}

function boundsCheck(value: number, cs: Constraints): string | null {
  if (cs.min !== null && value < cs.min) return "out_of_range";
  if (cs.max !== null && value > cs.max) return "out_of_range";
  return null;
}

/** Validation rule violated by `raw` for this element, or null if accepted. */
export function checkValue(element: WireElement, raw: WireValue): string | null {
  const kind = element.kind;
  const cs = element.constraints;

  if (INT_KINDS.has(kind)) {
    let value: number;
    if (typeof raw === "boolean") return "type_mismatch";
    if (typeof raw === "number") {
      if (!Number.isInteger(raw)) return "type_mismatch";
      value = raw;
    } else if (typeof raw === "string") {
      const parsed = parseIntStrict(raw);
      if (parsed === null) return "parse_failure";
      value = parsed;
    } else {
      return "type_mismatch";
    }
    if (kind === "int_range" && cs.step) {
      value = quantize(value, cs.min as number, cs.step);
    }
    return boundsCheck(value, cs);
  }

  if (FLOAT_KINDS.has(kind)) {
    let value: number;
    if (typeof raw === "boolean") return "type_mismatch";
    if (typeof raw === "number") {
      value = raw;
    } else if (typeof raw === "string") {
      const parsed = parseFloatStrict(raw);
      if (parsed === null) return "parse_failure";
      value = parsed;
    } else {
      return "type_mismatch";
    }
    if (!Number.isFinite(value)) return "out_of_range";
    if (kind === "float_range" && cs.step) {
      value = quantize(value, cs.min as number, cs.step);
    }
    return boundsCheck(value, cs);
  }

  if (kind === "check") {
    if (typeof raw === "boolean") return null;
    if (typeof raw === "string") {
      const lowered = raw.trim().toLowerCase();
      return lowered === "true" || lowered === "false" ? null : "parse_failure";
    }
    return "type_mismatch";
  }

  if (TEXT_KINDS.has(kind)) {
    if (typeof raw !== "string") return "type_mismatch";
    if (cs.max_length !== null && [...raw].length > cs.max_length) {
      return "too_long";
    }
    return null;
  }

  if (kind === "dropdown") {
    if (typeof raw !== "string") return "type_mismatch";
    return (cs.options ?? []).includes(raw) ? null : "not_in_options";
  }

  if (kind === "select_multiple") {
    if (!Array.isArray(raw) || raw.some((item) => typeof item !== "string")) {
      return "type_mismatch";
    }
    const options = cs.options ?? [];
    return raw.every((item) => options.includes(item)) ? null : "not_in_options";
  }

  if (kind === "path") {
    if (typeof raw !== "string") return "type_mismatch";
    if (cs.extensions && cs.extensions.length > 0) {
      if (!cs.extensions.includes(suffixOf(raw))) return "bad_extension";
    }
    // must_exist needs the server's filesystem; never judged client-side.
    return null;
  }

  return "type_mismatch"; // file_upload travels via /upload; others carry no value
}

const RULE_MESSAGES: Record<string, string> = {
  type_mismatch: "wrong type for this field",
  parse_failure: "could not be parsed",
  out_of_range: "outside the allowed range",
  not_in_options: "not one of the allowed options",
  too_long: "exceeds the maximum length",
  bad_extension: "file extension not allowed",
  path_missing: "path does not exist",
};

/** Human-readable description for a validation rule name. */
export function ruleMessage(rule: string): string {
  return RULE_MESSAGES[rule] ?? rule;
}

/** All advisory errors for a draft, keyed by element name. */
export function checkDraft(
  elements: WireElement[],
  draft: Record<string, WireValue>,
): Record<string, string> {
  const errors: Record<string, string> = {};
  for (const element of elements) {
    if (!(element.name in draft)) continue;
    const rule = checkValue(element, draft[element.name]);
    if (rule !== null) errors[element.name] = rule;
  }
  return errors;
}
