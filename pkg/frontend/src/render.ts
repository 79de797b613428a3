/**
 * DOM renderer for a wire schema: one control per element, in schema
 * order, with live validation feedback mirroring the server's verdicts.
 */

import { sanitizeHtml } from "./sanitize";
import { checkValue, ruleMessage } from "./validation";
import type { SubmitError, WireElement, WireSchema, WireValue } from "./types";

const VALUE_KINDS = new Set([
  "text", "text_area", "int_range", "float_range", "int_text",
  "bounded_int_text", "float_text", "bounded_float_text", "check",
  "dropdown", "select_multiple", "path",
]);

export type Draft = string | boolean | string[];

export interface ViewCallbacks {
  onSubmit: (values: Record<string, Draft>) => void;
  onCancel: () => void;
  onAction: (name: string) => void;
  onUpload: (name: string, file: File) => void;
}

function initialDraft(el: WireElement): Draft {
  const seed: WireValue =
    el.current !== null && typeof el.current !== "object"
      ? (el.current as WireValue)
      : Array.isArray(el.current)
        ? el.current
        : el.default;
  if (el.kind === "check") return seed === true;
  if (el.kind === "select_multiple") {
    return Array.isArray(seed) ? seed.map(String) : [];
  }
  if (seed === null || seed === undefined) return "";
  return String(seed);
}

export class FormView {
  readonly root: HTMLElement;
  private readonly drafts = new Map<string, Draft>();
  private readonly errorSlots = new Map<string, HTMLElement>();
  private readonly outputPanes = new Map<string, HTMLElement>();
  private readonly banner: HTMLElement;

  constructor(
    private readonly doc: Document,
    private readonly schema: WireSchema,
    private readonly callbacks: ViewCallbacks,
  ) {
    this.root = doc.createElement("div");
    this.root.className = "pf-form";
    const heading = doc.createElement("h1");
    heading.textContent = schema.title;
    this.root.appendChild(heading);
    this.banner = doc.createElement("div");
    this.banner.className = "pf-banner";
    this.banner.hidden = true;
    this.root.appendChild(this.banner);
    for (const el of schema.elements) {
      this.root.appendChild(this.renderElement(el));
    }
    this.root.appendChild(this.renderButtons());
  }

  getDraft(name: string): Draft | undefined {
    return this.drafts.get(name);
  }

  setDraft(name: string, value: Draft): void {
    this.drafts.set(name, value);
    const control = this.root.querySelector(`[data-control="${name}"]`);
    if (control instanceof HTMLInputElement) {
      if (control.type === "checkbox") control.checked = value === true;
      else control.value = String(value);
    } else if (control instanceof HTMLTextAreaElement) {
      control.value = String(value);
    } else if (control instanceof HTMLSelectElement && !control.multiple) {
      control.value = String(value);
    }
    this.revalidate(name);
  }

  showBanner(text: string): void {
    this.banner.textContent = text;
    this.banner.hidden = false;
  }

  hideBanner(): void {
    this.banner.hidden = true;
  }

  showErrors(errors: SubmitError[]): void {
    for (const err of errors) {
      const slot = this.errorSlots.get(err.name);
      if (slot) slot.textContent = err.message;
      else this.showBanner(`${err.name}: ${err.message}`);
    }
  }

  appendOutput(text: string): void {
    // route to the first output pane; the server log is a single stream
    const pane = this.outputPanes.values().next().value as HTMLElement | undefined;
    if (pane) pane.textContent += text + "\n";
  }

  showDone(values: Record<string, unknown>): void {
    this.root.textContent = "";
    const heading = this.doc.createElement("h1");
    heading.textContent = this.schema.title;
    const note = this.doc.createElement("p");
    note.className = "pf-done";
    note.textContent = "Submitted.";
    const pre = this.doc.createElement("pre");
    pre.textContent = JSON.stringify(values, Object.keys(values).sort(), 2);
    this.root.append(heading, note, pre);
  }

  showCancelled(): void {
    this.root.textContent = "";
    const note = this.doc.createElement("p");
    note.className = "pf-cancelled";
    note.textContent = "Cancelled.";
    this.root.appendChild(note);
  }

  private revalidate(name: string): void {
    const el = this.schema.elements.find((e) => e.name === name);
    const slot = this.errorSlots.get(name);
    if (!el || !slot) return;
    const rule = checkValue(el, this.drafts.get(name) ?? "");
    slot.textContent = rule ? ruleMessage(rule) : "";
  }

  private renderButtons(): HTMLElement {
    const row = this.doc.createElement("div");
    row.className = "pf-buttons";
    const submit = this.doc.createElement("button");
    submit.type = "button";
    submit.className = "pf-submit";
    submit.textContent = "Submit";
    submit.addEventListener("click", () => {
      let firstBad: string | null = null;
      for (const el of this.schema.elements) {
        if (!VALUE_KINDS.has(el.kind)) continue;
        this.revalidate(el.name);
        const rule = checkValue(el, this.drafts.get(el.name) ?? "");
        if (rule && firstBad === null) firstBad = el.name;
      }
      if (firstBad !== null) {
        const control = this.root.querySelector(`[data-control="${firstBad}"]`);
        if (control instanceof HTMLElement) control.focus();
        return;
      }
      const payload: Record<string, Draft> = {};
      for (const el of this.schema.elements) {
        if (VALUE_KINDS.has(el.kind)) {
          payload[el.name] = this.drafts.get(el.name) ?? "";
        }
      }
      this.callbacks.onSubmit(payload);
    });
    const cancel = this.doc.createElement("button");
    cancel.type = "button";
    cancel.className = "pf-cancel";
    cancel.textContent = "Cancel";
    cancel.addEventListener("click", () => this.callbacks.onCancel());
    row.append(submit, cancel);
    return row;
  }

  private renderElement(el: WireElement): HTMLElement {
    const wrap = this.doc.createElement("div");
    wrap.className = `pf-element pf-${el.kind}`;
    wrap.dataset.name = el.name;

    if (el.kind === "label") {
      const p = this.doc.createElement("p");
      p.textContent = el.label;
      wrap.appendChild(p);
      return wrap;
    }
    if (el.kind === "html") {
      wrap.appendChild(sanitizeHtml(el.label, this.doc));
      return wrap;
    }
    if (el.kind === "output") {
      const pane = this.doc.createElement("pre");
      pane.className = "pf-output-pane";
      pane.dataset.output = el.name;
      wrap.appendChild(pane);
      this.outputPanes.set(el.name, pane);
      return wrap;
    }
    if (el.kind === "action") {
      const btn = this.doc.createElement("button");
      btn.type = "button";
      btn.dataset.control = el.name;
      btn.textContent = el.label;
      btn.addEventListener("click", () => this.callbacks.onAction(el.name));
      wrap.appendChild(btn);
      return wrap;
    }

    const label = this.doc.createElement("label");
    label.textContent = el.label;
    wrap.appendChild(label);
    if (el.help) {
      const help = this.doc.createElement("small");
      help.className = "pf-help";
      help.textContent = el.help;
      wrap.appendChild(help);
    }

    this.drafts.set(el.name, initialDraft(el));
    const slot = this.doc.createElement("span");
    slot.className = "pf-error";
    this.errorSlots.set(el.name, slot);

    wrap.appendChild(this.renderControl(el));
    wrap.appendChild(slot);
    return wrap;
  }

  private renderControl(el: WireElement): HTMLElement {
    const doc = this.doc;
    const update = (value: Draft) => {
      this.drafts.set(el.name, value);
      this.revalidate(el.name);
    };

    if (el.kind === "check") {
      const box = doc.createElement("input");
      box.type = "checkbox";
      box.dataset.control = el.name;
      box.checked = this.drafts.get(el.name) === true;
      box.addEventListener("change", () => update(box.checked));
      return box;
    }

    if (el.kind === "dropdown") {
      const select = doc.createElement("select");
      select.dataset.control = el.name;
      for (const opt of el.constraints.options ?? []) {
        const option = doc.createElement("option");
        option.value = opt;
        option.textContent = opt;
        select.appendChild(option);
      }
      select.value = String(this.drafts.get(el.name) ?? "");
      select.addEventListener("change", () => update(select.value));
      return select;
    }

    if (el.kind === "select_multiple") {
      const select = doc.createElement("select");
      select.multiple = true;
      select.dataset.control = el.name;
      const chosen = new Set(this.drafts.get(el.name) as string[]);
      for (const opt of el.constraints.options ?? []) {
        const option = doc.createElement("option");
        option.value = opt;
        option.textContent = opt;
        option.selected = chosen.has(opt);
        select.appendChild(option);
      }
      select.addEventListener("change", () => {
        // keep declared option order, matching the server's canonical form
        const picked = new Set(
          Array.from(select.selectedOptions).map((o) => o.value),
        );
        update((el.constraints.options ?? []).filter((o) => picked.has(o)));
      });
      return select;
    }

    if (el.kind === "file_upload") {
      const input = doc.createElement("input");
      input.type = "file";
      input.dataset.control = el.name;
      input.addEventListener("change", () => {
        const file = input.files?.[0];
        if (file) this.callbacks.onUpload(el.name, file);
      });
      return input;
    }

    if (el.kind === "text_area") {
      const area = doc.createElement("textarea");
      area.dataset.control = el.name;
      area.value = String(this.drafts.get(el.name) ?? "");
      area.addEventListener("input", () => update(area.value));
      return area;
    }

    if (el.kind === "int_range" || el.kind === "float_range") {
      const holder = doc.createElement("span");
      const slider = doc.createElement("input");
      slider.type = "range";
      const cs = el.constraints;
      if (cs.min !== null) slider.min = String(cs.min);
      if (cs.max !== null) slider.max = String(cs.max);
      slider.step = cs.step !== null ? String(cs.step) : "any";
      const text = doc.createElement("input");
      text.type = "text";
      text.dataset.control = el.name;
      text.value = String(this.drafts.get(el.name) ?? "");
      if (text.value !== "") slider.value = text.value;
      slider.addEventListener("input", () => {
        text.value = slider.value;
        update(slider.value);
      });
      text.addEventListener("input", () => {
        update(text.value);
        const n = Number(text.value);
        if (Number.isFinite(n)) slider.value = text.value;
      });
      holder.append(slider, text);
      return holder;
    }

    // text, path, and the four numeric text kinds
    const input = doc.createElement("input");
    input.type = "text";
    input.dataset.control = el.name;
    input.value = String(this.drafts.get(el.name) ?? "");
    input.addEventListener("input", () => update(input.value));
    return input;
  }
}
