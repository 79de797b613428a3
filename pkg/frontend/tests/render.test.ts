import { beforeEach, describe, expect, it, vi } from "vitest";

import { FormView, type Draft, type ViewCallbacks } from "../src/render";
import type { WireElement, WireSchema } from "../src/types";

function el(partial: Partial<WireElement> & { name: string; kind: string }): WireElement {
  return {
    label: partial.name,
    constraints: {
      min: null, max: null, step: null, options: null,
      extensions: null, must_exist: null, max_length: null,
    },
    default: null,
    current: null,
    help: null,
    ...partial,
  } as WireElement;
}

const ALL_KINDS: WireSchema = {
  title: "Everything",
  version: 1,
  elements: [
    el({ name: "intro", kind: "label", label: "Intro" }),
    el({ name: "blurb", kind: "html", label: "<b>bold</b><script>alert(1)</script>" }),
    el({ name: "note", kind: "text", current: "hi", default: "hi" }),
    el({ name: "essay", kind: "text_area", current: "a\nb", default: "" }),
    el({
      name: "order", kind: "int_range", current: 2, default: 1,
      constraints: { min: 1, max: 4, step: null, options: null, extensions: null, must_exist: null, max_length: null },
    }),
    el({
      name: "radius", kind: "float_range", current: 1.5, default: 1.5,
      constraints: { min: 0.1, max: 3.0, step: null, options: null, extensions: null, must_exist: null, max_length: null },
    }),
    el({ name: "count", kind: "int_text", current: 7, default: 0 }),
    el({
      name: "level", kind: "bounded_int_text", current: 5, default: 5,
      constraints: { min: 0, max: 10, step: null, options: null, extensions: null, must_exist: null, max_length: null },
    }),
    el({ name: "scale", kind: "float_text", current: 0.5, default: 0.5 }),
    el({
      name: "gain", kind: "bounded_float_text", current: 1.0, default: 1.0,
      constraints: { min: 0.0, max: 2.0, step: null, options: null, extensions: null, must_exist: null, max_length: null },
    }),
    el({ name: "enabled", kind: "check", current: true, default: true }),
    el({
      name: "mode", kind: "dropdown", current: "fast", default: "fast",
      constraints: { min: null, max: null, step: null, options: ["fast", "slow"], extensions: null, must_exist: null, max_length: null },
    }),
    el({
      name: "channels", kind: "select_multiple", current: ["red"], default: [],
      constraints: { min: null, max: null, step: null, options: ["red", "green", "blue"], extensions: null, must_exist: null, max_length: null },
    }),
    el({ name: "source", kind: "path", current: "./a.tif", default: "./a.tif" }),
    el({ name: "attachment", kind: "file_upload" }),
    el({ name: "preview", kind: "action", label: "Preview" }),
    el({ name: "log", kind: "output" }),
  ],
};

function stubCallbacks(): ViewCallbacks & {
  submitted: Record<string, Draft>[];
  actions: string[];
  cancelled: number;
} {
  const callbacks = {
    submitted: [] as Record<string, Draft>[],
    actions: [] as string[],
    cancelled: 0,
    onSubmit(values: Record<string, Draft>) {
      callbacks.submitted.push(values);
    },
    onCancel() {
      callbacks.cancelled += 1;
    },
    onAction(name: string) {
      callbacks.actions.push(name);
    },
    onUpload: vi.fn(),
  };
  return callbacks;
}

function control(view: FormView, name: string): HTMLElement {
  const node = view.root.querySelector(`[data-control="${name}"]`);
  expect(node, `control for ${name}`).not.toBeNull();
  return node as HTMLElement;
}

describe("FormView", () => {
  beforeEach(() => {
    document.body.innerHTML = "";
  });

  it("renders every element in schema order", () => {
    const view = new FormView(document, ALL_KINDS, stubCallbacks());
    const names = Array.from(view.root.querySelectorAll(".pf-element")).map(
      (node) => (node as HTMLElement).dataset.name,
    );
    expect(names).toEqual(ALL_KINDS.elements.map((e) => e.name));
  });

  it("sanitizes html content", () => {
    const view = new FormView(document, ALL_KINDS, stubCallbacks());
    const html = view.root.querySelector(".pf-html")!;
    expect(html.querySelector("b")).not.toBeNull();
    expect(html.querySelector("script")).toBeNull();
    expect(html.textContent).not.toContain("alert(1)");
  });

  it("strips event handlers and javascript links", () => {
    const schema: WireSchema = {
      title: "t",
      version: 1,
      elements: [
        el({
          name: "h", kind: "html",
          label: '<a href="javascript:alert(1)" onclick="alert(2)" title="x">go</a>',
        }),
      ],
    };
    const view = new FormView(document, schema, stubCallbacks());
    const a = view.root.querySelector("a")!;
    expect(a.getAttribute("onclick")).toBeNull();
    expect(a.getAttribute("href")).toBeNull();
    expect(a.getAttribute("title")).toBe("x");
  });

  it("seeds drafts from current values", () => {
    const view = new FormView(document, ALL_KINDS, stubCallbacks());
    expect(view.getDraft("order")).toBe("2");
    expect(view.getDraft("enabled")).toBe(true);
    expect(view.getDraft("channels")).toEqual(["red"]);
    expect((control(view, "mode") as HTMLSelectElement).value).toBe("fast");
  });

  it("shows a live validation error for a bad numeric draft", () => {
    const view = new FormView(document, ALL_KINDS, stubCallbacks());
    const input = control(view, "order") as HTMLInputElement;
    input.value = "nine";
    input.dispatchEvent(new Event("input", { bubbles: true }));
    const slot = view.root
      .querySelector('[data-name="order"]')!
      .querySelector(".pf-error")!;
    expect(slot.textContent).not.toBe("");
    input.value = "3";
    input.dispatchEvent(new Event("input", { bubbles: true }));
    expect(slot.textContent).toBe("");
  });

  it("keeps select_multiple drafts in declared option order", () => {
    const view = new FormView(document, ALL_KINDS, stubCallbacks());
    const select = control(view, "channels") as HTMLSelectElement;
    for (const option of Array.from(select.options)) {
      option.selected = option.value === "blue" || option.value === "red";
    }
    select.dispatchEvent(new Event("change", { bubbles: true }));
    expect(view.getDraft("channels")).toEqual(["red", "blue"]);
  });

  it("blocks submission while a draft is invalid", () => {
    const callbacks = stubCallbacks();
    const view = new FormView(document, ALL_KINDS, callbacks);
    document.body.appendChild(view.root);
    view.setDraft("order", "99");
    (view.root.querySelector(".pf-submit") as HTMLButtonElement).click();
    expect(callbacks.submitted).toHaveLength(0);
    view.setDraft("order", "3");
    (view.root.querySelector(".pf-submit") as HTMLButtonElement).click();
    expect(callbacks.submitted).toHaveLength(1);
    const payload = callbacks.submitted[0];
    expect(payload.order).toBe("3");
    expect(payload.enabled).toBe(true);
    expect(payload.channels).toEqual(["red"]);
    // display, upload, action, and output elements carry no submitted value
    expect(payload).not.toHaveProperty("intro");
    expect(payload).not.toHaveProperty("attachment");
    expect(payload).not.toHaveProperty("preview");
    expect(payload).not.toHaveProperty("log");
  });

  it("wires action buttons and cancel", () => {
    const callbacks = stubCallbacks();
    const view = new FormView(document, ALL_KINDS, callbacks);
    (control(view, "preview") as HTMLButtonElement).click();
    expect(callbacks.actions).toEqual(["preview"]);
    (view.root.querySelector(".pf-cancel") as HTMLButtonElement).click();
    expect(callbacks.cancelled).toBe(1);
  });

  it("routes server errors to the offending element", () => {
    const view = new FormView(document, ALL_KINDS, stubCallbacks());
    view.showErrors([{ name: "note", rule: "too_long", message: "too long" }]);
    const slot = view.root
      .querySelector('[data-name="note"]')!
      .querySelector(".pf-error")!;
    expect(slot.textContent).toBe("too long");
  });

  it("appends action output to the output pane", () => {
    const view = new FormView(document, ALL_KINDS, stubCallbacks());
    view.appendOutput("hello");
    expect(view.root.querySelector('[data-output="log"]')!.textContent).toBe(
      "hello\n",
    );
  });

  it("shows the confirmation view after submission", () => {
    const view = new FormView(document, ALL_KINDS, stubCallbacks());
    view.showDone({ b: 2, a: 1 });
    expect(view.root.querySelector(".pf-done")).not.toBeNull();
    expect(view.root.querySelector("pre")!.textContent).toContain('"a": 1');
  });
});
