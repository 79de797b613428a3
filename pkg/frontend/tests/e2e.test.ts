/**
 * End-to-end: render the served schema, fill in the seven analysis
 * parameters through the DOM, submit, and confirm the server-side
 * outcome carries exactly those values. Also checks that the built
 * bundle is served at the root URL.
 */

import { afterAll, beforeAll, describe, expect, it } from "vitest";
import fs from "node:fs";
import os from "node:os";
import path from "node:path";

import { FormApi } from "../src/api";
import { FormView, type Draft } from "../src/render";
import type { WireSchema } from "../src/types";
import { PyServer } from "./helpers/pyserver";

const EXPECTED = {
  esrrf_order: 1,
  frames_per_timepoint: 250,
  magnification: 7,
  mpcorrection: true,
  ring_radius: 1.5,
  save: true,
  sensitivity: 1,
};

describe("end to end against a live server", () => {
  let server: PyServer;
  let base: string;
  let workdir: string;

  beforeAll(async () => {
    workdir = fs.mkdtempSync(path.join(os.tmpdir(), "web-ui-e2e-"));
    server = new PyServer();
    base = await server.serveDemo(workdir);
  });

  afterAll(() => {
    server.stop();
  });

  it("serves the built bundle at the root", async () => {
    const resp = await fetch(`${base}/`);
    expect(resp.status).toBe(200);
    expect(resp.headers.get("content-type")).toContain("text/html");
    const html = await resp.text();
    const match = html.match(/src="(\/static\/[^"]+\.js)"/);
    expect(match, "bundle script tag").not.toBeNull();
    const asset = await fetch(base + match![1]);
    expect(asset.status).toBe(200);
    expect(asset.headers.get("content-type")).toContain("javascript");
  });

  it("submits the analysis parameters through the rendered form", async () => {
    const api = new FormApi(base);
    const schema = (await api.fetchSchema()) as WireSchema;
    expect(schema.elements.map((e) => e.name)).toEqual(Object.keys(EXPECTED));

    let submitted: Record<string, Draft> | null = null;
    const view = new FormView(document, schema, {
      onSubmit: (values) => {
        submitted = values;
      },
      onCancel: () => {},
      onAction: () => {},
      onUpload: () => {},
    });
    document.body.appendChild(view.root);

    for (const [name, value] of Object.entries(EXPECTED)) {
      view.setDraft(name, typeof value === "boolean" ? value : String(value));
    }
    (view.root.querySelector(".pf-submit") as HTMLButtonElement).click();
    expect(submitted).not.toBeNull();

    const resp = await api.submitValues(submitted!);
    expect(resp).toEqual({ ok: true });

    const outcome = await server.outcome();
    expect(outcome.kind).toBe("Submitted");
    expect(outcome.values).toEqual(EXPECTED);

    // remembered values were persisted by the server on submit
    const saved = fs.readFileSync(path.join(workdir, "params.yml"), "utf8");
    expect(saved).toBe(
      "esrrf_order: 1\n" +
        "frames_per_timepoint: 250\n" +
        "magnification: 7\n" +
        "mpcorrection: true\n" +
        "ring_radius: 1.5\n" +
        "save: true\n" +
        "sensitivity: 1\n",
    );
  });
});
