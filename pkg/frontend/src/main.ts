/**
 * Browser entry point: fetch the schema, render the form, and wire the
 * controls to the HTTP endpoints.
 */

import { FormApi, pollOutputs, SessionClosedError } from "./api";
import { FormView } from "./render";
import { SUPPORTED_SCHEMA_VERSION } from "./types";

async function boot(): Promise<void> {
  const api = new FormApi("");
  const mount = document.getElementById("app");
  if (!mount) throw new Error("missing #app mount point");

  let schema;
  try {
    schema = await api.fetchSchema();
  } catch (err) {
    mount.textContent = "Could not reach the form server. Reload to retry.";
    return;
  }
  if (schema.version !== SUPPORTED_SCHEMA_VERSION) {
    mount.textContent = `Unsupported schema version ${schema.version}.`;
    return;
  }

  let stopPolling = () => {};
  const view: FormView = new FormView(document, schema, {
    onSubmit: async (values) => {
      view.hideBanner();
      try {
        const resp = await api.submitValues(values);
        if ("error" in resp) {
          view.showBanner("The session is closed.");
        } else if (resp.ok) {
          stopPolling();
          view.showDone(values);
        } else {
          view.showErrors(resp.errors);
        }
      } catch (err) {
        if (err instanceof SessionClosedError) {
          view.showBanner("The session is closed.");
        } else {
          view.showBanner("Network error while submitting; try again.");
        }
      }
    },
    onCancel: async () => {
      try {
        await api.cancel();
      } catch (err) {
        // the session is going away either way
      }
      stopPolling();
      view.showCancelled();
    },
    onAction: async (name) => {
      try {
        const resp = await api.invokeAction(name);
        for (const line of resp.output_lines ?? []) view.appendOutput(line);
      } catch (err) {
        view.showBanner("Network error while running the action; try again.");
      }
    },
    onUpload: async (name, file) => {
      try {
        const resp = await api.upload(name, file);
        if (!resp.ok) {
          view.showErrors(
            (resp as { errors?: { name: string; rule: string; message: string }[] })
              .errors ?? [],
          );
        }
      } catch (err) {
        view.showBanner("Network error while uploading; try again.");
      }
    },
  });
  mount.textContent = "";
  mount.appendChild(view.root);
  stopPolling = pollOutputs(api, (chunk) => view.appendOutput(chunk.text));
}

boot();
