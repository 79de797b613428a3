/**
 * Thin client for the form server's HTTP surface.
 */

import type { SubmitResponse, WireSchema } from "./types";

export interface OutputChunk {
  seq: number;
  text: string;
}

export class SessionClosedError extends Error {
  constructor() {
    super("session_closed");
  }
}

async function request(base: string, path: string, init?: RequestInit): Promise<unknown> {
  const resp = await fetch(base + path, init);
  if (resp.status === 409) throw new SessionClosedError();
  if (!resp.ok) throw new Error(`unexpected status ${resp.status} for ${path}`);
  return resp.json();
}

export class FormApi {
  constructor(private readonly base: string = "") {}

  async fetchSchema(): Promise<WireSchema> {
    return (await request(this.base, "/schema")) as WireSchema;
  }

  async submitValues(values: Record<string, unknown>): Promise<SubmitResponse> {
    return (await request(this.base, "/values", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(values),
    })) as SubmitResponse;
  }

  async invokeAction(name: string): Promise<{ ok: boolean; output_lines?: string[] }> {
    return (await request(this.base, `/actions/${encodeURIComponent(name)}`, {
      method: "POST",
    })) as { ok: boolean; output_lines?: string[] };
  }

  async upload(name: string, file: File): Promise<{ ok: boolean; error?: string }> {
    const body = new FormData();
    body.append("file", file, file.name);
    return (await request(this.base, `/upload/${encodeURIComponent(name)}`, {
      method: "POST",
      body,
    })) as { ok: boolean; error?: string };
  }

  async outputsSince(seq: number): Promise<{ lines: OutputChunk[]; next: number }> {
    return (await request(this.base, `/outputs?since=${seq}`)) as {
      lines: OutputChunk[];
      next: number;
    };
  }

  async cancel(): Promise<void> {
    await request(this.base, "/cancel", { method: "POST" });
  }
}

/**
 * Polls /outputs every `intervalMs` and delivers new chunks to `onChunk`.
 * Returns a stop function.
 */
export function pollOutputs(
  api: FormApi,
  onChunk: (chunk: OutputChunk) => void,
  intervalMs = 500,
): () => void {
  let seq = 0;
  let stopped = false;
  const tick = async () => {
    if (stopped) return;
    try {
      const { lines, next } = await api.outputsSince(seq);
      seq = next;
      lines.forEach(onChunk);
    } catch (err) {
      if (err instanceof SessionClosedError) {
        stopped = true;
        return;
      }
      // transient network failure: keep polling
    }
    if (!stopped) setTimeout(tick, intervalMs);
  };
  setTimeout(tick, intervalMs);
  return () => {
    stopped = true;
  };
}
