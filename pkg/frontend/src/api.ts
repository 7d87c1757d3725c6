// Typed client for the session service. All server state changes go
// through postRanges / start / stop / setBudget; everything else is
// read-only.

import type { PreferenceRanges, Solution } from "./grouping.js";

export type WireNumber = number | "inf" | "-inf";

export interface WireRanges {
  lower: WireNumber[];
  upper: WireNumber[];
}

export interface SessionState {
  run_status: "running" | "paused" | "exhausted" | "stopped";
  eval_count: number;
  budget: number;
  evals_left: number;
  avg_eval_time: number;
  estimated_time_left: number;
  elapsed_total: number;
  ranges: WireRanges;
  archive_size: number;
  solutions: Solution[];
}

export interface WireGroup {
  eval_indices: number[];
  magnitudes: number[];
}

export function numToWire(v: number): WireNumber {
  if (v === Infinity) return "inf";
  if (v === -Infinity) return "-inf";
  return v;
}

export function numFromWire(v: WireNumber): number {
  if (v === "inf") return Infinity;
  if (v === "-inf") return -Infinity;
  return v;
}

export function rangesToWire(r: PreferenceRanges): WireRanges {
  return { lower: r.lower.map(numToWire), upper: r.upper.map(numToWire) };
}

export function rangesFromWire(w: WireRanges): PreferenceRanges {
  return { lower: w.lower.map(numFromWire), upper: w.upper.map(numFromWire) };
}

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

async function check(res: Response): Promise<Response> {
  if (!res.ok) {
    const body = await res.text();
    throw new ApiError(res.status, `${res.status}: ${body}`);
  }
  return res;
}

export class SessionClient {
  constructor(public baseUrl: string) {}

  async getState(): Promise<SessionState> {
    const res = await check(await fetch(`${this.baseUrl}/state`));
    return (await res.json()) as SessionState;
  }

  async getSolutions(history = false): Promise<Solution[]> {
    const res = await check(
      await fetch(`${this.baseUrl}/solutions?history=${history}`),
    );
    const doc = (await res.json()) as { solutions: Solution[] };
    return doc.solutions;
  }

  async getGrouped(ranges: PreferenceRanges, history = false): Promise<WireGroup[]> {
    const q = encodeURIComponent(JSON.stringify(rangesToWire(ranges)));
    const res = await check(
      await fetch(`${this.baseUrl}/grouped?ranges=${q}&history=${history}`),
    );
    const doc = (await res.json()) as { groups: WireGroup[] };
    return doc.groups;
  }

  async postRanges(ranges: PreferenceRanges): Promise<void> {
    await check(
      await fetch(`${this.baseUrl}/ranges`, {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify(rangesToWire(ranges)),
      }),
    );
  }

  async start(): Promise<void> {
    await check(await fetch(`${this.baseUrl}/start`, { method: "POST" }));
  }

  async stop(): Promise<void> {
    await check(await fetch(`${this.baseUrl}/stop`, { method: "POST" }));
  }

  async setBudget(evals: number): Promise<void> {
    await check(
      await fetch(`${this.baseUrl}/budget`, {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify({ evals }),
      }),
    );
  }

  /**
   * Subscribe to snapshot notifications. Resolves when the stream closes
   * (or after `limit` events when given); fetch-streaming so it works in
   * both browsers and node.
   */
  async subscribeEvents(
    onEvent: (ev: { eval_count: number; run_status: string }) => void,
    opts: { limit?: number; signal?: AbortSignal } = {},
  ): Promise<void> {
    const url =
      opts.limit === undefined
        ? `${this.baseUrl}/events`
        : `${this.baseUrl}/events?limit=${opts.limit}`;
    const res = await check(await fetch(url, { signal: opts.signal }));
    const reader = res.body!.getReader();
    const decoder = new TextDecoder();
    let buf = "";
    for (;;) {
      const { done, value } = await reader.read();
      if (done) return;
      buf += decoder.decode(value, { stream: true });
      let nl;
      while ((nl = buf.indexOf("\n")) >= 0) {
        const line = buf.slice(0, nl).trim();
        buf = buf.slice(nl + 1);
        if (line.startsWith("data:")) {
          onEvent(JSON.parse(line.slice(5)));
        }
      }
    }
  }
}
