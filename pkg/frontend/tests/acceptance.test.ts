// End-to-end criteria against a live service: client/server grouping
// parity at scale and the full steering round trip.

import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { SessionClient, rangesFromWire } from "../src/api.js";
import { groupSolutions, violation, type PreferenceRanges, type Solution } from "../src/grouping.js";
import { startServer, waitFor, type ServerHandle } from "./server.js";

async function runToBudget(client: SessionClient, budget: number): Promise<void> {
  await client.start();
  // the loop pauses once after initial sampling for first preferences
  await waitFor(async () => {
    const s = await client.getState();
    if (s.run_status === "paused" && s.eval_count < budget) {
      await client.start();
    }
    return s.eval_count >= budget && s.run_status !== "running";
  }, 120_000, `eval_count to reach ${budget}`);
}

describe("grouping parity with the server (A10)", () => {
  let server: ServerHandle;
  let client: SessionClient;
  let solutions: Solution[];

  beforeAll(async () => {
    server = await startServer({ budget: 5000, seed: 7 });
    client = new SessionClient(server.baseUrl);
    await runToBudget(client, 5000);
    solutions = await client.getSolutions(true);
  }, 180_000);

  afterAll(async () => {
    await server.close();
  });

  it("matches GET /grouped for 50 random slider settings on 5000 solutions", async () => {
    expect(solutions.length).toBe(5000);

    // data extent per objective, as the sliders would see it
    const k = 2;
    const lo = [Infinity, Infinity];
    const hi = [-Infinity, -Infinity];
    for (const s of solutions) {
      for (let i = 0; i < k; i++) {
        lo[i] = Math.min(lo[i], s.f[i]);
        hi[i] = Math.max(hi[i], s.f[i]);
      }
    }

    let seed = 42;
    const rand = () => {
      // deterministic LCG so failures are reproducible
      seed = (seed * 1103515245 + 12345) % 2147483648;
      return seed / 2147483648;
    };

    let worstLatency = 0;
    for (let trial = 0; trial < 50; trial++) {
      const ranges: PreferenceRanges = { lower: [], upper: [] };
      for (let i = 0; i < k; i++) {
        const a = lo[i] + rand() * (hi[i] - lo[i]);
        const b = lo[i] + rand() * (hi[i] - lo[i]);
        // occasionally leave a side open, as a parked slider handle would
        ranges.lower.push(rand() < 0.15 ? -Infinity : Math.min(a, b));
        ranges.upper.push(rand() < 0.15 ? Infinity : Math.max(a, b));
      }

      const t0 = performance.now();
      const view = groupSolutions(solutions, ranges);
      const latency = performance.now() - t0;
      worstLatency = Math.max(worstLatency, latency);

      const serverGroups = await client.getGrouped(ranges, true);
      expect(serverGroups.length).toBe(view.groups.length);
      for (let c = 0; c < view.groups.length; c++) {
        expect(
          view.groups[c].map((s) => s.eval_index),
          `group ${c} of trial ${trial}`,
        ).toEqual(serverGroups[c].eval_indices);
        view.groups[c].forEach((s, j) => {
          const mine = view.magnitudes.get(s.eval_index)!;
          const theirs = serverGroups[c].magnitudes[j];
          expect(Math.abs(mine - theirs)).toBeLessThanOrEqual(
            1e-12 * Math.max(1, Math.abs(theirs)),
          );
        });
      }
    }
    // regroup latency budget per slider event
    expect(worstLatency).toBeLessThan(100);
  }, 120_000);
});

describe("steering round trip (A11)", () => {
  let server: ServerHandle;
  let client: SessionClient;

  beforeAll(async () => {
    server = await startServer({ budget: 2000, seed: 1 });
    client = new SessionClient(server.baseUrl);
  }, 60_000);

  afterAll(async () => {
    await server.close();
  });

  it("apply -> start -> concentrate -> stop, each control visible in /state", async () => {
    const box: PreferenceRanges = { lower: [0.0, 0.0], upper: [0.5, 0.5] };
    const inBox = (sols: Solution[]) =>
      sols.filter((s) => violation(s.f, box).violatedCount === 0).length;

    // apply on the fresh paused run; visible immediately
    await client.postRanges(box);
    let state = await client.getState();
    expect(rangesFromWire(state.ranges)).toEqual(box);

    // start; first pause comes after initial sampling
    await client.start();
    await waitFor(async () => {
      const s = await client.getState();
      return s.run_status === "paused" && s.eval_count >= 100;
    }, 30_000, "first-iteration pause");
    const early = inBox((await client.getState()).solutions);

    // run on with preferences in force
    await client.start();
    await waitFor(async () => (await client.getState()).eval_count >= 1200,
      60_000, "mid-run progress");

    // stop lands at the next burst boundary
    await client.stop();
    await waitFor(async () => (await client.getState()).run_status === "paused",
      10_000, "paused after stop");

    state = await client.getState();
    expect(state.eval_count).toBeGreaterThanOrEqual(1200);
    expect(state.eval_count).toBeLessThanOrEqual(2000);
    const late = inBox(state.solutions);
    expect(late).toBeGreaterThan(early);

    // budget control visible too
    await client.setBudget(state.eval_count + 50);
    expect((await client.getState()).budget).toBe(state.eval_count + 50);
  }, 120_000);

  it("events stream notifies on published snapshots", async () => {
    const events: { eval_count: number }[] = [];
    await client.subscribeEvents((ev) => events.push(ev), { limit: 1 });
    expect(events.length).toBe(1);
    expect(events[0].eval_count).toBeGreaterThan(0);
  }, 30_000);
});
