// Protocol conformance against the real engine: a child `serve --stdio`
// process is driven through the UI's state machine, and the resulting
// session must reproduce the engine's own trace command byte for byte.

import { afterAll, beforeAll, describe, expect, it } from "vitest";
import { ChildProcessWithoutNullStreams, execFileSync, spawn } from "node:child_process";
import { createInterface, Interface } from "node:readline";

import { ViewState, replayClickLog, vertexKey } from "../src/model.js";
import { Response, SessionClient, Transport, Vertex } from "../src/protocol.js";

const PYTHON = process.env.QTCHAR_PYTHON ?? "python3";

class StdioServer {
  proc: ChildProcessWithoutNullStreams;
  lines: Interface;
  queue: ((line: string) => void)[] = [];

  constructor() {
    this.proc = spawn(PYTHON, ["-m", "qtchar.cli", "serve", "--stdio"], {
      stdio: ["pipe", "pipe", "inherit"],
    });
    this.lines = createInterface({ input: this.proc.stdout });
    this.lines.on("line", (line) => {
      const waiter = this.queue.shift();
      if (waiter) waiter(line);
    });
  }

  transport(): Transport {
    return (request) =>
      new Promise((resolve, reject) => {
        this.queue.push((line) => {
          try {
            resolve(JSON.parse(line) as Response);
          } catch (err) {
            reject(err);
          }
        });
        this.proc.stdin.write(JSON.stringify(request) + "\n");
      });
  }

  close(): void {
    this.proc.stdin.end();
    this.proc.kill();
  }
}

interface TraceStep {
  step: number;
  vertex: Vertex;
  quiver: [Vertex, Vertex, number][];
  variable: { basis: string; terms: unknown[] };
  monomials: number;
  terms: number;
  multidegree: number[];
}

let server: StdioServer;
let trace: TraceStep[];

beforeAll(() => {
  server = new StdioServer();
  const out = execFileSync(
    PYTHON,
    ["-m", "qtchar.cli", "trace", "--type", "D4", "--sequence", "S2", "--format", "json"],
    { encoding: "utf-8", maxBuffer: 64 * 1024 * 1024 },
  );
  trace = JSON.parse(out).steps as TraceStep[];
}, 120_000);

afterAll(() => {
  server.close();
});

describe("explorer session conformance for the D4 S_2 run", () => {
  it("replays the click log to a snapshot identical to the trace output", async () => {
    const client = new SessionClient(server.transport(), "live");
    const view = new ViewState(client);
    await view.start({ type: "D4", node: 2 });
    const seq = await view.loadSequence("S_2");
    expect(seq.length).toBe(15);

    // frozen-vertex clicks are rejected client-side: no request goes out
    const before = client.requestCount;
    expect(await view.clickMutate([2, 2])).toBeNull();
    expect(await view.clickMutate([2, -6])).toBeNull();
    expect(client.requestCount).toBe(before);
    expect(view.rejectedClicks).toBe(2);

    const final = await view.runAll();
    expect(final).not.toBeNull();
    expect(view.cursor).toBe(15);
    expect(view.clickLog.map((e) => (e.kind === "mutate" ? e.vertex : null))).toEqual(
      trace.map((s) => s.vertex),
    );

    // the final snapshot agrees with the trace: arrows equal the last
    // step's quiver, and every mutated vertex holds the polynomial of the
    // last trace step that touched it
    const lastByVertex = new Map<string, TraceStep>();
    for (const step of trace) lastByVertex.set(vertexKey(step.vertex), step);
    expect(final!.arrows).toEqual(trace[trace.length - 1].quiver);
    for (const [key, step] of lastByVertex) {
      const info = final!.variables[key];
      expect(info, key).toBeDefined();
      expect(info.poly).toEqual(step.variable);
      expect(info.multidegree).toEqual(step.multidegree);
      expect(info.poly.terms.length).toBe(step.terms);
    }
    // the top variable is the 28-monomial fundamental character with
    // multidegree zero
    const top = final!.variables["2,0"];
    expect(top.terms).toBe(28);
    expect(top.multidegree).toEqual([0, 0, 0, 0]);

    // replaying the recorded click log on a fresh session reproduces the
    // final snapshot exactly (ignoring the session id)
    const replayClient = new SessionClient(server.transport(), "replay");
    const replayed = await replayClickLog(replayClient, { type: "D4", node: 2 }, view.clickLog);
    const strip = (snap: object) => JSON.stringify({ ...snap, session: "" });
    expect(strip(replayed)).toBe(strip(final!));
  }, 120_000);

  it("undo restores the pre-mutation snapshot", async () => {
    const client = new SessionClient(server.transport(), "undo-check");
    const view = new ViewState(client);
    const fresh = await view.start({ type: "D4", node: 2 });
    await view.clickMutate([2, 0]);
    const back = await view.clickUndo();
    expect(JSON.stringify(back)).toBe(JSON.stringify(fresh));
  }, 60_000);

  it("step counter follows the schedule and never exceeds the bound", async () => {
    const client = new SessionClient(server.transport(), "steps");
    const view = new ViewState(client);
    await view.start({ type: "D4", node: 2 });
    const seq = await view.loadSequence("S_2");
    const bound = 4 * (3 * 4) / 2; // n h'(h'+1)/2 for this type
    expect(seq.length).toBeLessThanOrEqual(bound);
    await view.stepSequence();
    expect(view.cursor).toBe(1);
    expect(view.snapshot!.history).toEqual([[2, 0]]);
  }, 60_000);
});
