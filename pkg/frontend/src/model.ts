// View-side state: the current snapshot mirror, the click log, and the
// guided-sequence cursor.  Frozen-vertex clicks are rejected here, before
// any request is issued; everything that does go out is recorded so a whole
// interaction can be replayed against a fresh session.

import { SessionClient, Snapshot, Vertex } from "./protocol.js";

export type ClickEntry =
  | { kind: "mutate"; vertex: Vertex }
  | { kind: "undo" };

export function vertexKey(v: Vertex): string {
  return `${v[0]},${v[1]}`;
}

export function isFrozen(snapshot: Snapshot, v: Vertex): boolean {
  return snapshot.window.frozen.some(([i, r]) => i === v[0] && r === v[1]);
}

export class ViewState {
  client: SessionClient;
  snapshot: Snapshot | null = null;
  selected: Vertex | null = null;
  clickLog: ClickEntry[] = [];
  sequence: Vertex[] = [];
  sequenceName = "";
  cursor = 0;
  rejectedClicks = 0;

  constructor(client: SessionClient) {
    this.client = client;
  }

  async start(params: { type: string; node: number; depth?: number }): Promise<Snapshot> {
    this.snapshot = await this.client.init({ type: params.type, node: params.node, depth: params.depth });
    this.clickLog = [];
    this.cursor = 0;
    return this.snapshot;
  }

  /** Mutation click: frozen vertices are rejected locally with no request. */
  async clickMutate(v: Vertex): Promise<Snapshot | null> {
    if (!this.snapshot) throw new Error("no session");
    if (isFrozen(this.snapshot, v)) {
      this.rejectedClicks += 1;
      return null;
    }
    const before = this.client.requestCount;
    this.snapshot = await this.client.mutate(v);
    if (this.client.requestCount !== before + 1) throw new Error("request accounting broke");
    this.clickLog.push({ kind: "mutate", vertex: v });
    this.selected = v;
    return this.snapshot;
  }

  async clickUndo(): Promise<Snapshot> {
    this.snapshot = await this.client.undo();
    this.clickLog.push({ kind: "undo" });
    return this.snapshot;
  }

  /** Load the named schedule from the server; never computed client-side. */
  async loadSequence(name: string): Promise<Vertex[]> {
    this.sequence = await this.client.sequence(name);
    this.sequenceName = name;
    this.cursor = 0;
    return this.sequence;
  }

  nextStep(): Vertex | null {
    return this.cursor < this.sequence.length ? this.sequence[this.cursor] : null;
  }

  async stepSequence(): Promise<Snapshot | null> {
    const v = this.nextStep();
    if (!v) return null;
    const snap = await this.clickMutate(v);
    if (snap) this.cursor += 1;
    return snap;
  }

  async runAll(): Promise<Snapshot | null> {
    let snap: Snapshot | null = null;
    while (this.nextStep()) {
      snap = await this.stepSequence();
    }
    return snap;
  }
}

/** Replay a recorded click log against a fresh session; the result must be
 * byte-identical to the live run (checked in the tests). */
export async function replayClickLog(
  client: SessionClient,
  params: { type: string; node: number; depth?: number },
  log: ClickEntry[],
): Promise<Snapshot> {
  let snap = await client.init({ type: params.type, node: params.node, depth: params.depth });
  for (const entry of log) {
    snap = entry.kind === "mutate" ? await client.mutate(entry.vertex) : await client.undo();
  }
  return snap;
}
