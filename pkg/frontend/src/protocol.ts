// Typed client for the engine's session protocol.  The transport is a
// function sending one request object and resolving its response, so the
// same client runs over HTTP in the browser and over a child process's
// stdio in the tests.  The UI never computes algebra: every polynomial it
// shows is a byte-level copy of a server response.

export type Vertex = [number, number];

export type MonoEntry = [number, number, number] | ["f", number, number];

export interface PolyTerm {
  t_half: number;
  coeff: string;
  mono: MonoEntry[];
}

export interface PolyJson {
  basis: string;
  terms: PolyTerm[];
}

export interface VariableInfo {
  poly: PolyJson;
  latex: string;
  terms: number;
  multidegree: number[] | null;
}

export interface Snapshot {
  session: string;
  config: {
    type: string;
    xi: number[];
    basis: string;
    r_floor: number;
    convention: string;
    horizon: number;
  };
  window: {
    type: string;
    xi: number[];
    variant: string;
    r_floor: number;
    r_ceil: number;
    vertices: Vertex[];
    frozen: Vertex[];
  };
  arrows: [Vertex, Vertex, number][];
  history: Vertex[];
  variables: Record<string, VariableInfo>;
}

export interface OkResponse {
  ok: true;
  snapshot?: Snapshot;
  steps?: Vertex[];
  vertex?: Vertex;
  poly?: PolyJson;
  latex?: string;
  terms?: number;
  multidegree?: number[] | null;
}

export interface ErrResponse {
  ok: false;
  error: string;
}

export type Response = OkResponse | ErrResponse;

export type Transport = (request: Record<string, unknown>) => Promise<Response>;

export class SessionClient {
  private transport: Transport;
  readonly session: string;
  requestCount = 0;

  constructor(transport: Transport, session = "ui") {
    this.transport = transport;
    this.session = session;
  }

  private async send(request: Record<string, unknown>): Promise<Response> {
    this.requestCount += 1;
    return this.transport({ ...request, session: this.session });
  }

  private async sendOk(request: Record<string, unknown>): Promise<OkResponse> {
    const resp = await this.send(request);
    if (!resp.ok) throw new Error(resp.error);
    return resp;
  }

  async init(params: {
    type: string;
    basis?: string;
    node?: number;
    depth?: number;
    seed_parity?: number;
  }): Promise<Snapshot> {
    const resp = await this.sendOk({ op: "init", basis: "z", ...params });
    return resp.snapshot as Snapshot;
  }

  async mutate(vertex: Vertex): Promise<Snapshot> {
    const resp = await this.sendOk({ op: "mutate", vertex });
    return resp.snapshot as Snapshot;
  }

  async undo(): Promise<Snapshot> {
    const resp = await this.sendOk({ op: "undo" });
    return resp.snapshot as Snapshot;
  }

  async snapshot(): Promise<Snapshot> {
    const resp = await this.sendOk({ op: "snapshot" });
    return resp.snapshot as Snapshot;
  }

  async sequence(name: string): Promise<Vertex[]> {
    const resp = await this.sendOk({ op: "sequence", name });
    return resp.steps as Vertex[];
  }

  async getVar(vertex: Vertex): Promise<OkResponse> {
    return this.sendOk({ op: "get_var", vertex });
  }
}

export function httpTransport(url: string): Transport {
  return async (request) => {
    const resp = await fetch(url, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(request),
    });
    return (await resp.json()) as Response;
  };
}
