"""Interactive mutation sessions: one current seed, an undo stack, and a
small newline-delimited JSON request protocol shared by the stdio and HTTP
transports.

Requests are objects {"op": ..., ...}; every response carries "ok" and, for
seed-changing operations, the snapshot of the resulting seed.  Malformed
requests leave the session unchanged.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from typing import Any

from .cartan import CartanData, CartanError, LieType, SignConvention, default_height
from .oplus import multidegree
from .qcluster import QuantumSeed, apply_sequence, initial_seed, sequence_S, sequence_Si
from .quiver import FrozenVertexError, WindowError
from .qtorus import NotDivisible, poly_to_json, poly_to_latex

DEFAULT_UNDO_LIMIT = 64


class SessionError(ValueError):
    pass


def _convention_from_env() -> SignConvention:
    name = os.environ.get("QTCHAR_SIGN", "").strip().lower()
    if not name:
        return SignConvention.FLIPPED
    try:
        return SignConvention(name)
    except ValueError as exc:
        raise SessionError(f"QTCHAR_SIGN must be 'printed' or 'flipped', not {name!r}") from exc


def make_cartan(
    type_name: str,
    seed_parity: int | None = None,
    horizon: int | None = None,
    convention: SignConvention | None = None,
) -> CartanData:
    lt = LieType.parse(type_name)
    height = default_height(lt, seed_parity if seed_parity is not None else 1)
    return CartanData.make(
        lt,
        height,
        horizon=horizon,
        convention=convention if convention is not None else _convention_from_env(),
    )


@dataclass
class SessionState:
    """One interactive session: current seed plus bounded undo history."""

    session_id: str
    cartan: CartanData
    seed: QuantumSeed
    config: dict
    undo_stack: list[QuantumSeed] = field(default_factory=list)
    undo_limit: int = DEFAULT_UNDO_LIMIT

    def push(self, new_seed: QuantumSeed):
        self.undo_stack.append(self.seed)
        if len(self.undo_stack) > self.undo_limit:
            self.undo_stack.pop(0)
        self.seed = new_seed

    def snapshot(self) -> dict:
        seed = self.seed
        win = seed.window
        return {
            "session": self.session_id,
            "config": self.config,
            "window": win.to_json(),
            "arrows": seed.B.to_json(),
            "history": [list(v) for v in seed.history],
            "variables": {
                f"{i},{r}": {
                    "poly": poly_to_json(seed.X[(i, r)]),
                    "latex": poly_to_latex(seed.X[(i, r)]),
                    "terms": len(seed.X[(i, r)]),
                    "multidegree": list(multidegree(self.cartan, seed.X[(i, r)]))
                    if seed.torus.basis == "z"
                    else None,
                }
                for (i, r) in win.vertices
            },
        }


class SessionHub:
    """Holds independent sessions; each processes its requests in order."""

    def __init__(self):
        self.sessions: dict[str, SessionState] = {}
        self._counter = 0

    def handle(self, request: dict) -> dict:
        try:
            return self._dispatch(request)
        except (
            SessionError,
            CartanError,
            WindowError,
            FrozenVertexError,
            NotDivisible,
            KeyError,
            TypeError,
            ValueError,
        ) as exc:
            return {"ok": False, "error": f"{type(exc).__name__}: {exc}"}

    def _dispatch(self, request: dict) -> dict:
        if not isinstance(request, dict) or "op" not in request:
            raise SessionError("request must be an object with an 'op' field")
        op = request["op"]
        if op == "init":
            return self._init(request)
        state = self.sessions.get(request.get("session", ""))
        if state is None:
            raise SessionError("unknown session; send an 'init' request first")
        if op == "mutate":
            vertex = tuple(request["vertex"])
            self._require_mutable(state, vertex)
            state.push(state.seed.mutate(vertex, check=bool(request.get("check", False))))
            return {"ok": True, "snapshot": state.snapshot()}
        if op == "undo":
            if not state.undo_stack:
                raise SessionError("nothing to undo")
            state.seed = state.undo_stack.pop()
            return {"ok": True, "snapshot": state.snapshot()}
        if op == "apply_sequence":
            seq = self._resolve_sequence(state, request)
            state.push(apply_sequence(state.seed, seq, check=bool(request.get("check", False))))
            return {"ok": True, "snapshot": state.snapshot(), "steps": [list(v) for v in seq]}
        if op == "get_var":
            vertex = tuple(request["vertex"])
            if vertex not in state.seed.window:
                raise SessionError(f"vertex {vertex} not in window")
            poly = state.seed.X[vertex]
            return {
                "ok": True,
                "vertex": list(vertex),
                "poly": poly_to_json(poly),
                "latex": poly_to_latex(poly),
                "terms": len(poly),
                "multidegree": list(multidegree(state.cartan, poly))
                if state.seed.torus.basis == "z"
                else None,
            }
        if op == "snapshot":
            return {"ok": True, "snapshot": state.snapshot()}
        if op == "sequence":
            seq = self._resolve_sequence(state, request)
            return {"ok": True, "steps": [list(v) for v in seq]}
        raise SessionError(f"unknown op {op!r}")

    def _require_mutable(self, state: SessionState, vertex: tuple):
        if vertex not in state.seed.window:
            raise SessionError(f"vertex {vertex} not in window")
        if state.seed.window.is_frozen(vertex):
            raise FrozenVertexError(f"vertex {vertex} is frozen")

    def _resolve_sequence(self, state: SessionState, request: dict):
        if "vertices" in request:
            return [tuple(v) for v in request["vertices"]]
        name = request.get("name", "")
        if name.startswith("S_"):
            return sequence_Si(state.cartan, int(name[2:]))
        if name == "S":
            return sequence_S(
                state.cartan, state.seed.window, repetitions=int(request.get("repetitions", 1))
            )
        raise SessionError("apply_sequence needs 'vertices' or a sequence 'name'")

    def _init(self, request: dict) -> dict:
        type_name = request.get("type", "D4")
        basis = request.get("basis", "z")
        seed_parity = request.get("seed_parity")
        cartan = make_cartan(type_name, seed_parity=seed_parity, horizon=request.get("horizon"))
        if basis == "z":
            node = int(request.get("node", cartan.column_order()[0]))
            depth = request.get("depth")
            from .oplus import default_z_floor, z_seed

            r_floor = int(depth) if depth is not None else default_z_floor(cartan, node)
            seed = z_seed(cartan, r_floor)
        elif basis in ("u", "Y"):
            depth = request.get("depth")
            r_floor = int(depth) if depth is not None else -2 * cartan.h_prime - 4
            seed = initial_seed(cartan, "gminus", r_floor)
        else:
            raise SessionError(f"unknown basis {basis!r}")
        self._counter += 1
        sid = request.get("session") or f"s{self._counter}"
        state = SessionState(
            session_id=sid,
            cartan=cartan,
            seed=seed,
            config={
                "type": type_name,
                "xi": list(cartan.height.xi),
                "basis": basis,
                "r_floor": seed.window.r_floor,
                "convention": cartan.convention.value,
                "horizon": cartan.series.horizon,
            },
            undo_limit=int(request.get("undo_limit", DEFAULT_UNDO_LIMIT)),
        )
        self.sessions[sid] = state
        return {"ok": True, "snapshot": state.snapshot()}


def serve_stdio(stdin=None, stdout=None) -> int:
    """Newline-delimited JSON requests on stdin, responses on stdout."""
    import sys

    stdin = stdin if stdin is not None else sys.stdin
    stdout = stdout if stdout is not None else sys.stdout
    hub = SessionHub()
    for line in stdin:
        line = line.strip()
        if not line:
            continue
        try:
            request = json.loads(line)
        except json.JSONDecodeError as exc:
            response: dict[str, Any] = {"ok": False, "error": f"bad json: {exc}"}
        else:
            response = hub.handle(request)
        stdout.write(json.dumps(response, sort_keys=True) + "\n")
        stdout.flush()
    return 0


def serve_http(port: int, static_dir: str | None = None) -> int:
    """The same protocol over HTTP POST /api (one JSON object per request),
    plus static assets for the explorer UI."""
    from http.server import HTTPServer, SimpleHTTPRequestHandler

    hub = SessionHub()

    class Handler(SimpleHTTPRequestHandler):
        def __init__(self, *args, **kwargs):
            kwargs["directory"] = static_dir or os.getcwd()
            super().__init__(*args, **kwargs)

        def log_message(self, *args):
            pass

        def do_POST(self):
            if self.path.rstrip("/") != "/api":
                self.send_error(404)
                return
            length = int(self.headers.get("Content-Length", 0))
            body = self.rfile.read(length)
            try:
                request = json.loads(body)
            except json.JSONDecodeError as exc:
                response = {"ok": False, "error": f"bad json: {exc}"}
            else:
                response = hub.handle(request)
            payload = json.dumps(response, sort_keys=True).encode()
            self.send_response(200)
            self.send_header("Content-Type", "application/json")
            self.send_header("Content-Length", str(len(payload)))
            self.send_header("Access-Control-Allow-Origin", "*")
            self.end_headers()
            self.wfile.write(payload)

        def do_OPTIONS(self):
            self.send_response(204)
            self.send_header("Access-Control-Allow-Origin", "*")
            self.send_header("Access-Control-Allow-Methods", "POST, GET, OPTIONS")
            self.send_header("Access-Control-Allow-Headers", "Content-Type")
            self.end_headers()

    server = HTTPServer(("127.0.0.1", port), Handler)
    print(f"serving on http://127.0.0.1:{server.server_address[1]}/ (POST /api)")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    return 0
