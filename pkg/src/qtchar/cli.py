"""Command-line interface.

Exit codes: 0 success, 2 invalid flags, 3 window too shallow (the message
states the required depth), 4 internal assertion failure.  All output is
byte-deterministic for fixed flags and engine version.
"""

from __future__ import annotations

import argparse
import json
import sys
from math import ceil

from .cartan import CartanError
from .characters import (
    CharacterResult,
    WindowTooShallow,
    fundamental_character,
    kr_character,
    tsystem_check,
)
from .oplus import run_fundamental_z, shift_s, trace_steps
from .qcluster import SeedConsistencyError
from .quiver import WindowError
from .qtorus import QTPoly, poly_to_json, poly_to_latex, poly_to_text, spectral_shift
from .session import make_cartan, serve_http, serve_stdio

EXIT_OK = 0
EXIT_FLAGS = 2
EXIT_SHALLOW = 3
EXIT_INTERNAL = 4


def _cartan_for(type_name: str, node: int, r: int | None, horizon: int | None = None):
    """Pick the height function so that (node, r) lies on the lattice."""
    cartan = make_cartan(type_name, seed_parity=1, horizon=horizon)
    if node not in cartan.lie_type.nodes:
        raise CartanError(f"node {node} out of range for {type_name}")
    if r is not None and not cartan.in_lattice(node, r):
        cartan = make_cartan(type_name, seed_parity=0, horizon=horizon)
        if not cartan.in_lattice(node, r):
            raise CartanError(f"({node}, {r}) is not reachable by any height function")
    return cartan


def _emit_poly(poly: QTPoly, fmt: str, meta: dict) -> str:
    if fmt == "json":
        return json.dumps({**meta, **poly_to_json(poly)}, sort_keys=True)
    if fmt == "latex":
        return poly_to_latex(poly)
    return poly_to_text(poly)


def cmd_chars(args) -> int:
    node = args.node
    cartan = _cartan_for(args.type, node, args.r, horizon=args.horizon)
    xi = cartan.xi(node)
    r = args.r if args.r is not None else -xi - 2 * cartan.h_prime

    if args.basis == "z":
        r0 = -xi - 2 * cartan.h_prime
        report = run_fundamental_z(cartan, node, r_floor=args.depth)
        poly = report["chi"] if r == r0 else shift_s(report["chi"], r - r0)
        meta = {"node": node, "r": r, "multidegree": list(report["multidegree"])}
        print(_emit_poly(poly, args.format, meta))
        return EXIT_OK

    k = args.kr if args.kr is not None else 1
    if k < 1:
        raise CartanError("--kr must be a positive level")
    top = -xi - 2 * (k - 1)
    if r > top:
        raise CartanError(f"level {k} characters need r <= {top}")
    if args.truncated:
        m = (top - r) // 2
        result = kr_character(cartan, node, top, m, r_floor=args.depth)
    elif k == 1:
        result = fundamental_character(cartan, node, r, r_floor=args.depth)
    else:
        m = max((top - r) // 2, ceil(cartan.h / 2))
        deep = kr_character(cartan, node, top, m, r_floor=args.depth)
        poly = spectral_shift(deep.poly, r - deep.r)
        result = CharacterResult(
            poly=poly, basis="Y", truncated=False, node=node, r=r, level=k, window=deep.window
        )
    meta = {
        "node": result.node,
        "r": result.r,
        "level": result.level,
        "truncated": result.truncated,
        "window": result.window,
    }
    print(_emit_poly(result.poly, args.format, meta))
    return EXIT_OK


def cmd_tsystem(args) -> int:
    cartan = _cartan_for(args.type, args.node, args.r, horizon=args.horizon)
    report = tsystem_check(cartan, args.node, args.k, r=args.r, r_floor=args.depth)
    printable = {
        key: (str(value) if key in ("alpha", "gamma", "alpha_extracted", "gamma_extracted") else value)
        for key, value in report.items()
    }
    print(json.dumps(printable, sort_keys=True))
    return EXIT_OK if report["holds"] else 1


def cmd_trace(args) -> int:
    if not args.sequence.startswith("S"):
        raise CartanError(f"unknown sequence {args.sequence!r}; expected S<node>")
    node = int(args.sequence.lstrip("S_"))
    if args.basis != "z":
        raise CartanError("trace is defined on the z-basis seed")
    cartan = make_cartan(args.type, seed_parity=1, horizon=args.horizon)
    if node not in cartan.lie_type.nodes:
        raise CartanError(f"node {node} out of range")
    steps = trace_steps(cartan, node, r_floor=args.depth)
    if args.format == "json":
        print(json.dumps({"type": args.type, "sequence": args.sequence, "steps": steps}, sort_keys=True))
    else:
        for s in steps:
            deg = "+".join(f"e{idx+1}" for idx, d in enumerate(s["multidegree"]) for _ in range(d)) or "0"
            print(
                f"step {s['step']:2d}  mutate {tuple(s['vertex'])}  "
                f"monomials={s['monomials']:3d}  terms={s['terms']:3d}  deg={deg}"
            )
            if args.format == "latex":
                print(f"  {s['latex']}")
    return EXIT_OK


def cmd_tables(args) -> int:
    cartan = make_cartan(args.type, seed_parity=args.seed_parity, horizon=args.horizon)
    lt = cartan.lie_type
    s = cartan.series
    h = s.horizon
    payload = {
        "type": str(lt),
        "xi": list(cartan.height.xi),
        "horizon": h,
        "convention": cartan.convention.value,
        "coxeter": lt.coxeter_number(),
        "cartan_matrix": [[2 if i == j else (-1 if j in lt.neighbors(i) else 0) for j in lt.nodes] for i in lt.nodes],
        "ctilde": {f"{i},{j}": [s.ctilde(i, j, m) for m in range(1, h + 1)] for i in lt.nodes for j in lt.nodes},
        "npair": {
            f"{i},{j}": {str(m): s.npair(i, j, m, cartan.convention) for m in range(-h + 1, h)}
            for i in lt.nodes
            for j in lt.nodes
        },
        "fpair": {
            f"{i},{j}": {str(m): s.fpair_printed(i, j, m) for m in range(-h + 1, h)}
            for i in lt.nodes
            for j in lt.nodes
        },
    }
    print(json.dumps(payload, sort_keys=True))
    return EXIT_OK


def cmd_serve(args) -> int:
    if args.stdio:
        return serve_stdio()
    return serve_http(args.port, static_dir=args.static)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qtchar",
        description="exact deformed characters via quantum cluster mutation",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    chars = sub.add_parser("chars", help="compute a character")
    chars.add_argument("--type", required=True, help="A<n>, D<n>, E6, E7 or E8")
    chars.add_argument("--node", type=int, required=True)
    chars.add_argument("--r", type=int, default=None)
    chars.add_argument("--kr", type=int, default=None, help="level (default 1: fundamental)")
    chars.add_argument("--basis", choices=("Y", "z"), default="Y")
    chars.add_argument("--truncated", action="store_true")
    chars.add_argument("--format", choices=("json", "latex", "text"), default="text")
    chars.add_argument("--depth", type=int, default=None, help="window floor r_floor")
    chars.add_argument("--horizon", type=int, default=None)
    chars.set_defaults(func=cmd_chars)

    tsys = sub.add_parser("tsystem", help="verify one T-system identity")
    tsys.add_argument("--type", required=True)
    tsys.add_argument("--node", type=int, required=True)
    tsys.add_argument("--k", type=int, required=True)
    tsys.add_argument("--r", type=int, default=None)
    tsys.add_argument("--depth", type=int, default=None)
    tsys.add_argument("--horizon", type=int, default=None)
    tsys.set_defaults(func=cmd_tsystem)

    trace = sub.add_parser("trace", help="step dump of a named mutation sequence")
    trace.add_argument("--type", required=True)
    trace.add_argument("--sequence", required=True, help="S<node>, e.g. S2")
    trace.add_argument("--basis", choices=("z",), default="z")
    trace.add_argument("--format", choices=("json", "latex", "text"), default="text")
    trace.add_argument("--depth", type=int, default=None)
    trace.add_argument("--horizon", type=int, default=None)
    trace.set_defaults(func=cmd_trace)

    tables = sub.add_parser("tables", help="export the integer pairing tables as JSON")
    tables.add_argument("--type", required=True)
    tables.add_argument("--horizon", type=int, default=None)
    tables.add_argument("--seed-parity", type=int, default=1, choices=(0, 1))
    tables.set_defaults(func=cmd_tables)

    serve = sub.add_parser("serve", help="session service (stdio or HTTP)")
    serve.add_argument("--port", type=int, default=8642)
    serve.add_argument("--stdio", action="store_true")
    serve.add_argument("--static", default=None, help="directory of UI assets to serve")
    serve.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_FLAGS if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except WindowTooShallow as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SHALLOW
    except (CartanError, WindowError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FLAGS
    except (SeedConsistencyError, AssertionError) as exc:
        print(f"internal assertion failed: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
