"""The z/f-variable layer: the coefficient torus, its inclusion maps, the
frozen-row seed, multidegrees, and the full fundamental-character run that
reproduces the worked trivalent-node computation.

Conventions: f_j is the frozen top variable of column j, stored as the
lattice point (j, 2 - xi_j); the torus pairing is the antisymmetric F-matrix
and restricts to the seed's quantization matrix.
"""

from __future__ import annotations

from .cartan import CartanData
from .characters import fundamental_character
from .qcluster import QuantumSeed, apply_sequence, initial_seed, make_y_torus, make_z_torus, sequence_Si
from .quiver import WindowError
from .qtorus import (
    Mono,
    QTPoly,
    VarId,
    mono_from_dict,
    poly_to_json,
    poly_to_latex,
    spectral_shift,
    substitute,
)


class InhomogeneousInput(ValueError):
    def __init__(self, m1: Mono, m2: Mono, d1: tuple, d2: tuple):
        super().__init__(f"monomials of different multidegree: {m1} has {d1}, {m2} has {d2}")
        self.monomials = (m1, m2)
        self.degrees = (d1, d2)


def lambda_entry(cartan: CartanData, v: VarId, w: VarId) -> int:
    """The printed skew-symmetric quantization matrix: F_{ij}(s - r)."""
    return cartan.series.fpair_printed(v[0], w[0], w[1] - v[1])


def f_index(cartan: CartanData, j: int) -> VarId:
    return (j, 2 - cartan.height[j])


def j_map(cartan: CartanData, P: QTPoly) -> QTPoly:
    """The inclusion of the Y-torus into the z-torus:
    Y_{i,r} -> z_{i,r} z_{i,r+2}^{-1} (the second factor is f_i at the top)."""
    ztor = make_z_torus(cartan)

    def image(v: VarId) -> dict[VarId, int]:
        i, r = v
        if r > -cartan.height[i]:
            raise WindowError(f"Y_({i},{r}) is above the r <= 0 lattice")
        return {(i, r): 1, (i, r + 2): -1}

    return substitute(P, ztor, image)


def j_inv(cartan: CartanData, P: QTPoly) -> QTPoly:
    """Inverse of the inclusion on its image; every monomial must have
    telescoping column exponents (each column sums to zero)."""
    ytor = make_y_torus(cartan)
    terms = []
    for m, c in P.terms.items():
        cols: dict[int, dict[int, int]] = {}
        for (i, r), e in m:
            cols.setdefault(i, {})[r] = e
        exps: dict[VarId, int] = {}
        for i, col in cols.items():
            rows = sorted(col)
            running = 0
            for idx, s in enumerate(rows):
                running += col[s]
                if running == 0:
                    continue
                nxt = rows[idx + 1] if idx + 1 < len(rows) else None
                if nxt is None:
                    raise WindowError(f"monomial {m} is not in the image of the inclusion")
                for r in range(s, nxt, 2):
                    exps[(i, r)] = running
        terms.append((mono_from_dict(exps), c))
    return ytor.from_terms(terms)


def rho_map(cartan: CartanData, P: QTPoly) -> QTPoly:
    """u_{i,r} -> z_{i,r} f_i^{-1}; the diagram identity rho = J o eta holds
    on cluster elements and is exercised by the tests."""
    ztor = make_z_torus(cartan)

    def image(v: VarId) -> dict[VarId, int]:
        i, r = v
        fi = f_index(cartan, i)
        if (i, r) == fi:
            return {}  # the formal top variable collapses: z f^{-1} = 1
        return {(i, r): 1, fi: -1}

    return substitute(P, ztor, image)


def z_seed(cartan: CartanData, r_floor: int) -> QuantumSeed:
    """Initial seed on the frozen-top window: variables z_{i,r} with the f_j
    on top, quantization matrix the restricted F-matrix."""
    return initial_seed(cartan, "gamma_minus", r_floor)


def multidegree(cartan: CartanData, P: QTPoly) -> tuple[int, ...]:
    """The common degree vector under deg(z_{i,r}) = deg(f_i) = e_i."""
    if not P:
        return tuple(0 for _ in cartan.lie_type.nodes)

    def degree(m: Mono) -> tuple[int, ...]:
        out = [0] * cartan.lie_type.rank
        for (i, _), e in m:
            out[i - 1] += e
        return tuple(out)

    monos = iter(P.terms)
    first = next(monos)
    d0 = degree(first)
    for m in monos:
        d = degree(m)
        if d != d0:
            raise InhomogeneousInput(first, m, d0, d)
    return d0


def f_exponent_range(P: QTPoly, cartan: CartanData) -> dict[int, tuple[int, int]]:
    """Per-node minimum and maximum exponent of f_j across the monomials."""
    out = {}
    for j in cartan.lie_type.nodes:
        fj = f_index(cartan, j)
        exps = [dict(m).get(fj, 0) for m in P.terms] or [0]
        out[j] = (min(exps), max(exps))
    return out


def default_z_floor(cartan: CartanData, i: int) -> int:
    """The smallest window that contains every vertex the triangular
    schedule reads; matches the worked example's window."""
    hp = cartan.h_prime
    return -2 * hp - (2 if cartan.height[i] else 0)


def run_fundamental_z(
    cartan: CartanData,
    i: int,
    r_floor: int | None = None,
    check: bool = False,
    record: bool = False,
) -> dict:
    """Apply the triangular schedule to the frozen-top seed and read the
    column-top variable: the image under the inclusion of the full
    fundamental character at spectral parameter -xi_i - 2h'.

    Asserts (a) no negative powers of any frozen variable occur, and
    (b) exact agreement with the inclusion image of the Y-basis character.
    """
    xi = cartan.height
    if r_floor is None:
        r_floor = default_z_floor(cartan, i)
    cartan = cartan.ensure_horizon(-r_floor + 8)
    seed = z_seed(cartan, r_floor)
    seq = sequence_Si(cartan, i)
    result = apply_sequence(seed, seq, check=check, record=record)
    final, snaps = result if record else (result, [])
    chi = final.X[(i, -xi[i])]

    degree = multidegree(cartan, chi)  # raises on inhomogeneous input
    f_range = f_exponent_range(chi, cartan)
    frozen_nonneg = all(lo >= 0 for lo, _ in f_range.values())

    r0 = -xi[i] - 2 * cartan.h_prime
    y_char = fundamental_character(cartan, i, r0, check=check)
    matches = j_map(cartan, y_char.poly) == chi

    report = {
        "chi": chi,
        "node": i,
        "r0": r0,
        "matches": matches,
        "frozen_nonnegative": frozen_nonneg,
        "f_exponents": f_range,
        "multidegree": degree,
        "y_character": y_char,
        "final_seed": final,
        "steps": len(seq),
    }
    if record:
        report["snapshots"] = snaps
    if not frozen_nonneg or not matches:
        diff = _term_diff(j_map(cartan, y_char.poly), chi)
        raise AssertionError(
            f"fundamental run failed: frozen_nonnegative={frozen_nonneg} matches={matches}; {diff}"
        )
    return report


def _term_diff(expected: QTPoly, got: QTPoly) -> str:
    missing = [m for m in expected.terms if expected.terms[m] != got.terms.get(m)]
    extra = [m for m in got.terms if m not in expected.terms]
    return f"{len(missing)} differing terms, {len(extra)} unexpected terms"


def shift_s(P: QTPoly, dr: int) -> QTPoly:
    """Relabel every spectral parameter by dr (both bases)."""
    return spectral_shift(P, dr)


def trace_steps(cartan: CartanData, i: int, r_floor: int | None = None, check: bool = False) -> list[dict]:
    """The step dump of the fundamental run on the frozen-top seed: one
    record per mutation with the vertex, quiver snapshot, variable and
    multidegree."""
    report = run_fundamental_z(cartan, i, r_floor=r_floor, check=check, record=True)
    steps = []
    for idx, vertex, seed in report["snapshots"]:
        var = seed.X[vertex]
        steps.append(
            {
                "step": idx,
                "vertex": list(vertex),
                "quiver": seed.B.to_json(),
                "variable": poly_to_json(var),
                "latex": poly_to_latex(var),
                "monomials": len(var),
                # expanded (monomial, t-power) count, the convention of the
                # worked example's "92 terms"
                "terms": sum(len(c) for c in var.terms.values()),
                "multidegree": list(multidegree(cartan, var)),
            }
        )
    return steps
