"""The representation-theoretic layer.

Cluster variables computed by the mutation engine are turned into deformed
characters here: the identification of initial variables with the nested
dominant monomials, truncated and full characters of the level-k modules and
the fundamental ones, the deformed T-system self-check, Nakajima dominance,
and products of fundamental characters (standard classes).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .cartan import CartanData
from .qcluster import (
    QuantumSeed,
    apply_sequence,
    cone_cutoffs,
    initial_seed,
    make_y_torus,
    sequence_S,
    sequence_S_cone,
    sequence_Si,
    u_monomial,
)
from .quiver import WindowError, k_factors
from .qtorus import (
    Mono,
    QTPoly,
    QuantumTorus,
    VarId,
    mono_from_dict,
    spectral_shift,
    substitute,
    tc_eval1,
)


class WindowTooShallow(WindowError):
    def __init__(self, r_floor: int, required: int):
        super().__init__(
            f"window floor {r_floor} too shallow; this computation needs r_floor <= {required}"
        )
        self.r_floor = r_floor
        self.required = required


class DominanceError(ValueError):
    pass


@dataclass
class CharacterResult:
    """A computed character with its provenance."""

    poly: QTPoly
    basis: str  # "Y" | "u" | "z"
    truncated: bool
    node: int
    r: int
    level: int
    window: dict

    def __post_init__(self):
        dom = self.dominant_monomial()
        if self.poly.terms.get(dom) != {0: 1}:
            raise DominanceError("leading monomial must carry coefficient exactly 1")

    def dominant_monomial(self) -> Mono:
        doms = [m for m in self.poly.terms if m and all(e > 0 for _, e in m)]
        if len(doms) != 1:
            raise DominanceError(f"expected a unique dominant monomial, found {len(doms)}")
        return doms[0]

    def t1_coefficients(self) -> dict[Mono, int]:
        return self.poly.specialize_t1()


# --- the torus identification -------------------------------------------------


def eta(cartan: CartanData, P: QTPoly) -> QTPoly:
    """u-variables to Y-variables: each initial variable becomes the nested
    product of column variables above it."""
    ytor = make_y_torus(cartan)

    def image(v: VarId) -> dict[VarId, int]:
        return dict(u_monomial(cartan, v))

    return substitute(P, ytor, image)


def eta_inv(cartan: CartanData, P: QTPoly, u_torus: QuantumTorus) -> QTPoly:
    """Y-variables back to u-variables: Y_{i,r} -> u_{i,r} u_{i,r+2}^{-1},
    with the second factor dropped at the top of a column."""

    def image(v: VarId) -> dict[VarId, int]:
        i, r = v
        if r + 2 <= 0:
            return {(i, r): 1, (i, r + 2): -1}
        return {(i, r): 1}

    return substitute(P, u_torus, image)


# --- characters ----------------------------------------------------------------


def _even_floor(x: int) -> int:
    return x if x % 2 == 0 else x - 1


def _cone_floor(cutoffs: dict[int, dict[int, int]]) -> int:
    deepest = min((d for per_col in cutoffs.values() for d in per_col.values()), default=0)
    return _even_floor(deepest - 2)


def default_kr_floor(cartan: CartanData, r: int, m: int) -> int:
    """Deep enough that the frozen floor sits strictly below the dependence
    cone of the vertex read after m passes."""
    return _even_floor(r - 2 * m - 6)


def kr_character(
    cartan: CartanData,
    i: int,
    r: int,
    m: int,
    r_floor: int | None = None,
    check: bool = False,
    schedule: str = "cone",
) -> CharacterResult:
    """The truncated character read at (i, r) after m column passes.

    The result is the truncated character of the level-k module with
    spectral parameter r - 2m, where k is the level of the vertex; it is the
    full character once 2m >= h.  The default schedule mutates only the
    dependence cone of the read vertex; schedule="full" runs the unrestricted
    column passes (same value, slower) and is used for cross-validation.
    """
    if m < 0:
        raise ValueError("pass count m must be >= 0")
    if r > 0 or not cartan.in_lattice(i, r):
        raise WindowError(f"({i}, {r}) is not a window vertex")
    required = default_kr_floor(cartan, r, m)
    if r_floor is None:
        r_floor = required
    if r_floor > required:
        raise WindowTooShallow(r_floor, required)
    cartan = cartan.ensure_horizon(-r_floor + 8)
    seed = initial_seed(cartan, "gminus", r_floor)
    if schedule == "cone":
        seq = sequence_S_cone(cartan, seed.window, m, r, read_node=i)
    else:
        seq = sequence_S(cartan, seed.window, repetitions=m)
    final = apply_sequence(seed, seq, check=check)
    poly = eta(cartan, final.X[(i, r)])
    return CharacterResult(
        poly=poly,
        basis="Y",
        truncated=True,
        node=i,
        r=r - 2 * m,
        level=k_factors(i, r, cartan),
        window={"variant": "gminus", "r_floor": r_floor, "horizon": cartan.series.horizon,
                "convention": cartan.convention.value, "passes": m},
    )


def default_fundamental_floor(cartan: CartanData) -> int:
    return -2 * cartan.h_prime - 4


def fundamental_character(
    cartan: CartanData,
    i: int,
    r: int | None = None,
    r_floor: int | None = None,
    check: bool = False,
) -> CharacterResult:
    """The full deformed character of the fundamental module at (i, r).

    Computed by the finite triangular mutation schedule, which lands the
    character with spectral parameter -xi_i - 2h' at the column top; other
    parameters are reached by the shift equivariance of the torus.
    """
    xi = cartan.height
    r0 = -xi[i] - 2 * cartan.h_prime
    if r is None:
        r = r0
    if not cartan.in_lattice(i, r):
        raise WindowError(f"({i}, {r}) is not in the index lattice for this height function")
    required = -2 * cartan.h_prime - (2 if xi[i] else 0)
    if r_floor is None:
        r_floor = default_fundamental_floor(cartan)
    if r_floor > required:
        raise WindowTooShallow(r_floor, required)
    cartan = cartan.ensure_horizon(-r_floor + 8)
    seed = initial_seed(cartan, "gminus", r_floor)
    final = apply_sequence(seed, sequence_Si(cartan, i), check=check)
    poly = eta(cartan, final.X[(i, -xi[i])])
    if r != r0:
        poly = spectral_shift(poly, r - r0)
    return CharacterResult(
        poly=poly,
        basis="Y",
        truncated=False,
        node=i,
        r=r,
        level=1,
        window={"variant": "gminus", "r_floor": r_floor, "horizon": cartan.series.horizon,
                "convention": cartan.convention.value, "sequence": f"S_{i}"},
    )


# --- quantum T-system ------------------------------------------------------------


def ag_exponents(cartan: CartanData, i: int, k: int) -> tuple[Fraction, Fraction]:
    """alpha(i,k) = -1 + (Ct_ii(2k-1) + Ct_ii(2k+1))/2 and gamma = alpha + 1."""
    s = cartan.series
    alpha = Fraction(-2 + s.ctilde(i, i, 2 * k - 1) + s.ctilde(i, i, 2 * k + 1), 2)
    return alpha, alpha + 1


def tsystem_check(
    cartan: CartanData,
    i: int,
    k: int,
    r: int | None = None,
    r_floor: int | None = None,
    check: bool = False,
) -> dict:
    """Verify the deformed T-system identity exactly for (i, k) at parameter r.

    All five truncated characters are produced by mutation runs, then the
    identity is checked by independent torus arithmetic.  Returns the
    extracted t-exponents together with the closed-form values.
    """
    xi_i = cartan.xi(i)
    if r is None:
        r = -xi_i - 2 * k  # the shallowest parameter with all four factors defined
    if (r - xi_i) % 2:
        raise WindowError(f"r = {r} has the wrong parity for node {i}")
    if r > -xi_i - 2 * k:
        raise WindowTooShallow(r, -xi_i - 2 * k)

    def vertex_and_passes(node: int, level: int, param: int) -> tuple[VarId, int]:
        top = -cartan.xi(node) - 2 * (level - 1)
        m = (top - param) // 2
        if m < 0:
            raise WindowTooShallow(param, top)
        return (node, top), m

    requests: dict[str, tuple[VarId, int] | None] = {
        "W(k,r)": vertex_and_passes(i, k, r),
        "W(k,r+2)": vertex_and_passes(i, k, r + 2),
        "W(k-1,r+2)": vertex_and_passes(i, k - 1, r + 2) if k > 1 else None,
        "W(k+1,r)": vertex_and_passes(i, k + 1, r),
    }
    for j in cartan.lie_type.neighbors(i):
        requests[f"W{j}(k,r+1)"] = vertex_and_passes(j, k, r + 1)

    live = [req for req in requests.values() if req]
    max_m = max(m for _, m in live)
    cutoffs = cone_cutoffs(cartan, live, max_m)
    if r_floor is None:
        r_floor = _cone_floor(cutoffs)
    cartan = cartan.ensure_horizon(-r_floor + 8)
    seed = initial_seed(cartan, "gminus", r_floor)

    by_pass: dict[int, QuantumSeed] = {0: seed}
    cur = seed
    cols = cartan.column_order()
    for p in range(1, max_m + 1):
        block = [
            v
            for j in cols
            if cutoffs[p].get(j) is not None
            for v in seed.window.column_vertices(j, mutable_only=True)
            if v[1] >= cutoffs[p][j]
        ]
        cur = apply_sequence(cur, block, check=check)
        by_pass[p] = cur

    chars: dict[str, QTPoly] = {}
    for name, req in requests.items():
        if req is None:
            chars[name] = make_y_torus(cartan).one()
            continue
        v, m = req
        chars[name] = eta(cartan, by_pass[m].X[v])

    ytor = make_y_torus(cartan)
    lhs = chars["W(k,r)"] * chars["W(k,r+2)"]

    m1 = chars["W(k-1,r+2)"] * chars["W(k+1,r)"]
    factors = [chars[f"W{j}(k,r+1)"] for j in cartan.lie_type.neighbors(i)]
    m2 = ytor.one()
    for f in factors:
        m2 = m2 * f

    commuting = chars["W(k-1,r+2)"] * chars["W(k+1,r)"] == chars["W(k+1,r)"] * chars["W(k-1,r+2)"]

    alpha, gamma = ag_exponents(cartan, i, k)
    alpha_half, gamma_half = int(2 * alpha), int(2 * gamma)
    holds = lhs == m1.t_shift(alpha_half) + m2.t_shift(gamma_half)

    extracted = _extract_exponents(lhs, m1, m2)
    return {
        "holds": holds,
        "commuting_pair": commuting,
        "alpha": alpha,
        "gamma": gamma,
        "alpha_extracted": extracted[0],
        "gamma_extracted": extracted[1],
        "node": i,
        "level": k,
        "r": r,
        "r_floor": r_floor,
    }


def _extract_exponents(lhs: QTPoly, m1: QTPoly, m2: QTPoly) -> tuple[Fraction | None, Fraction | None]:
    """Read the two t-powers off monomials that occur in exactly one summand."""

    def solve(part: QTPoly, other: QTPoly) -> Fraction | None:
        for mono in part.monomials_sorted():
            if mono in other.terms:
                continue
            c_part = part.terms[mono]
            c_lhs = lhs.terms.get(mono)
            if not c_lhs or len(c_lhs) != len(c_part):
                return None
            shift = min(c_lhs) - min(c_part)
            if c_lhs == {h + shift: n for h, n in c_part.items()}:
                return Fraction(shift, 2)
            return None
        return None

    return solve(m1, m2), solve(m2, m1)


# --- dominance -------------------------------------------------------------------


def a_monomial(cartan: CartanData, i: int, r: int) -> Mono:
    """The root-like monomial Y_{i,r-1} Y_{i,r+1} prod_{j~i} Y_{j,r}^{-1};
    defined exactly for (i, r) in the complementary parity lattice."""
    if not (1 <= i <= cartan.lie_type.rank):
        raise WindowError(f"node {i} out of range")
    if cartan.in_lattice(i, r):
        raise WindowError(f"({i}, {r}) lies in the variable lattice, not its complement")
    exps = {(i, r - 1): 1, (i, r + 1): 1}
    for j in cartan.lie_type.neighbors(i):
        exps[(j, r)] = -1
    return mono_from_dict(exps)


def solve_a_decomposition(cartan: CartanData, target: dict[VarId, int]) -> dict[VarId, int] | None:
    """Nonnegative integers n with prod A_{i,r}^{n_{i,r}} = target, or None.

    The A-vectors are triangular with respect to the spectral parameter, so
    the system solves by a top-down recursion; the reconstruction check
    rejects spurious solutions.
    """
    target = {v: e for v, e in target.items() if e}
    if not target:
        return {}
    r_hi = max(r for _, r in target)
    r_lo = min(r for _, r in target)
    nbrs = cartan.lie_type.neighbors
    n: dict[VarId, int] = {}
    for rr in range(r_hi - 1, r_lo - 2, -1):
        for i in cartan.lie_type.nodes:
            if cartan.in_lattice(i, rr):
                continue  # A-indices live on the complementary parity
            val = (
                target.get((i, rr + 1), 0)
                - n.get((i, rr + 2), 0)
                + sum(n.get((j, rr + 1), 0) for j in nbrs(i))
            )
            if val:
                n[(i, rr)] = val
    if any(v < 0 for v in n.values()):
        return None
    # reconstruct and compare
    recon: dict[VarId, int] = {}
    for (i, rr), cnt in n.items():
        for v, e in a_monomial(cartan, i, rr):
            s = recon.get(v, 0) + e * cnt
            if s:
                recon[v] = s
            else:
                del recon[v]
    return n if recon == target else None


def dominance_check(cartan: CartanData, char: CharacterResult) -> dict:
    """Every non-leading monomial must be the dominant one divided by a
    product of A-monomials with nonnegative exponents."""
    if char.basis != "Y":
        raise ValueError("dominance check runs on Y-basis characters")
    dom = char.dominant_monomial()
    dom_exp = dict(dom)
    offending = []
    witnesses = {}
    for m in char.poly.terms:
        if m == dom:
            continue
        target = dict(dom_exp)
        for v, e in m:
            s = target.get(v, 0) - e
            if s:
                target[v] = s
            else:
                target.pop(v, None)
        n = solve_a_decomposition(cartan, target)
        if n is None:
            offending.append(m)
        else:
            witnesses[m] = n
    return {"holds": not offending, "offending": offending, "witnesses": witnesses}


# --- standard classes -------------------------------------------------------------


def standard_character(cartan: CartanData, dominant: dict[VarId, int]) -> CharacterResult:
    """Star product of fundamental characters grouped by spectral parameter
    in decreasing order, rescaled so the dominant monomial has coefficient 1."""
    if not dominant or any(e <= 0 for e in dominant.values()):
        raise DominanceError("standard classes need a nonempty dominant monomial")
    for (i, r) in dominant:
        if not cartan.in_lattice(i, r):
            raise WindowError(f"({i}, {r}) is not in the index lattice")
    cache: dict[VarId, QTPoly] = {}

    def fundamental(v: VarId) -> QTPoly:
        if v not in cache:
            cache[v] = fundamental_character(cartan, v[0], v[1]).poly
        return cache[v]

    factors: list[VarId] = []
    for v, e in sorted(dominant.items(), key=lambda ve: (-ve[0][1], ve[0][0])):
        factors.extend([v] * e)
    prod = fundamental(factors[0])
    for v in factors[1:]:
        prod = prod * fundamental(v)
    dom_mono = mono_from_dict(dict(dominant))
    c = prod.terms.get(dom_mono)
    if not c or len(c) != 1 or next(iter(c.values())) != 1:
        raise DominanceError("dominant coefficient of the product is not a unit power of t")
    prod = prod.t_shift(-next(iter(c)))
    r_min = min(r for _, r in dominant)
    return CharacterResult(
        poly=prod,
        basis="Y",
        truncated=False,
        node=min(i for i, _ in dominant),
        r=r_min,
        level=0,
        window={"standard": sorted([list(v), e] for v, e in dominant.items()),
                "horizon": cartan.series.horizon, "convention": cartan.convention.value},
    )


def positivity_report(char: CharacterResult) -> dict:
    """t = 1 coefficients and their nonnegativity."""
    vals = char.poly.specialize_t1()
    return {
        "all_nonnegative": all(v >= 0 for v in vals.values()),
        "coefficient_sum": sum(vals.values()),
        "terms": len(vals),
    }


def bar_invariant_everywhere(seed_results: list[QTPoly]) -> bool:
    return all(p.is_bar_invariant() for p in seed_results)


def t1_sum(poly: QTPoly) -> int:
    return sum(tc_eval1(c) for c in poly.terms.values())
