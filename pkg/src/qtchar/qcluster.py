"""Quantum seeds and quantum mutation.

A seed is a window plus the exchange matrix B, the skew-symmetric matrix L
of commutation exponents of the current cluster variables, and the cluster
variables X themselves stored as elements of the initial quantum torus
(the abstract initial variables for r <= 0 windows, the z/f variables for
the coefficient window).

Mutation at k replaces X(k) by M(c+) + M(c-), where M(c) is the
bar-invariant toric-frame monomial of the integer vector
c = -e_k + sum_v max(+-B(v,k), 0) e_v.  The two summands separately need
not be Laurent once X(k) is a polynomial, so the engine computes the sum
through the exchange relation X'(k) * X(k) = t^a M_in + t^b M_out and one
exact right division; when the summands do divide individually the two
forms are compared as an internal assertion.  B mutates by the standard
matrix rule; L is recomputed from leading monomials, which is sound because
quasi-commuting elements have a well-defined commutation exponent readable
off any multiplicative term order.
"""

from __future__ import annotations

from .cartan import CartanData
from .quiver import ExchangeMatrix, FrozenVertexError, VertexWindow, WindowError, build_window
from .qtorus import (
    Mono,
    NotDivisible,
    QTPoly,
    QuantumTorus,
    VarId,
    divide_exact_right,
    mono_from_dict,
    poly_to_json,
)


class SeedConsistencyError(AssertionError):
    """An internal exchange-relation or compatibility assertion failed."""


def make_y_torus(cartan: CartanData) -> QuantumTorus:
    def key(v: VarId):
        return (cartan.height[v[0]], v[0], -v[1])

    return QuantumTorus("Y", cartan.pairing_y, key)


def make_z_torus(cartan: CartanData) -> QuantumTorus:
    def key(v: VarId):
        return (cartan.height[v[0]], v[0], -v[1])

    return QuantumTorus("z", cartan.pairing_z, key, f_row=lambda j: 2 - cartan.height[j])


def u_monomial(cartan: CartanData, v: VarId) -> Mono:
    """The dominant monomial U_{i,r} = prod_{k>=0, r+2k<=0} Y_{i,r+2k}."""
    i, r = v
    return mono_from_dict({(i, r + 2 * k): 1 for k in range(0, (-r) // 2 + 1)})


class QuantumSeed:
    """Value-semantic quantum seed; mutation returns a new seed."""

    def __init__(
        self,
        cartan: CartanData,
        window: VertexWindow,
        B: ExchangeMatrix,
        L: dict[tuple[VarId, VarId], int],
        X: dict[VarId, QTPoly],
        torus: QuantumTorus,
        history: tuple[VarId, ...] = (),
    ):
        self.cartan = cartan
        self.window = window
        self.B = B
        self.L = L
        self.X = X
        self.torus = torus
        self.history = history

    # --- toric frame -------------------------------------------------------

    def frame_monomial(self, c: dict[VarId, int]) -> QTPoly:
        """The bar-invariant monomial M(c) in the current cluster variables.

        At most one entry of c may be negative (and equal to -1); it is
        realized by exact right division when its slot comes up in the fixed
        vertex order.
        """
        # the normalization makes M(c) independent of the chosen ordering;
        # multiplying small factors first keeps intermediates small, and
        # putting the inverted variable last lets one right division realize it
        positives = sorted(
            (v for v in c if c[v] > 0), key=lambda v: (len(self.X[v]), self.window.position(v))
        )
        negatives = [v for v in c if c[v] < 0]
        if len(negatives) > 1 or any(c[v] < -1 for v in negatives):
            raise ValueError("frame vector may have at most one entry equal to -1")
        support = positives + negatives
        prod = self.torus.one()
        for v in positives:
            for _ in range(c[v]):
                prod = prod * self.X[v]
        for v in negatives:
            prod = divide_exact_right(prod, self.X[v])
        norm = 0
        for a in range(len(support)):
            for b in range(a + 1, len(support)):
                norm += c[support[a]] * c[support[b]] * self.L[(support[a], support[b])]
        out = prod.t_shift(-norm)
        if not out.is_bar_invariant():
            raise SeedConsistencyError("toric frame monomial is not bar-invariant")
        return out

    # --- mutation ----------------------------------------------------------

    def exchange_vectors(self, k: VarId) -> tuple[dict[VarId, int], dict[VarId, int]]:
        col = self.B.column(k)
        cp = {v: b for v, b in col.items() if b > 0}
        cm = {v: -b for v, b in col.items() if b < 0}
        return cp, cm

    def mutate(self, k: VarId, check: bool = True) -> "QuantumSeed":
        if k not in self.window:
            raise WindowError(f"vertex {k} not in window")
        if self.window.is_frozen(k):
            raise FrozenVertexError(f"cannot mutate frozen vertex {k}")
        cp, cm = self.exchange_vectors(k)
        m_in = self.frame_monomial(cp)
        m_out = self.frame_monomial(cm)
        lead_k = self.X[k].lead_monomial()
        a = self.torus.D(m_in.lead_monomial(), lead_k)
        b = self.torus.D(m_out.lead_monomial(), lead_k)
        rhs = m_in.t_shift(a) + m_out.t_shift(b)
        x_new = divide_exact_right(rhs, self.X[k])
        if not x_new.is_bar_invariant():
            raise SeedConsistencyError(f"mutated variable at {k} is not bar-invariant")
        if check:
            self._check_exchange(k, cp, cm, x_new)
        X = dict(self.X)
        X[k] = x_new
        L = dict(self.L)
        lead_new = x_new.lead_monomial()
        for v in self.window.vertices:
            if v == k:
                continue
            d = self.torus.D(lead_new, X[v].lead_monomial())
            L[(k, v)] = d
            L[(v, k)] = -d
        L[(k, k)] = 0
        seed = QuantumSeed(
            self.cartan, self.window, self.B.mutate(k), L, X, self.torus, self.history + (k,)
        )
        if check:
            seed.check_compatibility()
        return seed

    def _check_exchange(self, k, cp, cm, x_new):
        """Both forms of the exchange must agree: the toric-frame sum
        M(c+) + M(c-) whenever the summands are individually Laurent, and
        always the relation X'(k) * X(k) = t^a M_in + t^b M_out."""
        m_in = self.frame_monomial(cp)
        m_out = self.frame_monomial(cm)
        xk = self.X[k]
        lead_k = xk.lead_monomial()
        a = self.torus.D(m_in.lead_monomial(), lead_k)
        b = self.torus.D(m_out.lead_monomial(), lead_k)
        if x_new * xk != m_in.t_shift(a) + m_out.t_shift(b):
            raise SeedConsistencyError(f"exchange relation mismatch at {k}")
        if len(xk) > 1:
            return  # the summands need not be Laurent individually
        try:
            parts = self.frame_monomial({**cp, k: -1}) + self.frame_monomial({**cm, k: -1})
        except NotDivisible:
            return
        if parts != x_new:
            raise SeedConsistencyError(f"toric-frame form of the exchange differs at {k}")

    def exchange_exponents(self, k: VarId) -> tuple[int, int]:
        """Half-unit exponents (2*alpha, 2*beta) of the exchange at k."""
        cp, cm = self.exchange_vectors(k)
        m_in = self.frame_monomial(cp)
        m_out = self.frame_monomial(cm)
        lead_k = self.X[k].lead_monomial()
        return (
            self.torus.D(m_in.lead_monomial(), lead_k),
            self.torus.D(m_out.lead_monomial(), lead_k),
        )

    # --- invariants ---------------------------------------------------------

    def compatibility_defects(self) -> list[tuple[VarId, VarId, int]]:
        """(B^T L)(v, w) + 2 sign delta_vw over interior mutable v; empty when
        the compatible-pair identity holds exactly."""
        expected_diag = -2 * (-self.cartan.convention.sign)
        defects = []
        for v in self.window.interior_mutable():
            col = self.B.column(v)  # B(u, v) over u
            for w in self.window.vertices:
                total = sum(b * self.L[(u, w)] for u, b in col.items())
                want = expected_diag if v == w else 0
                if total != want:
                    defects.append((v, w, total))
        return defects

    def check_compatibility(self):
        defects = self.compatibility_defects()
        if defects:
            v, w, got = defects[0]
            raise SeedConsistencyError(
                f"compatibility broken at ({v}, {w}): got {got} ({len(defects)} defects)"
            )

    def quasi_commutation_check(self, v: VarId, w: VarId) -> bool:
        """X(v) * X(w) == t^{L(v,w)} X(w) * X(v), exactly."""
        lhs = self.X[v] * self.X[w]
        rhs = (self.X[w] * self.X[v]).t_shift(2 * self.L[(v, w)])
        return lhs == rhs

    def to_json(self) -> dict:
        return {
            "window": self.window.to_json(),
            "history": [list(v) for v in self.history],
            "B": self.B.to_json(),
            "L": [
                [list(v), list(w), self.L[(v, w)]]
                for v in self.window.vertices
                for w in self.window.vertices
                if self.L[(v, w)]
            ],
            "X": {f"{i},{r}": poly_to_json(self.X[(i, r)]) for i, r in self.window.vertices},
        }


def initial_seed(
    cartan: CartanData, variant: str, r_floor: int, r_ceil: int | None = None
) -> QuantumSeed:
    """The initial quantum seed on the requested window.

    For the r <= 0 variants the cluster variables are the abstract initial
    variables, quasi-commuting exactly as their dominant KR monomials; for
    the coefficient window they are the z/f variables with the antisymmetric
    F-matrix as commutation exponents.
    """
    window, B = build_window(cartan, variant, r_floor, r_ceil)
    if variant == "gamma_minus":
        torus = make_z_torus(cartan)
        L = {
            (v, w): torus.pairing(v, w)
            for v in window.vertices
            for w in window.vertices
        }
        X = {v: torus.variable(v) for v in window.vertices}
        return QuantumSeed(cartan, window, B, L, X, torus)

    ytor = make_y_torus(cartan)
    monomials = {v: u_monomial(cartan, v) for v in window.vertices}
    L0 = {
        (v, w): ytor.D(monomials[v], monomials[w])
        for v in window.vertices
        for w in window.vertices
    }

    def pairing(v: VarId, w: VarId) -> int:
        try:
            return L0[(v, w)]
        except KeyError:
            raise WindowError(f"u-variable pair ({v}, {w}) outside the window") from None

    utor = QuantumTorus("u", pairing, window.order_key)
    X = {v: utor.variable(v) for v in window.vertices}
    return QuantumSeed(cartan, window, B, dict(L0), X, utor)


def sequence_S(
    cartan: CartanData,
    window: VertexWindow,
    repetitions: int = 1,
    column_order: list[int] | None = None,
) -> list[VarId]:
    """The column-by-column sequence restricted to the window, repeated.

    Each pass reads every mutable vertex of each column top to bottom, with
    the xi = 0 columns first.
    """
    cols = column_order if column_order is not None else cartan.column_order()
    xi = cartan.height
    if any(xi[cols[a]] > xi[cols[a + 1]] for a in range(len(cols) - 1)):
        raise ValueError("column order must list the xi = 0 columns first")
    single = [v for i in cols for v in window.column_vertices(i, mutable_only=True)]
    return single * repetitions


def cone_cutoffs(
    cartan: CartanData,
    reads: list[tuple[VarId, int]],
    passes: int,
    margin: int = 0,
) -> dict[int, dict[int, int]]:
    """Per-pass per-column depth cutoffs covering the dependence cones of the
    given (vertex, pass) reads.

    A value at (i0, r0) after pass q depends, in pass p <= q, on column j
    down to r0 - 2*(q - p) + d, where d reflects the half-row stagger: d = 0
    on the read column, +2 on the other columns of its parity and +1 on the
    opposite parity (the dependence crosses half a row per column hop).
    """
    xi = cartan.height
    cutoffs: dict[int, dict[int, int]] = {p: {} for p in range(1, passes + 1)}
    for (i0, r0), q in reads:
        if q == 0:
            continue
        for p in range(1, q + 1):
            base = r0 - 2 * (q - p)
            for j in cartan.lie_type.nodes:
                if j == i0:
                    d = 0
                elif xi[j] == xi[i0]:
                    d = 2
                else:
                    d = 1
                depth = base + d - margin
                cur = cutoffs[p].get(j)
                if cur is None or depth < cur:
                    cutoffs[p][j] = depth
    return cutoffs


def sequence_S_cone(
    cartan: CartanData,
    window: VertexWindow,
    passes: int,
    read_floor: int,
    read_node: int | None = None,
    margin: int = 0,
    column_order: list[int] | None = None,
) -> list[VarId]:
    """Repetitions of the column sequence restricted to the dependence cone
    of a vertex read after the last pass.

    Equivalent to full passes at the read vertex (cross-validated in the
    tests) at a fraction of the cost: the untouched deep rows would hold
    high-level characters the read never consumes.
    """
    reads = [((read_node if read_node is not None else cartan.column_order()[0], read_floor), passes)]
    cutoffs = cone_cutoffs(cartan, reads, passes, margin=margin)
    cols = column_order if column_order is not None else cartan.column_order()
    seq: list[VarId] = []
    for p in range(1, passes + 1):
        for i in cols:
            cut = cutoffs[p].get(i)
            if cut is None:
                continue
            for v in window.column_vertices(i, mutable_only=True):
                if v[1] >= cut:
                    seq.append(v)
    return seq


def sequence_Si(cartan: CartanData, i: int) -> list[VarId]:
    """The finite triangular schedule computing the fundamental character at
    the top of column i after h' passes.

    Column-by-column passes with the xi = 0 group first (its values feed the
    same-pass exchanges of the other group).  Pass p (1-based) reads the top
    h'-p+1 vertices of column i and of every column the read depends on at
    full depth, and the top h'-p vertices of the rest: for xi_i = 0 that is
    one extra vertex in column i only (the worked trivalent-node instance);
    for xi_i = 1 every xi = 0 column also needs the extra vertex, since the
    final exchange reads their current-pass tops.
    """
    xi = cartan.height
    nodes = list(cartan.lie_type.nodes)
    hp = cartan.h_prime
    if xi[i] == 0:
        cols = [i] + sorted(j for j in nodes if xi[j] == 0 and j != i) + sorted(
            j for j in nodes if xi[j] == 1
        )
        extra = {i}
    else:
        g0 = sorted(j for j in nodes if xi[j] == 0)
        g1 = [i] + sorted(j for j in nodes if xi[j] == 1 and j != i)
        cols = g0 + g1
        extra = set(g0) | {i}
    seq: list[VarId] = []
    for p in range(1, hp + 1):
        for j in cols:
            count = hp - p + 1 if j in extra else hp - p
            for c in range(count):
                seq.append((j, -xi[j] - 2 * c))
    return seq


def sequence_step_bound(cartan: CartanData) -> int:
    hp = cartan.h_prime
    return cartan.lie_type.rank * hp * (hp + 1) // 2


def apply_sequence(
    seed: QuantumSeed,
    seq: list[VarId],
    check: bool = True,
    record: bool = False,
) -> QuantumSeed | tuple[QuantumSeed, list[tuple[int, VarId, QuantumSeed]]]:
    """Fold mutate over the sequence; optionally keep per-step snapshots."""
    snaps: list[tuple[int, VarId, QuantumSeed]] = []
    cur = seed
    for idx, k in enumerate(seq):
        cur = cur.mutate(k, check=check)
        if record:
            snaps.append((idx + 1, k, cur))
    return (cur, snaps) if record else cur
