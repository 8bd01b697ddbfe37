"""Exact arithmetic in based quantum tori.

Elements are sparse noncommutative Laurent polynomials written on the
commutative-monomial basis: a finite map

    monomial  ->  Laurent polynomial in t^{1/2}

where a monomial is a sparse integer exponent vector over variables indexed
by (node, spectral parameter) pairs, and the scalar is stored as a map from
the integer count of t^{1/2} factors to an arbitrary-precision integer
coefficient.  The star product of two basis monomials is

    m1 * m2 = t^{D(m1, m2)/2} (m1 m2),

with D the bilinear antisymmetric pairing supplied by the ambient torus.
Working on this basis makes the bar involution coefficient-wise.
"""

from __future__ import annotations

from functools import cmp_to_key
from typing import Callable, Iterable

VarId = tuple[int, int]
Mono = tuple[tuple[VarId, int], ...]  # sorted by VarId, no zero exponents
TCoeff = dict[int, int]  # half-exponent of t -> integer, no zero values


class NotDivisible(ArithmeticError):
    """Right division has no Laurent-polynomial quotient."""


# ---------------------------------------------------------------------------
# scalar helpers: Laurent polynomials in t^{1/2} as {half_exponent: int}

def tc_int(n: int, half: int = 0) -> TCoeff:
    return {half: n} if n else {}

TC_ONE = {0: 1}


def tc_add(a: TCoeff, b: TCoeff) -> TCoeff:
    out = dict(a)
    for h, c in b.items():
        s = out.get(h, 0) + c
        if s:
            out[h] = s
        else:
            out.pop(h, None)
    return out


def tc_neg(a: TCoeff) -> TCoeff:
    return {h: -c for h, c in a.items()}


def tc_mul(a: TCoeff, b: TCoeff, shift: int = 0) -> TCoeff:
    out: TCoeff = {}
    for h1, c1 in a.items():
        for h2, c2 in b.items():
            h = h1 + h2 + shift
            s = out.get(h, 0) + c1 * c2
            if s:
                out[h] = s
            else:
                out.pop(h, None)
    return out


def tc_shift(a: TCoeff, shift: int) -> TCoeff:
    return {h + shift: c for h, c in a.items()}


def tc_bar(a: TCoeff) -> TCoeff:
    return {-h: c for h, c in a.items()}


def tc_eval1(a: TCoeff) -> int:
    return sum(a.values())


def tc_div(a: TCoeff, b: TCoeff) -> TCoeff:
    """Exact division in Z[t^{1/2}, t^{-1/2}]; raises NotDivisible."""
    if not b:
        raise ZeroDivisionError("division by zero scalar")
    if not a:
        return {}
    lo_a, hi_a = min(a), max(a)
    lo_b, hi_b = min(b), max(b)
    if hi_a - lo_a < hi_b - lo_b:
        raise NotDivisible("scalar quotient would not be polynomial")
    deg_b = hi_b - lo_b
    num = [a.get(lo_a + k, 0) for k in range(hi_a - lo_a + 1)]
    den = [b.get(lo_b + k, 0) for k in range(deg_b + 1)]
    lead = den[deg_b]
    quot = [0] * (len(num) - deg_b)
    for k in range(len(num) - 1, deg_b - 1, -1):
        c = num[k]
        if c == 0:
            continue
        if c % lead:
            raise NotDivisible("scalar coefficients do not divide")
        q = c // lead
        quot[k - deg_b] = q
        for idx, d in enumerate(den):
            num[k - deg_b + idx] -= q * d
    if any(num[: deg_b + 1]) or any(num[deg_b + 1 :]):
        raise NotDivisible("scalar division leaves a remainder")
    base = (lo_a - lo_b)
    return {base + k: c for k, c in enumerate(quot) if c}


def tc_is_symmetric(a: TCoeff) -> bool:
    return all(a.get(-h, 0) == c for h, c in a.items())


def tc_str(a: TCoeff, unit: str = "t") -> str:
    """Human form, e.g. 't + t^-1' or '2' or 't^1/2'."""
    if not a:
        return "0"
    parts = []
    for h in sorted(a, reverse=True):
        c = a[h]
        if h == 0:
            parts.append(f"{c}")
            continue
        power = f"{h // 2}" if h % 2 == 0 else f"{h}/2"
        pw = unit if power == "1" else f"{unit}^{power}"
        if c == 1:
            parts.append(pw)
        elif c == -1:
            parts.append(f"-{pw}")
        else:
            parts.append(f"{c}*{pw}")
    out = " + ".join(parts).replace("+ -", "- ")
    return out


# ---------------------------------------------------------------------------
# monomial helpers

MONO_ONE: Mono = ()


def mono_from_dict(d: dict[VarId, int]) -> Mono:
    return tuple(sorted((v, e) for v, e in d.items() if e))


def mono_dict(m: Mono) -> dict[VarId, int]:
    return dict(m)


def mono_mul(m1: Mono, m2: Mono, power: int = 1) -> Mono:
    """m1 * m2**power as commutative exponent vectors."""
    d = dict(m1)
    for v, e in m2:
        s = d.get(v, 0) + e * power
        if s:
            d[v] = s
        else:
            del d[v]
    return tuple(sorted(d.items()))


def mono_inv(m: Mono) -> Mono:
    return tuple((v, -e) for v, e in m)


def mono_degree(m: Mono) -> int:
    return sum(e for _, e in m)


class QuantumTorus:
    """Ambient torus: a pairing on variable ids plus a fixed term order.

    order_key maps a variable id to a sortable key; variables with smaller
    keys are more significant in the graded-lexicographic term order.
    """

    def __init__(
        self,
        basis: str,
        pairing: Callable[[VarId, VarId], int],
        order_key: Callable[[VarId], tuple],
        f_row: Callable[[int], int] | None = None,
    ):
        self.basis = basis
        self._pairing = pairing
        self._order_key = order_key
        self.f_row = f_row  # z-torus: j -> spectral parameter of the frozen f_j
        self._pair_cache: dict[tuple[VarId, VarId], int] = {}
        self._key_cache: dict[VarId, tuple] = {}

    def order_key(self, v: VarId) -> tuple:
        k = self._key_cache.get(v)
        if k is None:
            k = self._order_key(v)
            self._key_cache[v] = k
        return k

    def pairing(self, v: VarId, w: VarId) -> int:
        key = (v, w)
        p = self._pair_cache.get(key)
        if p is None:
            p = self._pairing(v, w)
            self._pair_cache[key] = p
        return p

    def D(self, m1: Mono, m2: Mono) -> int:
        """Bilinear antisymmetric pairing: m1 * m2 = t^{D(m1,m2)} m2 * m1."""
        total = 0
        for v, e1 in m1:
            for w, e2 in m2:
                total += e1 * e2 * self.pairing(v, w)
        return total

    # --- term order ----------------------------------------------------

    def mono_cmp(self, m1: Mono, m2: Mono) -> int:
        if m1 == m2:
            return 0
        d1, d2 = mono_degree(m1), mono_degree(m2)
        if d1 != d2:
            return 1 if d1 > d2 else -1
        e1, e2 = dict(m1), dict(m2)
        for v in sorted(set(e1) | set(e2), key=self.order_key):
            a, b = e1.get(v, 0), e2.get(v, 0)
            if a != b:
                return 1 if a > b else -1
        return 0

    def mono_sort_key(self):
        return cmp_to_key(self.mono_cmp)

    # --- element constructors -------------------------------------------

    def zero(self) -> "QTPoly":
        return QTPoly(self, {})

    def one(self) -> "QTPoly":
        return QTPoly(self, {MONO_ONE: dict(TC_ONE)})

    def monomial(self, exps: dict[VarId, int] | Mono, coeff: TCoeff | int = 1) -> "QTPoly":
        m = exps if isinstance(exps, tuple) else mono_from_dict(exps)
        c = tc_int(coeff) if isinstance(coeff, int) else dict(coeff)
        return QTPoly(self, {m: c} if c else {})

    def variable(self, v: VarId, power: int = 1) -> "QTPoly":
        return self.monomial({v: power})

    def from_terms(self, terms: Iterable[tuple[Mono, TCoeff]]) -> "QTPoly":
        acc: dict[Mono, TCoeff] = {}
        for m, c in terms:
            cur = acc.get(m)
            acc[m] = tc_add(cur, c) if cur is not None else dict(c)
        return QTPoly(self, {m: c for m, c in acc.items() if c})


class QTPoly:
    """Element of a based quantum torus; immutable by convention."""

    __slots__ = ("torus", "terms", "_lead")

    def __init__(self, torus: QuantumTorus, terms: dict[Mono, TCoeff]):
        self.torus = torus
        self.terms = terms
        self._lead = None

    # --- ring structure ---------------------------------------------------

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        return (
            isinstance(other, QTPoly)
            and self.torus.basis == other.torus.basis
            and self.terms == other.terms
        )

    def __hash__(self):
        raise TypeError("QTPoly is not hashable")

    def __add__(self, other: "QTPoly") -> "QTPoly":
        out = {m: dict(c) for m, c in self.terms.items()}
        for m, c in other.terms.items():
            cur = out.get(m)
            s = tc_add(cur, c) if cur is not None else dict(c)
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return QTPoly(self.torus, out)

    def __neg__(self) -> "QTPoly":
        return QTPoly(self.torus, {m: tc_neg(c) for m, c in self.terms.items()})

    def __sub__(self, other: "QTPoly") -> "QTPoly":
        return self + (-other)

    def __mul__(self, other: "QTPoly") -> "QTPoly":
        """The star product, extended bilinearly from the basis rule.

        The pairing D(m1, m2) is evaluated through the linear form
        v -> sum_w e2(w) pairing(v, w) cached once per right-hand monomial.
        """
        torus = self.torus
        pairing = torus.pairing
        out: dict[Mono, TCoeff] = {}
        left_vars = {v for m1 in self.terms for v, _ in m1}
        for m2, c2 in other.terms.items():
            field = {v: sum(e2 * pairing(v, w) for w, e2 in m2) for v in left_vars}
            for m1, c1 in self.terms.items():
                m = mono_mul(m1, m2)
                d = sum(e1 * field[v] for v, e1 in m1)
                c = tc_mul(c1, c2, shift=d)
                cur = out.get(m)
                s = tc_add(cur, c) if cur is not None else c
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        return QTPoly(torus, out)

    def scale(self, coeff: TCoeff | int) -> "QTPoly":
        c0 = tc_int(coeff) if isinstance(coeff, int) else coeff
        if not c0:
            return self.torus.zero()
        return QTPoly(self.torus, {m: tc_mul(c, c0) for m, c in self.terms.items()})

    def t_shift(self, half: int) -> "QTPoly":
        """Multiply by t^{half/2}."""
        if half == 0:
            return self
        return QTPoly(self.torus, {m: tc_shift(c, half) for m, c in self.terms.items()})

    def pow_star(self, n: int) -> "QTPoly":
        if n < 0:
            raise ValueError("negative star power; use divide_exact_right")
        out = self.torus.one()
        for _ in range(n):
            out = out * self
        return out

    # --- involutions and evaluations --------------------------------------

    def bar(self) -> "QTPoly":
        """t^{1/2} -> t^{-1/2} coefficient-wise on the commutative basis."""
        return QTPoly(self.torus, {m: tc_bar(c) for m, c in self.terms.items()})

    def is_bar_invariant(self) -> bool:
        return all(tc_is_symmetric(c) for c in self.terms.values())

    def specialize_t1(self) -> dict[Mono, int]:
        """Evaluation at t^{1/2} = 1: a commutative Laurent polynomial."""
        out: dict[Mono, int] = {}
        for m, c in self.terms.items():
            v = tc_eval1(c)
            if v:
                out[m] = v
        return out

    # --- term access -------------------------------------------------------

    def __len__(self):
        return len(self.terms)

    def monomials_sorted(self, reverse: bool = True) -> list[Mono]:
        return sorted(self.terms, key=self.torus.mono_sort_key(), reverse=reverse)

    def lead_monomial(self) -> Mono:
        if not self.terms:
            raise ValueError("zero polynomial has no leading monomial")
        if self._lead is None:
            cmp = self.torus.mono_cmp
            best = None
            for m in self.terms:
                if best is None or cmp(m, best) > 0:
                    best = m
            self._lead = best
        return self._lead

    def trail_monomial(self) -> Mono:
        if not self.terms:
            raise ValueError("zero polynomial has no trailing monomial")
        cmp = self.torus.mono_cmp
        best = None
        for m in self.terms:
            if best is None or cmp(m, best) < 0:
                best = m
        return best

    def coeff(self, m: Mono) -> TCoeff:
        return dict(self.terms.get(m, {}))

    def __repr__(self):
        return f"QTPoly<{self.torus.basis}>({len(self.terms)} terms)"


def divide_exact_right(P: QTPoly, Q: QTPoly, step_cap: int | None = None) -> QTPoly:
    """The R with R * Q = P, by greedy leading-term elimination.

    Leading monomials multiply under any multiplicative total order, and
    monomials are invertible, so each step cancels the current lead of the
    remainder exactly.  When P is not right-divisible by Q the candidate
    quotient term eventually falls below trail(P)/trail(Q), or a scalar
    division fails; both raise NotDivisible.

    The remainder lives in one mutable dict with its monomials tracked in a
    lazily-pruned max-heap, so each step costs |Q| updates instead of a full
    rebuild and rescan.
    """
    import heapq

    if not Q:
        raise ZeroDivisionError("division by zero")
    torus = P.torus
    if not P:
        return torus.zero()
    lq = Q.lead_monomial()
    cq = Q.terms[lq]
    q_items = list(Q.terms.items())
    low = mono_mul(P.trail_monomial(), Q.trail_monomial(), power=-1)
    cap = step_cap if step_cap is not None else 4 * (len(P) + 1) * (len(Q) + 1) + 256

    # every monomial in play stays inside vars(P) | vars(Q), so dense
    # exponent tuples give C-comparable heap keys for the graded-lex order
    var_list = sorted(
        {v for m in P.terms for v, _ in m} | {v for m in Q.terms for v, _ in m},
        key=torus.order_key,
    )
    var_index = {v: idx for idx, v in enumerate(var_list)}
    width = len(var_list)

    def neg_key(m: Mono):  # smaller key = larger monomial (min-heap)
        vec = [0] * width
        deg = 0
        for v, e in m:
            vec[var_index[v]] = -e
            deg += e
        return (-deg, tuple(vec))

    low_key = neg_key(low)
    rem: dict[Mono, TCoeff] = {m: dict(c) for m, c in P.terms.items()}
    heap = [(neg_key(m), m) for m in rem]
    heapq.heapify(heap)
    out: dict[Mono, TCoeff] = {}
    steps = 0
    pairing = torus.pairing
    while rem:
        while heap and heap[0][1] not in rem:
            heapq.heappop(heap)
        lm = heap[0][1]
        mq = mono_mul(lm, lq, power=-1)
        if neg_key(mq) > low_key:
            raise NotDivisible("no Laurent quotient exists")
        # linear form w -> D(mq, w) over the local variables, once per step
        field = {w: sum(e1 * pairing(v, w) for v, e1 in mq) for w in var_list}
        c = tc_div(rem[lm], tc_shift(cq, sum(e * field[w] for w, e in lq)))
        out[mq] = c
        for m2, c2 in q_items:
            m = mono_mul(mq, m2)
            delta = tc_mul(c, c2, shift=sum(e * field[w] for w, e in m2))
            cur = rem.get(m)
            if cur is None:
                rem[m] = tc_neg(delta)
                heapq.heappush(heap, (neg_key(m), m))
            else:
                s = tc_add(cur, tc_neg(delta))
                if s:
                    rem[m] = s
                else:
                    del rem[m]
        steps += 1
        if steps > cap:
            raise NotDivisible("division did not terminate within the step cap")
    return QTPoly(torus, out)


def substitute(P: QTPoly, target: QuantumTorus, image: Callable[[VarId], dict[VarId, int]]) -> QTPoly:
    """Exponent-linear variable substitution, coefficients carried unchanged.

    Only valid when the image monomials pair in the target exactly as the
    source variables do (a quantum-torus morphism); the callers' maps are
    all of this kind.
    """
    terms = []
    for m, c in P.terms.items():
        d: dict[VarId, int] = {}
        for v, e in m:
            for w, k in image(v).items():
                s = d.get(w, 0) + k * e
                if s:
                    d[w] = s
                else:
                    del d[w]
        terms.append((mono_from_dict(d), c))
    return target.from_terms(terms)


def spectral_shift(P: QTPoly, dr: int) -> QTPoly:
    """Relabel every variable (i, r) to (i, r + dr); the pairings depend only
    on parameter differences, so this is a torus automorphism."""
    if dr == 0:
        return P
    out = {}
    for m, c in P.terms.items():
        out[tuple(((i, r + dr), e) for (i, r), e in m)] = dict(c)
    return QTPoly(P.torus, out)


# ---------------------------------------------------------------------------
# canonical serialization and pretty-printing

def _encode_var(torus: QuantumTorus, v: VarId) -> list:
    if torus.f_row is not None and v[1] == torus.f_row(v[0]):
        return ["f", v[0]]
    return [v[0], v[1]]


def poly_to_json_terms(P: QTPoly) -> list[dict]:
    """Canonical term list: sorted by the term order (descending), each
    (monomial, t-power) pair as one entry; bigints rendered as strings."""
    torus = P.torus
    entries = []
    for m in P.monomials_sorted():
        mono = [
            _encode_var(torus, v) + [e]
            for v, e in sorted(m, key=lambda ve: torus.order_key(ve[0]))
        ]
        c = P.terms[m]
        for h in sorted(c):
            entries.append({"t_half": h, "coeff": str(c[h]), "mono": mono})
    return entries


def poly_to_json(P: QTPoly) -> dict:
    return {"basis": P.torus.basis, "terms": poly_to_json_terms(P)}


def poly_from_json(torus: QuantumTorus, payload: dict) -> QTPoly:
    if payload.get("basis") != torus.basis:
        raise ValueError(f"basis mismatch: {payload.get('basis')} vs {torus.basis}")
    terms = []
    for entry in payload["terms"]:
        d: dict[VarId, int] = {}
        for item in entry["mono"]:
            if item[0] == "f":
                if torus.f_row is None:
                    raise ValueError("f-variable in a torus without frozen rows")
                v = (item[1], torus.f_row(item[1]))
                e = item[2]
            else:
                v, e = (item[0], item[1]), item[2]
            d[v] = d.get(v, 0) + e
        terms.append((mono_from_dict(d), {entry["t_half"]: int(entry["coeff"])}))
    return torus.from_terms(terms)


_BASIS_LETTER = {"Y": "Y", "z": "z", "u": "u"}


def _var_latex(torus: QuantumTorus, v: VarId, e: int) -> str:
    if torus.f_row is not None and v[1] == torus.f_row(v[0]):
        base = f"f_{{{v[0]}}}"
    else:
        letter = _BASIS_LETTER.get(torus.basis, "x")
        base = f"{letter}_{{{v[0]},{v[1]}}}"
    return base if e == 1 else f"{base}^{{{e}}}"


def _tc_latex(c: TCoeff) -> str:
    parts = []
    for h in sorted(c, reverse=True):
        n = c[h]
        if h == 0:
            parts.append(str(n))
            continue
        pw = "t" if h == 2 else ("t^{1/2}" if h == 1 else f"t^{{{h//2 if h % 2 == 0 else str(h) + '/2'}}}")
        if n == 1:
            parts.append(pw)
        elif n == -1:
            parts.append(f"-{pw}")
        else:
            parts.append(f"{n}{pw}")
    return " + ".join(parts).replace("+ -", "- ")


def poly_to_latex(P: QTPoly) -> str:
    if not P:
        return "0"
    torus = P.torus
    chunks = []
    for m in P.monomials_sorted():
        c = P.terms[m]
        mono = " ".join(
            _var_latex(torus, v, e)
            for v, e in sorted(m, key=lambda ve: torus.order_key(ve[0]))
        )
        if m == MONO_ONE:
            chunks.append(_tc_latex(c))
        elif c == TC_ONE:
            chunks.append(mono)
        elif len(c) == 1:
            chunks.append(f"{_tc_latex(c)}\\, {mono}")
        else:
            chunks.append(f"\\left({_tc_latex(c)}\\right) {mono}")
    return " + ".join(chunks)


def poly_to_text(P: QTPoly) -> str:
    if not P:
        return "0"
    torus = P.torus

    def var_txt(v: VarId, e: int) -> str:
        if torus.f_row is not None and v[1] == torus.f_row(v[0]):
            base = f"f{v[0]}"
        else:
            base = f"{_BASIS_LETTER.get(torus.basis, 'x')}[{v[0]},{v[1]}]"
        return base if e == 1 else f"{base}^{e}"

    chunks = []
    for m in P.monomials_sorted():
        c = P.terms[m]
        mono = " ".join(var_txt(v, e) for v, e in sorted(m, key=lambda ve: torus.order_key(ve[0])))
        if m == MONO_ONE:
            chunks.append(tc_str(c))
        elif c == TC_ONE:
            chunks.append(mono)
        elif len(c) == 1 and set(c.values()) == {1}:
            chunks.append(f"t^{list(c)[0]}/2 {mono}" if list(c)[0] % 2 else f"t^{list(c)[0]//2} {mono}")
        else:
            chunks.append(f"({tc_str(c)}) {mono}")
    return " + ".join(chunks)
