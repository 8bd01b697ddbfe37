"""Dynkin/Cartan data for the simply-laced types and the integer pairing
functions derived from the quantum Cartan matrix.

Everything here is exact integer arithmetic.  The coefficient tables are the
power-series inverse of the quantum Cartan matrix, built from the recurrence

    Ct[i][j](1) = delta_ij,   Ct[i][j](m-1) + Ct[i][j](m+1) = sum_{k ~ j} Ct[i][k](m),

with Ct(m) = 0 for m <= 0.  From them we derive the symmetric extension C,
the antisymmetric commutation pairing N and the antisymmetric F used by the
z-variable torus.  N and F carry a global sign convention: the printed
formulas and the calibrated default differ by a global sign (see
SignConvention).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache


class CartanError(ValueError):
    pass


class HorizonError(CartanError):
    """A series coefficient beyond the configured horizon was requested."""


_FAMILIES = ("A", "D", "E")

_COXETER = {
    "A": lambda n: n + 1,
    "D": lambda n: 2 * n - 2,
    "E": {6: 12, 7: 18, 8: 30},
}


@dataclass(frozen=True)
class LieType:
    """A simply-laced type: family in {A, D, E} and rank."""

    family: str
    rank: int

    def __post_init__(self):
        if self.family not in _FAMILIES:
            raise CartanError(f"unknown family {self.family!r}")
        n = self.rank
        if self.family == "A" and n < 1:
            raise CartanError("A_n needs n >= 1")
        if self.family == "D" and n < 4:
            raise CartanError("D_n needs n >= 4")
        if self.family == "E" and n not in (6, 7, 8):
            raise CartanError("E_n needs n in {6, 7, 8}")

    @staticmethod
    def parse(name: str) -> "LieType":
        """Parse names like 'A2', 'D4', 'E8'."""
        name = name.strip()
        if len(name) < 2 or name[0].upper() not in _FAMILIES:
            raise CartanError(f"cannot parse Lie type {name!r}")
        try:
            rank = int(name[1:])
        except ValueError as exc:
            raise CartanError(f"cannot parse Lie type {name!r}") from exc
        return LieType(name[0].upper(), rank)

    def __str__(self):
        return f"{self.family}{self.rank}"

    @property
    def nodes(self) -> range:
        return range(1, self.rank + 1)

    def edges(self) -> list[tuple[int, int]]:
        """Dynkin diagram edges, nodes numbered as usual for ADE."""
        n = self.rank
        if self.family == "A":
            return [(i, i + 1) for i in range(1, n)]
        if self.family == "D":
            chain = [(i, i + 1) for i in range(1, n - 2)]
            return chain + [(n - 2, n - 1), (n - 2, n)]
        # E6/E7/E8: chain 1-3-4-5-...-n with node 2 attached to node 4
        chain = [(1, 3)] + [(i, i + 1) for i in range(3, n)]
        return chain + [(2, 4)]

    def neighbors(self, i: int) -> tuple[int, ...]:
        return self._adjacency()[i]

    @lru_cache(maxsize=None)
    def _adjacency(self) -> dict[int, tuple[int, ...]]:
        adj: dict[int, list[int]] = {i: [] for i in self.nodes}
        for a, b in self.edges():
            adj[a].append(b)
            adj[b].append(a)
        return {i: tuple(sorted(v)) for i, v in adj.items()}

    def coxeter_number(self) -> int:
        c = _COXETER[self.family]
        return c[self.rank] if isinstance(c, dict) else c(self.rank)


def cartan_matrix(lt: LieType) -> list[list[int]]:
    n = lt.rank
    mat = [[0] * n for _ in range(n)]
    for i in lt.nodes:
        mat[i - 1][i - 1] = 2
        for j in lt.neighbors(i):
            mat[i - 1][j - 1] = -1
    return mat


def coxeter_number(lt: LieType) -> int:
    return lt.coxeter_number()


@dataclass(frozen=True)
class HeightFunction:
    """Bipartite 2-coloring xi: I -> {0,1}; edge endpoints get opposite colors."""

    lie_type: LieType
    xi: tuple[int, ...]  # xi[i-1] for node i

    def __post_init__(self):
        if len(self.xi) != self.lie_type.rank:
            raise CartanError("height function has wrong length")
        if any(x not in (0, 1) for x in self.xi):
            raise CartanError("height function values must be 0 or 1")
        for a, b in self.lie_type.edges():
            if self.xi[a - 1] == self.xi[b - 1]:
                raise CartanError(f"edge {a}~{b} endpoints share the color {self.xi[a-1]}")

    def __getitem__(self, i: int) -> int:
        return self.xi[i - 1]

    def epsilon(self, i: int) -> int:
        """(-1)**xi_i."""
        return -1 if self.xi[i - 1] else 1


def default_height(lt: LieType, seed_parity: int = 0) -> HeightFunction:
    """The 2-coloring with the given color at node 1, propagated by BFS."""
    if seed_parity not in (0, 1):
        raise CartanError("seed_parity must be 0 or 1")
    xi = [-1] * lt.rank
    xi[0] = seed_parity
    queue = [1]
    while queue:
        i = queue.pop()
        for j in lt.neighbors(i):
            if xi[j - 1] < 0:
                xi[j - 1] = 1 - xi[i - 1]
                queue.append(j)
    return HeightFunction(lt, tuple(xi))


class SignConvention(str, Enum):
    """Global sign of the commutation pairings N and F.

    PRINTED is N(m) = C(m+1) - C(m-1); FLIPPED is its negative.  The engine
    default is FLIPPED: it is the unique choice reproducing the quantum
    T-system coefficients alpha(1,1) = -1, gamma(1,1) = 0 for sl2 (the
    calibration pinned by the acceptance suite).
    """

    PRINTED = "printed"
    FLIPPED = "flipped"

    @property
    def sign(self) -> int:
        return 1 if self is SignConvention.PRINTED else -1


DEFAULT_CONVENTION = SignConvention.FLIPPED


class CartanSeries:
    """Coefficient tables Ct_{ij}(m) for 1 <= m <= horizon, plus C, N, F.

    Immutable after construction; safe for shared reads.
    """

    def __init__(self, lt: LieType, horizon: int | None = None):
        self.lie_type = lt
        self.horizon = horizon if horizon is not None else 2 * lt.coxeter_number() + 4
        if self.horizon < 2:
            raise CartanError("horizon must be at least 2")
        n = lt.rank
        # table[i-1][j-1][m] with table[..][0] unused (Ct(0) = 0)
        table = [[[0] * (self.horizon + 1) for _ in range(n)] for _ in range(n)]
        for i in lt.nodes:
            for j in lt.nodes:
                table[i - 1][j - 1][1] = 1 if i == j else 0
        for m in range(1, self.horizon):
            for i in lt.nodes:
                for j in lt.nodes:
                    s = sum(table[i - 1][k - 1][m] for k in lt.neighbors(j))
                    table[i - 1][j - 1][m + 1] = s - table[i - 1][j - 1][m - 1]
        self._table = table

    def ctilde(self, i: int, j: int, m: int) -> int:
        """Ct_{ij}(m); zero for m <= 0."""
        if m <= 0:
            return 0
        if m > self.horizon:
            raise HorizonError(f"Ct({i},{j};{m}) beyond horizon {self.horizon}")
        return self._table[i - 1][j - 1][m]

    def csym(self, i: int, j: int, m: int) -> int:
        """C_{ij}(m) = Ct(m) + Ct(-m), symmetric in m."""
        return self.ctilde(i, j, m) + self.ctilde(i, j, -m)

    def npair(self, i: int, j: int, m: int, convention: SignConvention = DEFAULT_CONVENTION) -> int:
        """N_{ij}(m): antisymmetric commutation pairing of the Y-variables."""
        printed = self.csym(i, j, m + 1) - self.csym(i, j, m - 1)
        return convention.sign * printed

    def fpair_printed(self, i: int, j: int, m: int) -> int:
        """F_{ij}(m) as printed: -sum_{k>=1, m>=2k-1} Ct(m-2k+1) for m >= 0."""
        if m < 0:
            return -self.fpair_printed(i, j, -m)
        if m + 1 > self.horizon:
            raise HorizonError(f"F({i},{j};{m}) beyond horizon {self.horizon}")
        total = 0
        k = 1
        while m >= 2 * k - 1:
            total += self.ctilde(i, j, m - 2 * k + 1)
            k += 1
        return -total

    def fpair(self, i: int, j: int, m: int, convention: SignConvention = DEFAULT_CONVENTION) -> int:
        return convention.sign * self.fpair_printed(i, j, m)


def ctilde(lt: LieType, i: int, j: int, m: int, horizon: int | None = None) -> int:
    return CartanSeries(lt, horizon).ctilde(i, j, m)


def c_sym(lt: LieType, i: int, j: int, m: int, horizon: int | None = None) -> int:
    return CartanSeries(lt, horizon).csym(i, j, m)


def n_pair(
    lt: LieType,
    i: int,
    j: int,
    m: int,
    convention: SignConvention = DEFAULT_CONVENTION,
    horizon: int | None = None,
) -> int:
    return CartanSeries(lt, horizon).npair(i, j, m, convention)


def f_pair(lt: LieType, i: int, j: int, m: int, horizon: int | None = None) -> int:
    """The printed F table (the z-torus pairing applies the convention sign)."""
    return CartanSeries(lt, horizon).fpair_printed(i, j, m)


@dataclass(frozen=True)
class CartanData:
    """Type, height function and series tables bundled for the engine."""

    lie_type: LieType
    height: HeightFunction
    series: CartanSeries
    convention: SignConvention = DEFAULT_CONVENTION

    @staticmethod
    def make(
        lt: LieType,
        height: HeightFunction | None = None,
        horizon: int | None = None,
        convention: SignConvention = DEFAULT_CONVENTION,
        seed_parity: int = 0,
    ) -> "CartanData":
        if height is None:
            height = default_height(lt, seed_parity)
        return CartanData(lt, height, CartanSeries(lt, horizon), convention)

    def ensure_horizon(self, needed: int) -> "CartanData":
        """Same data with the series horizon enlarged to at least `needed`."""
        if self.series.horizon >= needed:
            return self
        return CartanData(self.lie_type, self.height, CartanSeries(self.lie_type, needed), self.convention)

    @property
    def h(self) -> int:
        return self.lie_type.coxeter_number()

    @property
    def h_prime(self) -> int:
        return (self.h + 1) // 2

    def xi(self, i: int) -> int:
        return self.height[i]

    def column_order(self) -> list[int]:
        """Columns sorted with xi = 0 first, then by node index."""
        return sorted(self.lie_type.nodes, key=lambda i: (self.height[i], i))

    def in_lattice(self, i: int, r: int) -> bool:
        """(i, r) lies in the index lattice (r has the column's parity)."""
        return 1 <= i <= self.lie_type.rank and (r - self.height[i]) % 2 == 0

    def pairing_y(self, v: tuple[int, int], w: tuple[int, int]) -> int:
        """Commutation exponent of Y_v * Y_w = t^p Y_w * Y_v."""
        return self.series.npair(v[0], w[0], v[1] - w[1], self.convention)

    def pairing_z(self, v: tuple[int, int], w: tuple[int, int]) -> int:
        """Commutation exponent of z_v * z_w = t^p z_w * z_v.

        Under the default convention this is exactly the printed Lambda
        matrix entry F_{ij}(s - r).
        """
        return self.convention.sign * self.series.fpair_printed(v[0], w[0], v[1] - w[1])
