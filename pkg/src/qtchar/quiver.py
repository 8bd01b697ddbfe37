"""Finite windows on the half-infinite index lattices and their quivers.

A window holds the vertices (i, r) of one of three variants:

  * gminus:      r <= 0                      (the half-infinite quiver)
  * gamma_minus: r <= 2, vertices with r > 0 frozen (one frozen row on top)
  * gamma:       r_floor <= r <= r_ceil, top row frozen

restricted to r >= r_floor.  The bottom boundary row (the deepest vertex of
every column, i.e. r <= r_floor + 1) is frozen in every variant: it is the
truncation device standing in for the rest of the infinite quiver.

Arrows follow the lattice rule: (i,r) -> (j,s) iff C_ij != 0 and s = r + C_ij,
so each column points two steps up and one step down into adjacent columns.
"""

from __future__ import annotations

from .cartan import CartanData, CartanError

VarId = tuple[int, int]

VARIANTS = ("gminus", "gamma_minus", "gamma")


class WindowError(CartanError):
    pass


class FrozenVertexError(WindowError):
    pass


class VertexWindow:
    """Vertex set with frozen flags and the fixed enumeration order."""

    def __init__(self, cartan: CartanData, variant: str, r_floor: int, r_ceil: int | None = None):
        if variant not in VARIANTS:
            raise WindowError(f"unknown window variant {variant!r}")
        if r_floor % 2:
            raise WindowError("r_floor must be even-aligned")
        self.cartan = cartan
        self.variant = variant
        self.r_floor = r_floor
        if variant == "gminus":
            cap = 0
        elif variant == "gamma_minus":
            cap = 2
        else:
            cap = -r_floor if r_ceil is None else r_ceil
        self.r_ceil = cap
        if cap < r_floor + 2:
            raise WindowError("window has no room between floor and ceiling")

        xi = cartan.height
        vertices: list[VarId] = []
        frozen: set[VarId] = set()
        for i in cartan.column_order():
            top = cap - ((cap - xi[i]) % 2)
            r = top
            while r >= r_floor:
                v = (i, r)
                vertices.append(v)
                if r <= r_floor + 1:
                    frozen.add(v)
                if variant == "gamma_minus" and r > 0:
                    frozen.add(v)
                if variant == "gamma" and r >= cap - 1:
                    frozen.add(v)
                r -= 2
        self.vertices = tuple(vertices)
        self.frozen = frozenset(frozen)
        self._pos = {v: idx for idx, v in enumerate(vertices)}

    def __contains__(self, v: VarId) -> bool:
        return v in self._pos

    def position(self, v: VarId) -> int:
        return self._pos[v]

    def is_frozen(self, v: VarId) -> bool:
        return v in self.frozen

    def mutable(self) -> list[VarId]:
        return [v for v in self.vertices if v not in self.frozen]

    def lattice_neighbors(self, v: VarId) -> list[VarId]:
        """Neighbors of v in the variant's infinite lattice (window ignored)."""
        i, r = v
        cap = None if self.variant == "gamma" else self.r_ceil
        out = []
        for s in (r - 2, r + 2):
            if cap is None or s <= cap:
                out.append((i, s))
        for j in self.cartan.lie_type.neighbors(i):
            for s in (r - 1, r + 1):
                if cap is None or s <= cap:
                    out.append((j, s))
        return out

    def interior_mutable(self) -> list[VarId]:
        """Mutable vertices whose full lattice neighborhood is in the window."""
        return [
            v
            for v in self.mutable()
            if all(w in self._pos for w in self.lattice_neighbors(v))
        ]

    def column_vertices(self, i: int, mutable_only: bool = False) -> list[VarId]:
        """Column i, top to bottom."""
        out = [v for v in self.vertices if v[0] == i]
        if mutable_only:
            out = [v for v in out if v not in self.frozen]
        return out

    def order_key(self, v: VarId):
        """Term-order significance: column order, then decreasing r."""
        i, r = v
        return (self.cartan.height[i], i, -r)

    def to_json(self) -> dict:
        return {
            "type": str(self.cartan.lie_type),
            "xi": list(self.cartan.height.xi),
            "variant": self.variant,
            "r_floor": self.r_floor,
            "r_ceil": self.r_ceil,
            "vertices": [[i, r] for i, r in self.vertices],
            "frozen": sorted([i, r] for i, r in self.frozen),
        }


class ExchangeMatrix:
    """Skew-symmetric arrow-count matrix over a window's vertices.

    b(v, w) = #arrows v -> w  -  #arrows w -> v.  Entries with both ends
    frozen are not tracked; mutation never reads them.
    """

    def __init__(self, window: VertexWindow, entries: dict[VarId, dict[VarId, int]] | None = None):
        self.window = window
        if entries is not None:
            self._rows = entries
            return
        rows: dict[VarId, dict[VarId, int]] = {v: {} for v in window.vertices}
        cartan = window.cartan
        for (i, r) in window.vertices:
            targets = [(i, r + 2)] + [(j, r - 1) for j in cartan.lie_type.neighbors(i)]
            for w in targets:
                if w not in window:
                    continue
                v = (i, r)
                if v in window.frozen and w in window.frozen:
                    continue
                rows[v][w] = rows[v].get(w, 0) + 1
                rows[w][v] = rows[w].get(v, 0) - 1
        self._rows = {v: {w: b for w, b in row.items() if b} for v, row in rows.items()}

    def b(self, v: VarId, w: VarId) -> int:
        return self._rows.get(v, {}).get(w, 0)

    def row(self, v: VarId) -> dict[VarId, int]:
        return dict(self._rows.get(v, {}))

    def column(self, k: VarId) -> dict[VarId, int]:
        """{v: b(v, k)} over nonzero entries."""
        return {v: -b for v, b in self._rows.get(k, {}).items()}

    def arrows(self) -> list[tuple[VarId, VarId, int]]:
        out = []
        for v, row in self._rows.items():
            for w, b in row.items():
                if b > 0:
                    out.append((v, w, b))
        return sorted(out, key=lambda a: (self.window.position(a[0]), self.window.position(a[1])))

    def check_skew(self) -> bool:
        return all(
            self.b(w, v) == -b for v, row in self._rows.items() for w, b in row.items()
        )

    def mutate(self, k: VarId) -> "ExchangeMatrix":
        """Matrix mutation at a mutable vertex k."""
        win = self.window
        if k not in win:
            raise WindowError(f"vertex {k} not in window")
        if win.is_frozen(k):
            raise FrozenVertexError(f"cannot mutate frozen vertex {k}")
        col = self.column(k)  # b(v, k)
        new_rows: dict[VarId, dict[VarId, int]] = {}
        for v, row in self._rows.items():
            new_row = {}
            for w, b in row.items():
                if v == k or w == k:
                    new_row[w] = -b
                else:
                    bvk, bkw = col.get(v, 0), -col.get(w, 0)
                    if bvk > 0 and bkw > 0:
                        new_row[w] = b + bvk * bkw
                    elif bvk < 0 and bkw < 0:
                        new_row[w] = b - bvk * bkw
                    else:
                        new_row[w] = b
            new_rows[v] = new_row
        # arrows created between previously unrelated vertices
        for v, bvk in col.items():
            for w, bwk in col.items():
                if v == w or w in new_rows[v] or v == k or w == k:
                    continue
                if v in win.frozen and w in win.frozen:
                    continue
                bkw = -bwk
                if bvk > 0 and bkw > 0:
                    new_rows[v][w] = bvk * bkw
                elif bvk < 0 and bkw < 0:
                    new_rows[v][w] = -bvk * bkw
        return ExchangeMatrix(self.window, {v: {w: b for w, b in row.items() if b} for v, row in new_rows.items()})

    def to_json(self) -> list:
        return [[list(v), list(w), b] for v, w, b in self.arrows()]


def build_window(
    cartan: CartanData, variant: str, r_floor: int, r_ceil: int | None = None
) -> tuple[VertexWindow, ExchangeMatrix]:
    window = VertexWindow(cartan, variant, r_floor, r_ceil)
    return window, ExchangeMatrix(window)


def k_factors(i: int, r: int, cartan: CartanData) -> int:
    """KR level of the vertex (i, r): the number of factors of U_{i,r}."""
    if r > 0:
        raise WindowError(f"(i, r) = ({i}, {r}) is not in the r <= 0 lattice")
    if not cartan.in_lattice(i, r):
        raise WindowError(f"({i}, {r}) has the wrong parity for xi_{i} = {cartan.xi(i)}")
    return (-r) // 2 + 1


def mutate_B(B: ExchangeMatrix, k: VarId) -> ExchangeMatrix:
    return B.mutate(k)
