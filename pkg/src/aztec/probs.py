"""Edge-inclusion probabilities via the backward sweep.

Walking back up the reduction, the exact probabilities of one level are
turned into the next level's by three per-cell moves: place the smaller
diamond's values on the coinciding edges of the larger one (outer flank
starts at 0), swap the numbers on opposite sides of every cell, then add
the cell's deficit times a creation bias:

    value[slot] += (1 - p - q - r - s) * bias[slot]

with bias wz/(wz+xy) on NW and SE and xy/(wz+xy) on NE and SW, taken
from that level's weights in the trace.  The deficit may be negative (a
surplus); the formula applies unchanged.

The same per-cell update transfers probabilities across one urban
renewal of any city, which is what lifts fortress probabilities; the
six-way local-pattern split of a renewed city is also provided.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .grid import CellGrid, CellWeights, EdgeRef, SLOTS, cell_factor
from .reduction import ReductionTrace
from .scalars import EPS, FLOAT64, PoleAtZero, ZeroWeight, eps_limit0


@dataclass(frozen=True)
class ProbGrid:
    """Per-slot inclusion probabilities for one diamond order.

    Planes mirror CellGrid's layout: p at NW, q at NE, r at SW, s at SE.
    """

    order: int
    p: list
    q: list
    r: list
    s: list

    def cell(self, r: int, c: int) -> CellWeights:
        i, j = r - 1, c - 1
        return CellWeights(self.p[i][j], self.q[i][j], self.r[i][j], self.s[i][j])

    def value(self, e: EdgeRef):
        plane = {"NW": self.p, "NE": self.q, "SW": self.r, "SE": self.s}[e.slot]
        return plane[e.r - 1][e.c - 1]

    def items(self):
        for r in range(1, self.order + 1):
            for c in range(1, self.order + 1):
                cw = self.cell(r, c)
                for slot, v in zip(SLOTS, cw):
                    yield EdgeRef(r, c, slot), v


def cell_update(pre: CellWeights, weights: CellWeights) -> CellWeights:
    """One cell's exact values from its pre-swap values and weights.

    ``pre`` holds the approximate probabilities sitting on the cell's
    edges before the swap; the result is (swapped value) + deficit*bias
    per slot.
    """
    delta = cell_factor(weights)
    bias_para = weights.w * weights.z / delta
    bias_anti = weights.x * weights.y / delta
    deficit = 1 - pre.w - pre.x - pre.y - pre.z
    return CellWeights(
        pre.z + deficit * bias_para,
        pre.y + deficit * bias_anti,
        pre.x + deficit * bias_anti,
        pre.w + deficit * bias_para,
    )


def sweep_levels(trace: ReductionTrace):
    """Yield the ProbGrid of every order 1..n, in that order.

    Values are raw backend scalars; prob_sweep takes the final limits.
    """
    n = trace.order
    prev: ProbGrid | None = None
    for k in range(1, n + 1):
        gk = trace.grid_of_order(k)
        p = [[None] * k for _ in range(k)]
        q = [[None] * k for _ in range(k)]
        r_ = [[None] * k for _ in range(k)]
        s = [[None] * k for _ in range(k)]

        def small(plane, i, j):
            # 0-based lookup into the order-(k-1) grid; off-grid is 0.
            if prev is None or not (0 <= i < k - 1 and 0 <= j < k - 1):
                return 0
            return plane[i][j]

        for i in range(k):
            for j in range(k):
                pre = CellWeights(
                    w=small(prev.s, i - 1, j - 1) if prev else 0,
                    x=small(prev.r, i - 1, j) if prev else 0,
                    y=small(prev.q, i, j - 1) if prev else 0,
                    z=small(prev.p, i, j) if prev else 0,
                )
                exact = cell_update(pre, gk.cell(i + 1, j + 1))
                p[i][j], q[i][j], r_[i][j], s[i][j] = exact
        prev = ProbGrid(k, p, q, r_, s)
        yield prev


def prob_sweep(trace: ReductionTrace) -> ProbGrid:
    """Exact edge-inclusion probabilities for the trace's full order."""
    if trace.backend == EPS:
        total = eps_limit0(trace.factor_product())
        if total == 0:
            raise PoleAtZero("no positive-weight perfect matching")
    last = None
    for last in sweep_levels(trace):
        pass
    if last is None:
        raise ValueError("empty trace")
    if trace.backend == EPS:
        lim = eps_limit0
        planes = [
            [[lim(v) for v in row] for row in plane]
            for plane in (last.p, last.q, last.r, last.s)
        ]
        last = ProbGrid(last.order, *planes)
    return last


# -- one urban renewal, in probability terms ---------------------------------

@dataclass(frozen=True)
class CellLocalPattern:
    """Probabilities of the six inward-matching classes of a renewed city.

    Keys name the subset of the city's corner vertices (A top, B left,
    C right, D bottom) matched inside the patch.  The six values sum
    to 1.
    """

    all_four: Fraction
    ab: Fraction
    ac: Fraction
    bd: Fraction
    cd: Fraction
    none: Fraction

    def as_dict(self) -> dict[frozenset, Fraction]:
        return {
            frozenset("ABCD"): self.all_four,
            frozenset("AB"): self.ab,
            frozenset("AC"): self.ac,
            frozenset("BD"): self.bd,
            frozenset("CD"): self.cd,
            frozenset(): self.none,
        }


def renewal_local_patterns(P, Q, R, S, W, X, Y, Z) -> CellLocalPattern:
    """Local-pattern probabilities of a renewed city with edge
    probabilities P, Q, R, S and non-vanishing weights W, X, Y, Z."""
    for v in (W, X, Y, Z):
        if v == 0:
            raise ZeroWeight("local patterns need non-vanishing city weights")
    dprime = X * Y * P * S + W * Z * Q * R
    all_four = (W * Z + X * Y) * dprime / (W * X * Y * Z)
    return CellLocalPattern(
        all_four=all_four,
        ab=P - dprime / (X * Y),
        ac=Q - dprime / (W * Z),
        bd=R - dprime / (W * Z),
        cd=S - dprime / (X * Y),
        none=1 - P - Q - R - S + all_four,
    )


def transfer_probability_through_renewal(P, Q, R, S, weights: CellWeights) -> CellWeights:
    """Edge probabilities (p, q, r, s) of a city of G, given the renewed
    city's probabilities (P, Q, R, S) in G' and G's own weights."""
    return cell_update(CellWeights(P, Q, R, S), weights)


def check_vertex_normalization(pg: ProbGrid) -> None:
    """Every vertex's incident probabilities must sum to exactly 1."""
    from .grid import aztec_vertices, all_edges, edge_vertices

    n = pg.order
    sums = {v: Fraction(0) for v in aztec_vertices(n)}
    for e in all_edges(n):
        val = pg.value(e)
        for v in edge_vertices(n, e):
            sums[v] += val
    bad = {v: s for v, s in sums.items() if s != 1}
    if bad:
        raise AssertionError(f"vertex normalization violated at {sorted(bad)[:4]}")
