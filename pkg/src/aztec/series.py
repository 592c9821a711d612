"""Truncated three-variable generating functions for the four-class
weighting (all-t, all-1, horizontal-t, horizontal-1 cells).

Everything is a power series in z whose coefficients are sparse Laurent
polynomials in x, y over exact rationals, with t a fixed rational
parameter.  The creation-rate series e, f, g, h and the inclusion-
probability series E, F, G, H satisfy

    e = 1 + t^2/(1+t^2) z ((x+1/x) g + (y+1/y) h) - z^2 f
    f =       1/(1+t^2) z ((x+1/x) h + (y+1/y) g) - z^2 e
    g =             1/2 z ((x+1/x) f + (y+1/y) e) - z^2 h
    h =             1/2 z ((x+1/x) e + (y+1/y) f) - z^2 g

    E = Hyz + 1/2 ez            F = Gyz + 1/2 fz
    G = Eyz + t^2/(1+t^2) gz    H = Fyz + 1/(1+t^2) hz

solved degree by degree (each right-hand side only needs lower degrees).
P = z (E + F + G + H) collects every north-going bond probability.

Coefficient alignment, fixed by exact cross-checks against the
probability sweep: the coefficient of x^i y^j in the z^n slice of
E+F+G+H (that is, the z^(n+1) slice of P) is the inclusion probability
of the north-going bond of cell (r, c) of the order-n diamond under
four_class_weighting(n, t), where i = c - r and j = n + 1 - r - c.  The
deficit of that cell while shuffling into order n is likewise the
(i, j) coefficient of the z^(n-1) slice of e/f/g/h, split by cell
class.  Supports satisfy i + j + n odd and |i| + |j| < n + 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

Key = tuple[int, int]
Slice = dict[Key, Fraction]


@dataclass
class SeriesTable:
    """z-truncated series with sparse Laurent-polynomial coefficients."""

    max_z: int
    slices: list[Slice] = field(default_factory=list)

    def __post_init__(self):
        while len(self.slices) <= self.max_z:
            self.slices.append({})

    def coeff(self, i: int, j: int, m: int) -> Fraction:
        if not (0 <= m <= self.max_z):
            raise IndexError(f"z^{m} beyond truncation {self.max_z}")
        return self.slices[m].get((i, j), Fraction(0))

    def terms(self):
        for m, sl in enumerate(self.slices):
            for (i, j), v in sorted(sl.items()):
                if v != 0:
                    yield i, j, m, v


def _sl_add(dst: Slice, src: Slice, scale: Fraction = Fraction(1)) -> None:
    for k, v in src.items():
        nv = dst.get(k, Fraction(0)) + v * scale
        if nv:
            dst[k] = nv
        else:
            dst.pop(k, None)


def _sl_mul_xhat(src: Slice) -> Slice:
    """(x + 1/x) * src."""
    out: Slice = {}
    for (i, j), v in src.items():
        for di in (1, -1):
            k = (i + di, j)
            nv = out.get(k, Fraction(0)) + v
            if nv:
                out[k] = nv
            else:
                out.pop(k, None)
    return out


def _sl_mul_yhat(src: Slice) -> Slice:
    out: Slice = {}
    for (i, j), v in src.items():
        for dj in (1, -1):
            k = (i, j + dj)
            nv = out.get(k, Fraction(0)) + v
            if nv:
                out[k] = nv
            else:
                out.pop(k, None)
    return out


def _sl_mul_y(src: Slice) -> Slice:
    return {(i, j + 1): v for (i, j), v in src.items()}


@dataclass
class ClassRates:
    """Net creation rates of the four cell classes."""

    e: SeriesTable
    f: SeriesTable
    g: SeriesTable
    h: SeriesTable


def solve_efgh(t: Fraction, trunc: int) -> ClassRates:
    """Forward-substitute the creation-rate system up to z^trunc."""
    t = Fraction(t)
    ct = t * t / (1 + t * t)
    cf = 1 / (1 + t * t)
    half = Fraction(1, 2)
    e, f, g, h = (SeriesTable(trunc) for _ in range(4))
    for m in range(trunc + 1):
        if m == 0:
            e.slices[0][(0, 0)] = Fraction(1)
            continue
        prev_e, prev_f = e.slices[m - 1], f.slices[m - 1]
        prev_g, prev_h = g.slices[m - 1], h.slices[m - 1]
        _sl_add(e.slices[m], _sl_mul_xhat(prev_g), ct)
        _sl_add(e.slices[m], _sl_mul_yhat(prev_h), ct)
        _sl_add(f.slices[m], _sl_mul_xhat(prev_h), cf)
        _sl_add(f.slices[m], _sl_mul_yhat(prev_g), cf)
        _sl_add(g.slices[m], _sl_mul_xhat(prev_f), half)
        _sl_add(g.slices[m], _sl_mul_yhat(prev_e), half)
        _sl_add(h.slices[m], _sl_mul_xhat(prev_e), half)
        _sl_add(h.slices[m], _sl_mul_yhat(prev_f), half)
        if m >= 2:
            _sl_add(e.slices[m], f.slices[m - 2], Fraction(-1))
            _sl_add(f.slices[m], e.slices[m - 2], Fraction(-1))
            _sl_add(g.slices[m], h.slices[m - 2], Fraction(-1))
            _sl_add(h.slices[m], g.slices[m - 2], Fraction(-1))
    return ClassRates(e, f, g, h)


def solve_EFGH(rates: ClassRates, t: Fraction, trunc: int):
    """The per-class bond-probability series, up to z^trunc."""
    t = Fraction(t)
    ct = t * t / (1 + t * t)
    cf = 1 / (1 + t * t)
    half = Fraction(1, 2)
    E, F, G, H = (SeriesTable(trunc) for _ in range(4))
    for m in range(1, trunc + 1):
        _sl_add(E.slices[m], _sl_mul_y(H.slices[m - 1]))
        _sl_add(E.slices[m], rates.e.slices[m - 1], half)
        _sl_add(F.slices[m], _sl_mul_y(G.slices[m - 1]))
        _sl_add(F.slices[m], rates.f.slices[m - 1], half)
        _sl_add(G.slices[m], _sl_mul_y(E.slices[m - 1]))
        _sl_add(G.slices[m], rates.g.slices[m - 1], ct)
        _sl_add(H.slices[m], _sl_mul_y(F.slices[m - 1]))
        _sl_add(H.slices[m], rates.h.slices[m - 1], cf)
    return E, F, G, H


def assemble_P(E: SeriesTable, F: SeriesTable, G: SeriesTable, H: SeriesTable) -> SeriesTable:
    """P = z (E + F + G + H); the z^(n+1) slice holds order n."""
    trunc = E.max_z
    P = SeriesTable(trunc + 1)
    for m in range(trunc + 1):
        for table in (E, F, G, H):
            _sl_add(P.slices[m + 1], table.slices[m])
    return P


def bond_probabilities(t: Fraction, order: int) -> Slice:
    """The order-n slice of north-going bond probabilities, by (i, j)."""
    rates = solve_efgh(t, order)
    E, F, G, H = solve_EFGH(rates, t, order)
    out: Slice = {}
    for table in (E, F, G, H):
        _sl_add(out, table.slices[order])
    return out


def series_to_json(P: SeriesTable, t: Fraction) -> dict:
    """Terms keyed by diamond order n (the z-degree in E+F+G+H)."""
    terms = [
        {"i": i, "j": j, "n": m - 1, "coeff": str(v)}
        for i, j, m, v in P.terms()
        if m >= 1
    ]
    return {"t": str(Fraction(t)), "N": P.max_z - 1, "terms": terms}
