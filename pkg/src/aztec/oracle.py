"""Brute-force ground truth for small weighted graphs.

Everything here works by exhaustive recursion over the lowest-index
uncovered vertex, deliberately sharing no machinery with the reduction,
probability or sampling pipelines.  It exists so those pipelines can be
checked bit-exactly at desk scale.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Iterable, Sequence

MAX_VERTICES = 44


class TooLarge(ValueError):
    pass


class NoMatching(ValueError):
    pass


@dataclass
class SmallGraph:
    """A simple weighted graph on hashable vertex labels.

    Vertex order (the list order) fixes the enumeration order, so results
    are reproducible.  Zero-weight edges are legal: matchings using them
    are enumerated with weight 0 and drop out of probability queries
    naturally.
    """

    vertices: list[Hashable]
    edges: list[tuple[Hashable, Hashable, Fraction]]
    _index: dict = field(init=False, repr=False)
    _adj: list = field(init=False, repr=False)

    def __post_init__(self):
        self._index = {v: i for i, v in enumerate(self.vertices)}
        if len(self._index) != len(self.vertices):
            raise ValueError("duplicate vertex labels")
        self._adj = [[] for _ in self.vertices]
        for k, (u, v, wt) in enumerate(self.edges):
            iu, iv = self._index[u], self._index[v]
            if iu == iv:
                raise ValueError("loop edge")
            self._adj[iu].append((iv, k, Fraction(wt)))
            self._adj[iv].append((iu, k, Fraction(wt)))
        for lst in self._adj:
            lst.sort()

    def delete_vertices(self, gone: Iterable[Hashable]) -> "SmallGraph":
        gone = set(gone)
        verts = [v for v in self.vertices if v not in gone]
        edges = [(u, v, wt) for u, v, wt in self.edges if u not in gone and v not in gone]
        return SmallGraph(verts, edges)


def enumerate_matchings(g: SmallGraph) -> list[tuple[frozenset, Fraction]]:
    """All perfect matchings with their exact weight products.

    Matchings are returned as frozensets of edge indices into g.edges,
    in a deterministic order.
    """
    n = len(g.vertices)
    if n > MAX_VERTICES:
        raise TooLarge(f"{n} vertices exceeds the oracle bound {MAX_VERTICES}")
    if n % 2 != 0:
        return []
    covered = [False] * n
    chosen: list[int] = []
    out: list[tuple[frozenset, Fraction]] = []

    def recurse(weight: Fraction):
        try:
            u = covered.index(False)
        except ValueError:
            out.append((frozenset(chosen), weight))
            return
        covered[u] = True
        for v, k, wt in g._adj[u]:
            if not covered[v]:
                covered[v] = True
                chosen.append(k)
                recurse(weight * wt)
                chosen.pop()
                covered[v] = False
        covered[u] = False

    recurse(Fraction(1))
    return out


def oracle_count(g: SmallGraph) -> Fraction:
    return sum((wt for _, wt in enumerate_matchings(g)), Fraction(0))


def oracle_edge_probs(g: SmallGraph) -> dict[tuple, Fraction]:
    """Inclusion probability for every edge, keyed by (u, v) as listed."""
    matchings = enumerate_matchings(g)
    total = sum((wt for _, wt in matchings), Fraction(0))
    if total == 0:
        raise NoMatching("no positive-weight perfect matching")
    acc = [Fraction(0)] * len(g.edges)
    for edge_ids, wt in matchings:
        for k in edge_ids:
            acc[k] += wt
    return {(u, v): acc[k] / total for k, (u, v, _) in enumerate(g.edges)}


def oracle_edge_prob(g: SmallGraph, u, v) -> Fraction:
    probs = oracle_edge_probs(g)
    if (u, v) in probs:
        return probs[(u, v)]
    return probs[(v, u)]


def oracle_pattern_freq(
    g: SmallGraph,
    corners: Sequence[Hashable],
    patch_edges: Sequence[tuple[Hashable, Hashable]],
) -> dict[frozenset, Fraction]:
    """Frequencies of the local patterns at a 4-cycle patch.

    ``corners`` lists the patch vertices (A, B, C, D); ``patch_edges``
    the patch's own edges.  A matching falls in class S = the set of
    corners it matches through patch edges.  Probabilities of the six
    legal classes are returned keyed by frozenset of corners.
    """
    matchings = enumerate_matchings(g)
    total = sum((wt for _, wt in matchings), Fraction(0))
    if total == 0:
        raise NoMatching("no positive-weight perfect matching")
    patch_ids = set()
    for a, b in patch_edges:
        for k, (u, v, _) in enumerate(g.edges):
            if {u, v} == {a, b}:
                patch_ids.add(k)
    freq: dict[frozenset, Fraction] = {}
    corner_set = set(corners)
    for edge_ids, wt in matchings:
        inward = set()
        for k in edge_ids:
            if k in patch_ids:
                u, v, _ = g.edges[k]
                inward |= {u, v} & corner_set
        key = frozenset(inward)
        freq[key] = freq.get(key, Fraction(0)) + wt
    return {k: v / total for k, v in freq.items()}


def check_condensation(g: SmallGraph, a, b, c, d) -> bool:
    """M(G) M(G_ABCD) == M(G_AB) M(G_CD) + M(G_AC) M(G_BD), exactly.

    (a, b, c, d) must be the A, B, C, D corners of a 4-cycle ABDC
    bounding a face, with the graph bipartite and planar.
    """
    m = oracle_count(g)
    m_abcd = oracle_count(g.delete_vertices([a, b, c, d]))
    m_ab = oracle_count(g.delete_vertices([a, b]))
    m_cd = oracle_count(g.delete_vertices([c, d]))
    m_ac = oracle_count(g.delete_vertices([a, c]))
    m_bd = oracle_count(g.delete_vertices([b, d]))
    return m * m_abcd == m_ab * m_cd + m_ac * m_bd


# -- graph builders used by the cross-checks ---------------------------------

def aztec_small_graph(grid) -> SmallGraph:
    """The weighted diamond as a SmallGraph (vertex labels = lattice points).

    Uses only the canonical data model (edge ids and their endpoints),
    none of the pipeline algorithms.
    """
    from . import grid as gridmod

    n = grid.order
    verts = sorted(gridmod.aztec_vertices(n))
    edges = []
    for e in gridmod.all_edges(n):
        u, v = sorted(gridmod.edge_vertices(n, e))
        edges.append((u, v, Fraction(grid.weight(e))))
    return SmallGraph(verts, edges)


def grid_graph(m: int) -> SmallGraph:
    """The m x m square grid graph, all weights 1."""
    verts = [(a, b) for a in range(1, m + 1) for b in range(1, m + 1)]
    edges = []
    for a in range(1, m + 1):
        for b in range(1, m + 1):
            if b < m:
                edges.append(((a, b), (a, b + 1), Fraction(1)))
            if a < m:
                edges.append(((a, b), (a + 1, b), Fraction(1)))
    return SmallGraph(verts, edges)
