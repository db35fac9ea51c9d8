"""Graph views of parity vectors: tau-graphs, their stack, and the sigma-graph.

For a parity vector on k columns, the tau-graph of column c joins {i, j}
when tau^c_{ij} = 1; it always decomposes as an isolated vertex c plus a
complete bipartite graph on the rest (one side may be empty).  The stack
superimposes all k tau-graphs mod 2.  The sigma-graph has the sigma matrix
as adjacency matrix: undirected when that matrix is symmetric (n = 0, 1 mod
4), a tournament otherwise.

Graphs have no loops or parallel edges.  "Complementing" a digraph means
reversing every edge, and switching a digraph at v reverses the edges at v.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import OAError
from .parity import SigmaMatrix, StandardSigma, TauVector, check_plausible


@dataclass(frozen=True, eq=False)
class SimpleGraph:
    """Loop-free graph on vertices 1..k backed by an adjacency matrix."""

    k: int
    directed: bool
    adj: np.ndarray  # (k+1, k+1) uint8, row/col 0 unused

    @classmethod
    def from_edges(cls, k, edges, directed=False):
        adj = np.zeros((k + 1, k + 1), dtype=np.uint8)
        for i, j in edges:
            adj[i, j] = 1
            if not directed:
                adj[j, i] = 1
        return cls(k=k, directed=directed, adj=_frozen(adj))

    def has_edge(self, i: int, j: int) -> bool:
        return bool(self.adj[i, j])

    def edges(self) -> list[tuple[int, int]]:
        if self.directed:
            return [tuple(e) for e in np.argwhere(self.adj).tolist()]
        out = np.argwhere(np.triu(self.adj, 1))
        return [tuple(e) for e in out.tolist()]

    def __eq__(self, other):
        return (
            isinstance(other, SimpleGraph)
            and self.k == other.k
            and self.directed == other.directed
            and np.array_equal(self.adj, other.adj)
        )

    def __hash__(self):
        return hash((self.k, self.directed, self.adj.tobytes()))


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


def graph_switch(g: SimpleGraph, v: int) -> SimpleGraph:
    """Complement the neighbourhood of v (undirected) or reverse its edges."""
    if not 1 <= v <= g.k:
        raise OAError(f"vertex {v} out of range 1..{g.k}")
    adj = g.adj.copy()
    if g.directed:
        row = adj[v].copy()
        adj[v] = adj[:, v]
        adj[:, v] = row
    else:
        adj[v, 1:] ^= 1
        adj[1:, v] ^= 1
        adj[v, v] = 0
    return SimpleGraph(k=g.k, directed=g.directed, adj=_frozen(adj))


def graph_complement(g: SimpleGraph) -> SimpleGraph:
    """Complement all edges (undirected) or reverse all edges (directed)."""
    if g.directed:
        adj = np.ascontiguousarray(g.adj.T)
    else:
        adj = g.adj.copy()
        off = ~np.eye(g.k + 1, dtype=bool)
        off[0, :] = False
        off[:, 0] = False
        adj[off] ^= 1
    return SimpleGraph(k=g.k, directed=g.directed, adj=_frozen(adj))


def to_dot(g: SimpleGraph, name: str = "G") -> str:
    """Plain DOT emitter (no layout hints)."""
    kind, arrow = ("digraph", "->") if g.directed else ("graph", "--")
    lines = [f"{kind} {name} {{"]
    seen = set()
    for i, j in g.edges():
        lines.append(f"  {i} {arrow} {j};")
        seen.update((i, j))
    for v in range(1, g.k + 1):
        if v not in seen:
            lines.append(f"  {v};")
    lines.append("}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# tau-graphs


@dataclass(frozen=True)
class TauGraphDecomposition:
    """Isolated vertex c plus the complete bipartite graph on part1 | part2.

    part1 is the side containing the lowest-labelled vertex when the graph
    has edges, and is empty for the edgeless graph (reported as K_{0,k-1}).
    """

    c: int
    part1: tuple
    part2: tuple

    @property
    def sizes(self) -> tuple[int, int]:
        return (len(self.part1), len(self.part2))


def tau_graph(t: TauVector, c: int) -> SimpleGraph:
    """The tau-graph of column c as a plain graph on 1..k."""
    edges = [
        (i, j)
        for i in range(1, t.k + 1)
        for j in range(i + 1, t.k + 1)
        if c not in (i, j) and t.get(c, i, j)
    ]
    return SimpleGraph.from_edges(t.k, edges)


def _split_bipartite(verts, edge) -> tuple[tuple, tuple]:
    """Split vertices of a complete bipartite graph given its edge predicate.

    Raises OAError when the edges do not form a complete bipartite graph
    spanning all of ``verts``.
    """
    if not any(edge(i, j) for i in verts for j in verts if i < j):
        return (), tuple(verts)
    w = verts[0]
    part2 = tuple(v for v in verts if v != w and edge(w, v))
    part1 = tuple(v for v in verts if v == w or not edge(w, v))
    for i in verts:
        for j in verts:
            if i < j and edge(i, j) != ((i in part1) != (j in part1)):
                raise OAError(
                    f"edge set is not complete bipartite (offending pair ({i}, {j}))"
                )
    return part1, part2


def tau_graphs(t: TauVector) -> list[TauGraphDecomposition]:
    """Decompose every tau-graph as isolated vertex + complete bipartite."""
    out = []
    for c in range(1, t.k + 1):
        verts = [v for v in range(1, t.k + 1) if v != c]
        p1, p2 = _split_bipartite(verts, lambda i, j: bool(t.get(c, i, j)))
        out.append(TauGraphDecomposition(c=c, part1=p1, part2=p2))
    return out


# ---------------------------------------------------------------------------
# the stack


@dataclass(frozen=True)
class StackClassification:
    """Shape of the mod-2 superposition of all tau-graphs.

    shape is "complete-bipartite" (parts part1 | part2, n = 0,1 mod 4) or
    "union-of-cliques" (cliques part1, part2, n = 2,3 mod 4).  For plane
    candidates (k = n+1) with a plane-plausible vector the refined shape
    ("empty" or "complete") is asserted and recorded.
    """

    shape: str
    part1: tuple
    part2: tuple
    refined: str | None = None


def stack_graph(t: TauVector) -> SimpleGraph:
    full = t.mirrored()
    sums = full[1:].sum(axis=0) & 1
    edges = [
        (i, j)
        for i in range(1, t.k + 1)
        for j in range(i + 1, t.k + 1)
        if sums[i, j]
    ]
    return SimpleGraph.from_edges(t.k, edges)


def stack(t: TauVector) -> StackClassification:
    """Classify the stack per the residue of n mod 4."""
    g = stack_graph(t)
    k = t.k
    verts = list(range(1, k + 1))
    if t.nmod4 in (0, 1):
        p1, p2 = _split_bipartite(verts, g.has_edge)
        shape = "complete-bipartite"
    else:
        c1 = tuple(v for v in verts if v == 1 or g.has_edge(1, v))
        c2 = tuple(v for v in verts if v not in c1)
        for i in verts:
            for j in verts:
                if i < j and g.has_edge(i, j) != ((i in c1) == (j in c1)):
                    raise OAError(
                        f"stack is not a union of two cliques (offending pair ({i}, {j}))"
                    )
        p1, p2 = c1, c2
        shape = "union-of-cliques"
    refined = None
    if t.n is not None and t.k == t.n + 1:
        if check_plausible(t).pp_plausible == "yes":
            if t.nmod4 in (0, 1):
                if p1 or len(p2) != k or g.edges():
                    raise OAError("plane-plausible stack must be empty for n = 0,1 mod 4")
                refined = "empty"
            else:
                if p2 or len(p1) != k:
                    raise OAError("plane-plausible stack must be complete for n = 2,3 mod 4")
                refined = "complete"
    return StackClassification(shape=shape, part1=p1, part2=p2, refined=refined)


# ---------------------------------------------------------------------------
# the sigma-graph


@dataclass(frozen=True)
class SigmaGraphReport:
    """Orientation, degrees and degree-parity summary of a sigma-graph.

    ``degree_law`` records the plane-case degree condition when k = n+1 and
    n is known ("pass"/"fail"), else None.  In- and out-degrees are reported
    separately even for undirected graphs, keeping one report schema.
    """

    oriented: bool
    graph: SimpleGraph
    out_degrees: tuple
    in_degrees: tuple
    out_parity_uniform: bool
    in_parity_uniform: bool
    degree_law: str | None
    degree_law_detail: str


def sigma_graph(s: SigmaMatrix | StandardSigma) -> SigmaGraphReport:
    full = s.to_matrix() if isinstance(s, StandardSigma) else s
    oriented = full.nmod4 in (2, 3)
    adj = full.m.copy()
    g = SimpleGraph(k=full.k, directed=oriented, adj=_frozen(adj))
    out_deg = tuple(int(x) for x in full.m[1:, 1:].sum(axis=1))
    in_deg = tuple(int(x) for x in full.m[1:, 1:].sum(axis=0))
    out_uni = len({d & 1 for d in out_deg}) == 1
    in_uni = len({d & 1 for d in in_deg}) == 1
    law = None
    detail = ""
    if full.n is not None and full.k == full.n + 1:
        nm = full.nmod4
        if nm == 0:
            ok = all(d % 2 == 0 for d in out_deg)
            detail = "all degrees even"
        elif nm == 1:
            ok = out_uni
            detail = "all degrees of one parity"
        elif nm == 2:
            ok = all(d % 2 == 1 for d in out_deg) and all(d % 2 == 1 for d in in_deg)
            detail = "all in-degrees and out-degrees odd"
        else:
            ok = out_uni and in_uni and (out_deg[0] & 1) != (in_deg[0] & 1)
            detail = "in-degrees of one parity, out-degrees of the other"
        law = "pass" if ok else "fail"
    return SigmaGraphReport(
        oriented=oriented,
        graph=g,
        out_degrees=out_deg,
        in_degrees=in_deg,
        out_parity_uniform=out_uni,
        in_parity_uniform=in_uni,
        degree_law=law,
        degree_law_detail=detail,
    )
