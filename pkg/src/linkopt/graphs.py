"""Unweighted graphs, Laplacian construction and candidate-link enumeration.

Graphs are immutable: node indices are dense (0..n-1), undirected edges are
stored once in canonical order (i < j), and every mutation-like operation
returns a new instance. Labels preserve the external identifiers of parsed
datasets so traces can be cross-checked against the published files.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .errors import GraphStructureError, ParseError

logger = logging.getLogger(__name__)


class LinkCandidate(NamedTuple):
    source: int
    target: int


@dataclass(frozen=True)
class Graph:
    """Simple unweighted graph, directed or undirected.

    Invariants: no self-loops, no duplicate edges, undirected edges stored
    with source < target. Adjacency queries on undirected graphs are
    symmetric.
    """

    n: int
    directed: bool
    edges: frozenset[tuple[int, int]]
    node_labels: tuple[str, ...] = field(default=())

    def __post_init__(self):
        if self.n < 0:
            raise GraphStructureError("negative node count")
        labels = self.node_labels or tuple(str(i) for i in range(self.n))
        object.__setattr__(self, "node_labels", labels)
        if len(self.node_labels) != self.n:
            raise GraphStructureError("label count does not match node count")
        for i, j in self.edges:
            if i == j:
                raise GraphStructureError(f"self-loop ({i},{i})")
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise GraphStructureError(f"edge ({i},{j}) out of range")
            if not self.directed and i > j:
                raise GraphStructureError(f"undirected edge ({i},{j}) not canonical")

    @property
    def link_count(self) -> int:
        return len(self.edges)

    def has_edge(self, i: int, j: int) -> bool:
        if self.directed:
            return (i, j) in self.edges
        return (min(i, j), max(i, j)) in self.edges

    @cached_property
    def adjacency(self) -> np.ndarray:
        """Dense 0/1 adjacency matrix; A[i, j] = 1 for link i -> j."""
        a = np.zeros((self.n, self.n), dtype=np.int64)
        for i, j in self.edges:
            a[i, j] = 1
            if not self.directed:
                a[j, i] = 1
        return a

    @cached_property
    def out_neighbors(self) -> tuple[tuple[int, ...], ...]:
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for i, j in self.edges:
            adj[i].append(j)
            if not self.directed:
                adj[j].append(i)
        return tuple(tuple(sorted(nbrs)) for nbrs in adj)

    @cached_property
    def in_neighbors(self) -> tuple[tuple[int, ...], ...]:
        if not self.directed:
            return self.out_neighbors
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for i, j in self.edges:
            adj[j].append(i)
        return tuple(tuple(sorted(nbrs)) for nbrs in adj)

    def degree_vector(self) -> np.ndarray:
        """Undirected degree, or total (in + out) degree for directed graphs."""
        if self.directed:
            return self.adjacency.sum(axis=1) + self.adjacency.sum(axis=0)
        return self.adjacency.sum(axis=1)


@dataclass(frozen=True)
class LaplacianMatrix:
    """Dense Laplacian; ``undirected`` kind is D - A, ``generalized`` is D_in - A^T."""

    matrix: np.ndarray
    kind: str  # "undirected" | "generalized"

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    def max_degree(self) -> int:
        """Largest diagonal entry: d_max, or in-degree maximum for the generalized kind."""
        return int(np.max(np.diag(self.matrix))) if self.n else 0


def from_edges(
    n: int,
    pairs: Iterable[tuple[int, int]],
    directed: bool = False,
    labels: Sequence[str] | None = None,
) -> Graph:
    """Build a graph from index pairs, canonicalizing and deduplicating."""
    edges = set()
    for i, j in pairs:
        if i == j:
            raise GraphStructureError(f"self-loop ({i},{i})")
        edges.add((i, j) if directed else (min(i, j), max(i, j)))
    return Graph(n, directed, frozenset(edges), tuple(labels) if labels else ())


def parse_edge_list(text: str | bytes, directed: bool = False) -> Graph:
    """Parse a whitespace-separated edge list into a graph.

    Lines starting with '#' or '%' are comments. Node labels are arbitrary
    strings, mapped to dense indices in first-seen order. Duplicate edges
    (including (a,b)/(b,a) for undirected input) collapse silently;
    self-loop lines are skipped and counted.
    """
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    index: dict[str, int] = {}
    pairs: list[tuple[int, int]] = []
    skipped_loops = 0
    for line_number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#") or line.startswith("%"):
            continue
        tokens = line.split()
        if len(tokens) != 2:
            raise ParseError(f"expected 2 tokens, got {len(tokens)}", line_number)
        a, b = tokens
        if a == b:
            skipped_loops += 1
            continue
        for label in (a, b):
            if label not in index:
                index[label] = len(index)
        pairs.append((index[a], index[b]))
    if skipped_loops:
        logger.warning("skipped %d self-loop line(s)", skipped_loops)
    labels = tuple(sorted(index, key=index.__getitem__))
    return from_edges(len(index), pairs, directed=directed, labels=labels)


def connected_components(g: Graph) -> list[list[int]]:
    """Weakly connected components of an undirected graph, as sorted index lists."""
    seen = [False] * g.n
    comps: list[list[int]] = []
    for start in range(g.n):
        if seen[start]:
            continue
        stack = [start]
        seen[start] = True
        comp = []
        while stack:
            v = stack.pop()
            comp.append(v)
            for w in g.out_neighbors[v]:
                if not seen[w]:
                    seen[w] = True
                    stack.append(w)
        comps.append(sorted(comp))
    return comps


def strongly_connected_components(g: Graph) -> list[list[int]]:
    """Tarjan's algorithm, iterative; returns sorted index lists."""
    index_of = [-1] * g.n
    lowlink = [0] * g.n
    on_stack = [False] * g.n
    stack: list[int] = []
    comps: list[list[int]] = []
    counter = 0

    for root in range(g.n):
        if index_of[root] != -1:
            continue
        # Explicit DFS stack of (vertex, iterator position).
        work = [(root, 0)]
        while work:
            v, pi = work.pop()
            if pi == 0:
                index_of[v] = lowlink[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            recurse = False
            neighbors = g.out_neighbors[v]
            for i in range(pi, len(neighbors)):
                w = neighbors[i]
                if index_of[w] == -1:
                    work.append((v, i + 1))
                    work.append((w, 0))
                    recurse = True
                    break
                if on_stack[w]:
                    lowlink[v] = min(lowlink[v], index_of[w])
            if recurse:
                continue
            if lowlink[v] == index_of[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                comps.append(sorted(comp))
            if work:
                parent = work[-1][0]
                lowlink[parent] = min(lowlink[parent], lowlink[v])
    return comps


def _induced_subgraph(g: Graph, nodes: list[int]) -> Graph:
    keep = sorted(nodes)
    remap = {old: new for new, old in enumerate(keep)}
    member = set(keep)
    pairs = [
        (remap[i], remap[j]) for i, j in g.edges if i in member and j in member
    ]
    labels = tuple(g.node_labels[old] for old in keep)
    return from_edges(len(keep), pairs, directed=g.directed, labels=labels)


def _largest_component(comps: list[list[int]]) -> list[int]:
    # Largest first; ties broken by the smallest contained index.
    return max(comps, key=lambda c: (len(c), -min(c)))


def giant_component(g: Graph) -> Graph:
    """Induced subgraph on the largest connected component (undirected only)."""
    if g.directed:
        raise GraphStructureError("giant_component expects an undirected graph")
    if g.n == 0:
        raise GraphStructureError("empty graph")
    return _induced_subgraph(g, _largest_component(connected_components(g)))


def largest_scc(g: Graph) -> Graph:
    """Induced subgraph on the largest strongly connected component."""
    if not g.directed:
        raise GraphStructureError("largest_scc expects a directed graph")
    if g.n == 0:
        raise GraphStructureError("empty graph")
    return _induced_subgraph(g, _largest_component(strongly_connected_components(g)))


def is_connected(g: Graph) -> bool:
    return g.n > 0 and len(connected_components(g)) == 1


def is_strongly_connected(g: Graph) -> bool:
    return g.n > 0 and len(strongly_connected_components(g)) == 1


def laplacian(g: Graph) -> LaplacianMatrix:
    """Laplacian D - A, or the generalized in-degree form D_in - A^T.

    For a directed link i -> j the generalized form adds +1 at (j, j) and
    -1 at (j, i), so row sums are zero for both kinds. Assembled in integer
    arithmetic before the float conversion.
    """
    a = g.adjacency
    if g.directed:
        q = np.diag(a.sum(axis=0)) - a.T
        kind = "generalized"
    else:
        q = np.diag(a.sum(axis=1)) - a
        kind = "undirected"
    return LaplacianMatrix(q.astype(np.float64), kind)


def candidate_links(g: Graph) -> list[LinkCandidate]:
    """All absent non-loop pairs, in lexicographic (source, target) order."""
    out: list[LinkCandidate] = []
    if g.directed:
        for i in range(g.n):
            for j in range(g.n):
                if i != j and (i, j) not in g.edges:
                    out.append(LinkCandidate(i, j))
    else:
        for i in range(g.n):
            for j in range(i + 1, g.n):
                if (i, j) not in g.edges:
                    out.append(LinkCandidate(i, j))
    return out


def add_link(g: Graph, c: LinkCandidate) -> Graph:
    """Return a new graph with the candidate link added."""
    i, j = c
    if i == j:
        raise GraphStructureError(f"self-loop ({i},{i})")
    if g.has_edge(i, j):
        raise GraphStructureError(f"link ({i},{j}) already present")
    edge = (i, j) if g.directed else (min(i, j), max(i, j))
    return Graph(g.n, g.directed, g.edges | {edge}, g.node_labels)


def as_bidirected(g: Graph) -> Graph:
    """Directed version of an undirected graph with both arcs per edge."""
    if g.directed:
        raise GraphStructureError("graph is already directed")
    pairs = [(i, j) for i, j in g.edges] + [(j, i) for i, j in g.edges]
    return from_edges(g.n, pairs, directed=True, labels=g.node_labels)


def undirected_projection(g: Graph) -> Graph:
    """Undirected view of a digraph: an edge is present if either arc is."""
    if not g.directed:
        return g
    return from_edges(g.n, list(g.edges), directed=False, labels=g.node_labels)


# Small standard constructors, used by tests and experiment scripts.

def path_graph(n: int) -> Graph:
    return from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int, directed: bool = False) -> Graph:
    pairs = [(i, (i + 1) % n) for i in range(n)]
    return from_edges(n, pairs, directed=directed)


def star_graph(leaves: int) -> Graph:
    return from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def complete_graph(n: int) -> Graph:
    return from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)])
