"""Nodal centrality baselines: degree, eigenvector centrality, betweenness."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from .errors import NonConvergenceError
from .graphs import Graph
from .spectral import power_iteration


@dataclass(frozen=True)
class NodeScores:
    values: np.ndarray
    kind: str  # "degree" | "eigenvector" | "betweenness"


def degrees(g: Graph) -> NodeScores:
    """Nodal degree; total (in + out) degree for directed graphs."""
    return NodeScores(g.degree_vector().astype(np.float64), "degree")


def eigenvector_centrality(g: Graph, tol: float = 1e-10) -> NodeScores:
    """Principal adjacency eigenvector, nonnegative and unit 2-norm.

    Power iteration on A + I: the shift keeps the dominant eigenvalue simple
    on bipartite graphs without changing the eigenvector.
    """
    a = g.adjacency.astype(np.float64)
    pair = power_iteration(a + np.eye(g.n), tol=tol)
    if not pair.converged:
        raise NonConvergenceError("eigenvector centrality power iteration did not converge")
    v = pair.vector
    # Perron vector of a connected graph has one sign; make it nonnegative.
    if v.sum() < 0:
        v = -v
    return NodeScores(np.abs(v), "eigenvector")


def betweenness(g: Graph) -> NodeScores:
    """Shortest-path betweenness via Brandes' accumulation.

    Unnormalized; endpoints excluded. Undirected graphs count each
    source-target pair once (accumulated totals are halved).
    """
    n = g.n
    scores = np.zeros(n)
    neighbors = g.out_neighbors
    for s in range(n):
        # Single-source shortest-path counts.
        dist = [-1] * n
        sigma = [0.0] * n
        preds: list[list[int]] = [[] for _ in range(n)]
        dist[s] = 0
        sigma[s] = 1.0
        order: list[int] = []
        queue = deque([s])
        while queue:
            v = queue.popleft()
            order.append(v)
            for w in neighbors[v]:
                if dist[w] < 0:
                    dist[w] = dist[v] + 1
                    queue.append(w)
                if dist[w] == dist[v] + 1:
                    sigma[w] += sigma[v]
                    preds[w].append(v)
        # Dependency accumulation in reverse BFS order.
        delta = [0.0] * n
        for w in reversed(order):
            for v in preds[w]:
                delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w])
            if w != s:
                scores[w] += delta[w]
    if not g.directed:
        scores /= 2.0
    return NodeScores(scores, "betweenness")
