"""Seeded random graph generators for property sweeps and experiments."""

from __future__ import annotations

import numpy as np

from .graphs import Graph, from_edges, is_connected, is_strongly_connected


def random_connected(n: int, p: float, rng: np.random.Generator, max_tries: int = 500) -> Graph:
    """Connected G(n, p) by rejection; falls back to adding a random spanning
    path when sparse draws keep failing."""
    for _ in range(max_tries):
        g = _gnp(n, p, rng, directed=False)
        if is_connected(g):
            return g
    perm = rng.permutation(n)
    backbone = [(int(perm[i]), int(perm[i + 1])) for i in range(n - 1)]
    g = _gnp(n, p, rng, directed=False)
    return from_edges(n, list(g.edges) + backbone, directed=False)


def random_strongly_connected(
    n: int, p: float, rng: np.random.Generator, max_tries: int = 500
) -> Graph:
    """Strongly connected directed G(n, p) by rejection; falls back to
    seeding a random directed cycle through all nodes."""
    for _ in range(max_tries):
        g = _gnp(n, p, rng, directed=True)
        if is_strongly_connected(g):
            return g
    perm = rng.permutation(n)
    cycle = [(int(perm[i]), int(perm[(i + 1) % n])) for i in range(n)]
    g = _gnp(n, p, rng, directed=True)
    return from_edges(n, list(g.edges) + cycle, directed=True)


def random_link_set(k: int, rng: np.random.Generator, n_nodes: int | None = None) -> Graph:
    """A graph made of k random distinct links (node count 2k by default)."""
    if n_nodes is None:
        n_nodes = max(2 * k, 2)
    pairs: set[tuple[int, int]] = set()
    while len(pairs) < k:
        i, j = rng.integers(0, n_nodes, size=2)
        if i == j:
            continue
        pairs.add((min(int(i), int(j)), max(int(i), int(j))))
    return from_edges(n_nodes, sorted(pairs), directed=False)


def _gnp(n: int, p: float, rng: np.random.Generator, directed: bool) -> Graph:
    mask = rng.random((n, n)) < p
    pairs = []
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            if not directed and i > j:
                continue
            if mask[i, j]:
                pairs.append((i, j))
    return from_edges(n, pairs, directed=directed)
