"""Greedy and exhaustive strategies for adding links under a budget.

Every strategy adds one link per iteration and records, besides its own
selection metric, the exact objective (algebraic connectivity, or its
generalized directed counterpart) recomputed from a fresh eigensolve, so
traces from cheap heuristics and exact greedy are directly comparable.

Selection is deterministic: candidates are scanned in lexicographic
(source, target) order and ties keep the earliest candidate, so repeated
runs (and threaded candidate scans) produce identical traces.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Sequence

import numpy as np

from .centrality import betweenness, degrees, eigenvector_centrality
from .directed import build_directed_context, link_score_lower, link_score_upper
from .errors import GraphStructureError, InstanceTooLargeError
from .graphs import (
    Graph,
    LinkCandidate,
    add_link,
    candidate_links,
    is_connected,
    is_strongly_connected,
    laplacian,
    undirected_projection,
)
from .perturb import build_shift_operator, estimate_mu_second_order, link_score_undirected, perturbation_from_links
from .spectral import algebraic_connectivity, generalized_algebraic_connectivity

UNDIRECTED_STRATEGIES = (
    "exact-mu",
    "metric-omega",
    "min-degree-product",
    "min-eigcent-product",
    "min-betweenness-product",
)
DIRECTED_STRATEGIES = (
    "exact-remu",
    "metric-lower",
    "metric-lower-inverse",
    "metric-upper",
    "undirected-handling",
)
ALL_STRATEGIES = UNDIRECTED_STRATEGIES + DIRECTED_STRATEGIES


@dataclass(frozen=True)
class TraceStep:
    iteration: int
    link: LinkCandidate
    metric: float
    objective: float
    wall_ms: float = 0.0
    note: str = ""


@dataclass(frozen=True)
class GreedyTrace:
    strategy: str
    k: int
    initial_objective: float
    steps: tuple[TraceStep, ...] = ()
    truncated: bool = False

    @property
    def final_objective(self) -> float:
        return self.steps[-1].objective if self.steps else self.initial_objective


def _score_all(
    cands: Sequence[LinkCandidate],
    score: Callable[[LinkCandidate], float],
    threads: int = 1,
) -> list[float]:
    """Candidate scores in candidate order; thread count never changes results."""
    if threads <= 1 or len(cands) < 32:
        return [score(c) for c in cands]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(score, cands))


def _argbest(
    cands: Sequence[LinkCandidate], scores: Sequence[float], minimize: bool = False
) -> int:
    best = 0
    for idx in range(1, len(cands)):
        if (scores[idx] < scores[best]) if minimize else (scores[idx] > scores[best]):
            best = idx
    return best


def _exact_objective(g: Graph) -> float:
    if g.directed:
        return generalized_algebraic_connectivity(g)
    return algebraic_connectivity(g)


def _greedy_loop(
    g: Graph,
    k: int,
    strategy: str,
    pick: Callable[[Graph], tuple[LinkCandidate, float, str] | None],
) -> GreedyTrace:
    """Common greedy skeleton: pick, add, recompute the exact objective."""
    initial = _exact_objective(g)
    steps: list[TraceStep] = []
    truncated = False
    for iteration in range(1, k + 1):
        started = time.perf_counter()
        choice = pick(g)
        if choice is None:
            truncated = True
            break
        link, metric, note = choice
        g = add_link(g, link)
        if g.directed and not is_strongly_connected(g):
            raise GraphStructureError("addition broke strong connectivity")  # cheap insurance
        objective = _exact_objective(g)
        wall_ms = (time.perf_counter() - started) * 1000.0
        steps.append(TraceStep(iteration, link, metric, objective, wall_ms, note))
    return GreedyTrace(strategy, k, initial, tuple(steps), truncated)


def greedy_exact_undirected(g: Graph, k: int, threads: int = 1) -> GreedyTrace:
    """Add the link maximizing the exact connectivity, k times."""
    _require_undirected_connected(g)

    def pick(cur: Graph):
        cands = candidate_links(cur)
        if not cands:
            return None
        scores = _score_all(cands, lambda c: algebraic_connectivity(add_link(cur, c)), threads)
        best = _argbest(cands, scores)
        return cands[best], scores[best], ""

    return _greedy_loop(g, k, "exact-mu", pick)


def greedy_metric_undirected(
    g: Graph, k: int, epsilon: float | None = None, threads: int = 1
) -> GreedyTrace:
    """Add the link with the widest dominant-eigenvector gap |z_i - z_j|.

    The shift operator is rebuilt each iteration so z tracks the grown
    graph.
    """
    _require_undirected_connected(g)

    def pick(cur: Graph):
        cands = candidate_links(cur)
        if not cands:
            return None
        op = build_shift_operator(laplacian(cur), epsilon=epsilon)
        scores = _score_all(cands, lambda c: link_score_undirected(op, c), threads)
        best = _argbest(cands, scores)
        return cands[best], scores[best], ""

    return _greedy_loop(g, k, "metric-omega", pick)


def greedy_baseline(
    g: Graph, k: int, kind: str, frozen_scores: bool = False, threads: int = 1
) -> GreedyTrace:
    """Add the candidate minimizing the product of nodal centrality scores."""
    _require_undirected_connected(g)
    compute = {
        "degree": degrees,
        "eigenvector": eigenvector_centrality,
        "betweenness": betweenness,
    }[kind]
    frozen = compute(g).values if frozen_scores else None

    def pick(cur: Graph):
        cands = candidate_links(cur)
        if not cands:
            return None
        values = frozen if frozen is not None else compute(cur).values
        scores = _score_all(cands, lambda c: float(values[c.source] * values[c.target]), threads)
        best = _argbest(cands, scores, minimize=True)
        return cands[best], scores[best], ""

    return _greedy_loop(g, k, f"min-{kind}-product", pick)


def greedy_exact_directed(g: Graph, k: int, threads: int = 1) -> GreedyTrace:
    """Add the arc maximizing the exact generalized connectivity, k times."""
    _require_directed_strong(g)

    def pick(cur: Graph):
        cands = candidate_links(cur)
        if not cands:
            return None
        scores = _score_all(
            cands, lambda c: generalized_algebraic_connectivity(add_link(cur, c)), threads
        )
        best = _argbest(cands, scores)
        return cands[best], scores[best], ""

    return _greedy_loop(g, k, "exact-remu", pick)


def greedy_metric_directed(
    g: Graph,
    k: int,
    metric: str = "lower",
    epsilon: float | None = None,
    alpha: float | None = None,
    threads: int = 1,
) -> GreedyTrace:
    """Add the arc maximizing a directed bound metric, rebuilt each iteration.

    ``metric="lower"`` scores via the Hermitian-part bound, ``"upper"`` via
    the exponential row gap. Directed objectives are not monotone, so the
    recorded exact values may dip between iterations.
    """
    _require_directed_strong(g)
    if metric not in ("lower", "upper"):
        raise ValueError(f"unknown directed metric {metric!r}")

    def pick(cur: Graph):
        cands = candidate_links(cur)
        if not cands:
            return None
        ctx = build_directed_context(laplacian(cur), epsilon=epsilon, alpha=alpha)
        if metric == "lower":
            score = lambda c: link_score_lower(ctx, c)
        else:
            score = lambda c: link_score_upper(ctx, c)
        scores = _score_all(cands, score, threads)
        best = _argbest(cands, scores)
        return cands[best], scores[best], ""

    return _greedy_loop(g, k, f"metric-{metric}", pick)


def greedy_inverse_direction(
    g: Graph,
    k: int,
    epsilon: float | None = None,
    alpha: float | None = None,
    threads: int = 1,
) -> GreedyTrace:
    """Select by the lower-bound metric, then insert the reversed arc.

    If the reversal already exists the originally selected arc goes in
    instead and the step is flagged.
    """
    _require_directed_strong(g)

    def pick(cur: Graph):
        cands = candidate_links(cur)
        if not cands:
            return None
        ctx = build_directed_context(laplacian(cur), epsilon=epsilon, alpha=alpha)
        scores = _score_all(cands, lambda c: link_score_lower(ctx, c), threads)
        best = _argbest(cands, scores)
        chosen = cands[best]
        reverse = LinkCandidate(chosen.target, chosen.source)
        if cur.has_edge(*reverse):
            return chosen, scores[best], "reverse-occupied"
        return reverse, scores[best], ""

    return _greedy_loop(g, k, "metric-lower-inverse", pick)


def greedy_undirected_handling(g: Graph, k: int, seed: int = 42, threads: int = 1) -> GreedyTrace:
    """Pick the best pair on the undirected projection, orient it by coin flip.

    A pair is a candidate only when neither arc exists; the seeded flip
    chooses which single arc to insert.
    """
    _require_directed_strong(g)
    rng = np.random.default_rng(seed)

    def pick(cur: Graph):
        proj = undirected_projection(cur)
        pairs = candidate_links(proj)
        if not pairs:
            return None
        op = build_shift_operator(laplacian(proj))
        scores = _score_all(pairs, lambda c: link_score_undirected(op, c), threads)
        order = sorted(range(len(pairs)), key=lambda idx: (-scores[idx], pairs[idx]))
        for idx in order:
            i, j = pairs[idx]
            arc = LinkCandidate(i, j) if rng.random() < 0.5 else LinkCandidate(j, i)
            if not cur.has_edge(*arc):
                return arc, scores[idx], ""
            flipped = LinkCandidate(arc.target, arc.source)
            if not cur.has_edge(*flipped):
                return flipped, scores[idx], "orientation-occupied"
        return None

    return _greedy_loop(g, k, "undirected-handling", pick)


def brute_force_optimal(
    g: Graph,
    k: int,
    objective: str = "exact-mu",
    guard: int = 1_000_000,
) -> tuple[tuple[LinkCandidate, ...], float]:
    """Exhaustive search over k-subsets of candidate links.

    Objectives: "exact-mu" (undirected connectivity), "exact-remu"
    (directed), "impact-E" (second-order impact on the original shift
    operator). Ties keep the lexicographically smallest subset; the guard
    caps C(candidates, k).
    """
    cands = candidate_links(g)
    if k > len(cands):
        raise InstanceTooLargeError(f"budget {k} exceeds {len(cands)} candidates")
    if math.comb(len(cands), k) > guard:
        raise InstanceTooLargeError(
            f"C({len(cands)}, {k}) subsets exceed the enumeration guard {guard}"
        )
    if objective == "impact-E":
        op = build_shift_operator(laplacian(g))
        evaluate = lambda links: estimate_mu_second_order(
            op, perturbation_from_links(g.n, links)
        )
    elif objective == "exact-mu":
        evaluate = lambda links: algebraic_connectivity(_with_links(g, links))
    elif objective == "exact-remu":
        evaluate = lambda links: generalized_algebraic_connectivity(_with_links(g, links))
    else:
        raise ValueError(f"unknown objective {objective!r}")

    best_links: tuple[LinkCandidate, ...] = ()
    best_value = -math.inf
    for subset in combinations(cands, k):
        value = evaluate(subset)
        if value > best_value:
            best_links, best_value = subset, value
    return best_links, best_value


def run_strategy(
    g: Graph,
    strategy: str,
    k: int,
    seed: int = 42,
    epsilon: float | None = None,
    alpha: float | None = None,
    frozen_scores: bool = False,
    threads: int = 1,
) -> GreedyTrace:
    """Dispatch a strategy tag, validating it against the graph's directedness."""
    if strategy in UNDIRECTED_STRATEGIES and g.directed:
        raise ValueError(f"strategy {strategy!r} requires an undirected graph")
    if strategy in DIRECTED_STRATEGIES and not g.directed:
        raise ValueError(f"strategy {strategy!r} requires a directed graph")
    if strategy == "exact-mu":
        return greedy_exact_undirected(g, k, threads=threads)
    if strategy == "metric-omega":
        return greedy_metric_undirected(g, k, epsilon=epsilon, threads=threads)
    if strategy == "min-degree-product":
        return greedy_baseline(g, k, "degree", frozen_scores=frozen_scores, threads=threads)
    if strategy == "min-eigcent-product":
        return greedy_baseline(g, k, "eigenvector", frozen_scores=frozen_scores, threads=threads)
    if strategy == "min-betweenness-product":
        return greedy_baseline(g, k, "betweenness", frozen_scores=frozen_scores, threads=threads)
    if strategy == "exact-remu":
        return greedy_exact_directed(g, k, threads=threads)
    if strategy == "metric-lower":
        return greedy_metric_directed(g, k, "lower", epsilon=epsilon, alpha=alpha, threads=threads)
    if strategy == "metric-upper":
        return greedy_metric_directed(g, k, "upper", epsilon=epsilon, alpha=alpha, threads=threads)
    if strategy == "metric-lower-inverse":
        return greedy_inverse_direction(g, k, epsilon=epsilon, alpha=alpha, threads=threads)
    if strategy == "undirected-handling":
        return greedy_undirected_handling(g, k, seed=seed, threads=threads)
    raise ValueError(f"unknown strategy {strategy!r}")


def _with_links(g: Graph, links: Sequence[LinkCandidate]) -> Graph:
    for link in links:
        g = add_link(g, link)
    return g


def _require_undirected_connected(g: Graph) -> None:
    if g.directed:
        raise GraphStructureError("strategy requires an undirected graph")
    if not is_connected(g):
        raise GraphStructureError("strategy requires a connected graph")


def _require_directed_strong(g: Graph) -> None:
    if not g.directed:
        raise GraphStructureError("strategy requires a directed graph")
    if not is_strongly_connected(g):
        raise GraphStructureError("strategy requires a strongly connected graph")
