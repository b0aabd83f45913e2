"""Shift-operator perturbation machinery for undirected algebraic connectivity.

The algebraic connectivity of a connected graph maps to the largest
eigenvalue of R = I - eps*Q - J/N (J the all-ones matrix), which a power
method can compute without a full eigendecomposition. A second-order update
of that dominant eigenpair yields a cheap estimate of how much a set of
added links raises the connectivity, and a per-link score |z_i - z_j| that
drives the heuristic greedy optimizer.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import GraphStructureError, NonConvergenceError
from .graphs import Graph, LaplacianMatrix, LinkCandidate, candidate_links, laplacian
from .spectral import eig_symmetric, power_iteration


@dataclass(frozen=True)
class ShiftOperator:
    """R = I - eps*Q - J/N with its dominant eigenpair.

    ``lambda1`` is the largest eigenvalue of R, ``z`` the corresponding unit
    eigenvector (orthogonal to the all-ones direction), and
    ``theta = eps / lambda1`` the weight of the quadratic penalty in the
    second-order connectivity estimate.
    """

    epsilon: float
    r: np.ndarray
    lambda1: float
    z: np.ndarray
    theta: float

    @property
    def n(self) -> int:
        return self.r.shape[0]

    def recovered_connectivity(self) -> float:
        """Algebraic connectivity implied by the shift identity (1 - lambda1)/eps."""
        return (1.0 - self.lambda1) / self.epsilon


@dataclass(frozen=True)
class SubgraphPerturbation:
    """Laplacian increment of a set of added links."""

    links: tuple[LinkCandidate, ...]
    dq: np.ndarray
    k: int


def perturbation_from_links(
    n: int, links: Iterable[LinkCandidate], directed: bool = False
) -> SubgraphPerturbation:
    """Assemble the Laplacian increment for added links on an n-node graph."""
    links = tuple(LinkCandidate(*l) for l in links)
    dq = np.zeros((n, n))
    for i, j in links:
        if i == j:
            raise GraphStructureError(f"self-loop ({i},{i})")
        if directed:
            dq[j, j] += 1.0
            dq[j, i] -= 1.0
        else:
            dq[i, i] += 1.0
            dq[j, j] += 1.0
            dq[i, j] -= 1.0
            dq[j, i] -= 1.0
    return SubgraphPerturbation(links, dq, len(links))


def build_shift_operator(
    q: LaplacianMatrix,
    epsilon: float | None = None,
    seed: int = 0,
    tol: float = 1e-10,
    max_iter: int = 200_000,
) -> ShiftOperator:
    """Construct R and compute its dominant eigenpair by deflated power iteration.

    ``epsilon`` defaults to 1/(d_max + 1); any override must satisfy
    0 < eps < 1/d_max so that I - eps*Q stays substochastic. The iteration
    actually runs on R + I: the spectral shift breaks |.|-ties between the
    Fiedler eigenvalue and large negated Laplacian eigenvalues (e.g. the
    4-cycle at eps = 1/3) without moving eigenvectors.
    """
    if q.kind != "undirected":
        raise ValueError("shift operator requires an undirected Laplacian")
    n = q.n
    if n < 2:
        raise GraphStructureError("shift operator needs at least 2 nodes")
    d_max = q.max_degree()
    if epsilon is None:
        epsilon = 1.0 / (d_max + 1.0)
    elif not (0.0 < epsilon < 1.0 / d_max):
        raise ValueError(f"epsilon must lie in (0, 1/{d_max})")

    r = np.eye(n) - epsilon * q.matrix - np.full((n, n), 1.0 / n)
    ones = np.full((n, 1), 1.0 / np.sqrt(n))
    pair = power_iteration(r + np.eye(n), tol=tol, max_iter=max_iter, seed=seed, deflate=ones)
    if not pair.converged:
        raise NonConvergenceError(
            f"power iteration on the shift operator stalled after {pair.iterations} steps"
        )
    lambda1 = pair.value - 1.0
    if lambda1 <= 1e-12:
        raise ValueError(
            "degenerate shift operator (lambda1 ~ 0); retry with a smaller epsilon"
        )
    return ShiftOperator(epsilon, r, lambda1, pair.vector, epsilon / lambda1)


def _gap_sum(z: np.ndarray, links: Sequence[LinkCandidate]) -> float:
    return float(sum((z[i] - z[j]) ** 2 for i, j in links))


def estimate_mu_first_order(s: ShiftOperator, p: SubgraphPerturbation) -> float:
    """First-order connectivity gain z'dQz = sum of (z_i - z_j)^2 over added links."""
    return _gap_sum(s.z, p.links)


def quadratic_term(s: ShiftOperator, p: SubgraphPerturbation) -> float:
    """z' (dQ)^2 z, evaluated as ||dQ z||^2 (dQ is symmetric)."""
    w = p.dq @ s.z
    return float(w @ w)


def estimate_mu_second_order(s: ShiftOperator, p: SubgraphPerturbation) -> float:
    """Second-order gain estimate: the impact of an added subgraph.

    z'dQz - theta * z'(dQ)^2 z; the quadratic penalty is nonnegative, so
    this never exceeds the first-order estimate.
    """
    return estimate_mu_first_order(s, p) - s.theta * quadratic_term(s, p)


def multi_link_cross_term(s: ShiftOperator, p: SubgraphPerturbation) -> float:
    """z'(dQ)^2 z via the expanded per-link form, checked against the matrix value.

    Expansion: 2 * sum (z_i - z_j)^2 over links, plus 2 * (z_i - z_j)(z_k - z_j)
    for each unordered pair of distinct links sharing node j. The cross
    products capture the interaction of multiple links at a common node.
    """
    z = s.z
    total = 2.0 * _gap_sum(z, p.links)
    for (a, b), (c, d) in itertools.combinations(p.links, 2):
        shared = {a, b} & {c, d}
        if not shared:
            continue
        j = shared.pop()
        i = a if b == j else b
        k = c if d == j else d
        total += 2.0 * (z[i] - z[j]) * (z[k] - z[j])
    direct = quadratic_term(s, p)
    if abs(total - direct) > 1e-10 * max(1.0, abs(direct)):
        raise AssertionError(
            f"cross-term expansion {total!r} disagrees with matrix value {direct!r}"
        )
    return total


def link_score_undirected(s: ShiftOperator, c: LinkCandidate) -> float:
    """Per-link greedy score |z_i - z_j|."""
    return float(abs(s.z[c.source] - s.z[c.target]))


def approx_submodularity_delta(s: ShiftOperator, k: int) -> float:
    """Margin delta = 1 - theta*(K+1) of the approximately submodular impact.

    The impact of any K-link subgraph is sandwiched between delta and 1
    times its first-order value. May be <= 0 on dense graphs; callers must
    check before invoking the greedy performance bound.
    """
    if k < 1:
        raise ValueError("link budget must be >= 1")
    return 1.0 - s.theta * (k + 1)


def greedy_performance_bound(delta: float, k: int) -> float | None:
    """Worst-case fraction of the optimal impact achieved by metric greedy.

    Valid for 0 < delta <= 1 when (1 - delta)/(1 + delta) <= 1/K; returns
    None when that applicability condition fails.
    """
    if not (0.0 < delta <= 1.0):
        raise ValueError("delta must lie in (0, 1]")
    if k < 1:
        raise ValueError("link budget must be >= 1")
    if (1.0 - delta) / (1.0 + delta) > 1.0 / k:
        return None
    lead = 1.0 / (1.0 + k * (1.0 - delta**2) / delta**2)
    return lead * (1.0 - delta ** (2 * k) * (1.0 - 1.0 / k) ** k)


def mu_shift_full_expansion(q: LaplacianMatrix, dq: np.ndarray) -> float:
    """Second-order asymptotic eigenvalue shift of the algebraic connectivity.

    Needs the full spectrum, so it serves as a small-n oracle only:
    x'dQx over the Fiedler vector plus the sum of coupling terms
    (x_k'dQx)^2 / (mu - lambda_k) over the remaining eigenpairs.
    """
    spec = eig_symmetric(q.matrix)
    values = spec.values.real
    vectors = spec.right
    mu = values[1]
    x = vectors[:, 1]
    shift = float(x @ dq @ x)
    for k in range(len(values)):
        if k == 1:
            continue
        coupling = float(vectors[:, k] @ dq @ x)
        shift += coupling**2 / (mu - values[k])
    return shift


def find_submodularity_violation(
    g: Graph,
    seed: int = 0,
    attempts: int = 2000,
) -> tuple[tuple[LinkCandidate, ...], tuple[LinkCandidate, ...], LinkCandidate] | None:
    """Search for link sets A < B and a link s violating diminishing returns.

    Returns (A, B, s) with impact(A+s) - impact(A) < impact(B+s) - impact(B)
    evaluated on g's shift operator, or None if no witness is found within
    the attempt budget.
    """
    cands = candidate_links(g)
    if len(cands) < 3:
        return None
    s_op = build_shift_operator(laplacian(g))
    rng = np.random.default_rng(seed)

    def impact(links: Sequence[LinkCandidate]) -> float:
        return estimate_mu_second_order(
            s_op, perturbation_from_links(g.n, links)
        )

    for _ in range(attempts):
        chosen = rng.choice(len(cands), size=3, replace=False)
        a_link, extra, s_link = (cands[int(i)] for i in chosen)
        small = (a_link,)
        big = (a_link, extra)
        gain_small = impact(small + (s_link,)) - impact(small)
        gain_big = impact(big + (s_link,)) - impact(big)
        if gain_small < gain_big - 1e-12:
            return small, big, s_link
    return None
