"""Dense spectral kernels and exact connectivity values.

The exact eigensolvers here are the ground truth for everything else in the
package: the shift-operator machinery is validated against them, and greedy
traces always report objectives recomputed through them. Solvers are dense
and O(n^3), which is fine at the few-hundred-node scale this package targets.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import GraphStructureError, NonConvergenceError
from .graphs import Graph, is_connected, is_strongly_connected, laplacian

#: |eigenvalue| below this (times n) counts as the Laplacian zero eigenvalue.
ZERO_EIGENVALUE_TOL = 1e-9


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues sorted by (real, imaginary) ascending, plus optional eigenvectors.

    ``right`` holds right eigenvectors as columns, matching the eigenvalue
    order; ``left`` likewise when requested.
    """

    values: np.ndarray
    right: np.ndarray | None = None
    left: np.ndarray | None = None


@dataclass(frozen=True)
class DominantPair:
    value: float
    vector: np.ndarray
    iterations: int
    converged: bool


def _check_finite(m: np.ndarray) -> None:
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix contains non-finite entries")


def eig_symmetric(m: np.ndarray) -> Spectrum:
    """Full spectrum of a symmetric matrix, eigenvalues ascending.

    Input asymmetry above 1e-10 is symmetrized with a warning rather than
    rejected; non-finite entries are an error.
    """
    m = np.asarray(m, dtype=np.float64)
    _check_finite(m)
    asym = np.max(np.abs(m - m.T)) if m.size else 0.0
    if asym > 1e-10:
        warnings.warn(f"symmetrizing input with asymmetry {asym:.3e}", stacklevel=2)
        m = (m + m.T) / 2.0
    values, vectors = np.linalg.eigh(m)
    return Spectrum(values.astype(np.complex128), vectors)


def eig_general(m: np.ndarray, want_left: bool = False) -> Spectrum:
    """All complex eigenvalues of a real square matrix.

    Sorted by ascending real part, ties by ascending imaginary part, so
    conjugate pairs are adjacent. Raises NonConvergenceError if the QR
    iteration fails.
    """
    m = np.asarray(m, dtype=np.float64)
    _check_finite(m)
    try:
        if want_left:
            values, left, right = scipy.linalg.eig(m, left=True, right=True)
        else:
            values, right = np.linalg.eig(m)
            left = None
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgError) as exc:
        raise NonConvergenceError(f"eigenvalue iteration failed: {exc}") from exc
    order = np.lexsort((values.imag, values.real))
    return Spectrum(
        values[order],
        right[:, order],
        left[:, order] if left is not None else None,
    )


def power_iteration(
    m: np.ndarray,
    tol: float = 1e-10,
    max_iter: int = 100_000,
    seed: int = 0,
    deflate: np.ndarray | None = None,
) -> DominantPair:
    """Dominant eigenpair by plain power iteration with a seeded start vector.

    ``deflate`` is an optional (n, k) orthonormal basis projected out of the
    iterate every step, so floating-point drift cannot reintroduce known
    invariant directions. Requires a real simple dominant eigenvalue; if the
    residual has not met ``tol`` after ``max_iter`` steps the returned pair
    has ``converged=False`` (never a silently wrong answer).

    Sign convention: the first component of the vector that is nonzero
    (relative to its largest entry) is made positive.
    """
    m = np.asarray(m, dtype=np.float64)
    _check_finite(m)
    n = m.shape[0]
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(n)

    def project(x: np.ndarray) -> np.ndarray:
        if deflate is not None:
            x = x - deflate @ (deflate.T @ x)
        return x

    v = project(v)
    norm = np.linalg.norm(v)
    if norm == 0.0:
        raise ValueError("start vector vanished under deflation")
    v /= norm

    value = 0.0
    iterations = 0
    converged = False
    for iterations in range(1, max_iter + 1):
        w = project(m @ v)
        value = float(v @ w)  # Rayleigh quotient, ||v|| = 1
        residual = float(np.linalg.norm(w - value * v))
        norm = np.linalg.norm(w)
        if norm == 0.0:
            # Iterate fell into the kernel; dominant eigenvalue is 0.
            converged = abs(value) <= tol
            break
        if residual <= tol:
            converged = True
            break
        v = w / norm

    nonzero = np.nonzero(np.abs(v) > 1e-9 * np.max(np.abs(v)))[0]
    if nonzero.size and v[nonzero[0]] < 0:
        v = -v
    return DominantPair(value, v, iterations, converged)


def expm(m: np.ndarray) -> np.ndarray:
    """Matrix exponential (scaling-and-squaring with Pade approximation)."""
    m = np.asarray(m, dtype=np.float64)
    _check_finite(m)
    return scipy.linalg.expm(m)


def laplacian_zero_indices(values: np.ndarray, n: int) -> np.ndarray:
    """Indices of eigenvalues that count as the Laplacian zero."""
    return np.nonzero(np.abs(values) <= ZERO_EIGENVALUE_TOL * max(n, 1))[0]


def algebraic_connectivity(g: Graph) -> float:
    """Second-smallest Laplacian eigenvalue; exactly 0.0 for disconnected graphs."""
    if g.directed:
        raise GraphStructureError("algebraic_connectivity expects an undirected graph")
    if not is_connected(g):
        return 0.0
    values = eig_symmetric(laplacian(g).matrix).values.real
    return float(values[1])


def generalized_algebraic_connectivity(g: Graph) -> float:
    """Smallest nonzero real part among generalized-Laplacian eigenvalues.

    Well-defined only for strongly connected digraphs (the zero eigenvalue
    must be simple); strong connectivity is checked structurally.
    """
    if not g.directed:
        raise GraphStructureError("expected a directed graph")
    if not is_strongly_connected(g):
        raise GraphStructureError("graph is not strongly connected")
    values = eig_general(laplacian(g).matrix).values
    zero = laplacian_zero_indices(values, g.n)
    keep = np.ones(len(values), dtype=bool)
    keep[zero[:1]] = False  # skip the unique structural zero
    return float(np.min(values.real[keep]))


def spectral_radius_adjacency(g: Graph) -> float:
    """Largest adjacency-eigenvalue magnitude.

    Undirected graphs use shifted power iteration (A + (d_max + 1) I keeps
    the dominant eigenvalue simple-signed even on bipartite graphs);
    directed graphs fall back to the dense general solver.
    """
    a = g.adjacency.astype(np.float64)
    if g.n == 0:
        return 0.0
    if g.directed:
        return float(np.max(np.abs(eig_general(a).values)))
    shift = float(np.max(a.sum(axis=1))) + 1.0
    pair = power_iteration(a + shift * np.eye(g.n), tol=1e-10 * shift)
    if not pair.converged:
        raise NonConvergenceError("power iteration on shifted adjacency did not converge")
    return float(pair.value - shift)
