"""Consensus dynamics dv/dt = -Q v and empirical convergence-rate fitting.

The fitted exponential decay rate of |v(t) - pi| lower-bounds at the
(generalized) algebraic connectivity for generic initial states, which is
the quantity the link optimizer maximizes.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np

from .errors import GraphStructureError
from .graphs import Graph, is_connected, is_strongly_connected, laplacian


@dataclass(frozen=True)
class Trajectory:
    """Sampled states of a consensus run.

    ``states`` has one row per sample time; ``steady`` is the analytic
    consensus state pi computed from the Laplacian kernel (not the
    trajectory tail, so decay fits are unbiased). ``rates`` holds per-node
    fitted decay rates once a fit has been run; None until then.
    """

    times: np.ndarray
    states: np.ndarray
    steady: np.ndarray
    rates: np.ndarray | None = None


def steady_state(g: Graph, v0: np.ndarray) -> np.ndarray:
    """Analytic consensus state: projection of v0 onto the Laplacian kernel."""
    if g.directed:
        q = laplacian(g).matrix
        # Left null vector y of Q (y'Q = 0); for strongly connected graphs it
        # is unique up to scale with one sign.
        _, _, vt = np.linalg.svd(q.T)
        y = vt[-1]
        if abs(y.sum()) < 1e-12:
            raise GraphStructureError("left kernel vector orthogonal to ones; graph degenerate")
        c = float(y @ v0) / float(y.sum())
    else:
        c = float(np.mean(v0))
    return np.full(g.n, c)


def simulate(g: Graph, v0: np.ndarray, t_end: float, dt: float) -> Trajectory:
    """Integrate dv/dt = -Q v with classical fixed-step RK4.

    The step-size rule dt <= 0.01 / lambda_max(Q) keeps the endpoint within
    1e-6 of the exact exponential propagator; larger steps remain stable up
    to the RK4 limit but trade accuracy. Raises on dimension mismatch and on
    instability (norm growth beyond 1e6x the initial state).
    """
    if dt <= 0.0 or t_end < dt:
        raise ValueError("need dt > 0 and t_end >= dt")
    v0 = np.asarray(v0, dtype=np.float64)
    if v0.shape != (g.n,):
        raise ValueError(f"initial state has shape {v0.shape}, expected ({g.n},)")
    if g.directed:
        if not is_strongly_connected(g):
            raise GraphStructureError("directed consensus needs strong connectivity")
    elif not is_connected(g):
        raise GraphStructureError("consensus needs a connected graph")

    q = laplacian(g).matrix
    steps = int(round(t_end / dt))
    times = np.arange(steps + 1) * dt
    states = np.empty((steps + 1, g.n))
    states[0] = v0
    limit = 1e6 * max(float(np.linalg.norm(v0)), 1.0)
    v = v0.copy()
    for step in range(1, steps + 1):
        k1 = -(q @ v)
        k2 = -(q @ (v + 0.5 * dt * k1))
        k3 = -(q @ (v + 0.5 * dt * k2))
        k4 = -(q @ (v + dt * k3))
        v = v + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if np.linalg.norm(v) > limit:
            raise ValueError(f"integration unstable at t={step * dt:g}; reduce dt")
        states[step] = v
    return Trajectory(times, states, steady_state(g, v0))


def _window_slice(n_samples: int, window: float) -> slice:
    if not (0.0 < window <= 1.0):
        raise ValueError("window must be a fraction in (0, 1]")
    start = int(np.floor(n_samples * (1.0 - window)))
    return slice(min(start, n_samples - 2), n_samples)


def fit_decay_rate(traj: Trajectory, window: float = 0.3) -> float:
    """Exponential decay rate of ||v(t) - pi||_2 over the trailing window.

    Least-squares slope of the log gap, negated. The trajectory must have
    decayed below 1e-2 of the initial gap inside the window (otherwise the
    fit still reflects transients) but must stay above the 1e-13 numerical
    floor.
    """
    gaps = np.linalg.norm(traj.states - traj.steady, axis=1)
    sl = _window_slice(len(gaps), window)
    initial = gaps[0]
    if initial <= 0.0:
        raise ValueError("initial state already at consensus; nothing to fit")
    if gaps[sl][-1] < 1e-13 * initial:
        raise ValueError("gap at numerical floor inside the fit window; shorten t_end")
    if gaps[sl][0] > 1e-2 * initial:
        raise ValueError("trajectory not decayed enough in the fit window; extend t_end")
    slope = np.polyfit(traj.times[sl], np.log(gaps[sl]), 1)[0]
    return float(-slope)


def fit_nodal_rates(traj: Trajectory, window: float = 0.3) -> np.ndarray:
    """Per-node decay rates of |v_i(t) - pi_i| over the trailing window.

    Nodes whose gap hits the numerical floor get NaN.
    """
    gaps = np.abs(traj.states - traj.steady)
    sl = _window_slice(traj.times.shape[0], window)
    t = traj.times[sl]
    rates = np.full(traj.states.shape[1], np.nan)
    for i in range(traj.states.shape[1]):
        series = gaps[sl, i]
        if np.min(series) <= 1e-13 * max(gaps[0, i], 1e-300):
            continue
        rates[i] = -np.polyfit(t, np.log(series), 1)[0]
    return rates


def generic_initial_state(
    g: Graph, rng: np.random.Generator, fiedler_direction: np.ndarray | None = None
) -> np.ndarray:
    """Seeded unit Gaussian start vector, rejected while its projection on
    the slow (Fiedler) direction is below 1e-3, so fitted rates measure the
    slowest mode rather than a faster one."""
    for _ in range(1000):
        v0 = rng.standard_normal(g.n)
        if fiedler_direction is None:
            return v0
        if abs(float(fiedler_direction @ v0)) >= 1e-3:
            return v0
    raise RuntimeError("could not draw an initial state exciting the slow mode")


def trajectory_to_csv(traj: Trajectory) -> str:
    """CSV text with columns t, v_0..v_{n-1}."""
    buf = io.StringIO()
    n = traj.states.shape[1]
    buf.write("t," + ",".join(f"v_{i}" for i in range(n)) + "\n")
    for t, row in zip(traj.times, traj.states):
        buf.write(f"{t:.12g}," + ",".join(f"{x:.12g}" for x in row) + "\n")
    return buf.getvalue()
