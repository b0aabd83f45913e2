"""Command-line surface: stats, optimize, perturb-check, simulate, fetch.

All commands emit CSV (plotting is left to downstream tooling) and are
deterministic for a fixed seed: repeated runs with the same inputs produce
byte-identical files regardless of the thread count. Exit codes: 0 success,
1 usage error, 2 data error, 3 numerical non-convergence.
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .consensus import fit_decay_rate, generic_initial_state, simulate, trajectory_to_csv
from .datasets import MANIFEST, fetch, load_dataset
from .errors import GraphStructureError, LinkoptError, NonConvergenceError, ParseError
from .graphs import (
    Graph,
    LinkCandidate,
    add_link,
    as_bidirected,
    giant_component,
    largest_scc,
    laplacian,
    parse_edge_list,
)
from .optimize import ALL_STRATEGIES, GreedyTrace, run_strategy
from .perturb import (
    build_shift_operator,
    estimate_mu_first_order,
    estimate_mu_second_order,
    perturbation_from_links,
)
from .spectral import (
    algebraic_connectivity,
    eig_symmetric,
    generalized_algebraic_connectivity,
    spectral_radius_adjacency,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NUMERIC = 3

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RunConfig:
    command: str
    inputs: tuple[str, ...] = ()
    directed: bool = False
    bidirect: bool = False
    strategies: tuple[str, ...] = ()
    k: int = 0
    epsilon: float | None = None
    alpha: float | None = None
    seed: int = 42
    out: str | None = None
    norm_p: str = "1"
    frozen_scores: bool = False
    threads: int = 1
    timings: bool = False
    t_end: float = 10.0
    dt: float = 0.001
    window: float = 0.3
    names: tuple[str, ...] = ()


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; the CLI contract wants 1.
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="linkopt", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_io(p, multi_input=False):
        p.add_argument(
            "--input",
            required=True,
            nargs="+" if multi_input else None,
            help="edge-list path, or a bundled/cached dataset name (e.g. karate)",
        )
        p.add_argument("--directed", action="store_true", help="treat input as directed")
        p.add_argument(
            "--bidirect",
            action="store_true",
            help="read as undirected, then emit both arcs per edge (bi-directed graph)",
        )
        p.add_argument("--out", default=None, help="output path (default: stdout)")

    p_stats = sub.add_parser("stats", help="component-level N, L, spectral radius, connectivity")
    add_io(p_stats, multi_input=True)

    p_opt = sub.add_parser("optimize", help="run link-addition strategies, one trace CSV each")
    add_io(p_opt)
    p_opt.add_argument("--strategy", required=True, help="comma-separated strategy tags")
    p_opt.add_argument("--k", type=int, required=True, help="number of links to add")
    p_opt.add_argument("--epsilon", type=float, default=None)
    p_opt.add_argument("--alpha", type=float, default=None)
    p_opt.add_argument("--seed", type=int, default=42)
    p_opt.add_argument("--norm", choices=["1", "2", "inf"], default="1")
    p_opt.add_argument("--frozen-scores", action="store_true", help="compute baseline centralities once upfront")
    p_opt.add_argument("--threads", type=int, default=1)
    p_opt.add_argument("--timings", action="store_true", help="emit wall-clock times (breaks byte determinism)")

    p_chk = sub.add_parser("perturb-check", help="exact vs estimated connectivity while adding random links")
    add_io(p_chk)
    p_chk.add_argument("--k", type=int, required=True, help="total number of links to add (2 per step)")
    p_chk.add_argument("--epsilon", type=float, default=None)
    p_chk.add_argument("--seed", type=int, default=42)

    p_sim = sub.add_parser("simulate", help="integrate consensus dynamics and fit the decay rate")
    add_io(p_sim)
    p_sim.add_argument("--t-end", type=float, default=10.0)
    p_sim.add_argument("--dt", type=float, default=0.001)
    p_sim.add_argument("--window", type=float, default=0.3)
    p_sim.add_argument("--seed", type=int, default=42)

    p_fetch = sub.add_parser("fetch", help="download manifest datasets into the data directory")
    p_fetch.add_argument("names", nargs="*", help="dataset names (default: all fetchable)")
    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    inputs = getattr(args, "input", ())
    if isinstance(inputs, str):
        inputs = (inputs,)
    strategies = tuple(
        tag.strip() for tag in getattr(args, "strategy", "").split(",") if tag.strip()
    )
    return RunConfig(
        command=args.command,
        inputs=tuple(inputs or ()),
        directed=getattr(args, "directed", False),
        bidirect=getattr(args, "bidirect", False),
        strategies=strategies,
        k=getattr(args, "k", 0),
        epsilon=getattr(args, "epsilon", None),
        alpha=getattr(args, "alpha", None),
        seed=getattr(args, "seed", 42),
        out=getattr(args, "out", None),
        norm_p=getattr(args, "norm", "1"),
        frozen_scores=getattr(args, "frozen_scores", False),
        threads=getattr(args, "threads", 1),
        timings=getattr(args, "timings", False),
        t_end=getattr(args, "t_end", 10.0),
        dt=getattr(args, "dt", 0.001),
        window=getattr(args, "window", 0.3),
        names=tuple(getattr(args, "names", ()) or ()),
    )


def _load_graph(spec: str, cfg: RunConfig) -> Graph:
    path = Path(spec)
    if path.exists():
        g = parse_edge_list(path.read_text(), directed=cfg.directed and not cfg.bidirect)
    elif spec in MANIFEST:
        g = load_dataset(spec)
        if cfg.directed and not cfg.bidirect and not g.directed:
            raise GraphStructureError(f"dataset {spec!r} is undirected")
    else:
        raise FileNotFoundError(f"no such file or dataset: {spec}")
    if cfg.bidirect:
        if g.directed:
            raise GraphStructureError("--bidirect expects undirected input")
        g = as_bidirected(g)
    return g


def _extract_component(g: Graph) -> Graph:
    comp = largest_scc(g) if g.directed else giant_component(g)
    if g.directed and comp.n < 2:
        raise GraphStructureError("largest strongly connected component is trivial")
    return comp


def _write_text(out: str | None, text: str) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(text, newline="")


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def cmd_stats(cfg: RunConfig) -> int:
    rows = ["network,n,l,lambda1,mu,type"]
    for spec in cfg.inputs:
        g = _extract_component(_load_graph(spec, cfg))
        lam1 = spectral_radius_adjacency(g)
        if g.directed:
            mu = generalized_algebraic_connectivity(g)
            kind = "directed"
        else:
            mu = algebraic_connectivity(g)
            kind = "undirected"
        name = Path(spec).stem
        rows.append(f"{name},{g.n},{g.link_count},{_fmt(lam1)},{_fmt(mu)},{kind}")
    _write_text(cfg.out, "\n".join(rows) + "\n")
    return EXIT_OK


def _trace_csv(trace: GreedyTrace, g: Graph, timings: bool) -> str:
    lines = ["iteration,source_label,target_label,metric_score,exact_objective,wall_ms"]
    for step in trace.steps:
        src = g.node_labels[step.link.source]
        dst = g.node_labels[step.link.target]
        wall = _fmt(step.wall_ms) if timings else "0"
        lines.append(
            f"{step.iteration},{src},{dst},{_fmt(step.metric)},{_fmt(step.objective)},{wall}"
        )
    return "\n".join(lines) + "\n"


def cmd_optimize(cfg: RunConfig) -> int:
    for tag in cfg.strategies:
        if tag not in ALL_STRATEGIES:
            raise UsageError(f"unknown strategy {tag!r}; choose from {', '.join(ALL_STRATEGIES)}")
    g = _extract_component(_load_graph(cfg.inputs[0], cfg))
    multiple = len(cfg.strategies) > 1
    for tag in cfg.strategies:
        try:
            trace = run_strategy(
                g,
                tag,
                cfg.k,
                seed=cfg.seed,
                epsilon=cfg.epsilon,
                alpha=cfg.alpha,
                frozen_scores=cfg.frozen_scores,
                threads=cfg.threads,
            )
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        csv_text = _trace_csv(trace, g, cfg.timings)
        if cfg.out is None:
            sys.stdout.write(f"# strategy: {tag}\n{csv_text}")
        elif multiple or not cfg.out.endswith(".csv"):
            out_dir = Path(cfg.out)
            out_dir.mkdir(parents=True, exist_ok=True)
            (out_dir / f"trace_{tag}.csv").write_text(csv_text, newline="")
        else:
            _write_text(cfg.out, csv_text)
    return EXIT_OK


def cmd_perturb_check(cfg: RunConfig) -> int:
    g = _extract_component(_load_graph(cfg.inputs[0], cfg))
    if g.directed:
        raise UsageError("perturb-check expects an undirected network")
    base_mu = algebraic_connectivity(g)
    op = build_shift_operator(laplacian(g), epsilon=cfg.epsilon)
    rng = np.random.default_rng(cfg.seed)

    rows = ["k,exact_mu,first_order,second_order"]
    added: list = []
    current = g
    saturated = False
    steps = cfg.k // 2
    for _ in range(steps):
        # One step: pick a random node with at least two absent partners and
        # attach two new links to it.
        nodes = rng.permutation(current.n)
        chosen = None
        for node in nodes:
            free = [
                j
                for j in range(current.n)
                if j != node and not current.has_edge(int(node), j)
            ]
            if len(free) >= 2:
                partners = rng.choice(len(free), size=2, replace=False)
                chosen = (int(node), free[int(partners[0])], free[int(partners[1])])
                break
        if chosen is None:
            saturated = True
            break
        node, a, b = chosen
        for partner in (a, b):
            link = (min(node, partner), max(node, partner))
            current = add_link(current, type(added[0])(*link) if added else _mk_link(link))
            added.append(_mk_link(link))
        perturbation = perturbation_from_links(g.n, added)
        exact = algebraic_connectivity(current)
        first = base_mu + estimate_mu_first_order(op, perturbation)
        second = base_mu + estimate_mu_second_order(op, perturbation)
        rows.append(f"{len(added)},{_fmt(exact)},{_fmt(first)},{_fmt(second)}")
    if saturated:
        rows.append("# stopped early: no node with two free partners")
    _write_text(cfg.out, "\n".join(rows) + "\n")
    return EXIT_OK


def _mk_link(pair: tuple[int, int]):
    from .graphs import LinkCandidate

    return LinkCandidate(*pair)


def cmd_simulate(cfg: RunConfig) -> int:
    g = _extract_component(_load_graph(cfg.inputs[0], cfg))
    q = laplacian(g).matrix
    lam_max = float(np.max(eig_symmetric((q + q.T) / 2.0).values.real))
    dt = min(cfg.dt, 0.05 / max(lam_max, 1.0))
    rng = np.random.default_rng(cfg.seed)
    v0 = generic_initial_state(g, rng)
    traj = simulate(g, v0, cfg.t_end, dt)
    rate = fit_decay_rate(traj, cfg.window)
    _write_text(cfg.out, trajectory_to_csv(traj))
    print(f"fitted decay rate: {rate:.6g}", file=sys.stderr)
    return EXIT_OK


def cmd_fetch(cfg: RunConfig) -> int:
    names = cfg.names or [n for n, e in MANIFEST.items() if e.url is not None]
    for name in names:
        if name not in MANIFEST:
            raise UsageError(f"unknown dataset {name!r}")
        target = fetch(name)
        print(f"fetched {name} -> {target}", file=sys.stderr)
    return EXIT_OK


class UsageError(LinkoptError):
    pass


_COMMANDS = {
    "stats": cmd_stats,
    "optimize": cmd_optimize,
    "perturb-check": cmd_perturb_check,
    "simulate": cmd_simulate,
    "fetch": cmd_fetch,
}


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(message)s")
    parser = _build_parser()
    args = parser.parse_args(argv)
    cfg = _config_from_args(args)
    try:
        return _COMMANDS[cfg.command](cfg)
    except UsageError as exc:
        print(f"linkopt: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ParseError, GraphStructureError, FileNotFoundError, OSError, KeyError) as exc:
        print(f"linkopt: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except NonConvergenceError as exc:
        print(f"linkopt: numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
