"""Command-line entry point.

Subcommands: gen, centrality, trial, experiment (er|ws), eigengap-table,
profile, plot. Exit codes: 0 success, 1 usage error, 2 numerical or
degeneracy error, 3 I/O error.
"""
from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from pathlib import Path

from .errors import BlindCentError
from .filters import apply_filter, parse_filter
from .graphs import (
    adjacency,
    erdos_renyi,
    eigenvector_centrality,
    read_edge_list,
    watts_strogatz,
    write_edge_list,
)
from .harness import (
    _TRIALS_HEADER,
    context_from_graph,
    eigengap_table,
    experiment_er,
    experiment_ws,
    localization_profile,
    parse_config_file,
    resolve_config,
    run_trial,
    trial_row,
)
from .signals import generate_signals, write_signals_csv


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit(2); we reserve 2 for numerics
        raise UsageError(message)


def _float_list(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise UsageError(f"bad float list {text!r}") from exc


def _int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise UsageError(f"bad integer list {text!r}") from exc


def _build_parser() -> _Parser:
    parser = _Parser(prog="blindcent", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="draw a random graph and write its edge list")
    gen.add_argument("--model", choices=("er", "ws"), required=True)
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--p", default="auto", help="edge/rewiring probability, or 'auto' (er: log n / n)")
    gen.add_argument("--k", type=int, default=None, help="ws lattice degree (even)")
    gen.add_argument("--seed", type=int, required=True)
    gen.add_argument("--out", required=True)

    cent = sub.add_parser("centrality", help="ground-truth eigenvector centrality of a stored graph")
    cent.add_argument("--graph", required=True)
    cent.add_argument("--out", required=True)

    trial = sub.add_parser("trial", help="run one signal-synthesis + selection trial")
    trial.add_argument("--graph", required=True)
    trial.add_argument("--filter", required=True, dest="filter_spec")
    trial.add_argument("--m", required=True, help="sample count, or 'inf' for the population covariance")
    trial.add_argument("--seed", type=int, required=True)
    trial.add_argument("--export-signals", default=None)
    trial.add_argument("--noise", choices=("gaussian", "rademacher"), default="gaussian")

    exp = sub.add_parser("experiment", help="run a full selection-rate experiment")
    exp.add_argument("kind", choices=("er", "ws"))
    exp.add_argument("--config", default=None, help="flat key = value config file")
    exp.add_argument("--out-dir", required=True)
    exp.add_argument("--n", type=int, default=None)
    exp.add_argument("--k", type=int, default=None)
    exp.add_argument("--p", default=None, help="er edge probability, or 'auto'")
    exp.add_argument("--p-list", default=None, help="ws rewiring probabilities, comma separated")
    exp.add_argument("--m-grid", default=None, help="sample counts, comma separated")
    exp.add_argument("--trials", type=int, default=None)
    exp.add_argument("--graphs", type=int, default=None)
    exp.add_argument("--filters", default=None, help="filter specs, comma separated")
    exp.add_argument("--seed", type=int, default=None)
    exp.add_argument("--workers", type=int, default=None)
    exp.add_argument("--noise", choices=("gaussian", "rademacher"), default=None)

    table = sub.add_parser("eigengap-table", help="covariance eigengap statistics per rewiring probability")
    table.add_argument("--p-list", required=True)
    table.add_argument("--reps", type=int, required=True)
    table.add_argument("--seed", type=int, required=True)
    table.add_argument("--out", required=True)
    table.add_argument("--n", type=int, default=500)
    table.add_argument("--k", type=int, default=4)
    table.add_argument("--filter", default="sqrt", dest="filter_spec")

    profile = sub.add_parser("profile", help="per-node centrality profiles per rewiring probability")
    profile.add_argument("--p-list", required=True)
    profile.add_argument("--seed", type=int, required=True)
    profile.add_argument("--out-dir", required=True)
    profile.add_argument("--n", type=int, default=500)
    profile.add_argument("--k", type=int, default=4)

    plot = sub.add_parser("plot", help="render an SVG from a results CSV")
    plot.add_argument("--in", required=True, dest="in_path")
    plot.add_argument("--kind", choices=("rates", "profile"), required=True)
    plot.add_argument("--out", required=True)

    return parser


def _cmd_gen(args) -> int:
    if args.model == "er":
        if args.p == "auto":
            p = math.log(args.n) / args.n
        else:
            p = float(args.p)
        graph = erdos_renyi(args.n, p, args.seed)
    else:
        if args.k is None:
            raise UsageError("ws model requires --k")
        if args.p == "auto":
            raise UsageError("ws model requires an explicit --p")
        graph = watts_strogatz(args.n, args.k, float(args.p), args.seed)
    write_edge_list(graph, args.out)
    print(f"wrote {args.out} (n={graph.n}, edges={graph.edge_count})")
    return 0


def _cmd_centrality(args) -> int:
    graph = read_edge_list(args.graph)
    u = eigenvector_centrality(adjacency(graph))
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    with out.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["node", "centrality"])
        for node, value in enumerate(u):
            writer.writerow([str(node), repr(float(value))])
    print(f"wrote {args.out}")
    return 0


def _parse_m(text: str):
    if text.strip().lower() in ("inf", "infinity"):
        return None
    try:
        m = int(text)
    except ValueError as exc:
        raise UsageError(f"--m must be an integer or 'inf', got {text!r}") from exc
    if m < 1:
        raise UsageError("--m must be >= 1")
    return m


def _cmd_trial(args) -> int:
    graph = read_edge_list(args.graph)
    ctx = context_from_graph(graph)
    spec = parse_filter(args.filter_spec)
    m = _parse_m(args.m)
    if args.export_signals is not None:
        if m is None:
            raise UsageError("--export-signals needs a finite --m")
        h = apply_filter(spec, ctx.adjacency, decomposition=ctx.decomposition)
        ensemble = generate_signals(h, m, args.seed, noise=args.noise)
        write_signals_csv(args.export_signals, ensemble)
    record = run_trial(ctx, spec, m, args.seed, noise=args.noise)
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(_TRIALS_HEADER)
    writer.writerow(trial_row(record))
    sys.stdout.write(buffer.getvalue())
    return 0


def _cmd_experiment(args) -> int:
    file_values = parse_config_file(args.config) if args.config else None
    overrides: dict = {}
    if args.n is not None:
        overrides["n"] = args.n
    if args.k is not None:
        overrides["k"] = args.k
    if args.p is not None and args.p != "auto":
        overrides["p"] = float(args.p)
    if args.p_list is not None:
        overrides["p_list"] = tuple(_float_list(args.p_list))
    if args.m_grid is not None:
        overrides["m_grid"] = tuple(_int_list(args.m_grid))
    if args.trials is not None:
        overrides["trials"] = args.trials
    if args.graphs is not None:
        overrides["graphs"] = args.graphs
    if args.filters is not None:
        overrides["filters"] = tuple(f.strip() for f in args.filters.split(",") if f.strip())
    if args.seed is not None:
        overrides["master_seed"] = args.seed
    if args.workers is not None:
        overrides["workers"] = args.workers
    if args.noise is not None:
        overrides["noise"] = args.noise
    config = resolve_config(args.kind, file_values, overrides)
    runner = experiment_er if args.kind == "er" else experiment_ws
    paths = runner(config, args.out_dir)
    for name, path in paths.items():
        print(f"{name}: {path}")
    return 0


def _cmd_eigengap_table(args) -> int:
    rows = eigengap_table(
        _float_list(args.p_list),
        args.reps,
        args.seed,
        args.out,
        n=args.n,
        k=args.k,
        filter_string=args.filter_spec,
    )
    for row in rows:
        print(f"p={row['p']:g}: mean delta={row['mean_delta']:.4e} var={row['var_delta']:.4e}")
    print(f"wrote {args.out}")
    return 0


def _cmd_profile(args) -> int:
    paths = localization_profile(
        _float_list(args.p_list), args.seed, args.out_dir, n=args.n, k=args.k
    )
    for name, path in paths.items():
        print(f"{name}: {path}")
    return 0


def _cmd_plot(args) -> int:
    from .plotting import plot_profile, plot_rates

    if args.kind == "rates":
        plot_rates(args.in_path, args.out)
    else:
        plot_profile(args.in_path, args.out)
    print(f"wrote {args.out}")
    return 0


_COMMANDS = {
    "gen": _cmd_gen,
    "centrality": _cmd_centrality,
    "trial": _cmd_trial,
    "experiment": _cmd_experiment,
    "eigengap-table": _cmd_eigengap_table,
    "profile": _cmd_profile,
    "plot": _cmd_plot,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except BlindCentError as exc:
        print(f"numerical error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
