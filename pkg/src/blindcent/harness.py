"""Seeded, reproducible experiment driver.

Every random stream derives from a fixed-length entropy tuple
``(master_seed, experiment_id, stream, p_index, graph_id, filter_index, m,
trial_id)`` hashed through numpy's SeedSequence, a counter-based derivation:
no two tasks share a stream, and results are byte-identical regardless of
worker count or scheduling. Jobs are independent (one per graph and filter),
and the collected records are sorted by their identifying columns before
anything is written.
"""
from __future__ import annotations

import csv
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from multiprocessing import get_all_start_methods, get_context
from pathlib import Path

import numpy as np

from .errors import BlindCentError, NotConnectedError
from .filters import FilterSpec, apply_filter, centrality_index_in_cy, format_filter, parse_filter
from .graphs import Graph, adjacency, erdos_renyi, is_connected, watts_strogatz
from .selection import select_centrality
from .signals import (
    NOISE_KINDS,
    generate_signals,
    population_covariance,
    sample_covariance,
)
from .spectral import SpectralDecomposition, canonical_sign, eig_sym, eigengap_at

EXPERIMENT_IDS = {
    "er": 1,
    "ws": 2,
    "eigengap": 3,
    "profile": 4,
    "trial": 5,
}

STREAM_GRAPH = 1
STREAM_SIGNALS = 2

MAX_CONNECT_ATTEMPTS = 100


def derive_seed(
    master_seed: int,
    experiment_id: int,
    stream: int,
    p_index: int = 0,
    graph_id: int = 0,
    filter_index: int = 0,
    m: int = 0,
    trial_id: int = 0,
) -> int:
    """Collapse the entropy tuple into a single replayable 64-bit seed."""
    sequence = np.random.SeedSequence(
        (master_seed, experiment_id, stream, p_index, graph_id, filter_index, m, trial_id)
    )
    return int(sequence.generate_state(1, dtype=np.uint64)[0])


# ---------------------------------------------------------------------------
# graph contexts


@dataclass(frozen=True)
class GraphContext:
    """A resolved graph with everything trials reuse: eigenpairs and truth."""

    model: str
    n: int
    k: int | None
    p: float | None
    graph_id: int
    graph: Graph
    adjacency: np.ndarray
    decomposition: SpectralDecomposition
    centrality: np.ndarray


def _draw_graph(model: str, n: int, p: float | None, k: int | None, seed: int) -> Graph:
    if model == "er":
        return erdos_renyi(n, p, seed)
    if model == "ws":
        return watts_strogatz(n, k, p, seed)
    raise ValueError(f"unknown model {model!r}")


def build_graph_context(
    model: str,
    n: int,
    p: float | None,
    k: int | None,
    master_seed: int,
    experiment_id: int,
    graph_id: int,
    p_index: int = 0,
) -> GraphContext:
    """Draw a connected graph, resampling up to 100 times, then eigendecompose."""
    graph = None
    for attempt in range(MAX_CONNECT_ATTEMPTS):
        seed = derive_seed(
            master_seed, experiment_id, STREAM_GRAPH, p_index, graph_id, attempt
        )
        candidate = _draw_graph(model, n, p, k, seed)
        if is_connected(candidate):
            graph = candidate
            break
    if graph is None:
        raise NotConnectedError(
            f"no connected {model} graph in {MAX_CONNECT_ATTEMPTS} draws "
            f"(n={n}, p={p}, k={k}, graph_id={graph_id})"
        )
    return context_from_graph(graph, model=model, p=p, k=k, graph_id=graph_id)


def context_from_graph(
    graph: Graph,
    model: str = "file",
    p: float | None = None,
    k: int | None = None,
    graph_id: int = 0,
) -> GraphContext:
    """Wrap an existing graph; requires connectivity and a simple top eigenvalue."""
    if not is_connected(graph):
        raise NotConnectedError("trial pipeline requires a connected graph")
    a = adjacency(graph)
    decomposition = eig_sym(a)
    if graph.n == 1:
        u = np.ones(1)
    else:
        u = canonical_sign(decomposition.eigenvectors[:, -1])
        u = u / float(np.linalg.norm(u))
    return GraphContext(
        model=model,
        n=graph.n,
        k=k,
        p=p,
        graph_id=graph_id,
        graph=graph,
        adjacency=a,
        decomposition=decomposition,
        centrality=u,
    )


# ---------------------------------------------------------------------------
# single trial


@dataclass(frozen=True)
class TrialRecord:
    """One row of the results CSV."""

    model: str
    n: int
    k: int | None
    p: float | None
    filter: str
    m: int | None  # None means the population-covariance shortcut
    graph_id: int
    trial_id: int
    chosen_index: int
    optimal_index: int
    correct: bool
    cos_true: float
    score: float
    delta: float
    min_u: float
    seed: int


@dataclass(frozen=True)
class ErrorRecord:
    """A failed trial, kept next to the results instead of dropped."""

    model: str
    n: int
    k: int | None
    p: float | None
    filter: str
    m: int | None
    graph_id: int
    trial_id: int
    error: str


def run_trial(
    ctx: GraphContext,
    spec: FilterSpec | str,
    m: int | None,
    seed: int,
    trial_id: int = 0,
    noise: str = "gaussian",
) -> TrialRecord:
    """Full pipeline: filter -> signals -> covariance -> selection vs oracle.

    ``m=None`` skips sampling and selects on the population covariance.
    """
    if isinstance(spec, str):
        spec = parse_filter(spec)
    h = apply_filter(spec, ctx.adjacency, decomposition=ctx.decomposition)
    j = centrality_index_in_cy(spec, ctx.decomposition.eigenvalues)
    covariance_spectrum = np.sort(h.spectrum**2)
    delta = eigengap_at(covariance_spectrum, j) if ctx.n > 1 else 0.0
    if m is None:
        cov = population_covariance(h)
    else:
        ensemble = generate_signals(h, m, seed, noise=noise)
        cov = sample_covariance(ensemble)
    result = select_centrality(cov, truth=ctx.centrality)
    diag = result.diagnostics
    return TrialRecord(
        model=ctx.model,
        n=ctx.n,
        k=ctx.k,
        p=ctx.p,
        filter=format_filter(spec),
        m=m,
        graph_id=ctx.graph_id,
        trial_id=trial_id,
        chosen_index=result.chosen_index,
        optimal_index=diag.optimal_index,
        correct=result.chosen_index == diag.optimal_index,
        cos_true=diag.cos_true,
        score=float(result.scores[result.chosen_index]),
        delta=delta,
        min_u=float(np.min(ctx.centrality)),
        seed=seed,
    )


# ---------------------------------------------------------------------------
# experiment configuration


@dataclass(frozen=True)
class ExperimentConfig:
    model: str
    n: int
    k: int | None
    p: float | None  # er edge probability; None resolves to log(n)/n
    p_list: tuple[float, ...]  # ws rewiring probabilities
    filters: tuple[str, ...]
    m_grid: tuple[int, ...]
    trials: int
    graphs: int
    master_seed: int
    workers: int
    noise: str

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.graphs < 1:
            raise ValueError("graphs must be >= 1")
        if not self.m_grid:
            raise ValueError("m_grid must be nonempty")
        if list(self.m_grid) != sorted(self.m_grid):
            raise ValueError("m_grid must be ascending")
        if self.master_seed < 0:
            raise ValueError("master_seed must be nonnegative")
        if self.noise not in NOISE_KINDS:
            raise ValueError(f"noise must be one of {NOISE_KINDS}")
        for f in self.filters:
            parse_filter(f)

    @property
    def resolved_p(self) -> float:
        if self.p is None:
            return math.log(self.n) / self.n
        return self.p


DEFAULT_M_GRID = tuple(range(100, 1001, 100))


def er_defaults() -> ExperimentConfig:
    return ExperimentConfig(
        model="er",
        n=100,
        k=None,
        p=None,
        p_list=(),
        filters=("sqrt", "squared", "sqrt-hp", "squared-hp"),
        m_grid=DEFAULT_M_GRID,
        trials=200,
        graphs=1,
        master_seed=0,
        workers=1,
        noise="gaussian",
    )


def ws_defaults() -> ExperimentConfig:
    return ExperimentConfig(
        model="ws",
        n=500,
        k=4,
        p=None,
        p_list=(0.0, 0.001, 0.01, 0.1, 1.0),
        filters=("sqrt",),
        m_grid=DEFAULT_M_GRID,
        trials=1,
        graphs=100,
        master_seed=0,
        workers=1,
        noise="gaussian",
    )


_INT_KEYS = {"n", "k", "trials", "graphs", "seed", "workers"}
_FLOAT_KEYS = {"p"}
_INT_LIST_KEYS = {"m_grid"}
_FLOAT_LIST_KEYS = {"p_list"}
_STR_LIST_KEYS = {"filters"}
_STR_KEYS = {"noise", "model"}


def parse_config_file(path) -> dict[str, str]:
    """Read the flat ``key = value`` config format; '#' starts a comment."""
    values: dict[str, str] = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected 'key = value', got {line!r}")
        key, _, value = line.partition("=")
        values[key.strip()] = value.strip()
    return values


def _coerce(key: str, value: str):
    if key in _INT_KEYS:
        return int(value)
    if key in _FLOAT_KEYS:
        return float(value)
    if key in _INT_LIST_KEYS:
        return tuple(int(v) for v in value.split(",") if v.strip())
    if key in _FLOAT_LIST_KEYS:
        return tuple(float(v) for v in value.split(",") if v.strip())
    if key in _STR_LIST_KEYS:
        return tuple(v.strip() for v in value.split(",") if v.strip())
    if key in _STR_KEYS:
        return value
    raise ValueError(f"unknown config key {key!r}")


def resolve_config(model: str, file_values: dict | None, overrides: dict | None) -> ExperimentConfig:
    """defaults < config file < explicit overrides."""
    config = er_defaults() if model == "er" else ws_defaults()
    merged: dict = {}
    for source in (file_values or {}), (overrides or {}):
        for key, value in source.items():
            if value is None:
                continue
            coerced = _coerce(key, value) if isinstance(value, str) else value
            merged[key] = coerced
    merged.pop("model", None)
    if "seed" in merged:
        merged["master_seed"] = merged.pop("seed")
    return replace(config, **merged)


# ---------------------------------------------------------------------------
# parallel execution

_TRIALS_HEADER = [
    "model", "n", "k", "p", "filter", "m", "graph_id", "trial_id",
    "chosen_index", "optimal_index", "correct", "cos_true", "score",
    "delta", "min_u", "seed",
]
_ERRORS_HEADER = [
    "model", "n", "k", "p", "filter", "m", "graph_id", "trial_id", "error",
]
_RATES_HEADER = [
    "model", "n", "k", "p", "filter", "m", "trials", "correct",
    "rate", "wilson_low", "wilson_high",
]


def _graph_job(payload: dict) -> tuple[list[TrialRecord], list[ErrorRecord]]:
    """Run every (m, trial) for one graph and one filter. Pure per payload."""
    ctx = build_graph_context(
        model=payload["model"],
        n=payload["n"],
        p=payload["p"],
        k=payload["k"],
        master_seed=payload["master_seed"],
        experiment_id=payload["experiment_id"],
        graph_id=payload["graph_id"],
        p_index=payload["p_index"],
    )
    spec = parse_filter(payload["filter"])
    records: list[TrialRecord] = []
    failures: list[ErrorRecord] = []
    for m in payload["m_grid"]:
        for trial_id in range(payload["trials"]):
            seed = derive_seed(
                payload["master_seed"],
                payload["experiment_id"],
                STREAM_SIGNALS,
                payload["p_index"],
                payload["graph_id"],
                payload["filter_index"],
                m,
                trial_id,
            )
            try:
                records.append(
                    run_trial(ctx, spec, m, seed, trial_id=trial_id, noise=payload["noise"])
                )
            except BlindCentError as exc:
                failures.append(
                    ErrorRecord(
                        model=ctx.model,
                        n=ctx.n,
                        k=ctx.k,
                        p=ctx.p,
                        filter=payload["filter"],
                        m=m,
                        graph_id=ctx.graph_id,
                        trial_id=trial_id,
                        error=f"{type(exc).__name__}: {exc}",
                    )
                )
    return records, failures


def _execute_jobs(payloads: list[dict], workers: int):
    if workers <= 1:
        results = [_graph_job(p) for p in payloads]
    else:
        # fork keeps library callers free of __main__ guards; spawn elsewhere
        method = "fork" if "fork" in get_all_start_methods() else "spawn"
        with ProcessPoolExecutor(
            max_workers=workers, mp_context=get_context(method)
        ) as pool:
            results = list(pool.map(_graph_job, payloads))
    records: list[TrialRecord] = []
    failures: list[ErrorRecord] = []
    for recs, fails in results:
        records.extend(recs)
        failures.extend(fails)
    key = lambda r: (
        r.model,
        -1.0 if r.p is None else r.p,
        r.filter,
        r.graph_id,
        math.inf if r.m is None else r.m,
        r.trial_id,
    )
    records.sort(key=key)
    failures.sort(key=lambda r: (
        r.model,
        -1.0 if r.p is None else r.p,
        r.filter,
        r.graph_id,
        math.inf if r.m is None else r.m,
        r.trial_id,
    ))
    return records, failures


# ---------------------------------------------------------------------------
# CSV emission


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _fmt_m(m: int | None) -> str:
    return "inf" if m is None else str(m)


def trial_row(record: TrialRecord) -> list[str]:
    return [
        record.model,
        str(record.n),
        _fmt(record.k),
        _fmt(record.p),
        record.filter,
        _fmt_m(record.m),
        str(record.graph_id),
        str(record.trial_id),
        str(record.chosen_index),
        str(record.optimal_index),
        _fmt(record.correct),
        _fmt(record.cos_true),
        _fmt(record.score),
        _fmt(record.delta),
        _fmt(record.min_u),
        str(record.seed),
    ]


def _write_csv(path, header: list[str], rows) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def write_trials_csv(path, records: list[TrialRecord]) -> None:
    _write_csv(path, _TRIALS_HEADER, (trial_row(r) for r in records))


def write_errors_csv(path, failures: list[ErrorRecord]) -> None:
    rows = (
        [
            f.model, str(f.n), _fmt(f.k), _fmt(f.p), f.filter, _fmt_m(f.m),
            str(f.graph_id), str(f.trial_id), f.error,
        ]
        for f in failures
    )
    _write_csv(path, _ERRORS_HEADER, rows)


def wilson_interval(successes: int, total: int) -> tuple[float, float]:
    """95% score interval for a binomial proportion."""
    if total < 1:
        raise ValueError("total must be >= 1")
    z = 1.959963984540054
    phat = successes / total
    denom = 1.0 + z * z / total
    center = (phat + z * z / (2 * total)) / denom
    half = z * math.sqrt(phat * (1 - phat) / total + z * z / (4 * total * total)) / denom
    return max(0.0, center - half), min(1.0, center + half)


def aggregate_rates(records: list[TrialRecord]) -> list[dict]:
    """Selection rate per (model, n, k, p, filter, m) with Wilson 95% bounds."""
    groups: dict[tuple, list[TrialRecord]] = {}
    for record in records:
        key = (record.model, record.n, record.k, record.p, record.filter, record.m)
        groups.setdefault(key, []).append(record)
    rows = []
    for key in sorted(
        groups,
        key=lambda k: (
            k[0],
            -1.0 if k[3] is None else k[3],
            k[4],
            math.inf if k[5] is None else k[5],
        ),
    ):
        model, n, k, p, filt, m = key
        bucket = groups[key]
        total = len(bucket)
        correct = sum(1 for r in bucket if r.correct)
        low, high = wilson_interval(correct, total)
        rows.append(
            {
                "model": model, "n": n, "k": k, "p": p, "filter": filt, "m": m,
                "trials": total, "correct": correct, "rate": correct / total,
                "wilson_low": low, "wilson_high": high,
            }
        )
    return rows


def write_rates_csv(path, rows: list[dict]) -> None:
    formatted = (
        [
            row["model"], str(row["n"]), _fmt(row["k"]), _fmt(row["p"]),
            row["filter"], _fmt_m(row["m"]), str(row["trials"]),
            str(row["correct"]), _fmt(float(row["rate"])),
            _fmt(float(row["wilson_low"])), _fmt(float(row["wilson_high"])),
        ]
        for row in rows
    )
    _write_csv(path, _RATES_HEADER, formatted)


# ---------------------------------------------------------------------------
# experiments


def _run_experiment(config: ExperimentConfig, out_dir) -> dict[str, Path]:
    out_dir = Path(out_dir)
    experiment_id = EXPERIMENT_IDS[config.model]
    if config.model == "er":
        p_values = [config.resolved_p]
    else:
        p_values = list(config.p_list)
        if not p_values:
            raise ValueError("ws experiment needs a nonempty p_list")
    payloads = [
        {
            "model": config.model,
            "n": config.n,
            "k": config.k,
            "p": p,
            "p_index": p_index,
            "graph_id": graph_id,
            "filter": filter_string,
            "filter_index": filter_index,
            "m_grid": list(config.m_grid),
            "trials": config.trials,
            "master_seed": config.master_seed,
            "experiment_id": experiment_id,
            "noise": config.noise,
        }
        for p_index, p in enumerate(p_values)
        for graph_id in range(config.graphs)
        for filter_index, filter_string in enumerate(config.filters)
    ]
    records, failures = _execute_jobs(payloads, config.workers)
    paths = {
        "trials": out_dir / "trials.csv",
        "rates": out_dir / "rates.csv",
        "errors": out_dir / "errors.csv",
        "plot": out_dir / "rates.svg",
    }
    write_trials_csv(paths["trials"], records)
    write_errors_csv(paths["errors"], failures)
    write_rates_csv(paths["rates"], aggregate_rates(records))
    from .plotting import plot_rates  # deferred: matplotlib import is slow

    plot_rates(paths["rates"], paths["plot"])
    return paths


def experiment_er(config: ExperimentConfig, out_dir) -> dict[str, Path]:
    """Selection-rate sweep over m for each filter on one connected ER graph."""
    if config.model != "er":
        raise ValueError("config.model must be 'er'")
    return _run_experiment(config, out_dir)


def experiment_ws(config: ExperimentConfig, out_dir) -> dict[str, Path]:
    """Per-rewiring-probability selection-rate curves over fresh WS draws."""
    if config.model != "ws":
        raise ValueError("config.model must be 'ws'")
    return _run_experiment(config, out_dir)


# ---------------------------------------------------------------------------
# eigengap table and localization profile

_EIGENGAP_HEADER = ["model", "n", "k", "filter", "p", "reps", "mean_delta", "var_delta", "seed"]
_PROFILE_HEADER = ["model", "n", "k", "p", "node", "centrality", "reference", "seed"]


def eigengap_table(
    p_list,
    reps: int,
    seed: int,
    out_path,
    n: int = 500,
    k: int = 4,
    filter_string: str = "sqrt",
) -> list[dict]:
    """Mean and variance of the covariance eigengap at the centrality index.

    One row per rewiring probability, over ``reps`` connected WS draws each.
    """
    if reps < 1:
        raise ValueError("reps must be >= 1")
    spec = parse_filter(filter_string)
    experiment_id = EXPERIMENT_IDS["eigengap"]
    rows = []
    for p_index, p in enumerate(p_list):
        deltas = []
        for rep in range(reps):
            ctx = build_graph_context(
                "ws", n, p, k, seed, experiment_id, rep, p_index=p_index
            )
            h = apply_filter(spec, ctx.adjacency, decomposition=ctx.decomposition)
            j = centrality_index_in_cy(spec, ctx.decomposition.eigenvalues)
            deltas.append(eigengap_at(np.sort(h.spectrum**2), j))
        rows.append(
            {
                "model": "ws", "n": n, "k": k, "filter": filter_string, "p": p,
                "reps": reps, "mean_delta": float(np.mean(deltas)),
                "var_delta": float(np.var(deltas)), "seed": seed,
            }
        )
    formatted = (
        [
            row["model"], str(row["n"]), str(row["k"]), row["filter"],
            _fmt(float(row["p"])), str(row["reps"]), _fmt(row["mean_delta"]),
            _fmt(row["var_delta"]), str(row["seed"]),
        ]
        for row in rows
    )
    _write_csv(out_path, _EIGENGAP_HEADER, formatted)
    return rows


def localization_profile(
    p_list,
    seed: int,
    out_dir,
    n: int = 500,
    k: int = 4,
) -> dict[str, Path]:
    """Per-node centrality of one connected WS draw per rewiring probability.

    Emits a CSV with the constant 1/sqrt(n) reference column and a circular
    profile plot.
    """
    out_dir = Path(out_dir)
    experiment_id = EXPERIMENT_IDS["profile"]
    reference = 1.0 / math.sqrt(n)
    rows = []
    for p_index, p in enumerate(p_list):
        ctx = build_graph_context("ws", n, p, k, seed, experiment_id, 0, p_index=p_index)
        for node, value in enumerate(ctx.centrality):
            rows.append(
                [
                    "ws", str(n), str(k), _fmt(float(p)), str(node),
                    _fmt(float(value)), _fmt(reference), str(seed),
                ]
            )
    paths = {"profile": out_dir / "profile.csv", "plot": out_dir / "profile.svg"}
    _write_csv(paths["profile"], _PROFILE_HEADER, rows)
    from .plotting import plot_profile  # deferred: matplotlib import is slow

    plot_profile(paths["profile"], paths["plot"])
    return paths
