"""Signal synthesis through a graph filter and covariance estimation.

Each observation is y = H(A) w with w drawn i.i.d. from a zero-mean,
unit-covariance distribution (Gaussian by default, Rademacher available).
The population covariance is then H(A)^2, which shares eigenvectors with A.
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ._rng import as_generator
from .filters import FilterMatrix, format_filter

NOISE_KINDS = ("gaussian", "rademacher")


@dataclass(frozen=True)
class Provenance:
    """What produced an ensemble: (seed, filter string, graph hash)."""

    seed: int | None
    filter: str | None
    graph_hash: str | None


@dataclass(frozen=True)
class SignalEnsemble:
    """m observed signals, one per row, plus reproducibility provenance."""

    signals: np.ndarray
    m: int
    provenance: Provenance

    @property
    def n(self) -> int:
        return self.signals.shape[1]


@dataclass(frozen=True)
class CovarianceMatrix:
    """Symmetric PSD covariance; source is "population" or "sample"."""

    entries: np.ndarray
    source: str
    m: int | None = None

    @property
    def n(self) -> int:
        return self.entries.shape[0]


def _draw_noise(kind: str, shape, gen: np.random.Generator) -> np.ndarray:
    if kind == "gaussian":
        return gen.standard_normal(shape)
    if kind == "rademacher":
        return gen.integers(0, 2, size=shape).astype(float) * 2.0 - 1.0
    raise ValueError(f"unknown noise kind {kind!r}; choose from {NOISE_KINDS}")


def generate_signals(
    h: FilterMatrix,
    m: int,
    rng,
    noise: str = "gaussian",
) -> SignalEnsemble:
    """Draw m signals y = H w with white noise input; deterministic per seed.

    ``rng`` may be an int seed (recorded in provenance) or a Generator
    (provenance seed left unset).
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    seed = rng if isinstance(rng, int) else None
    gen = as_generator(rng)
    w = _draw_noise(noise, (m, h.n), gen)
    signals = w @ h.entries  # rows y_l = H w_l since H is symmetric
    provenance = Provenance(
        seed=seed,
        filter=None if h.spec is None else format_filter(h.spec),
        graph_hash=h.source_hash,
    )
    return SignalEnsemble(signals=signals, m=m, provenance=provenance)


def population_covariance(h: FilterMatrix) -> CovarianceMatrix:
    """Exact signal covariance H(A)^2, squared on the filtered spectrum."""
    q = h.basis
    c = (q * h.spectrum**2) @ q.T
    return CovarianceMatrix(entries=(c + c.T) / 2.0, source="population")


def sample_covariance(ensemble: SignalEnsemble) -> CovarianceMatrix:
    """Mean-centered empirical covariance with 1/m normalization.

    With m=1 the centered signal vanishes and the zero matrix is returned;
    downstream selection then operates on an arbitrary orthonormal basis.
    """
    y = ensemble.signals
    centered = y - y.mean(axis=0)
    c = centered.T @ centered / ensemble.m
    return CovarianceMatrix(entries=(c + c.T) / 2.0, source="sample", m=ensemble.m)


def covariance_deviation(sample: CovarianceMatrix, population: CovarianceMatrix) -> float:
    """Spectral-norm distance between two covariance matrices."""
    if sample.entries.shape != population.entries.shape:
        raise ValueError(
            f"dimension mismatch: {sample.entries.shape} vs {population.entries.shape}"
        )
    diff = sample.entries - population.entries
    diff = (diff + diff.T) / 2.0
    return float(np.max(np.abs(np.linalg.eigvalsh(diff))))


def write_signals_csv(path, ensemble: SignalEnsemble) -> None:
    """Export one row per signal with a `# n=.. m=.. seed=.. filter=..` header."""
    p = ensemble.provenance
    seed = "" if p.seed is None else str(p.seed)
    filt = "" if p.filter is None else p.filter
    lines = [f"# n={ensemble.n} m={ensemble.m} seed={seed} filter={filt}"]
    for row in ensemble.signals:
        lines.append(",".join(repr(float(x)) for x in row))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
