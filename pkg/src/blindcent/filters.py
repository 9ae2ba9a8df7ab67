"""Graph filters: polynomials of the adjacency matrix and spectral functions.

Two filter kinds exist. Polynomial filters evaluate sum_k g_k * A^k on the
raw spectrum. Spectral filters apply a named scalar function (sqrt, squared,
identity) to the min-max rescaled spectrum, optionally reversed into a
high-pass variant f -> 1 - f. Both are computed exactly in the eigenbasis.

CLI grammar: ``sqrt | squared | sqrt-hp | squared-hp | poly:g0,g1,...,gT``
(``identity`` and ``identity-hp`` are also accepted).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import AmbiguousIndexError, NonFiniteError
from .graphs import graph_hash
from .spectral import SpectralDecomposition, eig_sym, rescale_unit_interval

SPECTRAL_FUNCTIONS = {
    "sqrt": np.sqrt,
    "squared": np.square,
    "identity": lambda x: x,
}


@dataclass(frozen=True)
class FilterSpec:
    """Either explicit polynomial coefficients or a named spectral function."""

    coefficients: tuple[float, ...] | None = None
    name: str | None = None
    highpass: bool = False

    def __post_init__(self):
        if (self.coefficients is None) == (self.name is None):
            raise ValueError("specify exactly one of coefficients or name")
        if self.coefficients is not None:
            if len(self.coefficients) == 0:
                raise ValueError("polynomial filter needs at least one coefficient")
            if not all(np.isfinite(c) for c in self.coefficients):
                raise NonFiniteError("polynomial coefficients must be finite")
            if self.highpass:
                raise ValueError("highpass applies to spectral filters only")
        if self.name is not None and self.name not in SPECTRAL_FUNCTIONS:
            raise ValueError(
                f"unknown spectral function {self.name!r}; "
                f"choose from {sorted(SPECTRAL_FUNCTIONS)}"
            )

    @classmethod
    def polynomial(cls, coefficients) -> "FilterSpec":
        return cls(coefficients=tuple(float(c) for c in coefficients))

    @classmethod
    def spectral(cls, name: str, highpass: bool = False) -> "FilterSpec":
        return cls(name=name, highpass=highpass)

    @property
    def kind(self) -> str:
        return "polynomial" if self.coefficients is not None else "spectral"


#: The four named experiment filters.
NAMED_FILTERS = ("sqrt", "squared", "sqrt-hp", "squared-hp")


def parse_filter(text: str) -> FilterSpec:
    """Parse the CLI filter grammar into a FilterSpec."""
    text = text.strip()
    if text.startswith("poly:"):
        body = text[len("poly:"):]
        try:
            coefficients = [float(c) for c in body.split(",") if c.strip() != ""]
        except ValueError as exc:
            raise ValueError(f"bad polynomial coefficients in {text!r}") from exc
        if not coefficients:
            raise ValueError(f"no coefficients in {text!r}")
        return FilterSpec.polynomial(coefficients)
    name, sep, suffix = text.partition("-")
    if name in SPECTRAL_FUNCTIONS and (not sep or suffix == "hp"):
        return FilterSpec.spectral(name, highpass=suffix == "hp")
    raise ValueError(
        f"unrecognized filter {text!r}; expected "
        "sqrt | squared | sqrt-hp | squared-hp | poly:g0,g1,...,gT"
    )


def format_filter(spec: FilterSpec) -> str:
    """Inverse of :func:`parse_filter`, used in provenance and CSV rows."""
    if spec.kind == "polynomial":
        return "poly:" + ",".join(repr(c) for c in spec.coefficients)
    return spec.name + ("-hp" if spec.highpass else "")


def filter_spectrum(spec: FilterSpec, eigenvalues: np.ndarray) -> np.ndarray:
    """Apply the filter's scalar function to each eigenvalue.

    Spectral filters rescale the spectrum onto [0, 1] first (clamping -eps
    roundoff to 0 so sqrt stays real); polynomial filters evaluate on the raw
    eigenvalues.
    """
    eigenvalues = np.asarray(eigenvalues, dtype=float)
    if spec.kind == "polynomial":
        return np.polynomial.polynomial.polyval(eigenvalues, np.asarray(spec.coefficients))
    scaled, _ = rescale_unit_interval(eigenvalues)
    scaled = np.clip(scaled, 0.0, 1.0)
    values = SPECTRAL_FUNCTIONS[spec.name](scaled)
    if spec.highpass:
        values = 1.0 - values
    return np.clip(values, 0.0, None)


@dataclass(frozen=True)
class FilterMatrix:
    """H(A) together with its spectrum in the adjacency eigenvector order."""

    entries: np.ndarray
    spectrum: np.ndarray
    basis: np.ndarray
    spec: FilterSpec | None = None
    source_hash: str | None = None

    @property
    def n(self) -> int:
        return self.entries.shape[0]


def apply_filter(
    spec: FilterSpec,
    a: np.ndarray,
    decomposition: SpectralDecomposition | None = None,
) -> FilterMatrix:
    """Form H(A) = Q diag(f(lambda)) Q^T in the adjacency eigenbasis.

    ``decomposition`` may carry a precomputed eig_sym(a) to avoid repeating
    the factorization; it must match ``a``.
    """
    a = np.asarray(a, dtype=float)
    if decomposition is None:
        decomposition = eig_sym(a)
    values = filter_spectrum(spec, decomposition.eigenvalues)
    q = decomposition.eigenvectors
    h = (q * values) @ q.T
    h = (h + h.T) / 2.0
    return FilterMatrix(
        entries=h,
        spectrum=values,
        basis=q,
        spec=spec,
        source_hash=graph_hash(a),
    )


def centrality_index_in_cy(spec: FilterSpec, eigenvalues: np.ndarray) -> int:
    """Rank (ascending) of the centrality eigenvector in the signal covariance.

    The covariance spectrum is the squared filtered spectrum; this returns
    where the value attached to the top adjacency eigenvalue lands once those
    squares are sorted ascending. Requires the top adjacency eigenvalue to be
    simple.
    """
    eigenvalues = np.asarray(eigenvalues, dtype=float)
    squared = filter_spectrum(spec, eigenvalues) ** 2
    top = squared[-1]
    others = squared[:-1]
    if others.size == 0:
        return 0
    if float(np.min(np.abs(others - top))) <= 1e-12:
        raise AmbiguousIndexError(
            "filtered top eigenvalue ties another filtered value within 1e-12"
        )
    return int(np.sum(others < top))
