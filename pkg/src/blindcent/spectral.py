"""Deterministic symmetric eigendecomposition and spectrum utilities.

Convention used package-wide: eigenvalues are sorted ascending, eigenvector
columns are paired with them, and every eigenvector carries a canonical sign
(entry sum >= 0, ties broken by making the largest-magnitude entry positive).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateSpectrumError, NonFiniteError, SingleEigenvalueError


def canonical_sign(v: np.ndarray) -> np.ndarray:
    """Flip the sign of ``v`` so its entry sum is >= 0.

    An exactly zero sum is broken by making the largest-magnitude entry
    (first such index) positive, which removes the +/-v ambiguity of
    eigenvectors deterministically.
    """
    v = np.asarray(v, dtype=float)
    s = float(v.sum())
    if s > 0.0:
        return v
    if s < 0.0:
        return -v
    idx = int(np.argmax(np.abs(v)))
    if v[idx] < 0.0:
        return -v
    return v


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenpairs of a symmetric matrix, ascending, sign-canonicalized columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def n(self) -> int:
        return self.eigenvalues.shape[0]

    def reconstruct(self) -> np.ndarray:
        """Q diag(lambda) Q^T."""
        q = self.eigenvectors
        return (q * self.eigenvalues) @ q.T


def eig_sym(m: np.ndarray) -> SpectralDecomposition:
    """Eigendecompose a (nearly) symmetric real matrix.

    The input is symmetrized as (M + M^T)/2 before factorization, so callers
    may pass matrices with roundoff-level asymmetry. Output is deterministic
    for identical input bits.
    """
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise NonFiniteError("matrix contains NaN or infinite entries")
    sym = (m + m.T) / 2.0
    eigenvalues, eigenvectors = np.linalg.eigh(sym)
    for i in range(eigenvectors.shape[1]):
        eigenvectors[:, i] = canonical_sign(eigenvectors[:, i])
    return SpectralDecomposition(eigenvalues=eigenvalues, eigenvectors=eigenvectors)


def eigengap_at(eigenvalues: np.ndarray, j: int) -> float:
    """Minimum distance from eigenvalue ``j`` to its spectral neighbors.

    ``eigenvalues`` must be sorted ascending. Boundary indices use the single
    available gap.
    """
    eigenvalues = np.asarray(eigenvalues, dtype=float)
    n = eigenvalues.shape[0]
    if n == 1:
        raise SingleEigenvalueError("eigengap is undefined for a single eigenvalue")
    if not 0 <= j < n:
        raise ValueError(f"index {j} out of range for {n} eigenvalues")
    gaps = []
    if j > 0:
        gaps.append(eigenvalues[j] - eigenvalues[j - 1])
    if j < n - 1:
        gaps.append(eigenvalues[j + 1] - eigenvalues[j])
    return float(min(gaps))


@dataclass(frozen=True)
class AffineRescale:
    """The affine map x -> (x - lo) / span used to place a spectrum in [0, 1]."""

    lo: float
    span: float

    def apply(self, x):
        return (np.asarray(x, dtype=float) - self.lo) / self.span

    def invert(self, y):
        return np.asarray(y, dtype=float) * self.span + self.lo


def rescale_unit_interval(eigenvalues: np.ndarray) -> tuple[np.ndarray, AffineRescale]:
    """Min-max rescale a spectrum onto [0, 1]; returns values and the map."""
    eigenvalues = np.asarray(eigenvalues, dtype=float)
    lo = float(eigenvalues.min())
    hi = float(eigenvalues.max())
    span = hi - lo
    if span < 1e-12:
        raise DegenerateSpectrumError(
            f"spectrum range {span:.3e} too small to rescale onto [0, 1]"
        )
    rescale = AffineRescale(lo=lo, span=span)
    return rescale.apply(eigenvalues), rescale


def sin_angle(v1: np.ndarray, v2: np.ndarray) -> float:
    """Sine of the principal angle between two unit vectors; sign-invariant."""
    inner = float(np.clip(abs(float(np.dot(v1, v2))), 0.0, 1.0))
    return float(np.sqrt(max(0.0, 1.0 - inner * inner)))
