"""Centrality-cone geometry and the covariance eigenvector selection rule.

The admissible set for an eigenvector centrality is the symmetric cone of
vectors whose entries all share one sign. Selection scores every eigenvector
of a covariance matrix by the cosine of its angle to its cone projection and
returns the argmax; with exact covariance input this recovers the true
centrality no matter where the filter placed it in the spectrum.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ZeroVectorError
from .spectral import SpectralDecomposition, eig_sym, eigengap_at
from .signals import CovarianceMatrix

POSITIVE = "positive"
NEGATIVE = "negative"


@dataclass(frozen=True)
class ConeProjection:
    """A vector, its nearest same-signed vector, and the cosine between them."""

    input: np.ndarray
    projected: np.ndarray
    score: float
    branch: str


def project_to_cone(v: np.ndarray) -> ConeProjection:
    """Project onto the same-signed cone by keeping the heavier signed part.

    The candidates are the entrywise positive and negative parts; the one
    with larger norm is the closer projection (ties go to the positive
    branch). For a unit vector the score equals that norm.
    """
    v = np.asarray(v, dtype=float)
    norm = float(np.linalg.norm(v))
    if norm < 1e-12:
        raise ZeroVectorError("cannot project a zero vector onto the cone")
    positive_part = np.clip(v, 0.0, None)
    negative_part = np.clip(v, None, 0.0)
    positive_norm = float(np.linalg.norm(positive_part))
    negative_norm = float(np.linalg.norm(negative_part))
    if positive_norm >= negative_norm:
        branch, projected, part_norm = POSITIVE, positive_part, positive_norm
    else:
        branch, projected, part_norm = NEGATIVE, negative_part, negative_norm
    return ConeProjection(
        input=v, projected=projected, score=part_norm / norm, branch=branch
    )


def cone_score(v: np.ndarray) -> float:
    """Cosine of the angle between ``v`` and its cone projection."""
    return project_to_cone(v).score


def _column_scores(vectors: np.ndarray) -> np.ndarray:
    # max(||v+||, ||v-||) per column; columns from eigh are unit norm.
    positive = np.linalg.norm(np.clip(vectors, 0.0, None), axis=0)
    negative = np.linalg.norm(np.clip(vectors, None, 0.0), axis=0)
    return np.maximum(positive, negative)


@dataclass(frozen=True)
class SelectionDiagnostics:
    optimal_index: int | None
    cos_true: float | None
    eigengap: float


@dataclass(frozen=True)
class SelectionResult:
    """Chosen eigenvector index, all cone scores, and the unit estimate."""

    chosen_index: int
    scores: np.ndarray
    estimate: np.ndarray
    diagnostics: SelectionDiagnostics | None = None


def select_centrality(
    cov: CovarianceMatrix,
    decomposition: SpectralDecomposition | None = None,
    truth: np.ndarray | None = None,
) -> SelectionResult:
    """Pick the covariance eigenvector closest to the same-signed cone.

    Eigendecomposes ``cov`` (ascending order), scores every eigenvector, and
    returns the argmax with ties broken by lowest index. When no eigenvector
    lies inside the cone the nearest one is still returned. The estimate is
    sign-flipped so its winning signed part is nonnegative.

    ``decomposition`` may carry a precomputed eig_sym(cov.entries);
    ``truth`` optionally fills the oracle diagnostics.
    """
    if decomposition is None:
        decomposition = eig_sym(cov.entries)
    vectors = decomposition.eigenvectors
    scores = _column_scores(vectors)
    chosen = int(np.argmax(scores))
    v = vectors[:, chosen]
    positive_norm = float(np.linalg.norm(np.clip(v, 0.0, None)))
    negative_norm = float(np.linalg.norm(np.clip(v, None, 0.0)))
    estimate = v if positive_norm >= negative_norm else -v
    diagnostics = SelectionDiagnostics(
        optimal_index=(
            None
            if truth is None
            else oracle_optimal_index(cov, truth, decomposition=decomposition)
        ),
        cos_true=(
            None if truth is None else float(abs(float(np.dot(estimate, truth))))
        ),
        eigengap=eigengap_at(decomposition.eigenvalues, chosen)
        if decomposition.n > 1
        else 0.0,
    )
    return SelectionResult(
        chosen_index=chosen,
        scores=scores,
        estimate=estimate,
        diagnostics=diagnostics,
    )


def oracle_optimal_index(
    cov: CovarianceMatrix,
    u: np.ndarray,
    decomposition: SpectralDecomposition | None = None,
) -> int:
    """Index of the covariance eigenvector with largest |<v_i, u>|.

    This is the evaluation oracle: it needs the true centrality, which the
    selection rule itself never sees. First index wins on exact ties.
    """
    u = np.asarray(u, dtype=float)
    if u.shape[0] != cov.n:
        raise ValueError(f"dimension mismatch: u has {u.shape[0]}, cov has {cov.n}")
    if decomposition is None:
        decomposition = eig_sym(cov.entries)
    inner = np.abs(decomposition.eigenvectors.T @ u)
    return int(np.argmax(inner))


def selection_correct(result: SelectionResult, oracle_index: int) -> bool:
    """Did selection choose the eigenvector the oracle would have chosen?"""
    return result.chosen_index == int(oracle_index)
