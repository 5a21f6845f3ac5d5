"""Decision rules: matched-filter argmax, whitened ML, and the linear RDDs.

Hypothesis indices returned by every detector are 1-based.  All ties break
toward the lowest index (argmax/argmin return the first maximizer); ties
have probability zero under continuous noise, so this only pins down test
behavior.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_triangular

from .errors import SingularCovariance
from .frames import Frame
from .model import gram_cholesky


@dataclass(frozen=True)
class WhitenedFrame:
    """Whitened geometry of one trial: C = A G^{-1} A^T factored once.

    columns holds L^{-1} A where C = L L^T, i.e. the hypothesis means of the
    whitened statistic; col_sqnorm caches their squared norms.
    """

    chol_c: np.ndarray
    columns: np.ndarray
    col_sqnorm: np.ndarray


def whiten_from_cholesky(frame: Frame, chol_g: np.ndarray) -> WhitenedFrame:
    """Whiten the frame given an existing lower Cholesky factor of G.

    Lets a caller that already factored the Gram matrix (e.g. to compute the
    compressed statistic) reuse that factor instead of refactoring.
    """
    x = solve_triangular(chol_g, frame.entries.T, lower=True)
    cov = x.T @ x
    try:
        chol_c = np.linalg.cholesky(cov)
    except np.linalg.LinAlgError as exc:
        raise SingularCovariance("compressed covariance is numerically singular") from exc
    columns = solve_triangular(chol_c, frame.entries, lower=True)
    return WhitenedFrame(chol_c=chol_c, columns=columns, col_sqnorm=(columns * columns).sum(axis=0))


def whiten(frame: Frame, gram: np.ndarray) -> WhitenedFrame:
    """Factor C = A G^{-1} A^T and whiten the frame columns.

    Uses one Cholesky of G, one triangular solve per frame row, and one
    Cholesky of C; raises SingularGram/SingularCovariance on breakdown.
    """
    return whiten_from_cholesky(frame, gram_cholesky(gram))


def detect_mf(v: np.ndarray) -> int:
    """Matched filter: index of the largest inner product."""
    return int(np.argmax(v)) + 1


def detect_ml_whitened(wf: WhitenedFrame, u: np.ndarray) -> int:
    """ML verdict given a prewhitened frame (see detect_ml)."""
    u_w = solve_triangular(wf.chol_c, u, lower=True)
    # Minimizing ||u_w - h_k||^2 over k is the same as maximizing
    # h_k^T u_w - ||h_k||^2 / 2 after dropping the k-independent ||u_w||^2.
    scores = wf.columns.T @ u_w - 0.5 * wf.col_sqnorm
    return int(np.argmax(scores)) + 1


def detect_ml(frame: Frame, gram: np.ndarray, u: np.ndarray) -> int:
    """Maximum likelihood verdict for the compressed statistic, given G.

    Conditionally on the signals, u is Gaussian with mean a_k and covariance
    sigma^2 A G^{-1} A^T, so ML is the nearest column in the Mahalanobis
    metric of C = A G^{-1} A^T (the noise scale is hypothesis-independent
    and drops out).
    """
    return detect_ml_whitened(whiten(frame, gram), u)


def detect_mrdd(frame: Frame, u: np.ndarray) -> int:
    """Linear detector: largest signed correlation a_k^T u."""
    return int(np.argmax(frame.entries.T @ u)) + 1


def detect_rdd(frame: Frame, u: np.ndarray) -> int:
    """Original reduced-dimensionality rule: largest |a_k^T u|."""
    return int(np.argmax(np.abs(frame.entries.T @ u))) + 1
