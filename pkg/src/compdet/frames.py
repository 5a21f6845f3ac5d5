"""Group Hadamard sensing matrices and their geometry.

The sensing matrix is built from the character table of GF(2^r): rows are
indexed by a multiplicative subgroup {a_1..a_N}, columns by all M = 2^r
field elements, and the (i, j) entry is (-1)^Tr(a_i x_j) / sqrt(N).
Columns then have unit norm and the rows are orthogonal with A A^T = (M/N) I.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import gf2m
from .errors import DomainError, NotADivisor

COLUMN_NORM_TOL = 1e-12
ROW_ORTHO_TOL = 1e-10


@dataclass(frozen=True)
class Frame:
    """A column-normalized N x M sensing matrix with cached coherence."""

    m: int
    n: int
    entries: np.ndarray
    mu: float
    kappa: int

    @property
    def alpha(self) -> float:
        return self.n / self.m


def _coherence_of(entries: np.ndarray) -> float:
    gram = entries.T @ entries
    off = np.abs(gram - np.diag(np.diag(gram)))
    return float(off.max())


def frame_from_entries(entries: np.ndarray) -> Frame:
    """Wrap an arbitrary column set as a Frame (used for test fixtures)."""
    entries = np.asarray(entries, dtype=float)
    n, m = entries.shape
    kappa = (m - 1) // n if n and (m - 1) % n == 0 else 0
    return Frame(m=m, n=n, entries=entries, mu=_coherence_of(entries), kappa=kappa)


def build_group_hadamard(ctx: gf2m.FieldCtx, n: int) -> Frame:
    """Construct the N x M column-normalized group Hadamard frame.

    Requires the field order M = 2^r to be at least 4 and N to divide M - 1.
    The column for the zero element is the constant vector 1/sqrt(N).
    """
    m = ctx.order
    if m < 4:
        raise DomainError(f"field order {m} is below the minimum of 4")
    if n < 1 or (m - 1) % n != 0:
        raise NotADivisor(f"row count {n} does not divide M-1 = {m - 1}")

    rows = gf2m.subgroup(ctx, n)
    tr = [gf2m.trace(ctx, x) for x in range(m)]
    signs = np.empty((n, m), dtype=float)
    for i, a in enumerate(rows):
        for j in range(m):
            signs[i, j] = -1.0 if tr[gf2m.mul(ctx, a, j)] else 1.0
    entries = signs / math.sqrt(n)
    entries.setflags(write=False)

    frame = Frame(m=m, n=n, entries=entries, mu=_coherence_of(entries), kappa=(m - 1) // n)
    col_norm_err = np.abs(np.linalg.norm(entries, axis=0) - 1.0).max()
    if col_norm_err > COLUMN_NORM_TOL:
        raise DomainError(f"column norms deviate from 1 by {col_norm_err:g}")
    if row_orthonormality_error(frame) > ROW_ORTHO_TOL:
        raise DomainError("row orthonormality A A^T = (M/N) I failed")
    return frame


def coherence(frame: Frame) -> float:
    """Largest |inner product| between distinct columns."""
    return _coherence_of(frame.entries)


def row_orthonormality_error(frame: Frame) -> float:
    """Max-norm deviation of A A^T from (M/N) I."""
    aat = frame.entries @ frame.entries.T
    return float(np.abs(aat - (frame.m / frame.n) * np.eye(frame.n)).max())


def coherence_bound(m: int, n: int) -> float:
    """Closed-form coherence bound for the constructed frame family.

    With kappa = (M-1)/N the bound is
    (1/kappa) * ((kappa-1) * sqrt((kappa + 1/N)/N) + 1/N); at kappa = 1 it
    collapses to 1/N, which the full-group frame attains exactly.
    """
    if m < 4 or m & (m - 1):
        raise DomainError(f"column count {m} is not a power of two >= 4")
    if n < 1 or (m - 1) % n != 0:
        raise NotADivisor(f"row count {n} does not divide M-1 = {m - 1}")
    kappa = (m - 1) // n
    return ((kappa - 1) * math.sqrt((kappa + 1 / n) / n) + 1 / n) / kappa


def ric2(frame: Frame) -> float:
    """Order-2 restricted isometry constant by brute force over column pairs.

    Scans every 2x2 Gram block (and each single column) and returns the
    largest eigenvalue deviation from 1.  For unit-norm columns this equals
    the coherence; the scan is kept independent of coherence() on purpose.
    """
    gram = frame.entries.T @ frame.entries
    m = frame.m
    delta = max(abs(float(gram[i, i]) - 1.0) for i in range(m))
    for i in range(m):
        for j in range(i + 1, m):
            block = np.array([[gram[i, i], gram[i, j]], [gram[i, j], gram[j, j]]])
            eigs = np.linalg.eigvalsh(block)
            delta = max(delta, float(np.abs(eigs - 1.0).max()))
    return delta


def difference_norm_bounds(frame: Frame) -> tuple:
    """Analytic interval for the whitened column-difference energies.

    Every ||(A A^T)^{-1/2} A (b_i - b_j)||^2 equals 2*alpha*(1 - g_ij) for a
    row-orthonormal frame, hence lies in [2a(1-mu), 2a(1+mu)] with a = N/M.
    """
    a = frame.alpha
    return 2.0 * a * (1.0 - frame.mu), 2.0 * a * (1.0 + frame.mu)
