"""Inverse-diagonal and trace-of-inverse kernels for symmetric tridiagonal matrices.

The fast path computes the diagonal of ``T^{-1}`` for a symmetric positive
definite tridiagonal ``T`` in O(m) time using two pivot sweeps:

* forward pivots  ``p_i = a_i - b_{i-1}^2 / p_{i-1}``  (the LDL^T diagonal),
* backward pivots ``q_i = a_i - b_i^2 / q_{i+1}``,

which combine into ``(T^{-1})_{ii} = 1 / (p_i + q_i - a_i)``. Running the
recurrences on pivot ratios rather than raw leading/trailing minors keeps
intermediate values on the scale of the matrix entries, so blocks of any
realistic size neither overflow nor underflow. Every pivot and denominator
must stay strictly positive and finite; a violation means the input was not
positive definite and raises :class:`NotPositiveDefinite`.

A dense Cholesky-based oracle (`dense_trace_of_inverse`) is provided for
validation and for matrices that are not tridiagonal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

__all__ = [
    "NotPositiveDefinite",
    "TridiagonalMatrix",
    "inverse_diagonal",
    "trace_of_inverse",
    "dense_trace_of_inverse",
]


class NotPositiveDefinite(ArithmeticError):
    """Raised when a matrix required to be positive definite is not."""


@dataclass(frozen=True)
class TridiagonalMatrix:
    """Symmetric tridiagonal matrix stored as its diagonal and off-diagonal.

    ``off[i]`` couples rows ``i`` and ``i+1``; symmetry is structural. The
    empty matrix (``m = 0``) is a valid value and stands for a block with no
    rows.
    """

    diag: tuple[float, ...]
    off: tuple[float, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "diag", tuple(float(x) for x in self.diag))
        object.__setattr__(self, "off", tuple(float(x) for x in self.off))
        expected = max(len(self.diag) - 1, 0)
        if len(self.off) != expected:
            raise ValueError(
                f"off-diagonal length {len(self.off)} does not match "
                f"diagonal length {len(self.diag)} (expected {expected})"
            )
        for x in self.diag + self.off:
            if not math.isfinite(x):
                raise ValueError("matrix entries must be finite")

    @property
    def m(self) -> int:
        return len(self.diag)

    def to_dense(self) -> np.ndarray:
        """Materialize as a dense ndarray (test and oracle use)."""
        a = np.diag(np.asarray(self.diag, dtype=float))
        if self.off:
            b = np.asarray(self.off, dtype=float)
            a[np.arange(self.m - 1), np.arange(1, self.m)] = b
            a[np.arange(1, self.m), np.arange(self.m - 1)] = b
        return a


def _inverse_diagonal_range(diag, off, start: int, stop: int) -> list[float]:
    """Diagonal of the inverse of the block diag[start:stop] with couplings
    off[start:stop-1]. O(stop-start) time; raises NotPositiveDefinite on any
    nonpositive or nonfinite pivot."""
    m = stop - start
    if m <= 0:
        return []
    fwd = [0.0] * m
    p = diag[start]
    if not 0.0 < p < math.inf:
        raise NotPositiveDefinite(f"leading pivot {p!r} is not positive")
    fwd[0] = p
    for i in range(start + 1, stop):
        b = off[i - 1]
        p = diag[i] - b * b / p
        if not 0.0 < p < math.inf:
            raise NotPositiveDefinite(f"pivot {p!r} at row {i - start} is not positive")
        fwd[i - start] = p
    out = [0.0] * m
    out[m - 1] = 1.0 / p
    q = diag[stop - 1]
    for i in range(stop - 2, start - 1, -1):
        b = off[i]
        q = diag[i] - b * b / q
        if not 0.0 < q < math.inf:
            raise NotPositiveDefinite(f"trailing pivot {q!r} at row {i - start} is not positive")
        denom = fwd[i - start] + q - diag[i]
        if not 0.0 < denom < math.inf:
            raise NotPositiveDefinite(f"denominator {denom!r} at row {i - start} is not positive")
        out[i - start] = 1.0 / denom
    return out


def _trace_of_inverse_range(diag, off, start: int, stop: int, scratch: list[float]) -> float:
    """Trace-only variant of :func:`_inverse_diagonal_range`.

    `scratch` must be a list with length >= stop - start; it is overwritten.
    Kept separate so tight loops (digraph construction, greedy evaluation)
    avoid building a result list per block.
    """
    m = stop - start
    if m <= 0:
        return 0.0
    p = diag[start]
    if not 0.0 < p < math.inf:
        raise NotPositiveDefinite(f"leading pivot {p!r} is not positive")
    scratch[0] = p
    for i in range(start + 1, stop):
        b = off[i - 1]
        p = diag[i] - b * b / p
        if not 0.0 < p < math.inf:
            raise NotPositiveDefinite(f"pivot {p!r} at row {i - start} is not positive")
        scratch[i - start] = p
    total = 1.0 / p
    q = diag[stop - 1]
    for i in range(stop - 2, start - 1, -1):
        b = off[i]
        q = diag[i] - b * b / q
        if not 0.0 < q < math.inf:
            raise NotPositiveDefinite(f"trailing pivot {q!r} at row {i - start} is not positive")
        denom = scratch[i - start] + q - diag[i]
        if not 0.0 < denom < math.inf:
            raise NotPositiveDefinite(f"denominator {denom!r} at row {i - start} is not positive")
        total += 1.0 / denom
    return total


def inverse_diagonal(t: TridiagonalMatrix) -> list[float]:
    """Return ``[(T^{-1})_{ii}]`` for a positive definite tridiagonal ``T``.

    Runs in O(m) time and space. The empty matrix yields an empty list.

    Raises:
        NotPositiveDefinite: if any recurrence pivot is <= 0 or non-finite.
    """
    return _inverse_diagonal_range(t.diag, t.off, 0, t.m)


def trace_of_inverse(t: TridiagonalMatrix) -> float:
    """Return ``tr(T^{-1})``, the sum of :func:`inverse_diagonal`.

    The empty matrix has trace exactly 0.
    """
    if t.m == 0:
        return 0.0
    return _trace_of_inverse_range(t.diag, t.off, 0, t.m, [0.0] * t.m)


def dense_trace_of_inverse(matrix: np.ndarray) -> float:
    """Trace of the inverse of a symmetric positive definite matrix.

    Dense Cholesky factorization; intended as a validation oracle and for
    occasional non-tridiagonal inputs, not for production-scale loops.

    Raises:
        ValueError: if the input is not a square symmetric 2-D array.
        NotPositiveDefinite: if the factorization fails.
    """
    a = np.asarray(matrix, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if a.shape[0] == 0:
        return 0.0
    if not np.allclose(a, a.T, rtol=1e-12, atol=1e-12):
        raise ValueError("matrix is not symmetric")
    try:
        factor = scipy.linalg.cho_factor(a, check_finite=False)
    except scipy.linalg.LinAlgError as exc:
        raise NotPositiveDefinite(str(exc)) from exc
    inv = scipy.linalg.cho_solve(factor, np.eye(a.shape[0]), check_finite=False)
    return float(np.trace(inv))
