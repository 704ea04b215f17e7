"""Composition-operator matrices, adjoint integral representations, and
invariant-subspace diagnostics.

The affine self-maps phi_t(z) = e^{-t} z + 1 - e^{-t} of the disc induce
upper-triangular composition matrices in the monomial basis, and averaging
them against e^{-t} dt reproduces the adjoint of the Cesaro matrix column
by column (a Beta integral after substituting u = e^{-t}).  Monomial-tail
subspaces are invariant for every terraced truncation but not for Hankel
ones; both facts are checked as entrywise defects.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .operators import TerracedOperator, WeightSequence
from .quadrature import fixed_gauss_legendre_01

#: math.comb up to here; log-gamma evaluation above
EXACT_BINOMIAL_LIMIT = 1000
#: singular values at least this fraction of the largest count toward rank
RANK_REL_THRESHOLD = 1e-10


@dataclass(frozen=True, eq=False)
class PowerSeriesVector:
    """Truncated power-series element; the norm is the coefficient l2 norm."""

    coefficients: np.ndarray

    @property
    def dim(self) -> int:
        return self.coefficients.size

    def norm(self) -> float:
        return float(np.linalg.norm(self.coefficients))

    def eval_at(self, t: float) -> complex:
        acc = 0.0 + 0.0j
        for c in self.coefficients[::-1]:
            acc = acc * t + c
        return acc


def binomial(n: int, m: int) -> float:
    """C(n, m) as a float; exact integer arithmetic below the overflow range."""
    if m < 0 or m > n:
        return 0.0
    if n <= EXACT_BINOMIAL_LIMIT:
        return float(math.comb(n, m))
    return math.exp(math.lgamma(n + 1) - math.lgamma(m + 1) - math.lgamma(n - m + 1))


def composition_matrix_phi(t: float, dim: int) -> np.ndarray:
    """Coefficient matrix of f -> f(phi_t(z)) for phi_t(z) = e^{-t} z + 1 - e^{-t}.

    Column n holds the monomial coefficients of phi_t(z)^n:
    entry (m, n) = C(n, m) e^{-t m} (1 - e^{-t})^{n - m} for m <= n.
    Upper triangular, so truncations compose exactly: M(s) M(t) = M(s + t).
    """
    if t < 0.0:
        raise ValueError("t must be nonnegative")
    p = math.exp(-t)
    q = 1.0 - p
    matrix = np.zeros((dim, dim))
    for n in range(dim):
        for m in range(n + 1):
            matrix[m, n] = binomial(n, m) * p**m * q ** (n - m)
    return matrix


def cesaro_adjoint_integral_check(dim: int, quad_order: int | None = None) -> float:
    """Max deviation between the integral of e^{-t} C_{phi_t} over t >= 0 and
    the adjoint Cesaro matrix (entries 1/(n+1) for m <= n).

    Substituting u = e^{-t} turns entry (m, n) into the polynomial integral
    of C(n, m) u^m (1 - u)^{n-m} on [0, 1], evaluated by a Gauss-Legendre
    rule of polynomial-exact order.
    """
    if dim < 1:
        raise ValueError("dim must be at least 1")
    order = quad_order if quad_order is not None else dim + 8
    u, w = fixed_gauss_legendre_01(order)
    deviation = 0.0
    for n in range(dim):
        target = 1.0 / (n + 1.0)
        for m in range(n + 1):
            integral = float(np.sum(w * binomial(n, m) * u**m * (1.0 - u) ** (n - m)))
            deviation = max(deviation, abs(integral - target))
    return deviation


def rhaly_adjoint_integral_check(weights: WeightSequence, dim: int,
                                 quad_order: int | None = None) -> float:
    """Max deviation between the integral of e^{-t} C_{phi_t} D applied first
    (D = diag((n+1) conj(a_n))) and the conjugate transpose of the terraced
    matrix."""
    if dim < 1:
        raise ValueError("dim must be at least 1")
    a = weights.values[:dim]
    if a.size < dim:
        raise ValueError("weight sequence shorter than dim")
    order = quad_order if quad_order is not None else dim + 8
    u, w = fixed_gauss_legendre_01(order)
    diag = (np.arange(dim) + 1.0) * np.conj(a)
    adjoint = np.conj(TerracedOperator(weights, dim).dense()).T
    deviation = 0.0
    for n in range(dim):
        for m in range(n + 1):
            integral = float(np.sum(w * binomial(n, m) * u**m * (1.0 - u) ** (n - m)))
            deviation = max(deviation, abs(integral * diag[n] - adjoint[m, n]))
    return deviation


def monomial_invariance_check(matrix: np.ndarray, k: int) -> float:
    """Defect of the monomial-tail subspace spanned by z^k, z^{k+1}, ...:
    the largest entry the operator maps from columns >= k into rows < k.
    Zero means the subspace is invariant at this truncation."""
    m = np.asarray(matrix)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("expected a square matrix")
    if not 0 <= k < m.shape[0]:
        raise ValueError(f"index {k} out of range for dim {m.shape[0]}")
    if k == 0:
        return 0.0
    block = m[:k, k:]
    return float(np.max(np.abs(block))) if block.size else 0.0


def kernel_span_rank(locations, dim: int) -> int:
    """Numeric rank of the Gram matrix of truncated reproducing kernels
    1/(1 - t z) at the given locations.

    The (i, j) entry is the geometric partial sum of (t_i t_j)^n over
    n < dim; singular values at least RANK_REL_THRESHOLD times the largest
    count toward the rank.
    """
    t = np.asarray(locations, dtype=float)
    if t.ndim != 1 or t.size == 0:
        raise ValueError("need at least one location")
    if np.any(t < 0.0) or np.any(t >= 1.0):
        raise ValueError("locations must lie in [0, 1)")
    if t.size > dim:
        raise ValueError("more locations than truncated dimensions")
    diffs = np.abs(t[:, None] - t[None, :])
    np.fill_diagonal(diffs, np.inf)
    if diffs.min() == 0.0:
        raise ValueError("duplicate locations")
    products = np.outer(t, t)  # strictly below 1 since every t is
    gram = (1.0 - products**dim) / (1.0 - products)
    singular = np.linalg.svd(gram, compute_uv=False)
    return int(np.sum(singular >= RANK_REL_THRESHOLD * singular[0]))


def hilbert_column_check(n: int, dim: int, quad_order: int | None = None) -> float:
    """Max deviation over m < dim between the integral over t of the
    weighted-composition column expansion C(n+m, m) t^n (1-t)^m and the
    Hankel entries 1/(n+m+1)."""
    if not 0 <= n < dim:
        raise ValueError(f"column {n} out of range for dim {dim}")
    order = quad_order if quad_order is not None else (n + dim) // 2 + 8
    t, w = fixed_gauss_legendre_01(order)
    deviation = 0.0
    for m in range(dim):
        integral = float(np.sum(w * binomial(n + m, m) * t**n * (1.0 - t) ** m))
        deviation = max(deviation, abs(integral - 1.0 / (n + m + 1.0)))
    return deviation
