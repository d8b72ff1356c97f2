"""Affine-invariant metric family, geodesics, exp/log maps, the geometric
mean, and the constant-determinant foliation.

The metric parameter mu_metric (valid above -1/n) is deliberately a
different symbol from the cone parameter mu used in `cones`; the two
ranges do not overlap in meaning and must not be conflated.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    SpdMatrix,
    SymTangent,
    as_tangent,
    require_well_conditioned,
    sym_eig,
)
from .errors import DimensionMismatch, IllConditioned, InvalidParameters


@dataclass(frozen=True)
class MetricSpec:
    """Parameter of the invariant inner product family
    tr(S^-1 X S^-1 Y) + mu_metric * tr(S^-1 X) tr(S^-1 Y)."""

    mu_metric: float = 0.0


def inner_product(metric: MetricSpec, sigma: SpdMatrix, x, y) -> float:
    """Invariant inner product of two tangents at sigma."""
    x = as_tangent(x)
    y = as_tangent(y)
    if x.n != sigma.n or y.n != sigma.n:
        raise DimensionMismatch("tangent and base dimensions differ")
    if metric.mu_metric <= -1.0 / sigma.n:
        raise InvalidParameters(f"mu_metric={metric.mu_metric} must exceed -1/n = {-1.0 / sigma.n}")
    wx = sigma.inv_apply(x.entries)
    wy = sigma.inv_apply(y.entries)
    return float(np.sum(wx * wy.T) + metric.mu_metric * np.trace(wx) * np.trace(wy))


def _sqrt_factors(sigma: SpdMatrix) -> tuple[np.ndarray, np.ndarray]:
    spec = sigma.spectrum
    root = np.sqrt(spec.eigenvalues)
    v = spec.eigenvectors
    return v @ np.diag(root) @ v.T, v @ np.diag(1.0 / root) @ v.T


def relative_eigenframe(sigma1: SpdMatrix, sigma2: SpdMatrix):
    """Square root factor of sigma1 and the eigendecomposition of the
    relative matrix sigma1^{-1/2} sigma2 sigma1^{-1/2}.

    Returns (root, u, w) with root = sigma1^{1/2}, columns of u the
    eigenvectors and w the ascending eigenvalues of the relative matrix.
    Raises IllConditioned when the relative spectrum spans more than 1e12.
    """
    if sigma1.n != sigma2.n:
        raise DimensionMismatch(f"points have dimensions {sigma1.n} and {sigma2.n}")
    root, inv_root = _sqrt_factors(sigma1)
    rel = inv_root @ sigma2.entries @ inv_root
    rel = 0.5 * (rel + rel.T)
    w, u = np.linalg.eigh(rel)
    require_well_conditioned(w, "relative matrix of the pair")
    return root, u, w


def relative_eigenvalues(sigma1: SpdMatrix, sigma2: SpdMatrix) -> np.ndarray:
    """Ascending eigenvalues of sigma2 sigma1^{-1}, computed through the
    symmetric similar matrix sigma1^{-1/2} sigma2 sigma1^{-1/2} so the
    output is guaranteed real and positive."""
    _, _, w = relative_eigenframe(sigma1, sigma2)
    return w


def geodesic(sigma1: SpdMatrix, sigma2: SpdMatrix, t: float) -> SpdMatrix:
    """Point at parameter t on the invariant geodesic from sigma1 to sigma2:
    sigma1^{1/2} (sigma1^{-1/2} sigma2 sigma1^{-1/2})^t sigma1^{1/2}.

    Defined for every real t; t=0 and t=1 reproduce the endpoints.
    """
    root, u, w = relative_eigenframe(sigma1, sigma2)
    b = root @ u
    return SpdMatrix(b @ np.diag(w**t) @ b.T)


def geodesic_velocity(sigma1: SpdMatrix, sigma2: SpdMatrix, t: float) -> SymTangent:
    """Analytic velocity of the geodesic at parameter t."""
    root, u, w = relative_eigenframe(sigma1, sigma2)
    b = root @ u
    logw = np.log(w)
    return SymTangent(b @ np.diag(logw * w**t) @ b.T)


def riemannian_exp(sigma: SpdMatrix, x) -> SpdMatrix:
    """Geodesic exponential: sigma^{1/2} exp(sigma^{-1/2} X sigma^{-1/2}) sigma^{1/2}."""
    x = as_tangent(x)
    if x.n != sigma.n:
        raise DimensionMismatch("tangent dimension differs from base point")
    root, inv_root = _sqrt_factors(sigma)
    s = inv_root @ x.entries @ inv_root
    spec = sym_eig(0.5 * (s + s.T))
    w = spec.eigenvalues
    if w[-1] - w[0] > np.log(1e12):
        raise IllConditioned("exponential image would exceed the condition cap")
    return SpdMatrix(root @ spec.apply(np.exp) @ root)


def riemannian_log(sigma1: SpdMatrix, sigma2: SpdMatrix) -> SymTangent:
    """Inverse of riemannian_exp: the initial velocity of the geodesic
    from sigma1 to sigma2."""
    root, u, w = relative_eigenframe(sigma1, sigma2)
    b = root @ u
    return SymTangent(b @ np.diag(np.log(w)) @ b.T, base=sigma1)


def geometric_mean(sigma1: SpdMatrix, sigma2: SpdMatrix) -> SpdMatrix:
    """Geometric mean sigma1^{1/2} (sigma1^{-1/2} sigma2 sigma1^{-1/2})^{1/2} sigma1^{1/2},
    the midpoint of the invariant geodesic."""
    root, u, w = relative_eigenframe(sigma1, sigma2)
    b = root @ u
    return SpdMatrix(b @ np.diag(np.sqrt(w)) @ b.T)


def det_leaf(sigma: SpdMatrix) -> float:
    """Leaf label of the constant-determinant foliation, returned as
    log det (Cholesky based) to keep the full dynamic range."""
    return sigma.log_det


def distance(sigma1: SpdMatrix, sigma2: SpdMatrix) -> float:
    """Geodesic distance under the standard invariant metric (mu_metric = 0):
    the Frobenius norm of log(sigma1^{-1/2} sigma2 sigma1^{-1/2})."""
    w = relative_eigenvalues(sigma1, sigma2)
    return float(np.linalg.norm(np.log(w)))
