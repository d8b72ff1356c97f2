"""Global order predicates induced by cone fields.

The primary test for the affine-invariant families is the spectral
criterion on the log-eigenvalues of sigma2 sigma1^{-1}: it is exact,
square-root free, and O(n^3).  The discretized conal-path oracle exists
for cross-validation only.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cones import (
    DEFAULT_TOL,
    HALF_SPACE,
    LOEWNER,
    QUAD_AFFINE,
    QUAD_TRANSLATE,
    RAY,
    ConeSpec,
    cone_membership,
    sample_cone_tangent,
)
from .core import SpdMatrix, SymTangent, derive_rng, random_spd
from .errors import DimensionMismatch, InvalidParameters, NotOrdered
from .geometry import relative_eigenframe, relative_eigenvalues, riemannian_exp

LESS_EQUAL = "less_equal"
GREATER_EQUAL = "greater_equal"
EQUAL = "equal"
INCOMPARABLE = "incomparable"

EQUALITY_RTOL = 1e-10  # relative Frobenius threshold for the equal short-circuit

# Specs whose cone field is constant across the manifold; their conal
# paths are straight lines rather than invariant geodesics.
_TRANSLATION_KINDS = (QUAD_TRANSLATE, LOEWNER)


@dataclass(frozen=True)
class OrderVerdict:
    """Four-way comparison with signed, scale-invariant margins.

    equal implies both margins >= -tol; incomparable implies both < -tol.
    When both directions hold for the half-space preorder (equal
    determinants, distinct matrices) the forward direction wins.
    """

    relation: str
    forward_margin: float
    reverse_margin: float


def _spectral_margins(d: np.ndarray, mu: float | None, kind: str) -> tuple[float, float]:
    """Forward/reverse margins of a spectral vector (log-eigenvalues for
    the affine families, plain difference eigenvalues for translation)."""
    nrm = float(np.linalg.norm(d))
    if nrm == 0.0:
        return 1.0, 1.0
    s = float(np.sum(d))
    if kind == RAY:
        deviation = float(np.linalg.norm(d - s / d.shape[0])) / nrm
        return min(-deviation, s / nrm), min(-deviation, -s / nrm)
    quad = (s * s - mu * float(np.sum(d * d))) / nrm**2
    return min(s / nrm, quad), min(-s / nrm, quad)


def order_compare(spec: ConeSpec, sigma1: SpdMatrix, sigma2: SpdMatrix, tol: float = DEFAULT_TOL) -> OrderVerdict:
    """Decide how sigma1 and sigma2 relate under the order induced by spec.

    Incomparability is a first-class verdict, not an error: these are
    genuine partial orders.
    """
    if sigma1.n != sigma2.n or spec.n != sigma1.n:
        raise DimensionMismatch(f"spec n={spec.n}, points n={sigma1.n}, {sigma2.n}")

    gap = float(np.linalg.norm(sigma2.entries - sigma1.entries))
    scale = max(float(np.linalg.norm(sigma1.entries)), float(np.linalg.norm(sigma2.entries)))
    if gap <= EQUALITY_RTOL * scale:
        return OrderVerdict(EQUAL, 1.0, 1.0)

    if spec.kind in (QUAD_AFFINE, RAY):
        d = np.log(relative_eigenvalues(sigma1, sigma2))
        fwd, rev = _spectral_margins(d, spec.mu, spec.kind)
    elif spec.kind == HALF_SPACE:
        ld = sigma2.log_det - sigma1.log_det
        fwd, rev = ld, -ld
    elif spec.kind == QUAD_TRANSLATE:
        w = np.linalg.eigvalsh(sigma2.entries - sigma1.entries)
        fwd, rev = _spectral_margins(w, spec.mu, spec.kind)
    else:  # loewner
        w = np.linalg.eigvalsh(sigma2.entries - sigma1.entries)
        nrm = float(np.linalg.norm(w))
        fwd, rev = float(w[0]) / nrm, -float(w[-1]) / nrm

    if fwd >= -tol:
        return OrderVerdict(LESS_EQUAL, fwd, rev)
    if rev >= -tol:
        return OrderVerdict(GREATER_EQUAL, fwd, rev)
    return OrderVerdict(INCOMPARABLE, fwd, rev)


def _straight_line_point(sigma1: SpdMatrix, sigma2: SpdMatrix, t: float) -> SpdMatrix:
    return SpdMatrix((1.0 - t) * sigma1.entries + t * sigma2.entries)


def conal_path_oracle(
    spec: ConeSpec,
    sigma1: SpdMatrix,
    sigma2: SpdMatrix,
    samples: int,
    tol: float = DEFAULT_TOL,
) -> bool:
    """Cross-validation oracle: discretize the conal path from sigma1 to
    sigma2 and test the velocity against the cone at every sample.

    Affine-invariant specs use the invariant geodesic; translation
    specs use the straight line (their cone field is constant, so the
    segment is conal exactly when the order holds).  True iff every
    membership margin is >= -10*tol.
    """
    if samples < 2:
        raise InvalidParameters("need at least two path samples")

    ts = np.linspace(0.0, 1.0, samples)
    if spec.kind in _TRANSLATION_KINDS:
        velocity = SymTangent(sigma2.entries - sigma1.entries)
        for t in ts:
            point = _straight_line_point(sigma1, sigma2, t)
            if cone_membership(spec, point, velocity, tol=tol).margin < -10.0 * tol:
                return False
        return True

    root, u, w = relative_eigenframe(sigma1, sigma2)
    b = root @ u
    logw = np.log(w)
    if np.linalg.norm(logw) <= 1e-10:
        return True  # numerically constant path: zero velocity everywhere
    for t in ts:
        powers = w**t
        point = SpdMatrix(b @ np.diag(powers) @ b.T)
        velocity = SymTangent(b @ np.diag(logw * powers) @ b.T)
        if cone_membership(spec, point, velocity, tol=tol).margin < -10.0 * tol:
            return False
    return True


def _conal_step(spec: ConeSpec, sigma: SpdMatrix, direction: SymTangent, size: float) -> SpdMatrix:
    """Move from sigma along a cone direction, staying on a conal path."""
    if spec.kind in _TRANSLATION_KINDS:
        # unit-norm direction: a step below lambda_min keeps the sum SPD
        lam_min = sigma.spectrum.eigenvalues[0]
        return SpdMatrix(sigma.entries + size * 0.5 * lam_min * direction.entries)
    return riemannian_exp(sigma, SymTangent(size * direction.entries))


def random_ordered_pair(
    spec: ConeSpec,
    n: int,
    seed: int,
    scale: float = 0.6,
    step: float | None = None,
) -> tuple[SpdMatrix, SpdMatrix]:
    """Deterministic ordered pair sigma1 <= sigma2 for the given spec,
    built by stepping from a random point along an interior cone ray."""
    rng = derive_rng(seed)
    sigma1 = random_spd(n, rng, scale=scale)
    direction = sample_cone_tangent(spec, sigma1, rng, boundary=False)
    size = step if step is not None else float(rng.uniform(0.3, 1.2))
    return sigma1, _conal_step(spec, sigma1, direction, size)


def order_interval_sample(
    spec: ConeSpec,
    sigma1: SpdMatrix,
    sigma2: SpdMatrix,
    seed: int,
    count: int,
    tol: float = DEFAULT_TOL,
) -> list[SpdMatrix]:
    """Sample points of the order interval [sigma1, sigma2].

    The first sample is the path midpoint; the rest are random path
    points nudged along local cone directions.  Every returned point is
    re-verified against both endpoints with order_compare before being
    accepted, falling back to the unperturbed path point.
    """
    pre = order_compare(spec, sigma1, sigma2, tol=tol)
    if pre.relation not in (LESS_EQUAL, EQUAL):
        raise NotOrdered(f"endpoints compare as {pre.relation}")

    def path_point(t: float) -> SpdMatrix:
        if spec.kind in _TRANSLATION_KINDS:
            return _straight_line_point(sigma1, sigma2, t)
        root, u, w = relative_eigenframe(sigma1, sigma2)
        b = root @ u
        return SpdMatrix(b @ np.diag(w**t) @ b.T)

    def valid(candidate: SpdMatrix) -> bool:
        lo = order_compare(spec, sigma1, candidate, tol=tol)
        hi = order_compare(spec, candidate, sigma2, tol=tol)
        return lo.relation in (LESS_EQUAL, EQUAL) and hi.relation in (LESS_EQUAL, EQUAL)

    out: list[SpdMatrix] = []
    for i in range(count):
        rng = derive_rng(seed, i)
        t = 0.5 if i == 0 else float(rng.uniform(0.05, 0.95))
        base = path_point(t)
        chosen = None
        if i > 0:
            direction = sample_cone_tangent(spec, base, rng, boundary=False)
            size = 0.15
            for _ in range(6):
                try:
                    candidate = _conal_step(spec, base, direction, size)
                except Exception:
                    break
                if valid(candidate):
                    chosen = candidate
                    break
                size *= 0.5
        if chosen is None:
            chosen = base if valid(base) else sigma1
        out.append(chosen)
    return out
