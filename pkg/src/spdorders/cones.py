"""Cone specifications and pointwise membership tests.

Five tangent-cone families are supported at each base point Sigma:

* quad-affine(mu):    (tr(S^-1 X))^2 - mu tr(S^-1 X S^-1 X) >= 0 and tr(S^-1 X) >= 0
* quad-translate(mu): the same inequalities with Sigma replaced by I
* loewner:            X positive semidefinite
* half-space:         tr(S^-1 X) >= 0 (a wedge, not a pointed cone)
* ray:                X = c * Sigma for some c >= 0

The quadratic parameter mu must lie strictly inside (0, n); the mu -> 0
and mu -> n limits are exposed as the distinct half-space and ray kinds.
Membership is closed (margin >= -tol); the zero tangent is inside every
cone with margin +1 by convention.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import SpdMatrix, SymTangent, as_tangent, random_sym
from .errors import DimensionMismatch, InvalidParameters

DEFAULT_TOL = 1e-10

QUAD_AFFINE = "quad-affine"
QUAD_TRANSLATE = "quad-translate"
LOEWNER = "loewner"
HALF_SPACE = "half-space"
RAY = "ray"

_KINDS = (QUAD_AFFINE, QUAD_TRANSLATE, LOEWNER, HALF_SPACE, RAY)


@dataclass(frozen=True)
class ConeSpec:
    """Tagged choice of cone field; the order-defining object."""

    kind: str
    n: int
    mu: float | None = None

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise InvalidParameters(f"unknown cone kind {self.kind!r}")
        if self.n < 1:
            raise InvalidParameters("dimension must be >= 1")
        if self.kind in (QUAD_AFFINE, QUAD_TRANSLATE):
            if self.mu is None:
                raise InvalidParameters(f"{self.kind} requires mu")
            if not (0.0 < self.mu < self.n):
                raise InvalidParameters(f"mu={self.mu} outside open interval (0, {self.n})")
        elif self.mu is not None:
            raise InvalidParameters(f"{self.kind} takes no mu parameter")

    def to_dict(self) -> dict:
        d = {"kind": self.kind, "n": self.n}
        if self.mu is not None:
            d["mu"] = self.mu
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ConeSpec":
        return cls(kind=d.get("kind"), n=int(d.get("n", 0)), mu=d.get("mu"))


def quadratic_affine(mu: float, n: int) -> ConeSpec:
    return ConeSpec(QUAD_AFFINE, n, float(mu))


def quadratic_translation(mu: float, n: int) -> ConeSpec:
    return ConeSpec(QUAD_TRANSLATE, n, float(mu))


def loewner(n: int) -> ConeSpec:
    return ConeSpec(LOEWNER, n)


def half_space_affine(n: int) -> ConeSpec:
    return ConeSpec(HALF_SPACE, n)


def ray_affine(n: int) -> ConeSpec:
    return ConeSpec(RAY, n)


@dataclass(frozen=True)
class MembershipReport:
    """Signed, scale-invariant membership verdict: inside iff margin >= -tol."""

    inside: bool
    margin: float
    binding_constraint: str  # trace_sign | quadratic_form | eigenvalue_min | ray_deviation


class SpectralCone:
    """Permutation-invariant cone of eigenvalue vectors in R^n.

    Defined by lam^T Q_mu lam >= 0 and 1^T lam >= 0 where Q_mu has
    diagonal entries 1 - mu and off-diagonal entries 1.
    """

    def __init__(self, mu: float, n: int):
        if not (0.0 < mu < n):
            raise InvalidParameters(f"mu={mu} outside open interval (0, {n})")
        self.mu = float(mu)
        self.n = int(n)

    @property
    def form_matrix(self) -> np.ndarray:
        q = np.ones((self.n, self.n))
        np.fill_diagonal(q, 1.0 - self.mu)
        return q

    def __repr__(self):
        return f"SpectralCone(mu={self.mu}, n={self.n})"


def _zero_report() -> MembershipReport:
    # cones contain 0; report the tie-breaking quadratic constraint
    return MembershipReport(inside=True, margin=1.0, binding_constraint="quadratic_form")


def _quad_report(t: float, quad: float, magnitude: float, tol: float) -> MembershipReport:
    t_margin = t / magnitude
    q_margin = quad / magnitude**2
    if q_margin <= t_margin:
        margin, binding = q_margin, "quadratic_form"
    else:
        margin, binding = t_margin, "trace_sign"
    return MembershipReport(inside=margin >= -tol, margin=margin, binding_constraint=binding)


def _invariant_magnitude(w: np.ndarray) -> float:
    # sqrt(tr(W^2)) for W = S^-1 X: this equals the Frobenius norm of the
    # symmetrized conjugate S^-1/2 X S^-1/2 and is congruence invariant,
    # which keeps margins stable under the group action.
    return math.sqrt(max(float(np.sum(w * w.T)), 0.0))


def cone_membership(spec: ConeSpec, sigma: SpdMatrix, x, tol: float = DEFAULT_TOL) -> MembershipReport:
    """Pointwise membership of tangent x in the cone at sigma.

    Margins are normalized to be invariant under rescaling of x (and,
    for the affine families, under congruence transformations), so the
    single default tolerance works across magnitudes.
    """
    x = as_tangent(x)
    if x.n != sigma.n or spec.n != sigma.n:
        raise DimensionMismatch(f"cone n={spec.n}, point n={sigma.n}, tangent n={x.n}")
    xmat = x.entries
    xnorm = float(np.linalg.norm(xmat))
    if xnorm == 0.0:
        return _zero_report()

    if spec.kind == QUAD_AFFINE:
        w = sigma.inv_apply(xmat)
        t = float(np.trace(w))
        tr2 = float(np.sum(w * w.T))
        magnitude = _invariant_magnitude(w)
        if magnitude == 0.0:
            return _zero_report()
        return _quad_report(t, t * t - spec.mu * tr2, magnitude, tol)

    if spec.kind == QUAD_TRANSLATE:
        t = float(np.trace(xmat))
        tr2 = xnorm**2
        return _quad_report(t, t * t - spec.mu * tr2, xnorm, tol)

    if spec.kind == LOEWNER:
        wmin = float(np.linalg.eigvalsh(xmat)[0])
        margin = wmin / xnorm
        return MembershipReport(inside=margin >= -tol, margin=margin, binding_constraint="eigenvalue_min")

    if spec.kind == HALF_SPACE:
        w = sigma.inv_apply(xmat)
        t = float(np.trace(w))
        magnitude = _invariant_magnitude(w)
        if magnitude == 0.0:
            return _zero_report()
        margin = t / magnitude
        return MembershipReport(inside=margin >= -tol, margin=margin, binding_constraint="trace_sign")

    # ray: X must be a nonnegative multiple of sigma
    w = sigma.inv_apply(xmat)
    t = float(np.trace(w))
    magnitude = _invariant_magnitude(w)
    if magnitude == 0.0:
        return _zero_report()
    deviation = float(np.linalg.norm(xmat - (t / spec.n) * sigma.entries)) / xnorm
    t_margin = t / magnitude
    if -deviation <= t_margin:
        margin, binding = -deviation, "ray_deviation"
    else:
        margin, binding = t_margin, "trace_sign"
    return MembershipReport(inside=margin >= -tol, margin=margin, binding_constraint=binding)


def spectral_membership(cone: SpectralCone, lam, tol: float = DEFAULT_TOL) -> MembershipReport:
    """Membership of an eigenvalue vector in the spectral cone.

    Permuting the entries of lam never changes the verdict.
    """
    v = np.asarray(lam, dtype=float)
    if v.shape != (cone.n,):
        raise DimensionMismatch(f"expected a vector of length {cone.n}, got shape {v.shape}")
    norm = float(np.linalg.norm(v))
    if norm == 0.0:
        return _zero_report()
    s = float(np.sum(v))
    quad = s * s - cone.mu * float(np.sum(v * v))
    return _quad_report(s, quad, norm, tol)


def dual_spectral_cone(cone: SpectralCone) -> SpectralCone:
    """Dual of the spectral cone under the standard inner product: mu -> n - mu."""
    return SpectralCone(cone.n - cone.mu, cone.n)


def classify_quadratic_form(alpha: float, beta: float, n: int) -> str:
    """Classify alpha*(tr X)^2/n + beta*||X - (tr X/n) I||^2 on symmetric matrices.

    Returns one of positive_definite, lorentzian, degenerate, other.
    """
    if n < 2:
        raise InvalidParameters("classification needs n >= 2")
    if alpha == 0.0 or beta == 0.0:
        return "degenerate"
    if alpha > 0.0 and beta > 0.0:
        return "positive_definite"
    if alpha > 0.0 and beta < 0.0:
        return "lorentzian"
    return "other"


def traceless_projection(x) -> SymTangent:
    """Orthogonal projection onto trace-zero symmetric matrices: X - (tr X / n) I."""
    x = as_tangent(x)
    out = x.entries - (np.trace(x.entries) / x.n) * np.eye(x.n)
    return SymTangent(out, base=x.base)


# ---------------------------------------------------------------------------
# Cone sampling.  Violation hunting concentrates on boundaries, so boundary
# rays are sampled by solving the scalar quadratic that mixes a Gaussian
# direction with the cone axis until the quadratic margin vanishes.
# ---------------------------------------------------------------------------


def sample_spectral_boundary(mu: float, n: int, rng: np.random.Generator) -> np.ndarray:
    """Unit-norm vector on the boundary of the spectral cone (quadratic margin zero)."""
    while True:
        v = rng.standard_normal(n)
        tau = float(np.sum(v))
        s = float(np.sum(v * v))
        disc = mu * (n - mu) * (n * s - tau * tau)
        if disc <= 0:
            continue
        c = (-tau * (n - mu) + math.sqrt(disc)) / (n * (n - mu))
        lam = v + c
        norm = np.linalg.norm(lam)
        if norm > 1e-8:
            return lam / norm


def _boundary_at_identity(mu: float, n: int, rng: np.random.Generator) -> np.ndarray:
    """Symmetric matrix on the boundary of the quadratic cone at the identity."""
    while True:
        g = random_sym(n, rng)
        tau = float(np.trace(g))
        s = float(np.sum(g * g))
        disc = mu * (n - mu) * (n * s - tau * tau)
        if disc <= 0:
            continue
        c = (-tau * (n - mu) + math.sqrt(disc)) / (n * (n - mu))
        y = g + c * np.eye(n)
        norm = np.linalg.norm(y)
        if norm > 1e-8:
            return y / norm


def sample_cone_tangent(
    spec: ConeSpec,
    sigma: SpdMatrix,
    rng: np.random.Generator,
    boundary: bool = True,
) -> SymTangent:
    """Random unit-Frobenius tangent inside K(sigma): a boundary ray when
    `boundary` is set, otherwise a strictly interior ray."""
    n = spec.n
    if spec.n != sigma.n:
        raise DimensionMismatch(f"cone n={spec.n}, point n={sigma.n}")
    if n == 1:
        # every 1x1 cone here degenerates to the nonnegative ray
        return SymTangent(np.ones((1, 1)), base=sigma)

    if spec.kind in (QUAD_AFFINE, QUAD_TRANSLATE):
        y = _boundary_at_identity(spec.mu, n, rng)
        if not boundary:
            y = y + rng.uniform(0.2, 1.0) * np.eye(n)
        if spec.kind == QUAD_AFFINE:
            root = sigma.spectrum.apply(np.sqrt)
            y = root @ y @ root
    elif spec.kind == LOEWNER:
        w, v = np.linalg.eigh(random_sym(n, rng))
        w = w - w[0]
        if not boundary:
            w = w + rng.uniform(0.1, 1.0) * (1.0 + w[-1])
        y = v @ np.diag(w) @ v.T
    elif spec.kind == HALF_SPACE:
        g = random_sym(n, rng)
        y = g - (np.trace(g) / n) * np.eye(n)
        if not boundary:
            y = y + rng.uniform(0.2, 1.0) * np.linalg.norm(y) * np.eye(n)
        root = sigma.spectrum.apply(np.sqrt)
        y = root @ y @ root
    else:  # ray: the cone is the single ray spanned by sigma
        y = rng.uniform(0.2, 2.0) * sigma.entries

    y = 0.5 * (y + y.T)
    norm = np.linalg.norm(y)
    if norm < 1e-12:  # degenerate draw (e.g. constant spectrum); fall back to the axis
        y = sigma.entries
        norm = np.linalg.norm(y)
    return SymTangent(y / norm, base=sigma)
