"""Validated SPD and symmetric matrix types plus spectral matrix functions.

Everything here is eigendecomposition based: dimensions are desk scale
(n <= 64 by contract) and every cone test downstream wants the spectral
form anyway.  All values are immutable after construction and safe to
share between threads.
"""

from __future__ import annotations

from functools import cached_property

import numpy as np

from .errors import (
    ConvergenceFailure,
    DimensionMismatch,
    IllConditioned,
    InvalidParameters,
    NotPositiveDefinite,
    NotSymmetric,
    SingularTransform,
)

SYM_RTOL = 1e-12          # symmetry acceptance, relative to 1 + max|entry|
PD_RTOL = 1e-12           # lambda_min > n * PD_RTOL * lambda_max
ORTHO_TOL = 1e-10         # ||V^T V - I||_F on eigenvector matrices
RECON_RTOL = 1e-10        # ||V L V^T - A||_F <= RECON_RTOL * ||A||_F
COND_CAP = 1e12           # condition numbers beyond this raise IllConditioned
MAX_DIM = 64


def _as_square(raw) -> np.ndarray:
    a = np.asarray(raw, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {a.shape}")
    if a.shape[0] < 1:
        raise DimensionMismatch("dimension must be >= 1")
    if a.shape[0] > MAX_DIM:
        raise InvalidParameters(f"dimension {a.shape[0]} above desk-scale cap {MAX_DIM}")
    if not np.all(np.isfinite(a)):
        raise InvalidParameters("matrix entries must be finite")
    return a


def _check_symmetry(a: np.ndarray) -> np.ndarray:
    scale = 1.0 + np.max(np.abs(a)) if a.size else 1.0
    gap = np.max(np.abs(a - a.T)) if a.size else 0.0
    if gap > SYM_RTOL * scale:
        raise NotSymmetric(f"asymmetry {gap:.3e} exceeds tolerance {SYM_RTOL * scale:.3e}")
    sym = 0.5 * (a + a.T)
    sym.flags.writeable = False
    return sym


class Spectrum:
    """Eigendecomposition of a symmetric matrix: ascending eigenvalues and
    an orthogonal eigenvector matrix (columns)."""

    __slots__ = ("eigenvalues", "eigenvectors")

    def __init__(self, eigenvalues: np.ndarray, eigenvectors: np.ndarray):
        w = np.asarray(eigenvalues, dtype=float)
        v = np.asarray(eigenvectors, dtype=float)
        n = w.shape[0]
        ortho = np.linalg.norm(v.T @ v - np.eye(n))
        if ortho > ORTHO_TOL:
            raise ConvergenceFailure(f"eigenvector matrix not orthogonal: {ortho:.3e}")
        w.flags.writeable = False
        v.flags.writeable = False
        self.eigenvalues = w
        self.eigenvectors = v

    @property
    def n(self) -> int:
        return self.eigenvalues.shape[0]

    def apply(self, f) -> np.ndarray:
        """Return V f(w) V^T with f applied entrywise to the eigenvalues."""
        v = self.eigenvectors
        return v @ np.diag(f(self.eigenvalues)) @ v.T


def sym_eig(a) -> Spectrum:
    """Eigendecomposition of a symmetric matrix with validated invariants.

    Accepts a raw array, an SpdMatrix, or a SymTangent.  Eigenvalues come
    back ascending; the reconstruction error is checked against the input.
    """
    mat = a.entries if isinstance(a, (SpdMatrix, SymTangent)) else _check_symmetry(_as_square(a))
    try:
        w, v = np.linalg.eigh(mat)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(str(exc)) from exc
    spec = Spectrum(w, v)
    recon = np.linalg.norm(spec.apply(lambda x: x) - mat)
    norm = np.linalg.norm(mat)
    if recon > RECON_RTOL * max(norm, 1e-300):
        raise ConvergenceFailure(f"reconstruction error {recon:.3e} too large")
    return spec


class SpdMatrix:
    """A validated symmetric positive definite matrix, the manifold point.

    Construction symmetrizes the input exactly and rejects matrices that
    are asymmetric beyond tolerance or whose smallest eigenvalue is not
    safely positive (lambda_min > n * 1e-12 * lambda_max).
    """

    def __init__(self, raw):
        a = _as_square(raw)
        sym = _check_symmetry(a)
        try:
            w, v = np.linalg.eigh(sym)
        except np.linalg.LinAlgError as exc:
            raise ConvergenceFailure(str(exc)) from exc
        n = sym.shape[0]
        if w[0] <= n * PD_RTOL * max(w[-1], 0.0):
            raise NotPositiveDefinite(
                f"eigenvalue range [{w[0]:.6e}, {w[-1]:.6e}] fails positivity test"
            )
        self.entries = sym
        self._eig = (w, v)

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    @cached_property
    def spectrum(self) -> Spectrum:
        return Spectrum(*self._eig)

    @cached_property
    def log_det(self) -> float:
        # Cholesky keeps the computation stable across the full dynamic range.
        chol = np.linalg.cholesky(self.entries)
        return 2.0 * float(np.sum(np.log(np.diag(chol))))

    @property
    def cond(self) -> float:
        w = self._eig[0]
        return float(w[-1] / w[0])

    def inv_apply(self, x: np.ndarray) -> np.ndarray:
        """Solve self @ y = x."""
        return np.linalg.solve(self.entries, x)

    def __array__(self, dtype=None, copy=None):
        return np.array(self.entries, dtype=dtype)

    def __repr__(self):
        return f"SpdMatrix(n={self.n})"


class SymTangent:
    """A symmetric matrix used as a tangent vector, optionally anchored at
    an SpdMatrix base point."""

    def __init__(self, raw, base: SpdMatrix | None = None):
        sym = _check_symmetry(_as_square(raw))
        if base is not None and base.n != sym.shape[0]:
            raise DimensionMismatch(f"tangent is {sym.shape[0]}x{sym.shape[0]}, base is {base.n}x{base.n}")
        self.entries = sym
        self.base = base

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def __array__(self, dtype=None, copy=None):
        return np.array(self.entries, dtype=dtype)

    def __repr__(self):
        return f"SymTangent(n={self.n})"


def as_tangent(x, base: SpdMatrix | None = None) -> SymTangent:
    """Coerce an array-like into a SymTangent (pass-through if it already is one)."""
    if isinstance(x, SymTangent):
        return x
    return SymTangent(np.asarray(x, dtype=float), base=base)


def spd_validate(raw) -> SpdMatrix:
    """Validate a raw square array as an SPD matrix.

    Raises NotSymmetric or NotPositiveDefinite with the offending numbers
    in the message; on success the stored matrix is exactly symmetric.
    """
    return SpdMatrix(raw)


def matrix_function(sigma: SpdMatrix, kind: str, exponent: float | None = None):
    """Spectral matrix function V f(L) V^T for f in {sqrt, log, inv, power}.

    sqrt, inv and power return SpdMatrix (positive eigenvalues map to
    positive eigenvalues); log returns a SymTangent.
    """
    if not isinstance(sigma, SpdMatrix):
        sigma = spd_validate(sigma)
    spec = sigma.spectrum
    if kind == "sqrt":
        return SpdMatrix(spec.apply(np.sqrt))
    if kind == "log":
        return SymTangent(spec.apply(np.log))
    if kind == "inv":
        return SpdMatrix(spec.apply(lambda w: 1.0 / w))
    if kind == "power":
        if exponent is None:
            raise InvalidParameters("power requires an exponent")
        r = float(exponent)
        return SpdMatrix(spec.apply(lambda w: w ** r))
    raise InvalidParameters(f"unknown matrix function kind {kind!r}")


def sym_exp(x) -> SpdMatrix:
    """Matrix exponential of a symmetric matrix (always SPD)."""
    spec = sym_eig(x)
    return SpdMatrix(spec.apply(np.exp))


def congruence(a, sigma: SpdMatrix) -> SpdMatrix:
    """Congruence transform A Sigma A^T for an invertible A.

    Rejects A with |det A| <= 1e-12 * ||A||_2^n.  The result is positive
    definite by Sylvester's law of inertia.
    """
    amat = _as_square(a)
    if amat.shape[0] != sigma.n:
        raise DimensionMismatch(f"transform is {amat.shape[0]}x{amat.shape[0]}, point is {sigma.n}x{sigma.n}")
    sign, logabsdet = np.linalg.slogdet(amat)
    opnorm = np.linalg.norm(amat, 2)
    if sign == 0 or logabsdet <= np.log(1e-12) + sigma.n * np.log(max(opnorm, 1e-300)):
        raise SingularTransform("transform matrix is numerically singular")
    return SpdMatrix(amat @ sigma.entries @ amat.T)


def require_well_conditioned(eigenvalues: np.ndarray, what: str = "matrix") -> None:
    """Raise IllConditioned when the positive spectrum spans more than COND_CAP."""
    w = np.asarray(eigenvalues, dtype=float)
    if w[0] <= 0 or w[-1] / w[0] > COND_CAP:
        raise IllConditioned(f"{what} condition number exceeds {COND_CAP:.1e}")


def derive_rng(seed: int, *indices: int) -> np.random.Generator:
    """Deterministic per-sample generator from a master seed and sample indices.

    The stream depends only on (seed, indices), never on execution order,
    so batch loops may run concurrently without changing aggregates.
    """
    entropy = [int(seed) & 0xFFFFFFFFFFFFFFFF] + [int(i) & 0xFFFFFFFFFFFFFFFF for i in indices]
    return np.random.default_rng(entropy)


def random_sym(n: int, seed, scale: float = 1.0) -> np.ndarray:
    """Symmetrized Gaussian matrix, deterministic for a fixed seed."""
    rng = seed if isinstance(seed, np.random.Generator) else derive_rng(seed)
    g = rng.standard_normal((n, n))
    return scale * 0.5 * (g + g.T)


def random_spd(n: int, seed, scale: float = 1.0) -> SpdMatrix:
    """Random SPD matrix exp(scale * S) with S a symmetrized Gaussian.

    The matrix exponential of a Gaussian symmetric matrix gives roughly
    log-uniform spectra, so `scale` sweeps from near-identity to
    ill-conditioned regimes.  Deterministic for a fixed integer seed.
    """
    if n < 1:
        raise InvalidParameters("dimension must be >= 1")
    if scale < 0:
        raise InvalidParameters("scale must be positive")
    s = random_sym(n, seed, scale=scale)
    return sym_exp(s)
