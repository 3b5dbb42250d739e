"""Dense complex linear algebra and quadrature with explicit tolerance contracts.

Everything downstream (triplets, Weyl functions, spectra) is expressed
through these kernels.  All functions are pure: inputs are never mutated
and results are deterministic for fixed inputs.  Mature LAPACK-backed
routines (via numpy/scipy) do the factorizations; this module adds the
contract checks, thresholds, and residual reporting around them.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np
import scipy.linalg

from .config import DEFAULT_TOLS, QUAD_MIN_POINTS, QUAD_POINTS_PER_UNIT_LENGTH, Tolerances
from .errors import StructuralError

__all__ = [
    "QuadratureRule",
    "gauss_legendre",
    "required_quad_order",
    "as_matrix",
    "hermitian_defect",
    "require_hermitian",
    "gram_orthonormalize",
    "OrthonormalizedSet",
    "hermitian_pencil_eig",
    "PencilEigenResult",
    "singular_values",
    "nullspace",
    "numerical_rank",
    "unitary_exp",
]


# ---------------------------------------------------------------------------
# quadrature
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class QuadratureRule:
    """Gauss-Legendre nodes/weights on ``[0, length]``.

    Invariants (checked by :meth:`validate`): the weights sum to the
    interval length to 1e-12 relative accuracy and polynomials up to the
    declared exactness degree integrate to 1e-12 relative accuracy.
    """

    nodes: np.ndarray
    weights: np.ndarray
    order: int
    length: float

    @property
    def exact_degree(self) -> int:
        return 2 * self.order - 1

    def integrate(self, values: np.ndarray) -> complex:
        """Weighted sum of integrand values sampled at the nodes."""
        return complex(np.dot(self.weights, values))

    def validate(self) -> float:
        """Return the worst relative residual over the invariant checks."""
        worst = abs(float(np.sum(self.weights)) - self.length) / self.length
        # probe a few monomials up to the exactness degree
        for deg in sorted({1, 2, self.exact_degree // 2, self.exact_degree}):
            if deg < 1:
                continue
            exact = self.length ** (deg + 1) / (deg + 1)
            got = float(np.dot(self.weights, self.nodes**deg).real)
            worst = max(worst, abs(got - exact) / abs(exact))
        return worst


@functools.lru_cache(maxsize=256)
def gauss_legendre(length: float, order: int) -> QuadratureRule:
    """Gauss-Legendre rule with ``order`` points on ``[0, length]``."""
    if length <= 0:
        raise StructuralError(f"interval length must be positive, got {length}")
    if order < 1:
        raise StructuralError(f"quadrature order must be >= 1, got {order}")
    x, w = np.polynomial.legendre.leggauss(order)
    nodes = 0.5 * length * (x + 1.0)
    weights = 0.5 * length * w
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return QuadratureRule(nodes=nodes, weights=weights, order=order, length=float(length))


def default_quad_order(length: float) -> int:
    return max(QUAD_MIN_POINTS, int(np.ceil(QUAD_POINTS_PER_UNIT_LENGTH * length)))


def required_quad_order(max_freq: float, length: float) -> int:
    """Points needed to integrate ``exp(i z t)`` with ``|z| <= max_freq``
    on ``[0, length]`` to machine accuracy.

    Calibrated empirically: ``0.30 * |z| * length`` points mark the onset
    of superexponential convergence; the constant 0.35 plus a flat margin
    keeps at least two safety octaves.
    """
    return max(default_quad_order(length), int(np.ceil(0.35 * max_freq * length)) + 16)


# ---------------------------------------------------------------------------
# matrix helpers
# ---------------------------------------------------------------------------


def as_matrix(a) -> np.ndarray:
    """Validate and return a finite complex 2-D array."""
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2:
        raise StructuralError(f"expected a 2-D array, got ndim={m.ndim}")
    if not np.all(np.isfinite(m)):
        raise StructuralError("matrix has non-finite entries")
    return m


def hermitian_defect(a: np.ndarray) -> float:
    """``|A - A^H| / max(1, |A|)`` in the 2-norm."""
    a = as_matrix(a)
    scale = max(1.0, float(np.linalg.norm(a, 2)))
    return float(np.linalg.norm(a - a.conj().T, 2)) / scale


def require_hermitian(a: np.ndarray, tol: float, what: str = "matrix") -> np.ndarray:
    a = as_matrix(a)
    defect = hermitian_defect(a)
    if defect > tol:
        raise StructuralError(f"{what} is not Hermitian: symmetry residual {defect:.3e} > {tol:.1e}")
    return 0.5 * (a + a.conj().T)


# ---------------------------------------------------------------------------
# Gram-orthonormalization
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OrthonormalizedSet:
    """Result of :func:`gram_orthonormalize`.

    ``vectors`` holds the orthonormal coefficient vectors as columns;
    ``rank`` is the effective rank; ``dropped`` counts input directions
    discarded below the drop tolerance; ``residual`` is the worst
    deviation of ``V^H G V`` from the identity.
    """

    vectors: np.ndarray
    rank: int
    dropped: int
    residual: float


def gram_orthonormalize(
    vectors: Sequence[np.ndarray] | np.ndarray,
    gram: np.ndarray,
    tols: Tolerances = DEFAULT_TOLS,
) -> OrthonormalizedSet:
    """Orthonormalize coefficient vectors with respect to a Gram matrix.

    The coefficient vectors (columns of) ``V`` are combined so that the
    result ``C`` satisfies ``C^H G C = Id`` within tolerance while
    preserving the numerical span.  Directions whose Gram-norm falls
    below ``tols.rank_rel`` (relative to the largest) are discarded and
    counted in ``dropped``.
    """
    gram = require_hermitian(gram, tols.hermiticity, "gram matrix")
    cols = [np.asarray(v, dtype=complex).ravel() for v in (vectors.T if isinstance(vectors, np.ndarray) else vectors)]
    if not cols:
        return OrthonormalizedSet(np.zeros((gram.shape[0], 0), dtype=complex), 0, 0, 0.0)
    v = np.column_stack(cols)
    if v.shape[0] != gram.shape[0]:
        raise StructuralError(
            f"coefficient dimension {v.shape[0]} incompatible with gram dimension {gram.shape[0]}"
        )
    overlap = v.conj().T @ gram @ v
    overlap = 0.5 * (overlap + overlap.conj().T)
    evals, evecs = np.linalg.eigh(overlap)
    top = float(evals[-1]) if evals.size else 0.0
    if top <= 0.0:
        return OrthonormalizedSet(np.zeros((gram.shape[0], 0), dtype=complex), 0, len(cols), 0.0)
    keep = evals > (tols.rank_rel**2) * top
    kept_vals = evals[keep]
    kept_vecs = evecs[:, keep]
    out = v @ (kept_vecs / np.sqrt(kept_vals))
    check = out.conj().T @ gram @ out
    residual = float(np.max(np.abs(check - np.eye(out.shape[1]))))
    return OrthonormalizedSet(out, int(out.shape[1]), int(len(cols) - out.shape[1]), residual)


# ---------------------------------------------------------------------------
# Hermitian pencil eigenproblem
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PencilEigenResult:
    """Eigenvalues (ascending) and B-orthonormal eigenvectors of ``A v = lam B v``."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    residual: float
    b_orthonormality: float


def hermitian_pencil_eig(
    a: np.ndarray,
    b: np.ndarray,
    tols: Tolerances = DEFAULT_TOLS,
) -> PencilEigenResult:
    """Solve the Hermitian-definite pencil ``A v = lam B v``.

    ``A`` must be Hermitian within ``tols.hermiticity``; ``B`` must be
    Hermitian positive definite (its smallest eigenvalue must exceed
    ``tols.positivity`` times the largest).  Eigenvalues come back real
    and ascending; eigenvectors are B-orthonormal.  The per-pair residual
    bound ``|A v - lam B v| <= tols.pencil_residual * (|A| + |lam| |B|)``
    is reported (not enforced) via ``residual``.
    """
    a = require_hermitian(a, tols.hermiticity, "pencil matrix A")
    b = require_hermitian(b, tols.hermiticity, "pencil matrix B")
    bevals = np.linalg.eigvalsh(b)
    if bevals[0] <= tols.positivity * max(bevals[-1], 0.0):
        raise StructuralError(
            f"pencil matrix B is not positive definite: min eigenvalue {bevals[0]:.3e} "
            f"vs max {bevals[-1]:.3e}"
        )
    evals, evecs = scipy.linalg.eigh(a, b)
    norm_a = float(np.linalg.norm(a, 2))
    norm_b = float(np.linalg.norm(b, 2))
    resid = a @ evecs - b @ evecs * evals[np.newaxis, :]
    scales = norm_a + np.abs(evals) * norm_b
    rel = float(np.max(np.linalg.norm(resid, axis=0) / np.maximum(scales, 1e-300)))
    ortho = float(np.max(np.abs(evecs.conj().T @ b @ evecs - np.eye(len(evals)))))
    return PencilEigenResult(evals, evecs, rel, ortho)


# ---------------------------------------------------------------------------
# SVD-based kernels
# ---------------------------------------------------------------------------


def singular_values(a: np.ndarray) -> np.ndarray:
    """Nonincreasing singular values of ``a``."""
    return np.linalg.svd(as_matrix(a), compute_uv=False)


def numerical_rank(
    sigma: np.ndarray,
    tol_rel: float = DEFAULT_TOLS.rank_rel,
    ambiguity_factor: float = DEFAULT_TOLS.rank_ambiguity_factor,
) -> Tuple[int, bool]:
    """Rank from a singular-value list plus an ambiguity flag.

    The flag is set when any singular value falls within
    ``ambiguity_factor`` of the threshold (on either side), meaning the
    integer answer should not be trusted blindly.
    """
    sigma = np.asarray(sigma, dtype=float)
    if sigma.size == 0:
        return 0, False
    cut = tol_rel * float(sigma[0])
    rank = int(np.sum(sigma > cut))
    if cut == 0.0:
        return rank, False
    near = (sigma > cut / ambiguity_factor) & (sigma <= cut * ambiguity_factor)
    return rank, bool(np.any(near))


def nullspace(a: np.ndarray, tol: float = DEFAULT_TOLS.rank_rel) -> np.ndarray:
    """Orthonormal basis (columns) of the numerical kernel of ``a``.

    A direction is kept when its singular value is at most
    ``tol * sigma_max``.  The returned basis satisfies
    ``|A v| <= tol * |A|`` columnwise; it may be empty.
    """
    if not 0.0 < tol < 1.0:
        raise StructuralError(f"nullspace tolerance must lie in (0, 1), got {tol}")
    a = as_matrix(a)
    _, s, vh = np.linalg.svd(a, full_matrices=True)
    smax = float(s[0]) if s.size else 0.0
    ncols = a.shape[1]
    nkeep = ncols - int(np.sum(s > tol * smax))
    if nkeep == 0:
        return np.zeros((ncols, 0), dtype=complex)
    return vh[ncols - nkeep :].conj().T


# ---------------------------------------------------------------------------
# unitary exponential
# ---------------------------------------------------------------------------


def unitary_exp(a: np.ndarray, tols: Tolerances = DEFAULT_TOLS) -> np.ndarray:
    """``exp(iA)`` for Hermitian ``A``, unitary by construction.

    Built from the spectral decomposition of ``A`` so that
    ``U^H U = Id`` holds to within a few eps regardless of ``|A|``; the
    eigenvalues of the result are exactly ``exp(i mu)`` for the computed
    eigenvalues ``mu`` of ``A``.
    """
    a = require_hermitian(a, tols.hermiticity, "exponent matrix")
    mu, v = np.linalg.eigh(a)
    return (v * np.exp(1j * mu)) @ v.conj().T
