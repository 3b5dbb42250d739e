"""Boundary triplets, Green-identity certification, and extensions.

A boundary triplet ``(G, Gamma_0, Gamma_1)`` consists of two boundary
maps ``D(T*) -> G`` with ``(Gamma_0, Gamma_1)`` surjective and the
abstract Green identity

    (T*x, y) - (x, T*y) = (Gamma_1 x, Gamma_0 y) - (Gamma_0 x, Gamma_1 y).

Self-adjoint extensions then correspond one-to-one to unitary operators
``U`` on ``G`` through the boundary condition

    (Id - U) Gamma_1 x = i (Id + U) Gamma_0 x,

equivalently ``Gamma_- x = U Gamma_+ x`` for the rotated maps
``Gamma_pm = (Gamma_1 pm i Gamma_0) / sqrt(2)``.

The concrete triplet formulas below are this toolkit's choice for the
model operators; their validity is certified numerically at construction
time by the Green-identity residual, not assumed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, List, Sequence, Tuple

import numpy as np

from .config import DEFAULT_TOLS, Tolerances
from .errors import DiagnosticError, StructuralError
from .models import (
    SCHRODINGER,
    DomainElement,
    ModelOperator,
    boundary_values,
    inner_l2,
    orthonormal_deficiency_basis,
    random_element,
)

__all__ = [
    "BoundaryTriplet",
    "ExtensionSpec",
    "GreenReport",
    "standard_triplet",
    "regularized_direct_sum_triplet",
    "gamma_pm",
    "extension_from_unitary",
    "cayley_extension",
    "green_residual",
    "green_report",
    "indefinite_form",
    "block_phase",
]

_SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class BoundaryTriplet:
    """Boundary maps for a model operator.

    ``scales`` holds one positive factor ``r_k`` per block realizing the
    Green-form-preserving rescaling ``Gamma_0 -> r Gamma_0``,
    ``Gamma_1 -> Gamma_1 / r`` (all ones for the standard triplet).

    Per momentum block (boundary space contribution C):
        ``Gamma_0 f = r (f(0) + f(l)) / sqrt(2)``
        ``Gamma_1 f = (i/r) (f(0) - f(l)) / sqrt(2)``
    Schrodinger (boundary space C^2):
        ``Gamma_0 f = (f(0), f(l))``, ``Gamma_1 f = (f'(0), -f'(l))``.
    """

    model: ModelOperator
    scales: Tuple[float, ...]

    def __post_init__(self):
        if self.model.kind == SCHRODINGER:
            if len(self.scales) != 1:
                raise StructuralError("schrodinger triplet takes a single scale")
        elif len(self.scales) != self.model.block_count:
            raise StructuralError("one scale per block is required")
        if any(r <= 0 for r in self.scales):
            raise StructuralError("triplet scales must be positive")

    @property
    def boundary_dimension(self) -> int:
        return self.model.deficiency_index

    # -- boundary maps -------------------------------------------------

    def gamma0(self, x: DomainElement) -> np.ndarray:
        return self._apply(x, which=0)

    def gamma1(self, x: DomainElement) -> np.ndarray:
        return self._apply(x, which=1)

    def gamma_plus(self, x: DomainElement) -> np.ndarray:
        return (self.gamma1(x) + 1j * self.gamma0(x)) / _SQRT2

    def gamma_minus(self, x: DomainElement) -> np.ndarray:
        return (self.gamma1(x) - 1j * self.gamma0(x)) / _SQRT2

    def _apply(self, x: DomainElement, which: int) -> np.ndarray:
        if x.model != self.model:
            raise StructuralError("element belongs to a different model")
        bvals = boundary_values(x)
        if self.model.kind == SCHRODINGER:
            f0, fl, df0, dfl = bvals[0]
            if which == 0:
                return np.array([f0, fl]) * self.scales[0]
            return np.array([df0, -dfl]) / self.scales[0]
        out = np.empty(self.model.block_count, dtype=complex)
        for k in range(self.model.block_count):
            f0, fl = bvals[k]
            r = self.scales[k]
            if which == 0:
                out[k] = r * (f0 + fl) / _SQRT2
            else:
                out[k] = (1j / r) * (f0 - fl) / _SQRT2
        return out

    def boundary_matrix(self, elements: Sequence[DomainElement], which: str) -> np.ndarray:
        """Stack a boundary map over elements: column j is the map of
        ``elements[j]``.  ``which`` is one of ``"0" "1" "+" "-"``."""
        fn = {
            "0": self.gamma0,
            "1": self.gamma1,
            "+": self.gamma_plus,
            "-": self.gamma_minus,
        }[which]
        cols = [fn(el) for el in elements]
        return np.column_stack(cols) if cols else np.zeros((self.boundary_dimension, 0), complex)


# ---------------------------------------------------------------------------
# Green identity
# ---------------------------------------------------------------------------


def green_residual(triplet: BoundaryTriplet, x: DomainElement, y: DomainElement) -> float:
    """|(T*x,y) - (x,T*y) - (G1 x, G0 y) + (G0 x, G1 y)|."""
    lhs = inner_l2(x.t_star(), y) - inner_l2(x, y.t_star())
    g0x, g1x = triplet.gamma0(x), triplet.gamma1(x)
    g0y, g1y = triplet.gamma0(y), triplet.gamma1(y)
    rhs = np.vdot(g0y, g1x) - np.vdot(g1y, g0x)  # vdot conjugates its FIRST arg
    return abs(lhs - rhs)


def rotated_green_residual(triplet: BoundaryTriplet, x: DomainElement, y: DomainElement) -> float:
    """Residual of the rotated identity
    ``(T*x,y) - (x,T*y) = i (G+x, G+y) - i (G-x, G-y)``."""
    lhs = inner_l2(x.t_star(), y) - inner_l2(x, y.t_star())
    rhs = 1j * np.vdot(triplet.gamma_plus(y), triplet.gamma_plus(x)) - 1j * np.vdot(
        triplet.gamma_minus(y), triplet.gamma_minus(x)
    )
    return abs(lhs - rhs)


def indefinite_form(phi: Tuple[np.ndarray, np.ndarray], psi: Tuple[np.ndarray, np.ndarray]) -> complex:
    """Canonical indefinite Hermitian form on the doubled boundary space:
    ``{(p0,p1),(q0,q1)} = -i [ (p1, q0) - (p0, q1) ]``."""
    p0, p1 = phi
    q0, q1 = psi
    return -1j * (np.vdot(q0, p1) - np.vdot(q1, p0))


@dataclass(frozen=True)
class GreenReport:
    """Certification record of the Green identity over a test set."""

    max_residual: float
    worst_pair: Tuple[str, str]
    pair_count: int
    form_samples: Tuple[complex, ...] = ()


def green_report(
    triplet: BoundaryTriplet,
    pairs: Sequence[Tuple[DomainElement, DomainElement]] | None = None,
    n_pairs: int = 32,
    seed: int = 20240,
) -> GreenReport:
    """Evaluate the Green residual over explicit or random pairs."""
    if pairs is None:
        rng = np.random.default_rng(seed)
        pairs = [
            (random_element(triplet.model, rng), random_element(triplet.model, rng))
            for _ in range(n_pairs)
        ]
    worst = -1.0
    worst_pair = ("", "")
    samples: List[complex] = []
    for x, y in pairs:
        res = green_residual(triplet, x, y)
        if res > worst:
            worst = res
            worst_pair = (x.label or "random", y.label or "random")
        if len(samples) < 4:
            samples.append(
                indefinite_form(
                    (triplet.gamma0(x), triplet.gamma1(x)),
                    (triplet.gamma0(y), triplet.gamma1(y)),
                )
            )
    return GreenReport(
        max_residual=worst, worst_pair=worst_pair, pair_count=len(pairs), form_samples=tuple(samples)
    )


# ---------------------------------------------------------------------------
# triplet constructors
# ---------------------------------------------------------------------------


def _certify(triplet: BoundaryTriplet, tols: Tolerances) -> BoundaryTriplet:
    report = green_report(triplet, n_pairs=8)
    if report.max_residual > tols.green:
        raise DiagnosticError(
            f"Green identity failed at construction: residual {report.max_residual:.3e} "
            f"> {tols.green:.1e} on pair {report.worst_pair}"
        )
    return triplet


def standard_triplet(model: ModelOperator, tols: Tolerances = DEFAULT_TOLS) -> BoundaryTriplet:
    """The unscaled boundary triplet; Green residual certified < tols.green."""
    scales = (1.0,) if model.kind == SCHRODINGER else (1.0,) * model.block_count
    return _certify(BoundaryTriplet(model=model, scales=scales), tols)


def regularized_direct_sum_triplet(
    model: ModelOperator, tols: Tolerances = DEFAULT_TOLS
) -> BoundaryTriplet:
    """Per-block rescaled triplet for momentum direct sums.

    The block Weyl value of the standard triplet is
    ``M_k(i) = i tanh(l_k / 2)``, which degenerates as ``l_k -> 0`` and
    would ill-condition the unitary-parameter map across block sweeps.
    Scaling block ``k`` by ``r_k`` with ``r_k**2 = tanh(l_k / 2)``
    preserves the Green form exactly and normalizes the block Weyl value
    to ``M_k(i) = i``.
    """
    if model.kind == SCHRODINGER:
        raise StructuralError("regularized triplet is defined for momentum-type models")
    scales = tuple(math.sqrt(math.tanh(l / 2.0)) for l in model.lengths)
    return _certify(BoundaryTriplet(model=model, scales=scales), tols)


def gamma_pm(triplet: BoundaryTriplet) -> Tuple[Callable, Callable]:
    """The rotated boundary maps ``(Gamma_+, Gamma_-)`` as callables."""
    return triplet.gamma_plus, triplet.gamma_minus


# ---------------------------------------------------------------------------
# extensions
# ---------------------------------------------------------------------------


def block_phase(u: complex, r: float) -> complex:
    """Eigencondition phase of a scalar momentum block.

    For a block of length ``l`` with triplet scale ``r``, the extension
    with parameter ``u`` consists of the functions ``exp(i lam t)`` with
    ``exp(i lam l) = w`` where

        ``w = [(1 - u) - r^2 (1 + u)] / [(1 - u) + r^2 (1 + u)]``.

    ``|w| = 1`` for unimodular ``u``; ``u = 1`` gives ``w = -1`` exactly
    (the Gamma_0-kernel extension).
    """
    u = complex(u)
    if u == 1.0 + 0.0j:
        return -1.0 + 0.0j
    r2 = r * r
    num = (1.0 - u) - r2 * (1.0 + u)
    den = (1.0 - u) + r2 * (1.0 + u)
    if abs(den) < 1e-14:
        raise StructuralError(
            f"degenerate boundary condition for block parameter u={u:g}, scale r={r:g}"
        )
    return num / den


@dataclass(frozen=True)
class ExtensionSpec:
    """A self-adjoint extension: a unitary parameter bound to a triplet.

    ``block_phases`` holds the per-block eigencondition phases ``w_k``
    when ``U`` is (numerically exactly) block-diagonal on a momentum-type
    model, else ``None``.
    """

    triplet: BoundaryTriplet
    unitary: np.ndarray
    block_phases: Tuple[complex, ...] | None = None
    family_name: str = ""

    @property
    def model(self) -> ModelOperator:
        return self.triplet.model

    def condition_matrices(self) -> Tuple[np.ndarray, np.ndarray]:
        """Matrices (A, B) of the boundary condition ``A G1 x = B G0 x``
        with ``A = Id - U`` and ``B = i (Id + U)``."""
        u = self.unitary
        eye = np.eye(u.shape[0])
        return eye - u, 1j * (eye + u)

    def membership_residual(self, x: DomainElement) -> float:
        """``|Gamma_- x - U Gamma_+ x|`` (0 iff x lies in the domain)."""
        return float(
            np.linalg.norm(self.triplet.gamma_minus(x) - self.unitary @ self.triplet.gamma_plus(x))
        )

    def eq_boundary_residual(self, x: DomainElement) -> float:
        """Residual of ``(Id-U) Gamma_1 x = i (Id+U) Gamma_0 x``."""
        a, b = self.condition_matrices()
        return float(np.linalg.norm(a @ self.triplet.gamma1(x) - b @ self.triplet.gamma0(x)))


def _try_block_phases(triplet: BoundaryTriplet, u: np.ndarray) -> Tuple[complex, ...] | None:
    if triplet.model.kind == SCHRODINGER:
        return None
    off = u - np.diag(np.diagonal(u))
    if np.any(np.abs(off) > 0.0):
        return None
    return tuple(
        block_phase(u[k, k], triplet.scales[k]) for k in range(triplet.model.block_count)
    )


def extension_from_unitary(
    triplet: BoundaryTriplet,
    unitary: np.ndarray,
    tols: Tolerances = DEFAULT_TOLS,
    family_name: str = "",
) -> ExtensionSpec:
    """Bind a unitary parameter to a triplet, deriving block phase data.

    ``U = Id`` produces the ``Gamma_0 = 0`` extension; ``U = -Id`` the
    ``Gamma_1 = 0`` extension.  Raises if ``U`` is not unitary within
    ``tols.unitarity``.
    """
    u = np.asarray(unitary, dtype=complex)
    if u.ndim == 0:
        u = u.reshape(1, 1)
    m = triplet.boundary_dimension
    if u.shape != (m, m):
        raise StructuralError(f"unitary parameter must be {m}x{m}, got {u.shape}")
    defect = float(np.linalg.norm(u.conj().T @ u - np.eye(m), 2))
    if defect > tols.unitarity:
        raise StructuralError(f"parameter is not unitary: |U^H U - Id| = {defect:.3e}")
    return ExtensionSpec(
        triplet=triplet,
        unitary=u,
        block_phases=_try_block_phases(triplet, u),
        family_name=family_name,
    )


def cayley_extension(
    model: ModelOperator,
    isometry: np.ndarray,
    tols: Tolerances = DEFAULT_TOLS,
) -> ExtensionSpec:
    """Extension from a unitary map ``V: ker(T*-i) -> ker(T*+i)``.

    ``isometry`` is the matrix of ``V`` with respect to the
    H-orthonormalized deficiency bases.  The extension domain is
    ``D(T) + span{x + Vx}``; its boundary data determine the equivalent
    triplet parameter ``U`` of the standard triplet, which is returned
    bound in an :class:`ExtensionSpec`.
    """
    v = np.asarray(isometry, dtype=complex)
    if v.ndim == 0:
        v = v.reshape(1, 1)
    m = model.deficiency_index
    if v.shape != (m, m):
        raise StructuralError(f"isometry must be {m}x{m}, got {v.shape}")
    defect = float(np.linalg.norm(v.conj().T @ v - np.eye(m), 2))
    if defect > tols.unitarity:
        raise StructuralError(f"map between deficiency spaces is not isometric: {defect:.3e}")

    plus = orthonormal_deficiency_basis(model, 1j)
    minus = orthonormal_deficiency_basis(model, -1j)
    triplet = standard_triplet(model, tols)
    # domain vectors x_j + V x_j for the orthonormal basis of ker(T*-i)
    vectors = []
    for j in range(m):
        w = plus[j]
        for i in range(m):
            if v[i, j] != 0:
                w = w + minus[i] * v[i, j]
        vectors.append(w)
    gplus = triplet.boundary_matrix(vectors, "+")
    gminus = triplet.boundary_matrix(vectors, "-")
    try:
        u = gminus @ np.linalg.inv(gplus)
    except np.linalg.LinAlgError:
        raise StructuralError("boundary data of the Cayley domain is degenerate") from None
    defect = float(np.linalg.norm(u.conj().T @ u - np.eye(m), 2))
    if defect > 1e3 * tols.unitarity:
        raise StructuralError(f"induced boundary parameter is not unitary: {defect:.3e}")
    # snap to the nearest unitary (polar factor) to keep downstream
    # unitarity contracts exact
    uu, _, vvh = np.linalg.svd(u)
    u = uu @ vvh
    return extension_from_unitary(triplet, u, tols, family_name="cayley")
