"""Gamma-fields, Weyl functions, contractive Cayley images, resolvents.

For a boundary triplet with reference extension ``T_0`` (the kernel of
``Gamma_0``), the gamma-field ``gamma(lam) phi`` solves the abstract
boundary value problem ``T* x = lam x``, ``Gamma_0 x = phi``; the Weyl
function is ``M(lam) = Gamma_1 gamma(lam)``.  ``M`` is an operator-valued
Nevanlinna function with derivative ``M'(lam) = gamma(conj lam)* gamma(lam)``.

The rotated maps ``Gamma_pm`` define the maximal extensions ``T_pm``
(kernels of ``Gamma_pm``) whose resolvent sets contain the respective
half-planes, the analogous field ``gamma_+(lam)``, and the contraction
``B(lam) = Gamma_- gamma_+(lam) = (M - i)(M + i)^{-1}`` with
``|B(lam)| < 1`` on the upper half-plane.  They combine in the
Krein-type resolvent difference formula

    (T_U - lam)^{-1} - (T_+ - lam)^{-1}
        = i gamma_+(lam) (U - B(lam))^{-1} gamma_-(conj lam)*,

which :func:`krein_residual` verifies with the left-hand side computed
by an independent direct boundary-value solve.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .config import DEFAULT_TOLS, Tolerances
from .errors import ContractError, DiagnosticError, StructuralError
from .funcspace import ExpSum
from .models import (
    SCHRODINGER,
    DomainElement,
    deficiency_basis,
    inner_l2,
    norm_l2,
    orthonormal_deficiency_basis,
)
from .triplets import BoundaryTriplet, ExtensionSpec

__all__ = [
    "WeylSample",
    "ResolventProbe",
    "Decomposition",
    "gamma_field",
    "gamma_plus_field",
    "weyl_M",
    "weyl_derivative_gram",
    "weyl_derivative_check",
    "cayley_B",
    "resolvent_T_plus",
    "extension_resolvent",
    "gamma_minus_adjoint",
    "krein_residual",
    "domain_decompose",
]


def _branch_tag(triplet: BoundaryTriplet, lam: complex) -> str:
    if triplet.model.kind == SCHRODINGER:
        s = complex(np.sqrt(complex(lam)))
        return f"principal-sqrt:{s.real:.12g}{s.imag:+.12g}j"
    return "entire"


# ---------------------------------------------------------------------------
# boundary-value solves
# ---------------------------------------------------------------------------


def _boundary_solve(
    triplet: BoundaryTriplet,
    lam: complex,
    which: str,
    phi: np.ndarray,
    tols: Tolerances,
    label: str,
) -> DomainElement:
    """Solve ``T* x = lam x`` with the selected boundary map equal to phi."""
    model = triplet.model
    basis = deficiency_basis(model, lam)
    mat = triplet.boundary_matrix(basis, which)
    sing = np.linalg.svd(mat, compute_uv=False)
    if sing[0] == 0.0 or sing[-1] <= tols.boundary_solve * sing[0]:
        block = _singular_block(mat)
        raise StructuralError(
            f"lambda = {lam:g} lies in the spectrum of the reference extension "
            f"for boundary map Gamma_{label}"
            + (f" (block {block})" if block is not None else "")
        )
    coeff = np.linalg.solve(mat, np.asarray(phi, dtype=complex))
    out = None
    for c, el in zip(coeff, basis):
        term = el * c
        out = term if out is None else out + term
    return out


def _singular_block(mat: np.ndarray) -> int | None:
    # block-diagonal momentum systems are diagonal; name the offender
    off = mat - np.diag(np.diagonal(mat))
    if mat.shape[0] > 1 and not np.any(np.abs(off) > 0.0):
        return int(np.argmin(np.abs(np.diagonal(mat))))
    return None


def gamma_field(
    triplet: BoundaryTriplet, lam: complex, phi: np.ndarray, tols: Tolerances = DEFAULT_TOLS
) -> DomainElement:
    """``gamma(lam) phi``: the solution of ``T*x = lam x, Gamma_0 x = phi``.

    The adjoint-eigenvalue equation is satisfied exactly (the solution is
    assembled from closed-form kernel elements); only the boundary linear
    solve carries rounding.  Raises :class:`StructuralError` when the
    boundary system is numerically singular, i.e. ``lam`` sits in the
    spectrum of the reference extension.
    """
    return _boundary_solve(triplet, complex(lam), "0", phi, tols, "0")


def gamma_plus_field(
    triplet: BoundaryTriplet, lam: complex, phi: np.ndarray, tols: Tolerances = DEFAULT_TOLS
) -> DomainElement:
    """``gamma_+(lam) phi``: solves ``T*x = lam x`` with ``Gamma_+ x = phi``.

    Shares the solver of :func:`gamma_field`, parameterized by the
    boundary functional.
    """
    return _boundary_solve(triplet, complex(lam), "+", phi, tols, "+")


# ---------------------------------------------------------------------------
# Weyl function samples
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WeylSample:
    """One evaluation of the Weyl function and its Cayley image.

    ``cayley`` is ``None`` outside the upper half-plane, where the
    contraction is not defined.  ``im_m_min_eig`` and ``cayley_norm``
    record the achieved Nevanlinna margin and contraction margin.
    """

    lam: complex
    matrix: np.ndarray
    cayley: np.ndarray | None
    branch: str
    im_m_min_eig: float
    cayley_norm: float
    hermitize_defect: float

    @property
    def boundary_dimension(self) -> int:
        return self.matrix.shape[0]


def weyl_M(triplet: BoundaryTriplet, lam: complex, tols: Tolerances = DEFAULT_TOLS) -> WeylSample:
    """Assemble ``M(lam) = Gamma_1 gamma(lam)`` column by column.

    For ``Im lam > 0`` the Nevanlinna lower bound ``Im M(lam) > 0`` and
    the contraction bound ``|B(lam)| < 1`` are enforced; violation means
    an upstream defect and raises :class:`DiagnosticError`.
    """
    lam = complex(lam)
    m = triplet.boundary_dimension
    cols = []
    for p in range(m):
        phi = np.zeros(m, dtype=complex)
        phi[p] = 1.0
        cols.append(triplet.gamma1(gamma_field(triplet, lam, phi, tols)))
    mat = np.column_stack(cols)

    im_part = (mat - mat.conj().T) / 2j
    im_min = float(np.linalg.eigvalsh(im_part)[0])
    herm_defect = float(np.linalg.norm(mat - mat.conj().T, 2))

    cayley = None
    bnorm = math.nan
    if lam.imag > 0:
        if im_min <= 0:
            raise DiagnosticError(
                f"Nevanlinna property violated at lam={lam:g}: min eig Im M = {im_min:.3e}"
            )
        eye = np.eye(m)
        cayley = np.linalg.solve((mat + 1j * eye).T, (mat - 1j * eye).T).T
        bnorm = float(np.linalg.norm(cayley, 2))
        if bnorm >= 1.0:
            raise DiagnosticError(f"|B(lam)| = {bnorm:.12f} >= 1 at lam={lam:g}")
    return WeylSample(
        lam=lam,
        matrix=mat,
        cayley=cayley,
        branch=_branch_tag(triplet, lam),
        im_m_min_eig=im_min,
        cayley_norm=bnorm,
        hermitize_defect=herm_defect,
    )


def weyl_derivative_gram(
    triplet: BoundaryTriplet, lam: complex, tols: Tolerances = DEFAULT_TOLS
) -> np.ndarray:
    """``gamma(conj lam)* gamma(lam)`` as the Gram matrix
    ``G[p, q] = (gamma(lam) e_q, gamma(conj lam) e_p)_H``."""
    lam = complex(lam)
    m = triplet.boundary_dimension
    eye = np.eye(m, dtype=complex)
    gl = [gamma_field(triplet, lam, eye[:, p], tols) for p in range(m)]
    gc = [gamma_field(triplet, lam.conjugate(), eye[:, p], tols) for p in range(m)]
    out = np.empty((m, m), dtype=complex)
    for p in range(m):
        for q in range(m):
            out[p, q] = inner_l2(gl[q], gc[p])
    return out


@dataclass(frozen=True)
class WeylDerivativeCheck:
    """Comparison of the finite-difference derivative of M against the
    gamma-field Gram identity."""

    lam: complex
    step: float
    fd_matrix: np.ndarray
    gram: np.ndarray
    rel_residual: float


def weyl_derivative_check(
    triplet: BoundaryTriplet,
    lam: complex,
    step: float | None = None,
    tols: Tolerances = DEFAULT_TOLS,
) -> WeylDerivativeCheck:
    """Central finite difference of ``M`` vs the Gram form of ``M'``.

    The default step ``1e-4 |lam|`` balances the second-order stencil
    truncation against rounding of the boundary solves at the 1e-6
    relative target; halving the step should shrink the residual about
    fourfold while the stencil term dominates.
    """
    lam = complex(lam)
    h = step if step is not None else 1e-4 * abs(lam)
    if h <= 0:
        raise ContractError("finite-difference step must be positive")
    mp = weyl_M(triplet, lam + h, tols).matrix
    mm = weyl_M(triplet, lam - h, tols).matrix
    fd = (mp - mm) / (2.0 * h)
    gram = weyl_derivative_gram(triplet, lam, tols)
    rel = float(np.linalg.norm(fd - gram, 2) / max(np.linalg.norm(gram, 2), 1e-300))
    return WeylDerivativeCheck(lam=lam, step=h, fd_matrix=fd, gram=gram, rel_residual=rel)


def cayley_B(triplet: BoundaryTriplet, lam: complex, tols: Tolerances = DEFAULT_TOLS) -> np.ndarray:
    """``B(lam) = (M(lam) - i)(M(lam) + i)^{-1}``, cross-checked columnwise
    against its defining boundary form ``Gamma_- gamma_+(lam)``."""
    lam = complex(lam)
    if lam.imag <= 0:
        raise ContractError(f"B(lam) requires Im lam > 0, got {lam:g}")
    sample = weyl_M(triplet, lam, tols)
    b = sample.cayley
    m = triplet.boundary_dimension
    eye = np.eye(m, dtype=complex)
    direct = np.column_stack(
        [triplet.gamma_minus(gamma_plus_field(triplet, lam, eye[:, p], tols)) for p in range(m)]
    )
    defect = float(np.max(np.abs(direct - b)))
    if defect > 100 * tols.hermiticity * max(1.0, float(np.linalg.norm(b, 2))):
        raise DiagnosticError(
            f"Cayley image mismatch at lam={lam:g}: algebraic vs boundary route differ by {defect:.3e}"
        )
    return b


# ---------------------------------------------------------------------------
# resolvents
# ---------------------------------------------------------------------------


def _particular_solution(triplet: BoundaryTriplet, lam: complex, y: DomainElement) -> DomainElement:
    """One exact solution of ``(T* - lam) x = y`` (no boundary condition)."""
    model = triplet.model
    blocks = []
    if model.kind == SCHRODINGER:
        s = complex(np.sqrt(lam))
        yb = y.blocks[0]
        cos_s = ExpSum.cosine(s)
        sin_s = ExpSum.sine(s)
        cfull = (cos_s * yb).antiderivative()
        sfull = (sin_s * yb).antiderivative()
        cint = cfull + ExpSum.monomial(0, -cfull.value(0.0))
        sint = sfull + ExpSum.monomial(0, -sfull.value(0.0))
        xp = (sin_s * cint - cos_s * sint) * (-1.0 / s)
        blocks.append(xp)
    else:
        for k in range(model.block_count):
            yb = y.blocks[k]
            if yb.is_zero:
                blocks.append(ExpSum.zero())
                continue
            g = (ExpSum.exp(-lam) * yb).antiderivative()
            gshift = g + ExpSum.monomial(0, -g.value(0.0))
            blocks.append(ExpSum.exp(lam) * gshift * 1j)
    return DomainElement(model, tuple(blocks))


def _corrected_solution(
    triplet: BoundaryTriplet,
    lam: complex,
    y: DomainElement,
    condition_matrix_fn,
    condition_rhs_fn,
    tols: Tolerances,
    what: str,
) -> DomainElement:
    """Particular solution plus a kernel correction fixing m boundary
    conditions, given as callables on (matrix of kernel columns, x_p)."""
    xp = _particular_solution(triplet, lam, y)
    basis = deficiency_basis(triplet.model, lam)
    mat = condition_matrix_fn(basis)
    rhs = condition_rhs_fn(xp)
    sing = np.linalg.svd(mat, compute_uv=False)
    if sing[0] == 0.0 or sing[-1] <= tols.boundary_solve * sing[0]:
        raise StructuralError(f"singular boundary system in {what} at lam={lam:g}")
    coeff = np.linalg.solve(mat, rhs)
    out = xp
    for c, el in zip(coeff, basis):
        out = out + el * c
    return out


def resolvent_T_plus(
    triplet: BoundaryTriplet, lam: complex, y: DomainElement, tols: Tolerances = DEFAULT_TOLS
) -> DomainElement:
    """``(T_+ - lam)^{-1} y`` for ``Im lam > 0``.

    Solves ``(T* - lam) x = y`` with ``Gamma_+ x = 0`` by an exact
    integrating-factor (first order) or variation-of-parameters (second
    order) particular solution plus a kernel correction.  The construction
    satisfies the a priori bound ``|x| <= |y| / Im lam``.
    """
    lam = complex(lam)
    if lam.imag <= 0:
        raise ContractError(f"resolvent of T_+ requires Im lam > 0, got {lam:g}")
    return _corrected_solution(
        triplet,
        lam,
        y,
        lambda basis: triplet.boundary_matrix(basis, "+"),
        lambda xp: -triplet.gamma_plus(xp),
        tols,
        "resolvent_T_plus",
    )


def extension_resolvent(
    spec: ExtensionSpec, lam: complex, y: DomainElement, tols: Tolerances = DEFAULT_TOLS
) -> DomainElement:
    """``(T_U - lam)^{-1} y`` by a direct boundary-value solve.

    Independent of the Krein-formula machinery: the boundary condition
    ``Gamma_- x = U Gamma_+ x`` is imposed on an exact particular
    solution plus kernel corrections.
    """
    lam = complex(lam)
    if lam.imag == 0:
        raise ContractError("extension resolvent evaluated off the real axis only")
    triplet = spec.triplet
    u = spec.unitary
    return _corrected_solution(
        triplet,
        lam,
        y,
        lambda basis: triplet.boundary_matrix(basis, "-") - u @ triplet.boundary_matrix(basis, "+"),
        lambda xp: -(triplet.gamma_minus(xp) - u @ triplet.gamma_plus(xp)),
        tols,
        "extension_resolvent",
    )


def gamma_minus_adjoint(
    triplet: BoundaryTriplet, lam: complex, y: DomainElement, tols: Tolerances = DEFAULT_TOLS
) -> np.ndarray:
    """``gamma_-(conj lam)* y`` for ``Im lam > 0``, computed through the
    identity ``gamma_-(conj lam)* = -i Gamma_- (T_+ - lam)^{-1}``."""
    return -1j * triplet.gamma_minus(resolvent_T_plus(triplet, lam, y, tols))


# ---------------------------------------------------------------------------
# Krein formula and domain characterization
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ResolventProbe:
    """One verification of the resolvent difference formula."""

    lam: complex
    family_name: str
    y_label: str
    residual: float
    lhs_norm: float
    rhs_norm: float
    y_norm: float
    branch: str


def krein_residual(
    spec: ExtensionSpec, lam: complex, y: DomainElement, tols: Tolerances = DEFAULT_TOLS
) -> ResolventProbe:
    """Relative residual of the resolvent difference formula at ``lam``.

    The left-hand side is the difference of two independently computed
    resolvents (direct boundary-value solves); the right-hand side is
    assembled from ``gamma_+``, ``B(lam)`` and ``gamma_-(conj lam)*``.
    Returns ``|LHS - RHS|_H / |y|_H``.
    """
    lam = complex(lam)
    if lam.imag <= 0:
        raise ContractError(f"Krein check requires Im lam > 0, got {lam:g}")
    triplet = spec.triplet
    lhs = extension_resolvent(spec, lam, y, tols) - resolvent_T_plus(triplet, lam, y, tols)

    b = cayley_B(triplet, lam, tols)
    gap = spec.unitary - b
    sing = np.linalg.svd(gap, compute_uv=False)
    if sing[-1] <= tols.boundary_solve * max(sing[0], 1.0):
        raise StructuralError(
            "U - B(lam) is numerically singular; the parameter cannot be unitary"
        )
    phi = 1j * np.linalg.solve(gap, gamma_minus_adjoint(triplet, lam, y, tols))
    rhs = gamma_plus_field(triplet, lam, phi, tols)

    ynorm = norm_l2(y)
    res = norm_l2(lhs - rhs) / max(ynorm, 1e-300)
    return ResolventProbe(
        lam=lam,
        family_name=spec.family_name,
        y_label=y.label or "y",
        residual=float(res),
        lhs_norm=norm_l2(lhs),
        rhs_norm=norm_l2(rhs),
        y_norm=ynorm,
        branch=_branch_tag(triplet, lam),
    )


@dataclass(frozen=True)
class Decomposition:
    """Components of a domain element per the resolvent-based splitting
    ``x = (T_+ - lam)^{-1} (y + w) + gamma_+(lam) phi`` with
    ``y`` in ``Ran(T - lam)``, ``w`` in ``ker(T* - conj lam)``, and the
    linkage ``i gamma_-(conj lam)* w = (U - B(lam)) phi``."""

    y: DomainElement
    w: DomainElement
    phi: np.ndarray
    membership_residual: float
    linkage_residual: float
    reassembly_residual: float


def domain_decompose(
    spec: ExtensionSpec, lam: complex, x: DomainElement, tols: Tolerances = DEFAULT_TOLS
) -> Decomposition:
    """Split a member of ``D(T_U)`` into its resolvent components.

    Preconditions: ``Im lam > 0`` and the membership residual
    ``|Gamma_- x - U Gamma_+ x|`` below ``tols.resolvent`` (relative to
    the element's scale).
    """
    lam = complex(lam)
    if lam.imag <= 0:
        raise ContractError(f"domain decomposition requires Im lam > 0, got {lam:g}")
    triplet = spec.triplet
    membership = spec.membership_residual(x)
    scale = max(1.0, norm_l2(x))
    if membership > tols.resolvent * scale:
        raise ContractError(
            f"element is not in the extension domain: membership residual {membership:.3e}"
        )
    phi = triplet.gamma_plus(x)
    x_lam = x - gamma_plus_field(triplet, lam, phi, tols)
    z = x_lam.t_star() - x_lam * lam
    # split z = y + w with w the projection onto ker(T* - conj lam)
    kernel = orthonormal_deficiency_basis(triplet.model, lam.conjugate())
    w = None
    for e in kernel:
        comp = inner_l2(z, e)
        term = e * comp
        w = term if w is None else w + term
    y = z - w
    b = cayley_B(triplet, lam, tols)
    linkage = float(
        np.linalg.norm(
            1j * gamma_minus_adjoint(triplet, lam, w, tols) - (spec.unitary - b) @ phi
        )
    )
    rebuilt = resolvent_T_plus(triplet, lam, y + w, tols) + gamma_plus_field(triplet, lam, phi, tols)
    reassembly = norm_l2(x - rebuilt) / scale
    return Decomposition(
        y=y,
        w=w,
        phi=phi,
        membership_residual=float(membership),
        linkage_residual=linkage,
        reassembly_residual=float(reassembly),
    )
