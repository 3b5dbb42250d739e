"""Spectra of extensions and compactness diagnostics.

Eigenvalues of the model extensions come from two independent routes:

* closed-form phase algebra for block-diagonal parameters on
  momentum-type models (``exp(i lam l_k) = w_k``), and
* a bracketed real-axis scan of the unitary eigenphase condition
  ``det(Id - U^H V(lam)) = 0`` for the Schrodinger model and small
  coupled momentum systems, where ``V(lam)`` maps ``Gamma_+`` data to
  ``Gamma_-`` data on the lam-kernel (unitary for real lam),

plus a Rayleigh-Ritz (Galerkin) pencil on a basis of the extension
domain as a cross-check.  Compact-embedding and compact-resolvent
proxies (singular-value decay of the graph-norm embedding, per-block
minimal eigenvalues under block-phase families, tail profile of
``|u_k - 1|``) quantify at finite truncation what compactness of the
resolvent or of ``U - Id`` would mean in the limit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Sequence, Tuple

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .config import DEFAULT_TOLS, Tolerances
from .errors import ConfigError, ContractError, StructuralError
from .families import UnitaryFamily, parse_family
from .models import (
    DIRECT_SUM,
    MOMENTUM,
    SCHRODINGER,
    DomainElement,
    ModelOperator,
    build_model,
    direct_sum_lengths,
    domain_basis,
    deficiency_basis,
    gram_matrix,
    solution_basis,
)
from .numerics import (
    hermitian_pencil_eig,
    nullspace,
    numerical_rank,
    singular_values,
    unitary_exp,
)
from .triplets import BoundaryTriplet, ExtensionSpec, block_phase, regularized_direct_sum_triplet
from .weyl import weyl_derivative_gram

__all__ = [
    "SpectralReport",
    "SubspacePair",
    "extension_spectrum",
    "galerkin_spectrum",
    "GalerkinResult",
    "embedding_singular_values",
    "EmbeddingReport",
    "counting_function",
    "regularity_margin",
    "relative_dimension",
    "RelativeDimensionReport",
    "index_check_M_prime",
    "IndexReport",
    "compactness_report",
    "CompactnessTrend",
    "kuiper_check",
    "KuiperReport",
]


# ---------------------------------------------------------------------------
# spectral reports
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SpectralReport:
    """Eigenvalues of one extension inside a window.

    ``eigenvalues`` and ``blocks`` are parallel (block -1 for coupled
    systems); ``per_block_min_abs`` holds the global (not window-limited)
    minimal ``|eigenvalue|`` per block when available; ``unresolved``
    lists subintervals where the root scan could not certify a root.
    ``residual_summary`` is the worst boundary-condition residual over
    the accepted eigenvalues.
    """

    model_id: str
    family_name: str
    window: Tuple[float, float]
    eigenvalues: Tuple[float, ...]
    blocks: Tuple[int, ...]
    per_block_min_abs: Tuple[float, ...] | None = None
    residual_summary: float = 0.0
    unresolved: Tuple[Tuple[float, float], ...] = ()

    def counting(self, threshold: float) -> int:
        return counting_function(self, threshold)


def counting_function(report: SpectralReport, threshold: float) -> int:
    """Count eigenvalues with ``|lam| <= threshold`` (tiny relative slack
    keeps boundary cases stable in floating point)."""
    lo, hi = report.window
    if not (lo <= -threshold and threshold <= hi):
        raise ContractError(
            f"window {report.window} does not contain [-{threshold:g}, {threshold:g}]"
        )
    cut = threshold * (1.0 + 1e-12)
    return int(sum(1 for lam in report.eigenvalues if abs(lam) <= cut))


def _angle(w: complex) -> float:
    """Principal argument on (-pi, pi], ties at -pi mapped to +pi."""
    theta = math.atan2(w.imag, w.real)
    if theta <= -math.pi:
        theta = math.pi
    return theta


def _block_eigenvalues(theta: float, length: float, window: Tuple[float, float]) -> List[float]:
    lo, hi = window
    out = []
    n_min = math.ceil((lo * length - theta) / (2 * math.pi) - 1e-12)
    n_max = math.floor((hi * length - theta) / (2 * math.pi) + 1e-12)
    for n in range(n_min, n_max + 1):
        lam = (theta + 2 * math.pi * n) / length
        if lo - 1e-12 <= lam <= hi + 1e-12:
            out.append(lam)
    return out


def extension_spectrum(
    spec: ExtensionSpec,
    window: Tuple[float, float],
    tols: Tolerances = DEFAULT_TOLS,
) -> SpectralReport:
    """Eigenvalues of the extension in the window.

    Block-diagonal parameters on momentum-type models are enumerated in
    closed form from the per-block phases; the Schrodinger model and
    coupled momentum systems (at most two blocks) go through the
    bracketed real-axis scan.
    """
    lo, hi = window
    if not lo < hi:
        raise ContractError(f"empty window {window}")
    model = spec.model
    if spec.block_phases is not None:
        eigenvalues: List[float] = []
        blocks: List[int] = []
        minabs: List[float] = []
        for k, w in enumerate(spec.block_phases):
            theta = _angle(w)
            length = model.lengths[k]
            vals = _block_eigenvalues(theta, length, window)
            eigenvalues.extend(vals)
            blocks.extend([k] * len(vals))
            minabs.append(abs(theta) / length)
        order = np.argsort(eigenvalues, kind="stable")
        return SpectralReport(
            model_id=model.model_id,
            family_name=spec.family_name,
            window=(lo, hi),
            eigenvalues=tuple(float(eigenvalues[i]) for i in order),
            blocks=tuple(int(blocks[i]) for i in order),
            per_block_min_abs=tuple(minabs),
        )
    if model.kind != SCHRODINGER and model.block_count > 2:
        raise ConfigError(
            "general (non-block-diagonal) parameters are supported for at most two blocks"
        )
    return _scan_spectrum(spec, window, tols)


# ---------------------------------------------------------------------------
# real-axis eigenphase scan
# ---------------------------------------------------------------------------


def _phase_product(spec: ExtensionSpec, lam: float, sqrt_ref: complex) -> Tuple[float, complex]:
    """The real root function ``g(lam) = prod_j sin(phi_j / 2)`` where
    ``exp(i phi_j)`` are the eigenvalues of ``W = U^H V(lam)``.

    Evaluated branch-free as ``det(Id - W) / ((-2i)^m sqrt(det W))`` with
    the square-root branch chosen closest to ``sqrt_ref``; returns the
    value and the branch actually used so scans can continue it.
    """
    triplet = spec.triplet
    model = triplet.model
    basis = solution_basis(model, lam)
    p = triplet.boundary_matrix(basis, "+")
    q = triplet.boundary_matrix(basis, "-")
    v = np.linalg.solve(p.T, q.T).T  # V = Q P^{-1}
    w = spec.unitary.conj().T @ v
    m = w.shape[0]
    det_w = complex(np.linalg.det(w))
    det_gap = complex(np.linalg.det(np.eye(m) - w))
    root = np.sqrt(det_w)
    if abs(root - sqrt_ref) > abs(-root - sqrt_ref):
        root = -root
    g = det_gap / ((-2j) ** m * root)
    return float(g.real), root


def _boundary_condition_residual(spec: ExtensionSpec, lam: float) -> float:
    basis = solution_basis(spec.model, lam)
    mat = spec.triplet.boundary_matrix(basis, "-") - spec.unitary @ spec.triplet.boundary_matrix(
        basis, "+"
    )
    s = singular_values(mat)
    return float(s[-1] / s[0]) if s[0] > 0 else 0.0


def _gap_estimate(model: ModelOperator, lam: float) -> float:
    if model.kind == SCHRODINGER:
        length = model.lengths[0]
        unit = (math.pi / length) ** 2
        return unit + 2.0 * math.pi * math.sqrt(max(lam, 0.0)) / length
    return 2.0 * math.pi / sum(model.lengths)


def _scan_spectrum(
    spec: ExtensionSpec, window: Tuple[float, float], tols: Tolerances
) -> SpectralReport:
    lo, hi = window
    model = spec.model
    # grid at a safety-refined fraction of the local Dirichlet gap: the
    # nominal min(1, pi/4) * gap spacing resolves simple roots but not
    # branch continuation or near-degenerate pairs, so refine by 4x
    spacing_factor = 0.25 * min(1.0, math.pi / 4.0)
    grid = [lo]
    while grid[-1] < hi:
        step = spacing_factor * _gap_estimate(model, grid[-1])
        grid.append(min(grid[-1] + step, hi))
    values = np.empty(len(grid))
    branch = 1.0 + 0.0j
    branches: List[complex] = []
    for i, lam in enumerate(grid):
        values[i], branch = _phase_product(spec, lam, branch)
        branches.append(branch)

    roots: List[float] = []
    unresolved: List[Tuple[float, float]] = []

    def local_g(a_idx: int):
        ref = branches[a_idx]

        def g(lam: float) -> float:
            val, _ = _phase_product(spec, lam, ref)
            return val

        return g

    for i in range(len(grid) - 1):
        a, b = grid[i], grid[i + 1]
        fa, fb = values[i], values[i + 1]
        if fa == 0.0:
            roots.append(a)
            continue
        if fa * fb < 0.0:
            g = local_g(i)
            try:
                roots.append(float(brentq(g, a, b, xtol=tols.root_refine, rtol=1e-13)))
            except ValueError:
                unresolved.append((a, b))
    if values[-1] == 0.0:
        roots.append(grid[-1])

    # tangency pass: interior local minima of |g| without a sign change
    # flag double roots (or leave the subinterval unresolved)
    absvals = np.abs(values)
    for i in range(1, len(grid) - 1):
        if absvals[i] < absvals[i - 1] and absvals[i] < absvals[i + 1] and absvals[i] < 1e-4:
            if any(grid[i - 1] <= r <= grid[i + 1] for r in roots):
                continue
            g = local_g(i - 1)
            res = minimize_scalar(
                lambda lam: abs(g(lam)),
                bounds=(grid[i - 1], grid[i + 1]),
                method="bounded",
                options={"xatol": tols.root_refine},
            )
            lam0, g0 = float(res.x), float(res.fun)
            if g0 < 1e-9:
                roots.extend([lam0, lam0])  # double eigenvalue
            elif g0 < 1e-5:
                unresolved.append((grid[i - 1], grid[i + 1]))

    # verify accepted roots against the raw boundary condition
    accepted: List[float] = []
    worst = 0.0
    for lam in sorted(roots):
        resid = _boundary_condition_residual(spec, lam)
        if resid < 1e-6:
            accepted.append(lam)
            worst = max(worst, resid)
        else:
            unresolved.append((lam - tols.root_refine, lam + tols.root_refine))
    return SpectralReport(
        model_id=model.model_id,
        family_name=spec.family_name,
        window=(lo, hi),
        eigenvalues=tuple(accepted),
        blocks=tuple([-1] * len(accepted)),
        per_block_min_abs=None,
        residual_summary=worst,
        unresolved=tuple(unresolved),
    )


# ---------------------------------------------------------------------------
# Rayleigh-Ritz cross-check
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GalerkinResult:
    """Eigenvalues of the Rayleigh-Ritz pencil on a basis of D(T_U).

    ``hermiticity_residual`` bounds the quality of the projected
    operator matrix before hermitization (it vanishes when the basis
    satisfies the boundary condition exactly); ``gram_condition`` is the
    condition number of the mass matrix.
    """

    eigenvalues: np.ndarray
    hermiticity_residual: float
    gram_condition: float
    basis_size: int
    boundary_kernel_dim: int


def _pairing_matrix(
    model: ModelOperator, rows: Sequence[DomainElement], cols: Sequence[DomainElement]
) -> np.ndarray:
    """``P[i, j] = (rows_i, cols_j)_H`` assembled blockwise on nodes."""
    out = np.zeros((len(rows), len(cols)), dtype=complex)
    for k in range(model.block_count):
        rfun = [el.blocks[k] for el in rows]
        cfun = [el.blocks[k] for el in cols]
        if all(f.is_zero for f in rfun) or all(f.is_zero for f in cfun):
            continue
        wmax = max(f.max_freq for f in rfun) + max(f.max_freq for f in cfun)
        rule = model.rule(k, max_freq=wmax)
        phi_r = np.array([f.value(rule.nodes) for f in rfun])
        phi_c = np.array([f.value(rule.nodes) for f in cfun])
        out += (phi_r * rule.weights) @ phi_c.conj().T
    return out


def galerkin_basis(spec: ExtensionSpec, n: int, tols: Tolerances = DEFAULT_TOLS) -> Tuple[List[DomainElement], int]:
    """Basis of the truncated extension domain: interior modes plus the
    kernel of the boundary condition inside the +-i deficiency span."""
    model = spec.model
    basis = domain_basis(model, n)
    cands = deficiency_basis(model, 1j) + deficiency_basis(model, -1j)
    a, b = spec.condition_matrices()
    cond = a @ spec.triplet.boundary_matrix(cands, "1") - b @ spec.triplet.boundary_matrix(
        cands, "0"
    )
    kernel = nullspace(cond, tol=tols.rank_rel)
    for col in range(kernel.shape[1]):
        el = None
        for j, cand in enumerate(cands):
            if kernel[j, col] != 0:
                term = cand * kernel[j, col]
                el = term if el is None else el + term
        basis.append(el)
    return basis, kernel.shape[1]


def galerkin_spectrum(
    spec: ExtensionSpec, n: int, tols: Tolerances = DEFAULT_TOLS
) -> GalerkinResult:
    """Rayleigh-Ritz eigenvalues on the truncated extension domain.

    The stiffness matrix ``(T* b_i, b_j)_H`` is Hermitian up to
    quadrature error exactly because every basis element satisfies the
    self-adjoint boundary condition (Green identity); the residual before
    hermitization is reported as a quality bound.
    """
    model = spec.model
    basis, kdim = galerkin_basis(spec, n, tols)
    images = [el.t_star() for el in basis]
    stiff = _pairing_matrix(model, images, basis)
    mass = gram_matrix(model, basis)
    herm_res = float(
        np.linalg.norm(stiff - stiff.conj().T, 2) / max(1.0, np.linalg.norm(stiff, 2))
    )
    stiff = 0.5 * (stiff + stiff.conj().T)
    mass_ev = np.linalg.eigvalsh(mass)
    cond = float(mass_ev[-1] / mass_ev[0]) if mass_ev[0] > 0 else math.inf
    if not math.isfinite(cond) or cond > 1e12:
        raise StructuralError(
            f"Gram matrix condition {cond:.2e} too large for a reliable pencil; "
            f"reduce the interior mode count (n={n})"
        )
    pencil = hermitian_pencil_eig(stiff, mass, tols)
    return GalerkinResult(
        eigenvalues=pencil.eigenvalues,
        hermiticity_residual=herm_res,
        gram_condition=cond,
        basis_size=len(basis),
        boundary_kernel_dim=kdim,
    )


# ---------------------------------------------------------------------------
# compact-embedding probe
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EmbeddingReport:
    """Singular values of ``(D(T), graph norm) -> H`` at truncation n.

    ``slope`` and ``r_squared`` fit ``log sigma_k`` against ``log k``
    over the tail ``k in [max(4, n/4), n]``, where the asymptotic decay
    exponent dominates the small-k curvature.
    """

    sigmas: np.ndarray
    slope: float
    r_squared: float
    fit_range: Tuple[int, int]
    truncation: int


def embedding_singular_values(
    model: ModelOperator, n: int, tols: Tolerances = DEFAULT_TOLS
) -> EmbeddingReport:
    """Generalized singular values of the identity embedding.

    Solved through the inverted pencil (graph Gram, H Gram) whose mass
    matrix is well conditioned; the embedding singular values are the
    inverse square roots of its eigenvalues.
    """
    if n < 4:
        raise ContractError("embedding probe needs n >= 4")
    basis = domain_basis(model, n)
    mass = gram_matrix(model, basis)
    graph = mass + gram_matrix(model, [el.t_star() for el in basis])
    pencil = hermitian_pencil_eig(graph, mass, tols)
    mu = np.maximum(pencil.eigenvalues, 1e-300)
    sigmas = np.sort(1.0 / np.sqrt(mu))[::-1]
    k0 = max(4, len(sigmas) // 4)
    ks = np.arange(k0, len(sigmas) + 1)
    logs = np.log(sigmas[k0 - 1 :])
    logk = np.log(ks)
    slope, intercept = np.polyfit(logk, logs, 1)
    pred = slope * logk + intercept
    ss_res = float(np.sum((logs - pred) ** 2))
    ss_tot = float(np.sum((logs - np.mean(logs)) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return EmbeddingReport(
        sigmas=sigmas,
        slope=float(slope),
        r_squared=r2,
        fit_range=(k0, len(sigmas)),
        truncation=n,
    )


def regularity_margin(
    model: ModelOperator, lam: complex, n: int, tols: Tolerances = DEFAULT_TOLS
) -> float:
    """``min |(T - lam) x| / |x|`` over the D(T) truncation.

    The square root of the smallest eigenvalue of the pencil formed by
    the Gram of the ``(T - lam)``-images against the H Gram.  For
    ``Im lam != 0`` this sits above ``|Im lam|``; for real ``lam`` a
    positive stable value witnesses regularity of the model.
    """
    if n < 4:
        raise ContractError("regularity margin needs n >= 4")
    basis = domain_basis(model, n)
    images = [el.t_star() - el * lam for el in basis]
    a = gram_matrix(model, images)
    b = gram_matrix(model, basis)
    pencil = hermitian_pencil_eig(a, b, tols)
    return float(math.sqrt(max(pencil.eigenvalues[0], 0.0)))


# ---------------------------------------------------------------------------
# relative dimension and index checks
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SubspacePair:
    """Two orthonormal column families in a common coordinate space."""

    w1: np.ndarray
    w2: np.ndarray

    def __post_init__(self):
        for name, w in (("w1", self.w1), ("w2", self.w2)):
            if w.ndim != 2:
                raise StructuralError(f"{name} must be a 2-D array of columns")
            if w.shape[1]:
                defect = float(np.max(np.abs(w.conj().T @ w - np.eye(w.shape[1]))))
                if defect > 1e-10:
                    raise StructuralError(f"{name} columns are not orthonormal: {defect:.3e}")
        if self.w1.shape[0] != self.w2.shape[0]:
            raise StructuralError("subspaces live in different ambient dimensions")

    @property
    def ambient(self) -> int:
        return self.w1.shape[0]


@dataclass(frozen=True)
class RelativeDimensionReport:
    """``dim(W2 cap W1_perp) - codim(W2 + W1_perp)`` with both terms."""

    value: int
    dim_intersection: int
    codim_sum: int
    ambiguous: bool


def relative_dimension(
    pair: SubspacePair, tols: Tolerances = DEFAULT_TOLS
) -> RelativeDimensionReport:
    """Relative dimension from numerical ranks at the shared tolerance.

    Rank decisions falling within a factor ``tols.rank_ambiguity_factor``
    of the threshold mark the result ambiguous rather than silently
    resolving it.
    """
    d = pair.ambient
    k1 = pair.w1.shape[1]
    k2 = pair.w2.shape[1]
    if k1 == 0:
        perp = np.eye(d, dtype=complex)
    else:
        perp = nullspace(pair.w1.conj().T, tol=tols.rank_rel)
    stacked = np.column_stack([pair.w2, perp]) if (k2 + perp.shape[1]) else np.zeros((d, 0))
    if stacked.shape[1] == 0:
        rank, amb = 0, False
    else:
        rank, amb = numerical_rank(
            singular_values(stacked), tols.rank_rel, tols.rank_ambiguity_factor
        )
    dim_int = k2 + perp.shape[1] - rank
    codim = d - rank
    return RelativeDimensionReport(
        value=dim_int - codim, dim_intersection=dim_int, codim_sum=codim, ambiguous=amb
    )


@dataclass(frozen=True)
class IndexReport:
    """Kernel/cokernel data of the Weyl-function derivative truncation."""

    lam: complex
    dim_kernel: int
    dim_cokernel: int
    index: int
    min_singular_rel: float
    ambiguous: bool

    @property
    def kernel_empty(self) -> bool:
        return self.dim_kernel == 0


def index_check_M_prime(
    triplet: BoundaryTriplet, lam: complex, tols: Tolerances = DEFAULT_TOLS
) -> IndexReport:
    """Index data of ``M'(lam) = gamma(conj lam)* gamma(lam)``.

    On a finite square truncation the index is forced to zero; the
    substantive check is that the kernel is empty (the Gram structure of
    the derivative makes it positive definite at lam = i), consistent
    with a vanishing relative dimension of the deficiency pair.
    """
    mp = weyl_derivative_gram(triplet, lam, tols)
    s = singular_values(mp)
    rank, amb = numerical_rank(s, tols.rank_rel, tols.rank_ambiguity_factor)
    m = mp.shape[0]
    return IndexReport(
        lam=complex(lam),
        dim_kernel=m - rank,
        dim_cokernel=m - rank,
        index=(m - rank) - (m - rank),
        min_singular_rel=float(s[-1] / s[0]) if s[0] > 0 else 0.0,
        ambiguous=amb,
    )


# ---------------------------------------------------------------------------
# compact-resolvent trend experiments
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CompactnessTrend:
    """Per-block minimal eigenvalues across truncation levels for one
    block-phase family on the direct-sum model.

    ``series`` maps each truncation level K to the plot-ready list of
    ``(k, lambda_min_k)`` pairs (1-based block index).  ``tail_profile``
    is ``|u_k - 1|`` at the largest K; ``zero_multiplicity`` counts
    blocks whose phase pins an exact zero eigenvalue.  ``slope`` and
    ``r_squared`` fit ``lambda_min_k`` linearly in ``k`` over the upper
    tail at the largest K (a diverging, well-fit line is the
    compact-resolvent proxy; a bounded series is the non-compact proxy).
    """

    family_name: str
    k_levels: Tuple[int, ...]
    series: Tuple[Tuple[int, Tuple[Tuple[int, float], ...]], ...]
    tail_profile: Tuple[float, ...]
    u_minus_id_norm: float
    zero_multiplicity: int
    slope: float
    r_squared: float
    fit_range: Tuple[int, int]


def compactness_report(
    family: UnitaryFamily | str,
    k_levels: Sequence[int],
    tols: Tolerances = DEFAULT_TOLS,
    fit_start: int = 8,
) -> CompactnessTrend:
    """Trend report for block-phase families on the direct-sum model.

    For each truncation level K the model has momentum blocks of length
    ``1/k`` with the regularized triplet; the family must be
    block-diagonal.  The per-block minimal ``|eigenvalue|`` follows from
    the exact phase algebra, so the sweep is cheap at any K.
    """
    fam = parse_family(family) if isinstance(family, str) else family
    if not fam.is_block_diagonal:
        raise ConfigError(f"family {fam.name!r} is not block-diagonal; trend sweep unsupported")
    levels = tuple(sorted(int(k) for k in k_levels))
    series = []
    last_mins: np.ndarray | None = None
    last_u: np.ndarray | None = None
    zero_mult = 0
    for K in levels:
        lengths = direct_sum_lengths(K)
        scales = tuple(math.sqrt(math.tanh(l / 2.0)) for l in lengths)
        u_vals = fam.block_values(K)
        mins = np.empty(K)
        zero_mult = 0
        for idx in range(K):
            w = block_phase(u_vals[idx], scales[idx])
            theta = _angle(w)
            mins[idx] = abs(theta) / lengths[idx]
            if abs(w - 1.0) < 1e-12:
                zero_mult += 1
        series.append((K, tuple((idx + 1, float(mins[idx])) for idx in range(K))))
        last_mins = mins
        last_u = u_vals
    kmax = levels[-1]
    start = min(fit_start, max(1, kmax // 2))
    ks = np.arange(start, kmax + 1, dtype=float)
    ys = last_mins[start - 1 :]
    slope, intercept = np.polyfit(ks, ys, 1)
    pred = slope * ks + intercept
    ss_res = float(np.sum((ys - pred) ** 2))
    ss_tot = float(np.sum((ys - np.mean(ys)) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return CompactnessTrend(
        family_name=fam.name,
        k_levels=levels,
        series=tuple(series),
        tail_profile=tuple(float(abs(u - 1.0)) for u in last_u),
        u_minus_id_norm=float(np.max(np.abs(last_u - 1.0))),
        zero_multiplicity=zero_mult,
        slope=float(slope),
        r_squared=r2,
        fit_range=(start, kmax),
    )


# ---------------------------------------------------------------------------
# Kuiper-type obstruction check
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class KuiperReport:
    """Invertibility margins of ``(e^{iA} + Id)/2`` and ``-e^{iA} - Id``
    over seeded random Hermitian ``A`` with ``|A| < ln 3``.

    Positive minima certify (at every finite truncation) that the
    parameters near ``-Id`` keep ``U - Id`` boundedly invertible, hence
    never compact.
    """

    trials: int
    dim: int
    seed: int
    min_sv_half_sum: float
    min_sv_minus: float
    max_exp_bound_defect: float

    @property
    def all_positive(self) -> bool:
        return self.min_sv_half_sum > 0.0 and self.min_sv_minus > 0.0


def kuiper_check(
    trials: int = 100, dim: int = 8, seed: int = 7, max_norm: float | None = None
) -> KuiperReport:
    """Seeded sweep of the near-minus-identity obstruction.

    Each trial draws a Hermitian ``A`` rescaled to a random operator
    norm strictly below ``ln 3``, forms ``U = e^{iA}``, and records the
    smallest singular values of ``(U + Id)/2`` and ``-U - Id`` together
    with the defect of the bound ``|e^{iA} - Id| <= e^{|A|} - 1``.
    """
    bound = math.log(3.0) if max_norm is None else max_norm
    rng = np.random.default_rng(seed)
    min_half = math.inf
    min_minus = math.inf
    worst_defect = -math.inf
    eye = np.eye(dim)
    for _ in range(trials):
        target = bound * rng.uniform(0.05, 0.98)
        g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        a = 0.5 * (g + g.conj().T)
        a *= target / np.linalg.norm(a, 2)
        u = unitary_exp(a)
        min_half = min(min_half, float(singular_values(0.5 * (u + eye))[-1]))
        min_minus = min(min_minus, float(singular_values(-u - eye)[-1]))
        defect = float(np.linalg.norm(u - eye, 2)) - (math.exp(target) - 1.0)
        worst_defect = max(worst_defect, defect)
    return KuiperReport(
        trials=trials,
        dim=dim,
        seed=seed,
        min_sv_half_sum=min_half,
        min_sv_minus=min_minus,
        max_exp_bound_defect=worst_defect,
    )
