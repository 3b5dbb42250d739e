"""Concrete simple symmetric model operators with closed-form structure.

Three families are provided, all on finite intervals ``(0, l)``:

* ``momentum``: ``T f = -i f'`` with ``f(0) = f(l) = 0``; deficiency
  indices (1, 1).
* ``schrodinger``: ``T f = -f''`` with ``f = f' = 0`` at both endpoints;
  deficiency indices (2, 2).
* ``direct-sum``: an orthogonal sum of momentum blocks with lengths
  ``l_1, ..., l_K``, emulating deficiency indices (K, K); the default
  length schedule ``l_k = 1/k`` makes the graph-norm embedding compact
  with an explicitly decaying singular-value profile.

Domain elements are exact closed forms (:class:`saext.funcspace.ExpSum`),
so adjoint actions and boundary values carry no discretization error;
inner products are evaluated by Gauss-Legendre quadrature whose order is
chosen from the oscillation content of the integrand.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, List, Sequence, Tuple

import numpy as np

from .config import DEFAULT_TOLS, Tolerances
from .errors import ConfigError, StructuralError
from .funcspace import ExpSum, linear_combination
from .numerics import gauss_legendre, default_quad_order, required_quad_order

__all__ = [
    "ModelOperator",
    "DomainElement",
    "TruncationConfig",
    "build_model",
    "direct_sum_lengths",
    "inner_l2",
    "inner_graph",
    "apply_T_star",
    "deficiency_basis",
    "orthonormal_deficiency_basis",
    "solution_basis",
    "domain_basis",
    "boundary_values",
    "von_neumann_check",
    "gram_matrix",
    "graph_gram_matrix",
    "random_element",
]

MOMENTUM = "momentum"
SCHRODINGER = "schrodinger"
DIRECT_SUM = "direct-sum"

_KINDS = (MOMENTUM, SCHRODINGER, DIRECT_SUM)


@dataclass(frozen=True)
class ModelOperator:
    """A symmetric model operator; immutable after construction."""

    kind: str
    lengths: Tuple[float, ...]
    quad_order: int | None = None  # override; None = automatic

    @property
    def block_count(self) -> int:
        return len(self.lengths)

    @property
    def deficiency_index(self) -> int:
        """The (equal) deficiency index n = n+ = n-."""
        if self.kind == SCHRODINGER:
            return 2
        return self.block_count

    @property
    def block_order(self) -> int:
        """Order of the differential expression (1 or 2)."""
        return 2 if self.kind == SCHRODINGER else 1

    @property
    def model_id(self) -> str:
        if self.kind == DIRECT_SUM:
            return f"dsum-K{self.block_count}"
        return f"{self.kind}-l{self.lengths[0]:g}"

    def t_star_block(self, f: ExpSum) -> ExpSum:
        """Adjoint action on one block: ``-i f'`` or ``-f''``."""
        if self.kind == SCHRODINGER:
            return -1.0 * f.derivative().derivative()
        return -1j * f.derivative()

    def rule(self, block: int, max_freq: float = 0.0):
        length = self.lengths[block]
        order = self.quad_order or max(
            default_quad_order(length), required_quad_order(max_freq, length)
        )
        return gauss_legendre(length, order)


def build_model(kind: str, lengths: Sequence[float] | float) -> ModelOperator:
    """Validate and build a model operator.

    ``lengths`` is a single positive float for the single-interval kinds
    and a sequence of positive floats (one per block) for direct sums.
    """
    if kind not in _KINDS:
        raise ConfigError(f"unknown model kind {kind!r}; expected one of {_KINDS}")
    if isinstance(lengths, (int, float)):
        lengths = (float(lengths),)
    lens = tuple(float(l) for l in lengths)
    if not lens:
        raise ConfigError("at least one interval length is required")
    if any(l <= 0 for l in lens):
        raise ConfigError(f"interval lengths must be positive, got {lens}")
    if kind in (MOMENTUM, SCHRODINGER) and len(lens) != 1:
        raise ConfigError(f"{kind} model takes a single interval, got {len(lens)}")
    return ModelOperator(kind=kind, lengths=lens)


def direct_sum_lengths(block_count: int) -> Tuple[float, ...]:
    """Default direct-sum length schedule ``l_k = 1/k``."""
    if block_count < 1:
        raise ConfigError("block count must be >= 1")
    return tuple(1.0 / k for k in range(1, block_count + 1))


@dataclass(frozen=True)
class TruncationConfig:
    """Finite-truncation parameters for domain bases and spectra."""

    interior_modes: int = 64
    quad_order: int | None = None
    window: Tuple[float, float] = (-50.0, 50.0)

    def __post_init__(self):
        if self.interior_modes < 1:
            raise ConfigError("interior mode count must be >= 1")
        if not self.window[0] < self.window[1]:
            raise ConfigError(f"empty spectral window {self.window}")


# ---------------------------------------------------------------------------
# domain elements
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DomainElement:
    """An element of the representation subspace of ``D(T*)``.

    Holds one exact closed-form function per block.  The coefficients of
    each block over its exponential atoms are the element's coordinates;
    evaluation and adjoint action are exact.
    """

    model: ModelOperator
    blocks: Tuple[ExpSum, ...]
    label: str = ""

    def __post_init__(self):
        if len(self.blocks) != self.model.block_count:
            raise StructuralError(
                f"element has {len(self.blocks)} blocks, model has {self.model.block_count}"
            )

    def value(self, t, block: int = 0):
        return self.blocks[block].value(t)

    def derivative_value(self, t, block: int = 0):
        return self.blocks[block].derivative().value(t)

    def t_star(self) -> "DomainElement":
        return DomainElement(
            self.model,
            tuple(self.model.t_star_block(b) for b in self.blocks),
            label=f"T*({self.label})" if self.label else "",
        )

    def __add__(self, other: "DomainElement") -> "DomainElement":
        _require_same_model(self, other)
        return DomainElement(self.model, tuple(a + b for a, b in zip(self.blocks, other.blocks)))

    def __sub__(self, other: "DomainElement") -> "DomainElement":
        _require_same_model(self, other)
        return DomainElement(self.model, tuple(a - b for a, b in zip(self.blocks, other.blocks)))

    def __mul__(self, c) -> "DomainElement":
        return DomainElement(self.model, tuple(b * c for b in self.blocks), label=self.label)

    __rmul__ = __mul__

    @property
    def max_freq(self) -> float:
        return max((b.max_freq for b in self.blocks), default=0.0)

    @property
    def is_zero(self) -> bool:
        return all(b.is_zero for b in self.blocks)


def _require_same_model(x: DomainElement, y: DomainElement) -> None:
    if x.model != y.model:
        raise StructuralError("domain elements belong to different models")


def single_block_element(model: ModelOperator, block: int, f: ExpSum, label: str = "") -> DomainElement:
    blocks = [ExpSum.zero()] * model.block_count
    blocks[block] = f
    return DomainElement(model, tuple(blocks), label=label)


# ---------------------------------------------------------------------------
# inner products
# ---------------------------------------------------------------------------


def inner_l2(x: DomainElement, y: DomainElement) -> complex:
    """Ambient inner product ``(x, y)_H = sum_k int_0^{l_k} x conj(y)``.

    Linear in the first argument, conjugate-linear in the second.
    Evaluated blockwise by Gauss-Legendre quadrature at an order
    sufficient for the oscillation content of the pair.
    """
    _require_same_model(x, y)
    total = 0.0 + 0.0j
    for k in range(x.model.block_count):
        xb, yb = x.blocks[k], y.blocks[k]
        if xb.is_zero or yb.is_zero:
            continue
        rule = x.model.rule(k, max_freq=xb.max_freq + yb.max_freq)
        total += rule.integrate(xb.value(rule.nodes) * np.conj(yb.value(rule.nodes)))
    return total


def inner_graph(x: DomainElement, y: DomainElement) -> complex:
    """Graph inner product ``(x, y)_H + (T*x, T*y)_H``."""
    return inner_l2(x, y) + inner_l2(x.t_star(), y.t_star())


def norm_l2(x: DomainElement) -> float:
    return math.sqrt(max(inner_l2(x, x).real, 0.0))


def apply_T_star(x: DomainElement) -> DomainElement:
    """Adjoint action, exact at the coefficient level."""
    return x.t_star()


# ---------------------------------------------------------------------------
# bases
# ---------------------------------------------------------------------------


def deficiency_basis(model: ModelOperator, lam: complex) -> List[DomainElement]:
    """Closed-form basis of ``ker(T* - lam)``.

    Momentum blocks contribute ``exp(i lam t)`` each; the Schrodinger
    model contributes ``cos(s t)`` and ``sin(s t)`` with ``s`` the
    principal square root of ``lam`` (branch cut on the negative real
    axis).  Real ``lam`` is permitted for diagnostics since the models
    are regular.
    """
    lam = complex(lam)
    out: List[DomainElement] = []
    if model.kind == SCHRODINGER:
        s = np.sqrt(lam)
        if s == 0:
            sol = [ExpSum.one(), ExpSum.monomial(1)]
        else:
            sol = [ExpSum.cosine(s), ExpSum.sine(s)]
        for j, f in enumerate(sol):
            out.append(DomainElement(model, (f,), label=f"defect({lam:g})[{j}]"))
        return out
    for k in range(model.block_count):
        out.append(
            single_block_element(model, k, ExpSum.exp(lam), label=f"defect({lam:g})[block {k}]")
        )
    return out


def solution_basis(model: ModelOperator, lam: complex) -> List[DomainElement]:
    """Fundamental system of ``T* f = lam f`` that is entire in ``lam``.

    Same span as :func:`deficiency_basis` but, for the Schrodinger model,
    uses ``cos(s t)`` and ``sin(s t)/s`` so that the pair stays a
    nondegenerate fundamental system through ``lam = 0``.  Used by the
    real-axis spectral scans.
    """
    lam = complex(lam)
    if model.kind == SCHRODINGER:
        s = np.sqrt(lam)
        sol = [ExpSum.cosine(s), ExpSum.sinc_scaled(s)]
        return [DomainElement(model, (f,)) for f in sol]
    return deficiency_basis(model, lam)


def orthonormal_deficiency_basis(model: ModelOperator, lam: complex) -> List[DomainElement]:
    """H-orthonormal basis of ``ker(T* - lam)``.

    Blocks of a direct sum are mutually orthogonal already; the
    Schrodinger cos/sin pair needs one Gram-Schmidt sweep.
    """
    basis = deficiency_basis(model, lam)
    out: List[DomainElement] = []
    for el in basis:
        nrm = math.sqrt(inner_l2(el, el).real)
        out.append(el * (1.0 / nrm))
    if model.kind == SCHRODINGER:
        first, second = out
        second = second - first * inner_l2(second, first)
        nrm = math.sqrt(inner_l2(second, second).real)
        out = [first, second * (1.0 / nrm)]
    return out


def domain_basis(model: ModelOperator, n: int) -> List[DomainElement]:
    """Finite truncation of ``D(T)``: ``n`` interior modes per block.

    Momentum blocks use ``sin(k pi t / l)``, which vanish at both
    endpoints.  The Schrodinger model uses ``sin(k pi t / l) *
    sin(pi t / l)**2``, whose value and first derivative vanish at both
    endpoints; the products expand exactly into a short sine series.
    """
    if n < 1:
        raise ConfigError("domain basis needs n >= 1")
    out: List[DomainElement] = []
    for b in range(model.block_count):
        length = model.lengths[b]
        base = math.pi / length
        if model.kind == SCHRODINGER:
            envelope = ExpSum.sine(base) * ExpSum.sine(base)
            for k in range(1, n + 1):
                f = ExpSum.sine(k * base) * envelope
                out.append(single_block_element(model, b, f, label=f"interior[{b},{k}]"))
        else:
            for k in range(1, n + 1):
                f = ExpSum.sine(k * base)
                out.append(single_block_element(model, b, f, label=f"interior[{b},{k}]"))
    return out


def boundary_values(x: DomainElement) -> List[np.ndarray]:
    """Exact per-block boundary data.

    Momentum blocks: ``(f(0), f(l))``.  Schrodinger: ``(f(0), f(l),
    f'(0), f'(l))``.  Evaluated from the closed forms, no quadrature.
    """
    data: List[np.ndarray] = []
    for k in range(x.model.block_count):
        f = x.blocks[k]
        length = x.model.lengths[k]
        if x.model.kind == SCHRODINGER:
            df = f.derivative()
            data.append(
                np.array([f.value(0.0), f.value(length), df.value(0.0), df.value(length)])
            )
        else:
            data.append(np.array([f.value(0.0), f.value(length)]))
    return data


# ---------------------------------------------------------------------------
# Gram assembly
# ---------------------------------------------------------------------------


def gram_matrix(model: ModelOperator, basis: Sequence[DomainElement]) -> np.ndarray:
    """Hermitian Gram matrix ``G[i, j] = (b_i, b_j)_H``.

    Assembled blockwise from node evaluations so that an n-element basis
    costs one matrix product per block rather than n^2 quadratures.
    """
    n = len(basis)
    gram = np.zeros((n, n), dtype=complex)
    for k in range(model.block_count):
        funcs = [el.blocks[k] for el in basis]
        if all(f.is_zero for f in funcs):
            continue
        wmax = max(f.max_freq for f in funcs)
        rule = model.rule(k, max_freq=2.0 * wmax)
        phi = np.array([f.value(rule.nodes) for f in funcs])
        gram += (phi * rule.weights) @ phi.conj().T
    return 0.5 * (gram + gram.conj().T)


def graph_gram_matrix(model: ModelOperator, basis: Sequence[DomainElement]) -> np.ndarray:
    """Gram matrix in the graph inner product."""
    images = [el.t_star() for el in basis]
    return gram_matrix(model, basis) + gram_matrix(model, images)


def graph_gram_condition(model: ModelOperator, basis: Sequence[DomainElement]) -> float:
    """Condition number of the graph Gram of a basis (conditioning report)."""
    g = graph_gram_matrix(model, basis)
    ev = np.linalg.eigvalsh(g)
    if ev[0] <= 0:
        return math.inf
    return float(ev[-1] / ev[0])


# ---------------------------------------------------------------------------
# decomposition diagnostics
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class VonNeumannReport:
    """Cross graph-inner-products between the orthogonal pieces of D(T*)."""

    max_cross: float
    worst_pair: Tuple[str, str]
    pair_count: int

    def ok(self, tol: float = DEFAULT_TOLS.orthonormality) -> bool:
        return self.max_cross < tol


def von_neumann_check(model: ModelOperator, n: int, tols: Tolerances = DEFAULT_TOLS) -> VonNeumannReport:
    """Verify graph-orthogonality of D(T) modes, ker(T*-i), ker(T*+i).

    All pairwise graph inner products between the three spaces (and
    between the two deficiency spaces) must vanish; the worst offender is
    reported.  Raises :class:`DiagnosticError` only on request of the
    caller -- here the report is returned for inspection.
    """
    interior = domain_basis(model, n)
    plus = deficiency_basis(model, 1j)
    minus = deficiency_basis(model, -1j)
    worst = 0.0
    worst_pair = ("", "")
    count = 0
    groups = [(interior, plus), (interior, minus), (plus, minus)]
    for left, right in groups:
        for x in left:
            for y in right:
                val = abs(inner_graph(x, y))
                count += 1
                if val > worst:
                    worst = val
                    worst_pair = (x.label, y.label)
    return VonNeumannReport(max_cross=worst, worst_pair=worst_pair, pair_count=count)


def random_element(
    model: ModelOperator,
    rng: np.random.Generator,
    n_interior: int = 4,
    lams: Iterable[complex] = (1j, -1j),
) -> DomainElement:
    """Random element of the representation subspace (interior modes plus
    deficiency directions at the given spectral points)."""
    basis = domain_basis(model, n_interior)
    for lam in lams:
        basis.extend(deficiency_basis(model, lam))
    coeff = rng.standard_normal(len(basis)) + 1j * rng.standard_normal(len(basis))
    blocks = []
    for k in range(model.block_count):
        blocks.append(linear_combination(coeff, [el.blocks[k] for el in basis]))
    return DomainElement(model, tuple(blocks))
