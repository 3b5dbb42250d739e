"""Centralized tolerance configuration.

Every numerical contract in the toolkit draws its threshold from a single
`Tolerances` record so that acceptance runs can be audited (and tightened
or relaxed) in one place.  The defaults are chosen so that quadrature and
dense linear algebra stay at least two orders of magnitude below each
stated contract.
"""

from __future__ import annotations

from dataclasses import dataclass, replace


@dataclass(frozen=True)
class Tolerances:
    """Shared numerical thresholds.

    Attributes
    ----------
    hermiticity : float
        Max relative defect ``|A - A^H| / max(1, |A|)`` accepted before a
        matrix is rejected as non-Hermitian.
    unitarity : float
        Max ``|U^H U - Id|`` for unitary parameters.
    green : float
        Green-identity residual certified for shipped boundary triplets.
    orthonormality : float
        Off-diagonal Gram residual after orthonormalization.
    pencil_residual : float
        Scale factor of the generalized-eigenpair residual bound
        ``|A v - lam B v| <= pencil_residual * (|A| + |lam| |B|)``.
    rank_rel : float
        Relative singular-value threshold for numerical rank / kernel
        decisions (relative to the largest singular value).
    rank_ambiguity_factor : float
        A rank decision is flagged ambiguous when some singular value lies
        within this factor of the threshold.
    positivity : float
        Relative floor for declaring a Hermitian matrix positive definite.
    boundary_solve : float
        Relative conditioning floor for boundary-value linear systems; a
        smaller least singular value means "lambda sits in the spectrum of
        the reference extension".
    resolvent : float
        Residual contract for resolvent and Krein-formula checks.
    eigenvalue_imag : float
        Largest tolerated imaginary part of a reported eigenvalue.
    root_refine : float
        Absolute refinement target of bracketed eigenvalue root finding.
    """

    hermiticity: float = 1e-10
    unitarity: float = 1e-10
    green: float = 1e-10
    orthonormality: float = 1e-10
    pencil_residual: float = 1e-8
    rank_rel: float = 1e-9
    rank_ambiguity_factor: float = 10.0
    positivity: float = 1e-12
    boundary_solve: float = 1e-12
    resolvent: float = 1e-8
    eigenvalue_imag: float = 1e-8
    root_refine: float = 1e-10

    def with_overrides(self, **kwargs: float) -> "Tolerances":
        """Return a copy with the given fields replaced."""
        return replace(self, **kwargs)


DEFAULT_TOLS = Tolerances()

#: Gauss-Legendre points per unit interval length used by default for all
#: inner products; analytic integrands make this generous.
QUAD_POINTS_PER_UNIT_LENGTH = 64

#: Floor on the number of quadrature points for very short blocks.
QUAD_MIN_POINTS = 16
