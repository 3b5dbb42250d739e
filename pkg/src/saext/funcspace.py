"""Exact closed-form functions on an interval.

All model-operator computations run on finite sums of terms

    c * t**p * exp(i z t),        c, z complex, p a nonnegative integer.

This family is closed under differentiation, antidifferentiation,
products, and complex conjugation, so adjoint actions (-i f' and -f''),
boundary values, integrating-factor resolvents, and definite integrals
are all evaluated without discretization error.  Quadrature enters only
through the inner products in :mod:`saext.models`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Tuple, Union

import numpy as np

Scalar = Union[int, float, complex]

_ZERO_DROP = 0.0  # coefficients are dropped only when exactly zero


def _canonical(terms: Mapping[Tuple[complex, int], complex]) -> tuple:
    kept = {}
    for (z, p), c in terms.items():
        z = complex(z)
        c = complex(c)
        p = int(p)
        if p < 0:
            raise ValueError("polynomial power must be >= 0")
        if c == _ZERO_DROP:
            continue
        key = (z, p)
        kept[key] = kept.get(key, 0.0 + 0.0j) + c
    items = [(z, p, c) for (z, p), c in kept.items() if c != _ZERO_DROP]
    items.sort(key=lambda item: (item[0].real, item[0].imag, item[1]))
    return tuple(items)


@dataclass(frozen=True)
class ExpSum:
    """A finite sum ``sum_k c_k * t**p_k * exp(i z_k t)``.

    `terms` is a canonically sorted tuple of ``(z, p, c)`` triples.
    Instances are immutable and all operations return new instances.
    """

    terms: Tuple[Tuple[complex, int, complex], ...] = ()

    # -- constructors ------------------------------------------------------

    @staticmethod
    def from_terms(terms: Mapping[Tuple[complex, int], complex]) -> "ExpSum":
        return ExpSum(_canonical(terms))

    @staticmethod
    def zero() -> "ExpSum":
        return ExpSum(())

    @staticmethod
    def exp(z: Scalar, coeff: Scalar = 1.0) -> "ExpSum":
        """``coeff * exp(i z t)``."""
        return ExpSum.from_terms({(complex(z), 0): complex(coeff)})

    @staticmethod
    def monomial(p: int, coeff: Scalar = 1.0) -> "ExpSum":
        """``coeff * t**p``."""
        return ExpSum.from_terms({(0.0 + 0.0j, p): complex(coeff)})

    @staticmethod
    def one() -> "ExpSum":
        return ExpSum.monomial(0)

    @staticmethod
    def sine(omega: Scalar, coeff: Scalar = 1.0) -> "ExpSum":
        """``coeff * sin(omega t)`` (valid for complex omega)."""
        w = complex(omega)
        c = complex(coeff)
        return ExpSum.from_terms({(w, 0): c / 2j, (-w, 0): -c / 2j})

    @staticmethod
    def cosine(omega: Scalar, coeff: Scalar = 1.0) -> "ExpSum":
        """``coeff * cos(omega t)`` (valid for complex omega)."""
        w = complex(omega)
        c = complex(coeff)
        return ExpSum.from_terms({(w, 0): c / 2, (-w, 0): c / 2})

    @staticmethod
    def sinc_scaled(omega: Scalar, coeff: Scalar = 1.0) -> "ExpSum":
        """``coeff * sin(omega t) / omega``, continued to ``t`` at omega=0.

        This is the entire-in-``omega**2`` companion of :meth:`cosine`;
        together they form a fundamental system of ``-f'' = omega**2 f``
        that stays nondegenerate through ``omega -> 0``.
        """
        w = complex(omega)
        if w == 0:
            return ExpSum.monomial(1, coeff)
        return ExpSum.sine(w, complex(coeff) / w)

    # -- evaluation --------------------------------------------------------

    def __call__(self, t):
        return self.value(t)

    def value(self, t):
        """Evaluate at a scalar or ndarray of points."""
        arr = np.asarray(t, dtype=float)
        out = np.zeros(arr.shape, dtype=complex)
        for z, p, c in self.terms:
            term = c * np.exp(1j * z * arr)
            if p:
                term = term * arr**p
            out += term
        if np.ndim(t) == 0:
            return complex(out)
        return out

    # -- calculus ----------------------------------------------------------

    def derivative(self) -> "ExpSum":
        terms: dict = {}
        for z, p, c in self.terms:
            _acc(terms, (z, p), c * 1j * z)
            if p:
                _acc(terms, (z, p - 1), c * p)
        return ExpSum.from_terms(terms)

    def antiderivative(self) -> "ExpSum":
        """An antiderivative (no normalization of the constant term)."""
        terms: dict = {}
        for z, p, c in self.terms:
            _antiderivative_term(terms, z, p, c)
        return ExpSum.from_terms(terms)

    def integrate(self, a: float, b: float) -> complex:
        """Exact definite integral over ``[a, b]``."""
        F = self.antiderivative()
        return complex(F.value(b) - F.value(a))

    def conj(self) -> "ExpSum":
        terms = {(-z.conjugate(), p): c.conjugate() for z, p, c in self.terms}
        return ExpSum.from_terms(terms)

    # -- algebra -----------------------------------------------------------

    def __add__(self, other: "ExpSum") -> "ExpSum":
        terms: dict = {}
        for z, p, c in self.terms:
            _acc(terms, (z, p), c)
        for z, p, c in other.terms:
            _acc(terms, (z, p), c)
        return ExpSum.from_terms(terms)

    def __sub__(self, other: "ExpSum") -> "ExpSum":
        return self + (-other)

    def __neg__(self) -> "ExpSum":
        return self * (-1.0)

    def __mul__(self, other):
        if isinstance(other, ExpSum):
            terms: dict = {}
            for z1, p1, c1 in self.terms:
                for z2, p2, c2 in other.terms:
                    _acc(terms, (z1 + z2, p1 + p2), c1 * c2)
            return ExpSum.from_terms(terms)
        return ExpSum.from_terms({(z, p): c * complex(other) for z, p, c in self.terms})

    def __rmul__(self, other: Scalar) -> "ExpSum":
        return self * other

    # -- diagnostics -------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def max_freq(self) -> float:
        """Largest ``|z|`` over the terms; drives quadrature order choices."""
        if not self.terms:
            return 0.0
        return max(abs(z) for z, _, _ in self.terms)

    def __repr__(self) -> str:  # compact debugging aid
        if not self.terms:
            return "ExpSum(0)"
        bits = []
        for z, p, c in self.terms[:4]:
            tp = f"t^{p}*" if p else ""
            bits.append(f"({c:.3g})*{tp}e^(i({z:.3g})t)")
        if len(self.terms) > 4:
            bits.append(f"...+{len(self.terms) - 4} terms")
        return "ExpSum(" + " + ".join(bits) + ")"


def _acc(terms: dict, key, c) -> None:
    terms[key] = terms.get(key, 0.0 + 0.0j) + c


def _antiderivative_term(terms: dict, z: complex, p: int, c: complex) -> None:
    # integral of c t^p e^{izt}: by parts for z != 0, power rule otherwise
    if z == 0:
        _acc(terms, (z, p + 1), c / (p + 1))
        return
    k = p
    coeff = c
    while True:
        _acc(terms, (z, k), coeff / (1j * z))
        if k == 0:
            break
        coeff = -coeff * k / (1j * z)
        k -= 1


def linear_combination(coeffs: Iterable[Scalar], funcs: Iterable[ExpSum]) -> ExpSum:
    """``sum_j coeffs[j] * funcs[j]`` as a single ExpSum."""
    out = ExpSum.zero()
    for c, f in zip(coeffs, funcs):
        if c != 0:
            out = out + f * c
    return out
