"""Named unitary-parameter families.

The extension parameter ``U`` is an ``m x m`` unitary matrix.  Families
are named by compact strings so experiment configs stay declarative:

* ``identity`` / ``minus-identity`` -- ``+Id`` / ``-Id``;
* ``phase:<beta>`` -- ``exp(i beta) Id`` (blockwise constant phase);
  ``<beta>`` accepts plain floats or ``pi`` fractions like ``pi/3``,
  ``-pi/2``;
* ``phase-seq:<rule>`` -- block-diagonal ``diag(u_k)`` with a per-block
  phase rule; rules: ``pi-over-k`` (``u_k = exp(i pi / k)``);
* ``exp-hermitian:<seed>,<norm>`` -- ``exp(iA)`` for a seeded random
  Hermitian ``A`` rescaled to operator norm ``<norm>``;
* ``haar:<seed>`` -- a seeded Haar-distributed unitary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .numerics import unitary_exp

__all__ = ["UnitaryFamily", "parse_family", "haar_unitary", "random_hermitian"]


def _parse_angle(text: str) -> float:
    """Parse ``pi`` fractions and plain floats: ``pi``, ``-pi/2``, ``0.7``."""
    s = text.strip().lower().replace(" ", "")
    sign = 1.0
    if s.startswith("-"):
        sign = -1.0
        s = s[1:]
    if s == "pi":
        return sign * math.pi
    if s.startswith("pi/"):
        return sign * math.pi / float(s[3:])
    try:
        return sign * float(s)
    except ValueError:
        raise ConfigError(f"cannot parse angle {text!r}") from None


def random_hermitian(dim: int, norm: float, seed: int) -> np.ndarray:
    """Seeded random Hermitian matrix rescaled to the given operator norm."""
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    a = 0.5 * (g + g.conj().T)
    cur = float(np.linalg.norm(a, 2))
    if cur == 0.0:
        return a
    return a * (norm / cur)


def haar_unitary(dim: int, seed: int) -> np.ndarray:
    """Seeded Haar-distributed unitary (QR of a Ginibre matrix with the
    standard phase fix that makes the distribution exactly Haar)."""
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(g)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


@dataclass(frozen=True)
class UnitaryFamily:
    """A named rule producing the unitary parameter for any dimension.

    ``block_values(m)`` is available exactly for the families that are
    block-diagonal with scalar blocks (phase rules); full-matrix families
    (``haar``, ``exp-hermitian``) only provide ``matrix(m)``.
    """

    name: str
    kind: str  # "phase" | "phase-seq" | "exp-hermitian" | "haar"
    angle: float = 0.0
    rule: str = ""
    seed: int = 0
    norm: float = 0.0

    @property
    def is_block_diagonal(self) -> bool:
        return self.kind in ("phase", "phase-seq")

    def block_values(self, m: int) -> np.ndarray:
        if self.kind == "phase":
            return np.full(m, np.exp(1j * self.angle))
        if self.kind == "phase-seq":
            if self.rule == "pi-over-k":
                return np.exp(1j * math.pi / np.arange(1, m + 1))
            raise ConfigError(f"unknown phase-seq rule {self.rule!r}")
        raise ConfigError(f"family {self.name!r} is not block-diagonal")

    def matrix(self, m: int) -> np.ndarray:
        if self.is_block_diagonal:
            return np.diag(self.block_values(m))
        if self.kind == "exp-hermitian":
            return unitary_exp(random_hermitian(m, self.norm, self.seed))
        if self.kind == "haar":
            return haar_unitary(m, self.seed)
        raise ConfigError(f"unknown family kind {self.kind!r}")


def parse_family(spec: str) -> UnitaryFamily:
    """Parse a family name into a :class:`UnitaryFamily`."""
    s = spec.strip()
    if s == "identity":
        return UnitaryFamily(name=s, kind="phase", angle=0.0)
    if s == "minus-identity":
        return UnitaryFamily(name=s, kind="phase", angle=math.pi)
    if s.startswith("phase:"):
        return UnitaryFamily(name=s, kind="phase", angle=_parse_angle(s[len("phase:"):]))
    if s.startswith("phase-seq:"):
        rule = s[len("phase-seq:"):].strip()
        fam = UnitaryFamily(name=s, kind="phase-seq", rule=rule)
        fam.block_values(1)  # validate the rule eagerly
        return fam
    if s.startswith("exp-hermitian:"):
        body = s[len("exp-hermitian:"):]
        try:
            seed_txt, norm_txt = body.split(",")
            seed = int(seed_txt)
            norm = math.log(3.0) if norm_txt.strip() == "ln3" else float(norm_txt)
        except ValueError:
            raise ConfigError(
                f"exp-hermitian family needs '<seed>,<norm>', got {body!r}"
            ) from None
        return UnitaryFamily(name=s, kind="exp-hermitian", seed=seed, norm=norm)
    if s.startswith("haar:"):
        try:
            seed = int(s[len("haar:"):])
        except ValueError:
            raise ConfigError(f"haar family needs an integer seed, got {s!r}") from None
        return UnitaryFamily(name=s, kind="haar", seed=seed)
    raise ConfigError(f"unknown unitary family {spec!r}")
