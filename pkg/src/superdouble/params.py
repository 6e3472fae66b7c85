"""Validated run parameters shared by every verification module."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass


@dataclass(frozen=True)
class ParameterContext:
    """Deformation parameters of a verification run.

    b2 is the square of the base modulus. It must lie in (0, 1/2): the
    shifted modulus sqrt(b2 + 1/2) driving the graded generators then stays
    inside (0, 1), and every contour used downstream keeps positive decay
    margins. Z > 0 scales the central lattice-generator element.
    """

    b2: float
    Z: float = 1.0

    @property
    def b(self) -> float:
        return math.sqrt(self.b2)

    @property
    def Q(self) -> float:
        return self.b + 1.0 / self.b

    @property
    def bs(self) -> float:
        """Shifted modulus, sqrt(b2 + 1/2)."""
        return math.sqrt(self.b2 + 0.5)

    @property
    def Qs(self) -> float:
        return self.bs + 1.0 / self.bs

    @property
    def q(self) -> complex:
        return cmath.exp(1j * math.pi * self.b2)

    @property
    def qs(self) -> complex:
        """exp(i pi (b2 + 1/2)), i.e. i*q."""
        return cmath.exp(1j * math.pi * (self.b2 + 0.5))

    @property
    def alpha(self) -> float:
        """cot(pi b2), the real ratio (qs - 1/qs)/(q - 1/q)."""
        return 1.0 / math.tan(math.pi * self.b2)


def make_context(b2: float, Z: float = 1.0) -> ParameterContext:
    if not 0.0 < b2 < 0.5:
        raise ValueError("b2 must lie in (0, 1/2), got %r" % (b2,))
    if not Z > 0.0:
        raise ValueError("Z must be positive, got %r" % (Z,))
    return ParameterContext(float(b2), float(Z))
