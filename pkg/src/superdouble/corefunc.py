"""Exact calculus on the Gaussian core.

Everything here is closed form. The core is the span of terms
c * exp(-alpha*x**2 + beta*x) * x**n with alpha > 0; multiplication by
exponentials and complex argument shifts map the span into itself, so a
Weyl exponential exp(2*pi*s*(a*x + c*p)) with p = (1/(2*pi*i)) d/dx acts
term by term through one shift, one multiplication, and one commutator
phase. Operator identities on this domain can therefore be checked up to
rounding error only.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "CoreFunction",
    "SuperWavefunction",
    "TwoVarCoreFunction",
    "WeylOp",
]


def _canonical(raw):
    merged = {}
    for c, alpha, beta, n in raw:
        c = complex(c)
        alpha = float(alpha)
        beta = complex(beta)
        n = int(n)
        if not alpha > 0.0:
            raise ValueError("decay coefficient must be positive, got %r" % (alpha,))
        if n < 0:
            raise ValueError("polynomial degree must be nonnegative, got %r" % (n,))
        key = (alpha, beta.real, beta.imag, n)
        merged[key] = merged.get(key, 0j) + c
    out = []
    for key in sorted(merged):
        c = merged[key]
        if c != 0.0:
            alpha, br, bi, n = key
            out.append((c, alpha, complex(br, bi), n))
    return tuple(out)


def _weyl_term(pref, A, C, alpha, beta, n):
    """Action of pref * e^{2 pi (A x + C p)} on one core term, as a term list.

    Valid for complex A and C; core terms are entire, so the shifted
    function is evaluated by direct substitution.
    """
    d = -1j * C
    base = pref * cmath.exp(-1j * math.pi * A * C) * cmath.exp(-alpha * d * d + beta * d)
    beta2 = beta - 2.0 * alpha * d + 2.0 * math.pi * A
    if n == 0:
        return [(base, alpha, beta2, 0)]
    out = []
    for k in range(n + 1):
        coef = base * math.comb(n, k) * d ** (n - k)
        out.append((coef, alpha, beta2, k))
    return out


class CoreFunction:
    """Finite sum of terms c * exp(-alpha x^2 + beta x) * x^n, alpha > 0.

    Terms are kept canonical: sorted by (alpha, beta, n), merged, with
    zero coefficients dropped. Instances are immutable.
    """

    __slots__ = ("terms",)

    def __init__(self, terms):
        object.__setattr__(self, "terms", _canonical(terms))

    def __setattr__(self, name, value):
        raise AttributeError("CoreFunction is immutable")

    @classmethod
    def gaussian(cls, alpha=1.0, beta=0.0, n=0, coef=1.0):
        return cls([(coef, alpha, beta, n)])

    @property
    def is_zero(self):
        return not self.terms

    def eval(self, z):
        z = complex(z)
        total = 0j
        for c, alpha, beta, n in self.terms:
            total += c * cmath.exp(-alpha * z * z + beta * z) * z**n
        return total

    def eval_many(self, zs):
        zs = np.asarray(zs, dtype=complex)
        total = np.zeros_like(zs)
        for c, alpha, beta, n in self.terms:
            total = total + c * np.exp(-alpha * zs * zs + beta * zs) * zs**n
        return total

    def shifted(self, d):
        """f(x) -> f(x + d) for complex d."""
        d = complex(d)
        out = []
        for c, alpha, beta, n in self.terms:
            base = c * cmath.exp(-alpha * d * d + beta * d)
            beta2 = beta - 2.0 * alpha * d
            for k in range(n + 1):
                out.append((base * math.comb(n, k) * d ** (n - k), alpha, beta2, k))
        return CoreFunction(out)

    def times_exp(self, gamma):
        """f(x) -> e^{gamma x} f(x)."""
        gamma = complex(gamma)
        return CoreFunction([(c, alpha, beta + gamma, n) for c, alpha, beta, n in self.terms])

    def __add__(self, other):
        return CoreFunction(self.terms + other.terms)

    def __sub__(self, other):
        return self + (-1.0) * other

    def __neg__(self):
        return (-1.0) * self

    def __mul__(self, scalar):
        scalar = complex(scalar)
        return CoreFunction([(scalar * c, alpha, beta, n) for c, alpha, beta, n in self.terms])

    __rmul__ = __mul__

    def __repr__(self):
        return "CoreFunction(%d terms)" % len(self.terms)


@dataclass(frozen=True)
class WeylOp:
    """prefactor * exp(2 pi scale (a x + ccoef p)) with [p, x] = 1/(2 pi i).

    The action on the core is
        e^{2 pi s(ax + cp)} f(x) = e^{-i pi s^2 ac} e^{2 pi s a x} f(x - i s c),
    the phase being the exact Baker-Campbell-Hausdorff factor.
    """

    prefactor: complex = 1.0 + 0j
    a: float = 0.0
    ccoef: float = 0.0
    scale: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "prefactor", complex(self.prefactor))
        object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "ccoef", float(self.ccoef))
        object.__setattr__(self, "scale", float(self.scale))
        if self.scale == 0.0:
            raise ValueError("scale must be nonzero")

    @classmethod
    def identity(cls):
        return cls(1.0, 0.0, 0.0, 1.0)

    def folded(self):
        """Scale-absorbed exponent coefficients (A, C)."""
        return self.scale * self.a, self.scale * self.ccoef

    def apply(self, f: CoreFunction) -> CoreFunction:
        A, C = self.folded()
        out = []
        for c, alpha, beta, n in f.terms:
            out.extend(_weyl_term(self.prefactor * c, A, C, alpha, beta, n))
        return CoreFunction(out)

    def compose(self, other: "WeylOp") -> "WeylOp":
        """Operator product self * other (self applied second)."""
        A1, C1 = self.folded()
        A2, C2 = other.folded()
        phase = cmath.exp(1j * math.pi * (A1 * C2 - C1 * A2))
        return WeylOp(self.prefactor * other.prefactor * phase, A1 + A2, C1 + C2, 1.0)

    def inverse(self) -> "WeylOp":
        return WeylOp(1.0 / self.prefactor, -self.a, -self.ccoef, self.scale)

    def __mul__(self, scalar):
        return WeylOp(self.prefactor * complex(scalar), self.a, self.ccoef, self.scale)

    __rmul__ = __mul__


@dataclass(frozen=True)
class SuperWavefunction:
    """Pair of core functions: even and odd component."""

    even: CoreFunction
    odd: CoreFunction

    @property
    def components(self):
        return (self.even, self.odd)

    def eval(self, z):
        return np.array([self.even.eval(z), self.odd.eval(z)])

    def eval_many(self, zs):
        return np.stack([self.even.eval_many(zs), self.odd.eval_many(zs)])

    def __add__(self, other):
        return SuperWavefunction(self.even + other.even, self.odd + other.odd)

    def __sub__(self, other):
        return SuperWavefunction(self.even - other.even, self.odd - other.odd)

    def __mul__(self, scalar):
        return SuperWavefunction(scalar * self.even, scalar * self.odd)

    __rmul__ = __mul__

    def __neg__(self):
        return (-1.0) * self


def _canonical2(raw):
    merged = {}
    for c, ax, bx, nx, ay, by, ny in raw:
        c = complex(c)
        ax, ay = float(ax), float(ay)
        bx, by = complex(bx), complex(by)
        nx, ny = int(nx), int(ny)
        if not (ax > 0.0 and ay > 0.0):
            raise ValueError("decay coefficients must be positive")
        if nx < 0 or ny < 0:
            raise ValueError("polynomial degrees must be nonnegative")
        key = (ax, bx.real, bx.imag, nx, ay, by.real, by.imag, ny)
        merged[key] = merged.get(key, 0j) + c
    out = []
    for key in sorted(merged):
        c = merged[key]
        if c != 0.0:
            ax, bxr, bxi, nx, ay, byr, byi, ny = key
            out.append((c, ax, complex(bxr, bxi), nx, ay, complex(byr, byi), ny))
    return tuple(out)


class TwoVarCoreFunction:
    """Finite sum of separable core terms in two variables.

    Sufficient generality for coproduct checks: every tested operator is a
    finite sum of leg-wise actions, which keep separability term by term.
    """

    __slots__ = ("terms",)

    def __init__(self, terms):
        object.__setattr__(self, "terms", _canonical2(terms))

    def __setattr__(self, name, value):
        raise AttributeError("TwoVarCoreFunction is immutable")

    @classmethod
    def separable(cls, fx: CoreFunction, fy: CoreFunction):
        out = []
        for cx, ax, bx, nx in fx.terms:
            for cy, ay, by, ny in fy.terms:
                out.append((cx * cy, ax, bx, nx, ay, by, ny))
        return cls(out)

    @property
    def is_zero(self):
        return not self.terms

    def eval(self, z1, z2):
        z1, z2 = complex(z1), complex(z2)
        total = 0j
        for c, ax, bx, nx, ay, by, ny in self.terms:
            total += (
                c
                * cmath.exp(-ax * z1 * z1 + bx * z1)
                * z1**nx
                * cmath.exp(-ay * z2 * z2 + by * z2)
                * z2**ny
            )
        return total

    def eval_many(self, z1s, z2s):
        z1s = np.asarray(z1s, dtype=complex)
        z2s = np.asarray(z2s, dtype=complex)
        total = np.zeros_like(z1s)
        for c, ax, bx, nx, ay, by, ny in self.terms:
            total = total + (
                c
                * np.exp(-ax * z1s * z1s + bx * z1s)
                * z1s**nx
                * np.exp(-ay * z2s * z2s + by * z2s)
                * z2s**ny
            )
        return total

    def apply_leg(self, op: WeylOp, leg: int):
        """Apply a Weyl exponential to one leg (0 or 1)."""
        A, C = op.folded()
        out = []
        for c, ax, bx, nx, ay, by, ny in self.terms:
            if leg == 0:
                for c2, a2, b2, n2 in _weyl_term(op.prefactor * c, A, C, ax, bx, nx):
                    out.append((c2, a2, b2, n2, ay, by, ny))
            elif leg == 1:
                for c2, a2, b2, n2 in _weyl_term(op.prefactor * c, A, C, ay, by, ny):
                    out.append((c2, ax, bx, nx, a2, b2, n2))
            else:
                raise ValueError("leg must be 0 or 1")
        return TwoVarCoreFunction(out)

    def __add__(self, other):
        return TwoVarCoreFunction(self.terms + other.terms)

    def __sub__(self, other):
        return self + (-1.0) * other

    def __mul__(self, scalar):
        scalar = complex(scalar)
        return TwoVarCoreFunction([(scalar * t[0],) + t[1:] for t in self.terms])

    __rmul__ = __mul__

    def __neg__(self):
        return (-1.0) * self

    def __repr__(self):
        return "TwoVarCoreFunction(%d terms)" % len(self.terms)
