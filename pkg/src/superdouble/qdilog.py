"""Noncompact quantum dilogarithm and the unitary functions built on it.

All evaluation reduces to a single contour integral over a path that runs
along the real axis and passes above the origin, plus exact shift factors
that move the argument into a band where the integral converges fast. The
modulus is passed in directly as a positive float; callers pick ctx.b or
ctx.bs from a ParameterContext.

Conventions, fixed once and verified against a 30-digit reference:

    G(z)   = conj(zeta) * exp(-integral),
    zeta   = exp((i pi / 2)((b^2 + b^-2)/6 + 1/2)),
    G(z + b) = (1 - exp(2 pi i b z)) G(z)     (same with b -> 1/b),
    G(z) G(Q - z) = exp(i pi z (z - Q)),       Q = b + 1/b.

Zeros sit on Q + nb + m/b and poles on -(nb + m/b) for n, m >= 0.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from .quadrature import QuadratureError, QuadratureSpec, integrate_segment

_DEFAULT_SPEC = QuadratureSpec()

# a shift factor this small means the argument is numerically on a pole
_FACTOR_CUTOFF = 1e-6

# points this far below the axis are routed through the reflection product,
# which keeps the indented part of the contour from amplifying roundoff
_REFLECT_BELOW = -1.0

_CHUNK = 160


class PoleProximityError(ValueError):
    """The evaluation point sits numerically on top of a pole."""

    def __init__(self, z, n, m, distance):
        self.z = z
        self.n = n
        self.m = m
        self.distance = distance
        super().__init__(
            "argument %s lies within %.2e of the pole -(%d*b + %d/b)"
            % (z, distance, n, m)
        )


def zeta_b(bval: float) -> complex:
    """Unit-modulus constant normalizing the strip values."""
    return cmath.exp(
        0.5j * math.pi * ((bval * bval + 1.0 / (bval * bval)) / 6.0 + 0.5)
    )


def _window(bval):
    # evaluation band: wide enough for one shift step to always land inside,
    # narrow enough to keep both tail decay rates bounded away from zero
    Q = bval + 1.0 / bval
    step = min(bval, 1.0 / bval)
    lo = 0.35 * Q
    hi = max(0.65 * Q, lo + 1.05 * step)
    return lo, hi, step


def _strip_values(bval, zs, spec):
    """conj(zeta) * exp(-integral) for Re z in the band, Im z >= -1."""
    Q = bval + 1.0 / bval
    r = spec.indent if spec.indent is not None else 0.5 * min(bval, 1.0 / bval)
    sig_lo = float(np.min(zs.real))
    sig_hi = float(np.max(zs.real))
    ymax = float(np.max(np.abs(zs.imag)))
    L = -math.log(0.1 * spec.tol)
    Tm = max(2.0, L / (math.pi * sig_lo))
    Tp = max(2.0, L / (math.pi * (Q - sig_hi)))
    dens = max(1.0, ymax / 8.0)
    col = zs[:, None]
    pi = math.pi

    def direct(t):
        tt = t[None, :]
        den = (
            (np.exp(pi * bval * tt) - 1.0)
            * (np.exp(pi * tt / bval) - 1.0)
            * tt
        )
        return np.exp(pi * tt * col) / den

    def farplus(t):
        # same integrand with the growing factors divided out
        tt = t[None, :]
        den = (
            (1.0 - np.exp(-pi * bval * tt))
            * (1.0 - np.exp(-pi * tt / bval))
            * tt
        )
        return np.exp(pi * tt * (col - Q)) / den

    total = integrate_segment(
        direct, -Tm, -1.0, spec, initial_panels=math.ceil((Tm - 1.0) * dens)
    )
    total = total + integrate_segment(direct, -1.0, -1.0 + 1j * r, spec)
    total = total + integrate_segment(
        direct, -1.0 + 1j * r, 1.0 + 1j * r, spec,
        initial_panels=max(2, math.ceil(2.0 * dens)),
    )
    total = total + integrate_segment(direct, 1.0 + 1j * r, 1.0, spec)
    total = total + integrate_segment(
        farplus, 1.0, Tp, spec, initial_panels=math.ceil((Tp - 1.0) * dens)
    )
    return zeta_b(bval).conjugate() * np.exp(-total)


def _nearest_pole(bval, z):
    step = min(bval, 1.0 / bval)
    nmax = int(abs(z) / step) + 2
    best = (0, 0, abs(z))
    for n in range(nmax + 1):
        for m in range(nmax + 1):
            d = abs(z + n * bval + m / bval)
            if d < best[2]:
                best = (n, m, d)
    return best


def _eval_upper(bval, zs, spec):
    Q = bval + 1.0 / bval
    lo, hi, step = _window(bval)
    zz = zs.copy()
    num = np.ones(zs.shape, dtype=complex)
    den = np.ones(zs.shape, dtype=complex)
    up = zz.real < lo
    while up.any():
        f = 1.0 - np.exp(2j * math.pi * step * zz[up])
        small = np.abs(f) < _FACTOR_CUTOFF
        if small.any():
            zbad = complex(zs[up][small][0])
            n, m, dist = _nearest_pole(bval, zbad)
            raise PoleProximityError(zbad, n, m, dist)
        den[up] *= f
        zz[up] += step
        up = zz.real < lo
    down = zz.real > hi
    while down.any():
        zz[down] -= step
        num[down] *= 1.0 - np.exp(2j * math.pi * step * zz[down])
        down = zz.real > hi
    vals = np.empty(zs.shape, dtype=complex)
    for start in range(0, zz.size, _CHUNK):
        sl = slice(start, min(start + _CHUNK, zz.size))
        vals[sl] = _strip_values(bval, zz[sl], spec)
    return num / den * vals


def _eval(bval, zs, spec):
    flat = np.asarray(zs, dtype=complex).ravel()
    out = np.empty(flat.shape, dtype=complex)
    lower = flat.imag < _REFLECT_BELOW
    if lower.any():
        zl = flat[lower]
        Q = bval + 1.0 / bval
        refl = np.exp(1j * math.pi * zl * (zl - Q))
        out[lower] = refl / _eval(bval, Q - zl, spec)
    if (~lower).any():
        out[~lower] = _eval_upper(bval, flat[~lower], spec)
    return out.reshape(np.shape(zs))


def G_b(bval: float, z: complex, spec: QuadratureSpec | None = None) -> complex:
    """Evaluate the special function at one point of the complex plane."""
    spec = spec or _DEFAULT_SPEC
    return complex(_eval(float(bval), np.array([complex(z)]), spec)[0])


def G_b_many(bval, zs, spec=None):
    """Vectorized evaluation; zs is any array of complex arguments."""
    spec = spec or _DEFAULT_SPEC
    return _eval(float(bval), np.asarray(zs, dtype=complex), spec)


def g_b_many(bval, xs, t=0.0, spec=None):
    """Unitary descendant on positive arguments, phase-continued by t.

    t = 0 gives the unitary function itself; t in [-1, 1] slides the
    argument along exp(i pi t), staying inside the pole-free band.
    """
    spec = spec or _DEFAULT_SPEC
    bval = float(bval)
    xs = np.asarray(xs, dtype=float)
    if np.any(xs <= 0.0):
        raise ValueError("arguments must be positive")
    Q = bval + 1.0 / bval
    args = 0.5 * Q + 0.5 * t / bval + np.log(xs) / (2j * math.pi * bval)
    return zeta_b(bval).conjugate() / _eval(bval, args, spec)


def g_b(bval: float, x: float, spec=None) -> complex:
    return complex(g_b_many(bval, [float(x)], spec=spec)[0])


def g_b_phase(bval: float, x: float, t: float, spec=None) -> complex:
    return complex(g_b_many(bval, [float(x)], t=float(t), spec=spec)[0])


def _gb_fourier_quad(bval, x, *, starred=False, phase=0.0, spec=None):
    """Transform-route evaluation of the unitary function.

    Integrates exp(-i pi s^2 - pi*phase*s/b)/G(Q + i s) (starred replaces
    the Gaussian factor by exp(-pi Q s)) against x^{i s/b} over the real
    axis indented above s = 0. The ray on which the kernel only oscillates
    is rotated by spec.tilt into its decaying wedge; all kernel poles sit
    on the negative imaginary axis, so the rotation crosses none of them.
    """
    spec = spec or _DEFAULT_SPEC
    bval = float(bval)
    x = float(x)
    if x <= 0.0:
        raise ValueError("argument must be positive")
    phase = float(phase)
    if abs(phase) > 1.0 + 1e-12:
        raise ValueError("phase slide limited to [-1, 1], got %r" % (phase,))
    Q = bval + 1.0 / bval
    th = spec.tilt
    L = -math.log(0.1 * spec.tol)
    lax = abs(math.log(x))

    # ray lengths: quadratic decay on the tilted ray, linear on the other
    c1 = math.pi * (abs(phase) * math.cos(th) + lax * math.sin(th)) / bval
    aq = math.pi * math.sin(2.0 * th)
    Tq = (c1 + math.sqrt(c1 * c1 + 4.0 * aq * L)) / (2.0 * aq) + 2.0
    if starred:
        rate = math.pi * Q
    else:
        rate = math.pi * (Q - max(phase, 0.0) / bval)
    Tl = L / rate + 2.0

    s0, r = 1.0, 0.3
    logx = math.log(x)

    def kern(s):
        gvals = _eval(bval, Q + 1j * s, spec)
        if starred:
            pref = np.exp(-math.pi * Q * s)
        else:
            pref = np.exp(-1j * math.pi * s * s - math.pi * phase * s / bval)
        return pref / gvals * np.exp(1j * s * logx / bval)

    xosc = lax / (2.0 * math.pi * bval)
    d_lin = max(2.0, xosc + 1.0)
    d_quad = max(2.0, 0.5 * Tq * abs(math.cos(2.0 * th)) + xosc + 1.0)

    if starred:
        segs = [
            (-s0 - Tq * cmath.exp(1j * th), -s0, math.ceil(Tq * d_quad)),
            (-s0, -s0 + 1j * r, 2),
            (-s0 + 1j * r, s0 + 1j * r, 4),
            (s0 + 1j * r, s0, 2),
            (s0, s0 + Tl, math.ceil(Tl * d_lin)),
        ]
    else:
        segs = [
            (-Tl, -s0, math.ceil(Tl * d_lin)),
            (-s0, -s0 + 1j * r, 2),
            (-s0 + 1j * r, s0 + 1j * r, 4),
            (s0 + 1j * r, s0, 2),
            (s0, s0 + Tq * cmath.exp(-1j * th), math.ceil(Tq * d_quad)),
        ]
    total = 0.0 + 0.0j
    for a, b, panels in segs:
        total += integrate_segment(kern, a, b, spec, initial_panels=panels)
    return complex(total)


def g_b_fourier(bval: float, x: float, starred: bool = False, spec=None) -> complex:
    """Independent route to the unitary function through its transform."""
    return _gb_fourier_quad(float(bval), float(x), starred=starred, spec=spec)
