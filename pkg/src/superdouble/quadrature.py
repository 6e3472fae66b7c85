"""Composite Gauss-Legendre quadrature on straight complex segments.

Every contour integral in the package reduces to sums of straight-segment
integrals with smooth, vectorized integrands. Each segment is split into
panels; the panel count doubles until two successive refinements agree to
the requested absolute tolerance. Integrands may return a trailing axis of
node values for a whole batch of target points at once, in which case
convergence is enforced uniformly over the batch.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class QuadratureError(RuntimeError):
    """A contour integral failed to converge within its refinement budget."""


@dataclass(frozen=True)
class QuadratureSpec:
    """Tuning knobs shared by all contour evaluations.

    tol is the absolute accuracy target of a single segment integral.
    indent overrides the imaginary offset used to pass above real poles
    (None picks a safe default from the modulus). tilt is the rotation
    angle applied to oscillatory rays on the transform route.
    """

    tol: float = 1e-11
    gl_order: int = 16
    max_doublings: int = 11
    indent: float | None = None
    tilt: float = 0.35


def _gl_nodes(order, _cache={}):
    if order not in _cache:
        x, w = np.polynomial.legendre.leggauss(order)
        _cache[order] = (x, w)
    return _cache[order]


def _panel_sum(f, a, b, panels, x, w):
    mids = (np.arange(panels) + 0.5) / panels
    half = 0.5 / panels
    u = (mids[:, None] + half * x[None, :]).ravel()
    vals = np.asarray(f(a + (b - a) * u), dtype=complex)
    vals = vals.reshape(vals.shape[:-1] + (panels, x.size))
    return (b - a) * half * (vals @ w).sum(axis=-1)


def integrate_segment(f, a, b, spec, initial_panels=1):
    """Integrate f from a to b along the straight segment joining them.

    f maps an array of contour points to values whose last axis matches the
    input; any leading axes are carried through (one integral per row).
    """
    a, b = complex(a), complex(b)
    x, w = _gl_nodes(spec.gl_order)
    panels = max(1, int(initial_panels))
    prev = _panel_sum(f, a, b, panels, x, w)
    for _ in range(spec.max_doublings):
        panels *= 2
        cur = _panel_sum(f, a, b, panels, x, w)
        if np.max(np.abs(cur - prev)) <= 0.25 * spec.tol:
            return cur
        prev = cur
    raise QuadratureError(
        "segment %s -> %s stuck above tol=%.3g after %d doublings"
        % (a, b, spec.tol, spec.max_doublings)
    )
