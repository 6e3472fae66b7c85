"""Special-function tests against an independently computed reference.

The reference values below were produced by tests/oracle_scripts/
gen_qdilog_values.py, which integrates the defining contour representation
with mpmath at 30 digits and cross-checks itself against the closed-form
anchors before printing anything. They are frozen here as literals.
"""

import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from superdouble.qdilog import (
    G_b,
    G_b_many,
    PoleProximityError,
    _gb_fourier_quad,
    g_b,
    g_b_fourier,
    g_b_many,
    g_b_phase,
    zeta_b,
)
from superdouble.params import make_context
from superdouble.quadrature import QuadratureSpec

ORACLE = {
    "zeta_b2_03": complex(-0.1650476058606776483826, 0.986285601537231407825),
    "zeta_b2_041": complex(0.0395150315976217343306, 0.9992189761397843648971),
    "G_halfQ": complex(-0.5983246005706590460698, -0.8012538126910606524794),
    "G_strip": complex(-0.1714785574460452704606, -0.9988086146876427667704),
    "G_left": complex(0.1964455219010993367244, -0.8937051468578525944292),
    "G_right": complex(293.7301418960952122993, -208.7610131997097854047),
    "G_farleft": complex(-0.1198433310245114733705, -0.8051456711481983865085),
    "G_real": complex(0.5057381896809565772973, -0.5573203294819902417497),
    "G_up": complex(-0.1652053389711774288521, -0.986259193100585686132),
    "G_down": complex(0.6958901215489366842682, 0.7181482707147641161305),
    "g_035": complex(0.9815116465457337191118, 0.1914024234305372682522),
    "g_1": complex(0.8890171414857364157893, 0.4578739151169567548539),
    "g_26": complex(0.5539228404882587294489, 0.8325680073035590019538),
    "g_73": complex(-0.3411996512770288570943, 0.939990849938675679771),
    "gph_26_p1": complex(0.08411805057095291821072, -0.1807119688245926095754),
    "gph_26_m1": complex(2.117100795854880187272, -4.548196854566184597989),
    "gph_035_p05": complex(0.8120405816737862220757, 0.02154690533620585428114),
    "gph_73_m025": complex(-0.4938730398698596466532, 2.369184263420930325344),
    "G41_a": complex(0.04706658908396986729028, -0.9798579638102606266093),
    "G41_b": complex(-0.01108041735408422275418, -0.24081783212777478754),
    "g41_16": complex(0.8607797038298702274484, 0.5089777023353389441564),
}

B03 = math.sqrt(0.3)
B41 = math.sqrt(0.41)
Q03 = B03 + 1.0 / B03
Q41 = B41 + 1.0 / B41


def close(got, want, rtol=5e-11):
    assert got == pytest.approx(want, rel=rtol, abs=1e-13), (got, want)


def test_matches_reference_values():
    close(zeta_b(B03), ORACLE["zeta_b2_03"])
    close(zeta_b(B41), ORACLE["zeta_b2_041"])
    close(G_b(B03, Q03 / 2), ORACLE["G_halfQ"])
    close(G_b(B03, Q03 / 2 + 0.37 + 1.1j), ORACLE["G_strip"])
    close(G_b(B03, 0.3 + 0.2j), ORACLE["G_left"])
    close(G_b(B03, 2.9 - 0.55j), ORACLE["G_right"])
    close(G_b(B03, -1.2 + 0.3j), ORACLE["G_farleft"])
    close(G_b(B03, 0.25), ORACLE["G_real"])
    close(G_b(B03, Q03 / 2 + 2.4j), ORACLE["G_up"])
    close(G_b(B03, Q03 / 2 - 1.7j), ORACLE["G_down"])
    close(G_b(B41, 0.6 + 0.8j), ORACLE["G41_a"])
    close(G_b(B41, Q41 / 2 - 0.6 - 0.35j), ORACLE["G41_b"])


def test_unitary_reference_values():
    close(g_b(B03, 0.35), ORACLE["g_035"])
    close(g_b(B03, 1.0), ORACLE["g_1"])
    close(g_b(B03, 2.6), ORACLE["g_26"])
    close(g_b(B03, 7.3), ORACLE["g_73"])
    close(g_b(B41, 1.6), ORACLE["g41_16"])
    close(g_b_phase(B03, 2.6, 1.0), ORACLE["gph_26_p1"])
    close(g_b_phase(B03, 2.6, -1.0), ORACLE["gph_26_m1"])
    close(g_b_phase(B03, 0.35, 0.5), ORACLE["gph_035_p05"])
    close(g_b_phase(B03, 7.3, -0.25), ORACLE["gph_73_m025"])


def test_center_closed_form():
    # the reflection product pins the square of the central value
    for bval in (B03, B41, math.sqrt(0.8)):
        Q = bval + 1.0 / bval
        close(G_b(bval, Q / 2) ** 2, cmath.exp(-0.25j * math.pi * Q * Q))


def test_constant_at_quarter_modulus():
    # b^2 = 1/4 makes the normalization constant a 96th root of unity
    close(zeta_b(0.5), cmath.exp(29j * math.pi / 48))


@settings(max_examples=15, deadline=None)
@given(
    st.floats(0.1, 1.6),
    st.floats(-1.8, 1.8),
    st.sampled_from([B03, B41, math.sqrt(0.8)]),
)
def test_shift_steps_both_moduli(re, im, bval):
    z = complex(re, im)
    base = G_b(bval, z)
    close(G_b(bval, z + bval), (1 - cmath.exp(2j * math.pi * bval * z)) * base, 1e-9)
    close(
        G_b(bval, z + 1.0 / bval),
        (1 - cmath.exp(2j * math.pi * z / bval)) * base,
        1e-9,
    )


@settings(max_examples=15, deadline=None)
@given(st.floats(-0.9, 3.2), st.floats(0.05, 2.2), st.sampled_from([-1, 1]))
def test_reflection_product(re, im, sign):
    # im bounded away from zero: the real axis carries the pole lattice
    z = complex(re, sign * im)
    got = G_b(B03, z) * G_b(B03, Q03 - z)
    close(got, cmath.exp(1j * math.pi * z * (z - Q03)), 1e-9)


@settings(max_examples=15, deadline=None)
@given(st.floats(0.2, 2.1), st.floats(-1.5, 1.5))
def test_conjugation_symmetry(re, im):
    z = complex(re, im)
    close(G_b(B03, z).conjugate(), 1.0 / G_b(B03, Q03 - z.conjugate()), 1e-9)


def test_modulus_inversion_invariance():
    for z in (0.3 + 0.2j, Q03 / 2 - 1.1j, 2.2 + 0.4j):
        close(G_b(B03, z), G_b(1.0 / B03, z), 1e-10)


def test_zeros_on_upper_lattice():
    for z in (Q03, Q03 + B03, Q03 + 1.0 / B03 + B03):
        assert abs(G_b(B03, z)) < 1e-12


def test_pole_detection_indices():
    cases = {0.0: (0, 0), -B03: (1, 0), -1.0 / B03 - 2 * B03 + 1e-9: (2, 1)}
    for z, (n, m) in cases.items():
        with pytest.raises(PoleProximityError) as info:
            G_b(B03, z)
        assert (info.value.n, info.value.m) == (n, m)
        assert info.value.distance < 1e-6


@settings(max_examples=15, deadline=None)
@given(st.floats(-3.5, 3.9), st.floats(-1.0, 1.0))
def test_slide_pair_is_unitary(logx, t):
    """conj(g(x, t)) * g(x, -t) is exactly one for positive x."""
    x = math.exp(logx)
    prod = g_b_phase(B03, x, t).conjugate() * g_b_phase(B03, x, -t)
    close(prod, 1.0, 1e-9)


def test_unit_modulus_on_axis():
    xs = np.exp(np.linspace(-4.0, 4.0, 9))
    mods = np.abs(g_b_many(B03, xs))
    assert np.max(np.abs(mods - 1.0)) < 1e-12


def test_far_asymptotics_both_sides():
    for bval, Q in ((B03, Q03), (B41, Q41)):
        zc = zeta_b(bval).conjugate()
        close(G_b(bval, Q / 2 + 20j), zc, 1e-6)
        z = Q / 2 - 20j
        ref = zeta_b(bval) * cmath.exp(1j * math.pi * z * (z - Q))
        close(G_b(bval, z) / ref, 1.0, 1e-6)


def test_slide_asymptotic_exponent():
    # |g(e^{i pi t} x)| ~ x^{-t/(2 b^2)} as x -> +inf, -> 1 as x -> 0
    for t in (1.0, 0.75, -0.5):
        x = math.exp(40 * math.pi * B03)
        ratio = abs(g_b_phase(B03, x, t)) * x ** (t / (2 * 0.3))
        assert abs(ratio - 1.0) < 1e-6
        small = abs(g_b_phase(B03, 1.0 / x, t))
        assert abs(small - 1.0) < 1e-6


def test_transform_route_matches():
    close(g_b_fourier(B03, 0.35), ORACLE["g_035"], 1e-8)
    close(g_b_fourier(B03, 2.6), ORACLE["g_26"], 1e-8)
    close(g_b_fourier(B03, 7.3), ORACLE["g_73"], 1e-8)
    close(g_b_fourier(B41, 1.6), ORACLE["g41_16"], 1e-8)


def test_starred_transform_is_conjugate():
    close(g_b_fourier(B03, 2.6, starred=True), ORACLE["g_26"].conjugate(), 1e-8)
    close(g_b_fourier(B03, 0.35, starred=True), ORACLE["g_035"].conjugate(), 1e-8)


def test_transform_slide_kernel():
    close(_gb_fourier_quad(B03, 2.6, phase=1.0), ORACLE["gph_26_p1"], 1e-8)
    close(_gb_fourier_quad(B03, 2.6, phase=-1.0), ORACLE["gph_26_m1"], 1e-8)
    got = _gb_fourier_quad(B03, 0.35, phase=0.5)
    close(got, ORACLE["gph_035_p05"], 1e-8)


def test_spec_independence():
    other = QuadratureSpec(tol=1e-9, gl_order=12, indent=0.11, tilt=0.52)
    for z in (0.4 + 0.9j, Q03 / 2 - 1.3j):
        assert abs(G_b(B03, z) - G_b(B03, z, other)) < 1e-8
    assert abs(g_b_fourier(B03, 1.7) - g_b_fourier(B03, 1.7, spec=other)) < 1e-8


def test_vectorized_matches_scalar():
    zs = np.array([0.3 + 0.2j, Q03 / 2, 2.9 - 0.55j, Q03 / 2 + 2.4j])
    singly = np.array([G_b(B03, z) for z in zs])
    assert np.max(np.abs(G_b_many(B03, zs) - singly)) < 1e-9


def test_argument_validation():
    with pytest.raises(ValueError):
        g_b(B03, -1.0)
    with pytest.raises(ValueError):
        g_b_fourier(B03, 0.0)
    with pytest.raises(ValueError):
        _gb_fourier_quad(B03, 1.0, phase=1.5)


def test_context_validation():
    ctx = make_context(0.3)
    assert ctx.b == pytest.approx(B03)
    assert ctx.bs == pytest.approx(math.sqrt(0.8))
    assert ctx.qs == pytest.approx(1j * ctx.q)
    assert ctx.alpha == pytest.approx(1.0 / math.tan(0.3 * math.pi))
    for bad in (0.0, 0.5, 0.7, -0.1):
        with pytest.raises(ValueError):
            make_context(bad)
    with pytest.raises(ValueError):
        make_context(0.3, Z=0.0)
