"""Exact tests of the graded matrix layer. No tolerances except where an
entry carries a 1/sqrt(2) factor, in which case 1e-14 applies."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from superdouble.superlin import (
    GradedMatrix,
    clifford_generators,
    diagonalizer_P,
    diagonalizer_P_from_generators,
    eight_dim_identities,
    embed,
    identity,
    super_tensor,
    transposition_matrices,
)

XI, ETA, INVOL = clifford_generators()
ONE = identity()


def exact(a, b):
    assert np.array_equal(np.asarray(a, complex), np.asarray(b, complex))


def test_generator_entries():
    exact(XI.entries, [[0, 1], [1, 0]])
    exact(ETA.entries, [[0, 1j], [-1j, 0]])
    exact(INVOL.entries, [[-1, 0], [0, 1]])


def test_generator_relations():
    exact((XI @ XI).entries, np.eye(2))
    exact((ETA @ ETA).entries, np.eye(2))
    # the displayed matrices anticommute
    exact((XI @ ETA).entries + (ETA @ XI).entries, np.zeros((2, 2)))
    exact((1j * (ETA @ XI)).entries, INVOL.entries)
    exact((INVOL @ INVOL).entries, np.eye(2))


def test_parity_bookkeeping():
    algebra = {0: [ONE, INVOL], 1: [XI, ETA]}
    for pa, eltsa in algebra.items():
        for pb, eltsb in algebra.items():
            for A in eltsa:
                for B in eltsb:
                    assert A.parity() == pa and B.parity() == pb
                    assert (A @ B).parity() == (pa + pb) % 2


def test_signed_tensor_of_odd_pair():
    want = np.array(
        [
            [0, 0, 0, 1j],
            [0, 0, -1j, 0],
            [0, -1j, 0, 0],
            [1j, 0, 0, 0],
        ]
    )
    got = super_tensor(XI, ETA)
    exact(got.entries, want)
    exact((got @ got).entries, -np.eye(4))
    assert got.parity() == 0
    exact(super_tensor(ONE, ONE).entries, np.eye(4))


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(-3, 3), min_size=16, max_size=16))
def test_signed_tensor_matches_displayed_rule(vals):
    """Generic 2x2 factors reproduce the signed 4x4 layout."""
    a, b, c, d, w, x, y, z = [complex(v) for v in vals[:8]]
    im = [complex(0, v) for v in vals[8:]]
    a, b, c, d = a + im[0], b + im[1], c + im[2], d + im[3]
    w, x, y, z = w + im[4], x + im[5], y + im[6], z + im[7]
    A = GradedMatrix([[a, b], [c, d]], [0, 1])
    B = GradedMatrix([[w, x], [y, z]], [0, 1])
    want = np.array(
        [
            [a * w, a * x, b * w, b * x],
            [a * y, a * z, b * y, b * z],
            [c * w, -c * x, d * w, -d * x],
            [-c * y, c * z, -d * y, d * z],
        ]
    )
    exact(super_tensor(A, B).entries, want)


def test_tensor_associativity_on_generators():
    for A in (XI, ETA, INVOL, ONE):
        for B in (XI, ETA, INVOL, ONE):
            for C in (XI, ETA, INVOL, ONE):
                left = super_tensor(super_tensor(A, B), C)
                right = super_tensor(A, super_tensor(B, C))
                exact(left.entries, right.entries)
                exact(left.grading, right.grading)


def test_even_right_factor_is_plain_kron():
    # parity signs cancel only when the right factor is even; an even
    # left factor still picks up signs (tensoring ONE with XI is not kron)
    for E in (ONE, INVOL, ETA @ XI):
        for A in (XI, ETA, ONE, INVOL):
            got = super_tensor(A, E)
            exact(got.entries, np.kron(A.entries, E.entries))
    twisted = super_tensor(ONE, XI)
    assert not np.array_equal(twisted.entries, np.kron(ONE.entries, XI.entries))
    exact(twisted.entries, np.kron(INVOL.entries, XI.entries) * -1)


def test_diagonalizer():
    P = diagonalizer_P()
    prod = P.H.entries @ super_tensor(XI, ETA).entries @ P.entries
    assert np.max(np.abs(prod - np.diag([-1j, -1j, 1j, 1j]))) < 1e-14
    assert np.max(np.abs(P.H.entries @ P.entries - np.eye(4))) < 1e-14
    formula = diagonalizer_P_from_generators()
    assert np.max(np.abs(formula.entries - P.entries)) < 1e-15


def test_eight_dim_identities_all_pass():
    report = eight_dim_identities()
    names = [row["identity"] for row in report]
    assert names == [
        "conjugation_swap",
        "sign_twist_of_c",
        "sign_through_p23",
        "exchange_product",
        "sign_through_p13",
        "grouplike_sign_split",
        "braid_even_leg",
        "braid_odd_leg",
    ]
    for row in report:
        assert row["ok"], row
        assert row["first_mismatch"] is None
    # pure sign identities carry no radical factors and are exactly zero
    by_name = {row["identity"]: row["max_residual"] for row in report}
    assert by_name["grouplike_sign_split"] == 0.0
    assert by_name["sign_through_p23"] == 0.0


def test_transposition_matrices_are_unitary():
    for M in transposition_matrices():
        assert np.max(np.abs(M.H.entries @ M.entries - np.eye(8))) < 1e-14


def test_embed_single_legs():
    exact(embed(XI, 0, 2).entries, super_tensor(XI, ONE).entries)
    exact(embed(XI, 1, 2).entries, super_tensor(ONE, XI).entries)
    triple = super_tensor(super_tensor(ONE, ETA), ONE)
    exact(embed(ETA, 1, 3).entries, triple.entries)
    with pytest.raises(ValueError):
        embed(XI, 3, 2)


def test_validation_and_guards():
    with pytest.raises(ValueError):
        GradedMatrix(np.zeros((2, 3)), [0, 1])
    with pytest.raises(ValueError):
        GradedMatrix(np.eye(2), [0, 1, 0])
    with pytest.raises(ValueError):
        XI @ GradedMatrix(np.eye(2), [0, 0])
    big = identity(128, [0] * 128)
    with pytest.raises(ValueError):
        super_tensor(big, big)


def test_mixed_element_has_no_parity():
    assert (XI + INVOL).parity() is None
    assert (0.0 * XI).parity() == 0
