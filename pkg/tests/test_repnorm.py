"""Certified norm estimates.

The oracle for every lower bound is a dense singular value decomposition:
opnorm_lower may never exceed sigma_max of the matrix it was given (with
boundary columns dropped), and on small matrices it must attain it.  Walk
operators are cross-checked against the germ enumeration: the matrix of
left convolution on an orbit basis at a z-rooted word must be, up to a
basis permutation, the ball truncation built directly from the fiber
coefficients.
"""

import math
import random
from fractions import Fraction

import numpy as np
import pytest

from steinalg.bundle import (
    bstein_sub,
    bundle_a,
    bundle_bn,
    bundle_chiB,
    bstein_conv,
)
from steinalg.groups import FreeWord, W_ONE, ball, free_word, sphere
from steinalg.repnorm import (
    GermBasis,
    LimitRow,
    NormEstimate,
    bundle_norm_bound,
    cauchy_profile,
    enumerate_orbit,
    h_ball_operator,
    haagerup_bound,
    lambda_matrix,
    opnorm_lower,
    rho_estimate,
    sparse_operator,
    stein_H_norm_bound,
)
from steinalg.selfsim import EPS, Germ, S_ONE, finword, omega, s_from_group, yl, zl
from steinalg.steinberg import (
    REGION_B,
    Region,
    SteinElt,
    h_elt,
    st_a,
    st_bn,
    st_conv,
    st_make,
    st_sub,
)


Z_WORD = omega(EPS, finword(zl(1)))
Y_WORD = omega(EPS, finword(yl(1, 0)))


def oracle_sigma_max(op) -> float:
    """Dense SVD of the matrix with boundary columns dropped."""
    dense = np.zeros(op.shape)
    for i, j, c in op.entries:
        if j not in op.boundary_cols:
            dense[i, j] += float(c)
    if not dense.any():
        return 0.0
    return float(np.linalg.svd(dense, compute_uv=False)[0])


# ---------------------------------------------------------------------------
# germ bases and orbit enumeration
# ---------------------------------------------------------------------------


def test_basis_rejects_duplicates_and_foreign_words():
    g = Germ(S_ONE, Z_WORD)
    with pytest.raises(ValueError):
        GermBasis(Z_WORD, (g, g), ("C", "C"))
    with pytest.raises(ValueError):
        GermBasis(Y_WORD, (g,), ("C",))


def test_orbit_at_z_word_separates_sphere_elements():
    basis = enumerate_orbit(st_bn(1), Z_WORD, 1)
    assert len(basis) == 5  # the seed germ plus one germ per sphere element
    assert basis.labels == ("C",) * 5
    assert basis.germs[0].s == S_ONE
    assert enumerate_orbit(st_bn(1), Z_WORD, 2).labels == ("C",) * 17
    assert len(enumerate_orbit(st_bn(1), Z_WORD, 3)) == len(ball(3))


def test_orbit_at_y_word_collapses_to_seed():
    basis = enumerate_orbit(st_bn(1), Y_WORD, 3)
    assert len(basis) == 1
    assert basis.labels == ("B",)


def test_orbit_labels_empty_word():
    f = st_make([(s_from_group(h_elt(free_word("c"))), Fraction(1))])
    basis = enumerate_orbit(f, EPS, 3)
    assert len(basis) == 4
    assert basis.labels == ("eps",) * 4


def test_lambda_matrix_is_identity_on_collapsed_basis():
    basis = enumerate_orbit(st_bn(2), Y_WORD, 2)
    m = lambda_matrix(st_bn(2), basis)
    assert m.entries == ((0, 0, Fraction(1)),)
    assert not m.boundary_cols


def test_lambda_matrix_shift_with_boundary():
    f = st_make([(s_from_group(h_elt(free_word("c"))), Fraction(1))])
    basis = enumerate_orbit(f, EPS, 3)
    m = lambda_matrix(f, basis)
    assert m.entries == (
        (1, 0, Fraction(1)),
        (2, 1, Fraction(1)),
        (3, 2, Fraction(1)),
    )
    assert m.boundary_cols == frozenset({3})


def test_lambda_matrix_sphere_average_one_step():
    basis = enumerate_orbit(st_bn(1), Z_WORD, 1)
    m = lambda_matrix(st_bn(1), basis)
    col0 = sorted((i, c) for i, j, c in m.entries if j == 0)
    assert col0 == [(i, Fraction(1, 4)) for i in (1, 2, 3, 4)]
    row0 = sorted((j, c) for i, j, c in m.entries if i == 0)
    assert row0 == [(j, Fraction(1, 4)) for j in (1, 2, 3, 4)]
    assert m.boundary_cols == frozenset({1, 2, 3, 4})


def test_lambda_matrix_agrees_with_ball_truncation():
    # at a z-rooted word the orbit of b_1 is a copy of the radius-3 ball,
    # so the two constructions give the same operator up to a permutation
    basis = enumerate_orbit(st_bn(1), Z_WORD, 3)
    via_germs = lambda_matrix(st_bn(1), basis)
    direct = h_ball_operator({h: Fraction(1, 4) for h in sphere(1)}, 3)
    assert via_germs.shape == direct.shape
    assert len(via_germs.boundary_cols) == len(direct.boundary_cols)
    lo1 = opnorm_lower(via_germs, tol=1e-12)
    lo2 = opnorm_lower(direct, tol=1e-12)
    assert lo1.lower == pytest.approx(lo2.lower, abs=1e-9)


# ---------------------------------------------------------------------------
# certified lower bounds
# ---------------------------------------------------------------------------


def test_opnorm_small_matrices_attain_sigma_max():
    rng = random.Random(7)
    for _ in range(20):
        rows = rng.randrange(1, 8)
        cols = rng.randrange(1, 8)
        entries = {}
        for i in range(rows):
            for j in range(cols):
                if rng.random() < 0.6:
                    entries[(i, j)] = Fraction(rng.randrange(-5, 6))
        op = sparse_operator((rows, cols), entries)
        est = opnorm_lower(op, tol=1e-12)
        sigma = oracle_sigma_max(op)
        assert est.lower == pytest.approx(sigma, abs=1e-9)


def test_opnorm_never_exceeds_sigma_max_with_boundary():
    rng = random.Random(11)
    for _ in range(20):
        entries = {}
        for i in range(6):
            for j in range(6):
                if rng.random() < 0.5:
                    entries[(i, j)] = Fraction(rng.randrange(-4, 5))
        boundary = {j for j in range(6) if rng.random() < 0.4}
        op = sparse_operator((6, 6), entries, boundary)
        est = opnorm_lower(op, tol=1e-12)
        assert est.lower <= oracle_sigma_max(op) + 1e-9


def test_opnorm_ignores_boundary_columns():
    op = sparse_operator(
        (2, 2), {(0, 1): Fraction(100), (1, 0): Fraction(1)}, {1}
    )
    assert opnorm_lower(op).lower == pytest.approx(1.0)
    empty = sparse_operator((2, 2), {(0, 1): Fraction(100)}, {1})
    est = opnorm_lower(empty)
    assert est.lower == 0.0 and est.iterations == 0


def test_opnorm_power_path_matches_oracle():
    # above the dense cutoff the iterative path must still converge
    rng = random.Random(3)
    n = 700
    entries = {}
    for _ in range(4000):
        entries[(rng.randrange(n), rng.randrange(n))] = Fraction(
            rng.randrange(1, 10)
        )
    op = sparse_operator((n, n), entries)
    est = opnorm_lower(op, tol=1e-13, max_iter=5000)
    dense = np.zeros((n, n))
    for i, j, c in op.entries:
        dense[i, j] = float(c)
    sigma = float(np.linalg.svd(dense, compute_uv=False)[0])
    assert est.lower <= sigma + 1e-9
    assert est.lower == pytest.approx(sigma, rel=1e-6)
    assert est.iterations > 1


# ---------------------------------------------------------------------------
# walk operators on the free factor
# ---------------------------------------------------------------------------


def test_ball_operator_single_generator():
    op = h_ball_operator({free_word("c"): Fraction(1)}, 1)
    # ball(1) sorted: 1, C, D, c, d; c*1 = c interior, c*C = 1 interior,
    # the other three products leave the ball
    words = ball(1)
    idx = {w.chars: i for i, w in enumerate(words)}
    assert op.entries == (
        (idx[""], idx["C"], Fraction(1)),
        (idx["c"], idx[""], Fraction(1)),
    )
    assert op.boundary_cols == frozenset({idx["D"], idx["c"], idx["d"]})


def test_rho_validation():
    with pytest.raises(ValueError):
        rho_estimate((), radius=3)
    with pytest.raises(ValueError):
        rho_estimate((free_word("c"),), radius=3)  # not inverse closed
    with pytest.raises(ValueError):
        rho_estimate((free_word("a"), free_word("A")), radius=3)
    with pytest.raises(ValueError):
        rho_estimate(sphere(1), radius=0)
    assert rho_estimate((W_ONE,), radius=3) == NormEstimate(1.0, 1.0, 0, 3)


def test_rho_sphere_one_matches_generic_truncation():
    coeffs = {h: Fraction(1, 4) for h in sphere(1)}
    for radius in (2, 4, 5):
        fast = rho_estimate(sphere(1), radius=radius, tol=1e-12)
        generic = opnorm_lower(h_ball_operator(coeffs, radius), tol=1e-12)
        assert fast.lower == pytest.approx(generic.lower, abs=1e-9)


def test_rho_sphere_one_frozen_truncation_values():
    est = rho_estimate(sphere(1), radius=12, tol=1e-6)
    assert est.lower == pytest.approx(0.846893930, abs=1e-6)
    assert est.upper == pytest.approx(1.0)
    assert est.truncation_radius == 12
    grow = [
        rho_estimate(sphere(1), radius=r, tol=1e-6).lower for r in (4, 8, 12)
    ]
    assert grow[0] < grow[1] < grow[2] < math.sqrt(3) / 2


def test_rho_sphere_two():
    est = rho_estimate(sphere(2), radius=4, tol=1e-12)
    assert est.upper == pytest.approx(haagerup_bound(2))
    assert 0 < est.lower <= est.upper + 1e-12


def test_rho_non_sphere_symmetric_set():
    est = rho_estimate((free_word("c"), free_word("C")), radius=6, tol=1e-12)
    assert est.upper == 1.0
    assert 0.8 < est.lower <= 1.0  # the single-generator walk has norm 1


def test_haagerup_frozen_values():
    assert haagerup_bound(1) == pytest.approx(1.0)
    assert haagerup_bound(2) == pytest.approx(math.sqrt(3) / 2)
    assert haagerup_bound(3) == pytest.approx(Fraction(2, 3))
    assert haagerup_bound(5) == pytest.approx(Fraction(1, 3))
    assert all(
        haagerup_bound(n + 1) < haagerup_bound(n) for n in range(1, 12)
    )
    with pytest.raises(ValueError):
        haagerup_bound(0)


# ---------------------------------------------------------------------------
# reduced norm bounds for sphere averages
# ---------------------------------------------------------------------------


def test_norm_bound_validation():
    with pytest.raises(ValueError):
        stein_H_norm_bound(SteinElt(st_bn(1).terms, Region(REGION_B)))
    with pytest.raises(ValueError):
        stein_H_norm_bound(st_conv(st_a(), st_bn(1)))


def test_norm_bound_scalar_and_sphere_average():
    three = st_make([(s_from_group(h_elt(W_ONE)), Fraction(3))])
    est = stein_H_norm_bound(three, radius=2)
    assert (est.lower, est.upper) == (3.0, 3.0)
    # the collapsed germ on y-rooted words pins the norm of b_n at 1
    est = stein_H_norm_bound(st_bn(1), radius=4)
    assert est.lower == pytest.approx(1.0)
    assert est.upper == pytest.approx(1.0)
    zero = stein_H_norm_bound(st_sub(st_bn(1), st_bn(1)))
    assert (zero.lower, zero.upper) == (0.0, 0.0)


def test_norm_bound_difference_layers():
    est = stein_H_norm_bound(st_sub(st_bn(1), st_bn(2)), radius=6, tol=1e-9)
    assert est.upper == pytest.approx(haagerup_bound(1) + haagerup_bound(2))
    assert 0.5 < est.lower <= est.upper + 1e-12


def test_bundle_norm_bound_matches_fiber_walk():
    diff_b = bstein_sub(bundle_bn(1), bundle_bn(2))
    diff_s = st_sub(st_bn(1), st_bn(2))
    via_bundle = bundle_norm_bound(diff_b, radius=5, tol=1e-9)
    via_fiber = stein_H_norm_bound(diff_s, radius=5, tol=1e-9)
    assert via_bundle.lower == pytest.approx(via_fiber.lower, abs=1e-9)
    assert via_bundle.upper == pytest.approx(via_fiber.upper, abs=1e-12)


def test_bundle_norm_bound_named_elements():
    est = bundle_norm_bound(bundle_bn(1), radius=3)
    assert est.lower == pytest.approx(1.0)
    assert est.upper == pytest.approx(1.0)
    est = bundle_norm_bound(bundle_chiB(), radius=2)
    assert (est.lower, est.upper) == (1.0, 1.0)
    mixed = bstein_conv(bundle_a(), bundle_bn(1))
    est = bundle_norm_bound(mixed, radius=4)
    assert 0 < est.lower <= est.upper + 1e-12


# ---------------------------------------------------------------------------
# scattering profile
# ---------------------------------------------------------------------------


def test_cauchy_profile_selfsim_frozen():
    prof = cauchy_profile((1, 2, 3), example="selfsim", radius=4)
    assert [(r.n, r.m) for r in prof.rows] == [(1, 2), (1, 3), (2, 3)]
    assert [r.sup_dist for r in prof.rows] == [
        Fraction(1, 4),
        Fraction(1, 4),
        Fraction(1, 12),
    ]
    uppers = [r.upper for r in prof.rows]
    assert uppers[0] == pytest.approx(haagerup_bound(1) + haagerup_bound(2))
    assert uppers[0] > uppers[1] > uppers[2]
    assert all(r.lower <= r.upper + 1e-12 for r in prof.rows)
    assert all(r.lower > 0 for r in prof.rows)
    assert [(r.n, r.sup_dist) for r in prof.limit_rows] == [
        (1, Fraction(1, 4)),
        (2, Fraction(1, 12)),
        (3, Fraction(1, 36)),
    ]


def test_cauchy_profile_bundle_agrees():
    selfsim = cauchy_profile((1, 2), example="selfsim", radius=4)
    bundle = cauchy_profile((1, 2), example="bundle", radius=4)
    assert [r.sup_dist for r in bundle.rows] == [
        r.sup_dist for r in selfsim.rows
    ]
    assert bundle.rows[0].upper == pytest.approx(selfsim.rows[0].upper)
    assert bundle.rows[0].lower == pytest.approx(
        selfsim.rows[0].lower, abs=1e-9
    )
    assert [(r.n, r.sup_dist) for r in bundle.limit_rows] == [
        (1, Fraction(1, 4)),
        (2, Fraction(1, 12)),
    ]


def test_cauchy_profile_validation_and_edges():
    with pytest.raises(ValueError):
        cauchy_profile((1, 2), example="nope")
    with pytest.raises(ValueError):
        cauchy_profile((0, 2))
    empty = cauchy_profile((), example="selfsim")
    assert empty.rows == () and empty.limit_rows == ()
    single = cauchy_profile((2,), example="selfsim", radius=3)
    assert single.rows == ()
    assert single.limit_rows == (LimitRow(2, Fraction(1, 12)),)


def test_sup_distances_vanish_but_norms_do_not():
    # pointwise Cauchy: sup distances shrink by a factor 3 per index, while
    # the certified norm lower bounds stay above a fixed floor
    prof = cauchy_profile((1, 2, 3), example="selfsim", radius=5)
    sups = {(r.n, r.m): r.sup_dist for r in prof.rows}
    assert sups[(2, 3)] == sups[(1, 2)] / 3
    assert min(r.lower for r in prof.rows) > 0.5
