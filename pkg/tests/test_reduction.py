"""Change of variables to the flat radial problem: weight, potential,
exact indices, and field transforms."""

import math
from fractions import Fraction

import numpy as np
import pytest
import sympy as sp

from equiwave.errors import DomainError
from equiwave.profiles import SERIES_RADIUS, metric_profile
from equiwave.reduction import (
    compute_V,
    compute_V0,
    gamma_weights,
    indices,
    reduce_problem,
    transform_field,
    weight_w,
)


def sympy_V(h_expr, r, n, k, r0):
    h = h_expr
    lbar = k * (k + n - 2)
    V = sp.Rational(n - 1, 2) * (
        sp.diff(h, r, 2) / h
        + sp.Rational(n - 3, 2) * (sp.diff(h, r) ** 2 / h**2 - 1 / r**2)
    ) + lbar * (1 / h**2 - 1 / r**2)
    return float(V.subs(r, r0))


def test_weight_w_values():
    hyp = metric_profile("hyperbolic")
    r = 1.3
    want = r ** (1 + 1) / math.sinh(r) ** 1  # n=3, k=1
    assert math.isclose(weight_w(hyp, 3, 1, r), want, rel_tol=1e-12)
    assert weight_w(hyp, 3, 1, 0.0) == 0.0


def test_V_matches_sympy_direct():
    r = sp.symbols("r", positive=True)
    hyp = metric_profile("hyperbolic")
    for n, k in ((3, 1), (5, 2)):
        for r0 in (0.5, 1.0, 2.0):
            want = sympy_V(sp.sinh(r), r, n, k, r0)
            got = compute_V(hyp, n, k, r0)
            assert math.isclose(got, want, rel_tol=1e-10)


def test_V_series_seam_continuity():
    hyp = metric_profile("hyperbolic")
    below = SERIES_RADIUS * 0.999
    above = SERIES_RADIUS * 1.001
    for n, k in ((3, 1), (4, 1), (3, 2)):
        a = compute_V(hyp, n, k, below)
        b = compute_V(hyp, n, k, above)
        assert abs(a - b) < 1e-7 * max(1.0, abs(a))


def test_V_origin_limit_hyperbolic():
    # sinh r = r + r^3/6 + ..., so h1(0) = 1/6 and V(0+) for n=3, k=1 is
    # (n-1)/2 * 6 h1 + lbar * (-2 h1) = 3/6 * 6 * ... evaluated: 1/3
    hyp = metric_profile("hyperbolic")
    got = compute_V(hyp, 3, 1, 1e-9)
    r = sp.symbols("r", positive=True)
    want = float(sp.limit(
        sp.Rational(1, 1) * (sp.diff(sp.sinh(r), r, 2) / sp.sinh(r))
        + 2 * (1 / sp.sinh(r) ** 2 - 1 / r**2), r, 0))
    assert math.isclose(got, want, rel_tol=1e-6)


def test_V_minus_V0_identity():
    # V - V0 = lbar (1/h^2 - 1/r^2) exactly
    hyp = metric_profile("hyperbolic")
    n, k = 5, 2
    lbar = k * (k + n - 2)
    rs = np.array([0.2, 0.7, 1.9])
    V = compute_V(hyp, n, k, rs)
    V0 = compute_V0(hyp, n, rs)
    want = lbar * (1.0 / np.sinh(rs) ** 2 - 1.0 / rs**2)
    assert np.allclose(V - V0, want, rtol=1e-12)


def test_flat_V_is_zero():
    flat = metric_profile("flat")
    rs = np.array([1e-4, 0.1, 1.0, 10.0])
    assert np.allclose(compute_V(flat, 3, 1, rs), 0.0, atol=1e-10)


def test_indices_exact_rationals():
    for n, k in ((3, 1), (4, 1), (3, 2)):
        idx = indices(n, k)
        m = n + 2 * k
        assert idx["m"] == m
        assert idx["p"] == Fraction(4 * (m + 1), m + 3)
        assert idx["q"] == Fraction(4 * m * (m + 1), 2 * m * m - m - 5)
        # diagonal pair on the admissibility line, exactly
        a = idx["a"]
        assert Fraction(2) / a + Fraction(m - 1) / a == Fraction(m - 1, 2)
        # dual identities
        assert 2 * idx["a_prime"] == idx["p"]
        assert idx["b"] == idx["q"]


def test_indices_m5_pair_is_diagonal():
    idx = indices(3, 1)
    assert idx["p"] == idx["q"] == idx["a"] == Fraction(3)


def test_indices_extended_range():
    for n, k in ((4, 1), (3, 2), (5, 3)):
        idx = indices(n, k)
        m = idx["m"]
        lhs = Fraction(1) / idx["q"]
        rhs = Fraction(1, 2) - Fraction(2, m - 1) / idx["p"]
        assert lhs <= rhs


def test_transform_round_trip():
    hyp = metric_profile("hyperbolic")
    rs = np.linspace(0.1, 5.0, 40)
    phi = rs * np.exp(-rs)
    psi = transform_field("phi_to_psi", phi, hyp, 3, 1, rs)
    back = transform_field("psi_to_phi", psi, hyp, 3, 1, rs)
    assert np.allclose(back, phi, rtol=1e-14)
    with pytest.raises(DomainError):
        transform_field("sideways", phi, hyp, 3, 1, rs)


def test_gamma_weights_flat():
    flat = metric_profile("flat")
    rs = np.array([0.5, 1.0, 2.0])
    pref, arg = gamma_weights(flat, 3, 1, rs)
    # m=5: r^4 / r^4 = 1 and w = r
    assert np.allclose(pref, 1.0)
    assert np.allclose(arg, rs)


def test_reduce_problem_summary():
    hyp = metric_profile("hyperbolic")
    problem = reduce_problem(hyp, 3, 1)
    assert problem.m == 5
    assert math.isclose(problem.h_infinity, 1.0, rel_tol=1e-8)
    rs = np.array([0.5, 1.0])
    assert np.allclose(problem.W(rs), problem.V(rs) - problem.h_infinity)
    summary = problem.summary(r_samples=rs)
    assert summary["indices"]["p"] == [3, 1]
    assert len(summary["V_samples"]["V"]) == 2


def test_reduce_problem_rejects_bad_inputs():
    hyp = metric_profile("hyperbolic")
    with pytest.raises(DomainError):
        indices(3, 0)
    with pytest.raises(DomainError):
        compute_V(hyp, 2, 1, 1.0)
