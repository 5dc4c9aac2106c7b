"""Hardy, smoothing, Strichartz, and dimension-shift checks, with
regression baselines frozen on the first build."""

import math

import numpy as np
import pytest

from _baselines import (
    DIMSHIFT_S1_BRACKET,
    EQUIVNORM_BRACKETS,
    REGRESSION_WINDOW,
    STRICHARTZ_FLAT,
    STRICHARTZ_FREE,
    STRICHARTZ_HYPERBOLIC_KG,
)
from equiwave.errors import BetaDiverges, DomainError, HypothesisFail, NotAdmissible
from equiwave.estimates import (
    dimshift_check,
    gaussian_family,
    hardy2_check,
    hardy_check,
    hardy_probe_family,
    smoothing_check,
    strichartz_monitor,
    validate_wave_pair,
)
from equiwave.profiles import metric_profile
from equiwave.reduction import reduce_problem
from equiwave.spectral import RadialGrid, build_operator, frac_norm


class _JetWeight:
    """Callable with a .jet method, for the concave-weight Hardy check."""

    def __init__(self, fn, derivs):
        self._fn = fn
        self._derivs = derivs

    def __call__(self, r):
        return self._fn(np.asarray(r, dtype=float))

    def jet(self, r0, order):
        from equiwave.jets import Jet

        return Jet.from_derivatives(r0, [d(r0) for d in self._derivs[: order + 1]])


# -- Hardy -------------------------------------------------------------------------


def test_hardy_analytic_sample():
    # u = r e^(-r), alpha = r^(1-n): LHS/RHS = 1/2 exactly, quadrature 1e-6
    fam = [
        type(
            "T", (), {
                "id": "analytic",
                "fn": staticmethod(lambda r: r * np.exp(-r)),
                "dfn": staticmethod(lambda r: (1.0 - r) * np.exp(-r)),
            },
        )
    ]
    for n in (3, 5):
        rep = hardy_check(lambda r: r ** (1.0 - n), n, fam, Nq=40000)
        assert abs(rep.ratios[0] - 0.5) < 1e-6


def test_hardy_gaussian_suite_below_one():
    for n in (3, 5):
        fam = gaussian_family(30, 0, r_power=1)
        rep = hardy_check(lambda r: r ** (1.0 - n), n, fam)
        assert rep.passed
        assert rep.sup_ratio <= 1.0


def test_hardy_probes_approach_one_from_below():
    fam = hardy_probe_family(10, 1)
    rep = hardy_check(lambda r: r ** (1.0 - 3), 3, fam)
    assert rep.passed
    assert 0.8 < rep.sup_ratio <= 1.0


def test_hardy_beta_divergence_guard():
    with pytest.raises(BetaDiverges):
        hardy_check(lambda r: np.ones_like(r), 3, gaussian_family(2, 0))


def test_hardy2_matches_hardy_in_limit():
    # zeta = r makes the concave weight e^(-2 eps r)(1 + 2 eps r); as
    # eps -> 0 it recovers the classical inequality with weight 1/r^2
    zeta = _JetWeight(
        lambda r: r,
        [lambda r: r, lambda r: 1.0, lambda r: 0.0, lambda r: 0.0],
    )
    fam = gaussian_family(10, 2, r_power=1)
    rep = hardy2_check(zeta, 1e-6, 3, fam)
    assert rep.passed
    classical = hardy_check(lambda r: r ** (1.0 - 3), 3, fam)
    assert abs(rep.sup_ratio - classical.sup_ratio) < 1e-4


def test_hardy2_hypothesis_guard():
    bad = _JetWeight(
        lambda r: -r,
        [lambda r: -r, lambda r: -1.0, lambda r: 0.0],
    )
    with pytest.raises(HypothesisFail):
        hardy2_check(bad, 0.1, 3, gaussian_family(2, 0))


# -- smoothing ---------------------------------------------------------------------


LAMBDA_GRID = [complex(re, im) for re in (0.0, 2.5, 5.0) for im in (0.2, 2.6, 5.0)]


def test_smoothing_flat():
    flat = metric_profile("flat")
    fam = gaussian_family(6, 0, r_power=1)
    rep = smoothing_check(flat, 3, 1, 0.5, LAMBDA_GRID, fam, h_infinity=0.0,
                          R_max=60.0, N=1500)
    assert rep.passed
    assert rep.sup_ratio <= 8.0 * 1.1


def test_smoothing_hyperbolic():
    hyp = metric_profile("hyperbolic")
    fam = gaussian_family(6, 0, r_power=1)
    rep = smoothing_check(hyp, 3, 1, 0.95, LAMBDA_GRID, fam, h_infinity=1.0,
                          R_max=60.0, N=1500)
    assert rep.passed
    assert rep.sup_ratio <= (4.0 / 0.95) * 1.1


def test_smoothing_rejects_bad_delta0():
    flat = metric_profile("flat")
    with pytest.raises(DomainError):
        smoothing_check(flat, 3, 1, 1.5, LAMBDA_GRID, gaussian_family(1, 0),
                        h_infinity=0.0, R_max=60.0, N=500)


# -- Strichartz --------------------------------------------------------------------


def test_validate_wave_pair():
    validate_wave_pair(3, 3, 5)
    with pytest.raises(NotAdmissible):
        validate_wave_pair(2, 10, 5)  # p must exceed 2
    with pytest.raises(NotAdmissible):
        validate_wave_pair(4, 4, 5)  # off the admissibility line


@pytest.fixture(scope="module")
def strichartz_setup():
    grid = RadialGrid(60.0, 2000)
    free = build_operator(grid, 5)
    fams = gaussian_family(10, 0, r_power=2)
    fam = [tf.fn(grid.nodes) for tf in fams]
    return grid, free, fam


def test_strichartz_free_baseline(strichartz_setup):
    grid, free, fam = strichartz_setup
    rep = strichartz_monitor(free, 0.0, (3, 3), fam, free_op=free)
    assert rep.passed
    assert rep.sup_ratio == pytest.approx(STRICHARTZ_FREE, rel=REGRESSION_WINDOW)


def test_strichartz_flat_reduced_baseline(strichartz_setup):
    grid, free, fam = strichartz_setup
    problem = reduce_problem(metric_profile("flat"), 3, 1, h_infinity=0.0)
    op = build_operator(grid, 5, problem.W(grid.nodes))
    rep = strichartz_monitor(op, 0.0, (3, 3), fam, free_op=free)
    assert rep.sup_ratio == pytest.approx(STRICHARTZ_FLAT, rel=REGRESSION_WINDOW)


def test_strichartz_hyperbolic_kg_baseline(strichartz_setup):
    grid, free, fam = strichartz_setup
    problem = reduce_problem(metric_profile("hyperbolic"), 3, 1, h_infinity=1.0)
    op = build_operator(grid, 5, problem.W(grid.nodes))
    rep = strichartz_monitor(op, 1.0, (3, 3), fam, free_op=free)
    assert rep.sup_ratio == pytest.approx(
        STRICHARTZ_HYPERBOLIC_KG, rel=REGRESSION_WINDOW
    )


def test_equivalent_norms_bracket(strichartz_setup):
    # fractional norms of the reduced operator against the free one stay
    # within the frozen bracket over s in {-1, -1/2, 0, 1/2, 1}
    grid, free, fam = strichartz_setup
    problem = reduce_problem(metric_profile("hyperbolic"), 3, 1, h_infinity=1.0)
    op = build_operator(grid, 5, problem.W(grid.nodes))
    for s, (lo, hi) in EQUIVNORM_BRACKETS.items():
        rats = []
        for v in fam:
            a = frac_norm(op, s, v, shift="inhomogeneous")
            b = frac_norm(free, s, v, shift="inhomogeneous")
            rats.append(a / b)
        assert min(rats) >= lo * (1.0 - 0.05)
        assert max(rats) <= hi * (1.0 + 0.05)


# -- dimension shift ----------------------------------------------------------------


def test_dimshift_s0_exact():
    fam = gaussian_family(30, 0, r_power=1)
    rep = dimshift_check(3, 1, 0.0, fam)
    assert np.allclose(rep.ratios, 1.0, atol=1e-12)


def test_dimshift_s1_bracket():
    fam = gaussian_family(30, 0, r_power=1)
    rep = dimshift_check(3, 1, 1.0, fam)
    lo, hi = DIMSHIFT_S1_BRACKET
    assert min(rep.ratios) == pytest.approx(lo, rel=1e-9)
    assert max(rep.ratios) == pytest.approx(hi, rel=1e-9)
    assert rep.detail["log_ratio_spread"] <= 1.0


def test_dimshift_rejects_other_s():
    with pytest.raises(DomainError):
        dimshift_check(3, 1, 0.5, gaussian_family(1, 0))


def test_report_json_and_csv():
    fam = gaussian_family(3, 0, r_power=1)
    rep = hardy_check(lambda r: r ** (1.0 - 3), 3, fam)
    payload = rep.to_json()
    assert payload["verdict"] == "PASS"
    assert len(rep.csv_rows()) == 3
