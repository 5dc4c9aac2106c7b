"""Nonlinear integrator: cross-module oracles, symmetry diagnostics,
formulation consistency, and blow-up detection."""

import math

import numpy as np
import pytest

from _baselines import REGRESSION_WINDOW, SOLVER_TRACE
from equiwave.errors import BlowUp, CFLViolation, DomainError
from equiwave.scenario import Scenario
from equiwave.solver import (
    Trajectory,
    WaveState,
    consistency_check,
    energy,
    integrate,
    strichartz_trace,
)
from equiwave.spectral import RadialGrid, build_operator, evolve_linear


def make_scenario(
    manifold="flat",
    target="sphere",
    n=3,
    k=1,
    R=30.0,
    N=500,
    T=10.0,
    dtf=0.1,
    snap=1.0,
    data=None,
):
    return Scenario(
        "test", {"kind": manifold}, {"kind": target}, n, k, 0.5,
        {"R_max": R, "N": N},
        {"T": T, "dt_factor": dtf, "snap_every": snap},
        data or {"shape": "gaussian", "amplitude": 0.05, "width": 1.0, "center": 0.0},
    )


def test_zero_data_zero_trajectory():
    s = make_scenario(data={"shape": "zero"})
    for form in ("phi", "psi"):
        tr = integrate(s, form, spectral_diagnostics=False)
        assert np.max(tr.sup_norms) == 0.0
        assert np.max(tr.energies) == 0.0
        assert np.max(np.abs(tr.final_state.field)) == 0.0


def test_linear_flat_matches_spectral_propagator():
    # flat base and flat target: the psi equation is the free flow on R^5
    errs = []
    for N in (500, 1000):
        s = make_scenario(target="flat", N=N, T=8.0, dtf=0.25)
        tr = integrate(s, "psi", spectral_diagnostics=False)
        grid = RadialGrid(30.0, N)
        op = build_operator(grid, 5)
        phi0, phi1 = s.initial_data(grid.nodes)
        ref = evolve_linear(op, phi0 / grid.nodes, phi1 / grid.nodes, 0.0, tr.times[-1])
        errs.append(np.max(np.abs(tr.final_state.field - ref)))
    assert errs[0] < 1e-5
    assert errs[0] / errs[1] == pytest.approx(4.0, rel=0.25)


def test_energy_conservation_and_reversal():
    for manifold in ("flat", "hyperbolic"):
        s = make_scenario(manifold=manifold, N=800, T=12.0, snap=0.5)
        tr = integrate(s, "phi", spectral_diagnostics=False)
        drift = np.max(np.abs(tr.energies - tr.energies[0])) / tr.energies[0]
        assert drift < 5e-5
        fs = tr.final_state
        back = WaveState(0.0, fs.field.copy(), -fs.velocity, "phi")
        tr2 = integrate(s, "phi", initial_state=back,
                        spectral_diagnostics=False, ceiling=math.inf)
        phi0, phi1 = s.initial_data(RadialGrid(30.0, 800).nodes)
        rev = max(
            np.max(np.abs(tr2.final_state.field - phi0)),
            np.max(np.abs(-tr2.final_state.velocity - phi1)),
        )
        assert rev < 1e-8


def test_small_data_boundedness():
    for manifold in ("flat", "hyperbolic", "smoothed-polynomial", "smoothed-exponential"):
        s = make_scenario(manifold=manifold, N=500, T=10.0)
        tr = integrate(s, "phi", spectral_diagnostics=False)
        assert tr.sup_norms.max() <= 2.0 * tr.sup_norms[0]


def test_energy_matches_standalone_function():
    s = make_scenario(N=400, T=2.0)
    tr = integrate(s, "phi", spectral_diagnostics=False)
    st = tr.states[0]
    assert math.isclose(energy(st, s), tr.energies[0], rel_tol=1e-12)


def test_energy_of_psi_state_agrees():
    s = make_scenario(N=800, T=2.0)
    tp = integrate(s, "phi", spectral_diagnostics=False)
    tq = integrate(s, "psi", spectral_diagnostics=False)
    # the two discrete functionals agree to quadrature order, O(dr^2)
    assert math.isclose(tp.energies[0], tq.energies[0], rel_tol=1e-3)
    assert math.isclose(energy(tq.states[0], s), tp.energies[0], rel_tol=1e-12)


def test_consistency_check_second_order():
    reps = [consistency_check(make_scenario(manifold="hyperbolic", N=N, T=6.0))
            for N in (400, 800)]
    assert reps[0]["mismatch"] / reps[1]["mismatch"] == pytest.approx(4.0, rel=0.2)
    assert reps[1]["mismatch"] < 1e-4


def test_consistency_zero_data_exact():
    rep = consistency_check(make_scenario(data={"shape": "zero"}, N=300, T=3.0))
    assert rep["mismatch"] == 0.0


def test_blowup_detection():
    # ceiling forced to a tiny value trips the detector immediately
    s = make_scenario(N=300, T=5.0)
    with pytest.raises(BlowUp) as exc:
        integrate(s, "phi", spectral_diagnostics=False, ceiling=1e-6)
    assert exc.value.t >= 0.0
    assert exc.value.r >= 0.0


def test_cfl_guard():
    s = make_scenario()
    s.time = dict(s.time, dt_factor=0.7)
    with pytest.raises(CFLViolation):
        integrate(s, "phi")


def test_sphere_domain_exit_raises():
    # data far beyond the target domain bound trips the cubic term
    s = make_scenario(N=300, T=5.0,
                      data={"shape": "gaussian", "amplitude": 50.0, "width": 1.0,
                            "center": 0.0})
    with pytest.raises((BlowUp, DomainError)):
        integrate(s, "phi", spectral_diagnostics=False, ceiling=math.inf)


def test_trajectory_diagnostics_shape():
    s = make_scenario(N=400, T=4.0, snap=1.0)
    tr = integrate(s, "phi")
    assert np.all(np.diff(tr.times) > 0)
    assert len(tr.energies) == len(tr.times) == len(tr.states)
    assert np.all(np.isfinite(tr.h_half_norms))
    assert np.all(tr.local_energies >= 0)
    rows = tr.csv_rows()
    assert len(rows) == len(tr.times)


def test_strichartz_trace_baseline_and_monotonicity():
    s = make_scenario(N=1000, T=15.0, snap=0.5)
    tr = integrate(s, "phi", spectral_diagnostics=False)
    total, partials = strichartz_trace(tr, s, return_partials=True)
    assert total == pytest.approx(SOLVER_TRACE, rel=REGRESSION_WINDOW)
    assert np.all(np.diff(partials) >= -1e-15)
    half = Trajectory(
        tr.times[:10], tr.energies[:10], tr.sup_norms[:10],
        tr.h_half_norms[:10], tr.local_energies[:10], tr.states[:10], "phi",
    )
    assert strichartz_trace(half, s) <= total


def test_strichartz_trace_zero_trajectory():
    s = make_scenario(N=300, T=3.0, data={"shape": "zero"})
    tr = integrate(s, "phi", spectral_diagnostics=False)
    assert strichartz_trace(tr, s) == 0.0
