"""Nonlinear time integration of the equivariant wave-map equation.

Two formulations of the same flow are integrated with an explicit
velocity-Verlet (leapfrog) scheme:

  phi-form on the base manifold:
      phi_tt = Delta_h phi - lbar g(phi) g'(phi) / h^2,
  psi-form on flat R^m (phi = w psi):
      psi_tt = Delta_m psi - V psi - (r^(m-1)/h^(n+1)) psi^3 Gamma(w psi).

Both spatial operators are finite-volume divergence forms built from the
same cell-average machinery as the spectral module, so the linear flat
case reproduces the spectral propagator to second order.  The scheme is
time-symmetric; reversal and energy drift double as correctness tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

import numpy as np

from .errors import BlowUp, CFLViolation, DomainError
from .profiles import gamma_decompose
from .reduction import compute_V, gamma_weights, indices, weight_w
from .scenario import Scenario
from .spectral import (
    DiscreteRadialOperator,
    RadialGrid,
    _power_cells,
    _simpson_cells,
    build_operator,
    frac_norm,
)

BLOWUP_FACTOR = 1e3  # ceiling = BLOWUP_FACTOR * sup of the initial field


@dataclass
class WaveState:
    t: float
    field: np.ndarray
    velocity: np.ndarray
    formulation: str  # "phi" or "psi"

    def __post_init__(self):
        if self.formulation not in ("phi", "psi"):
            raise DomainError(f"unknown formulation {self.formulation!r}")


@dataclass
class Trajectory:
    times: np.ndarray
    energies: np.ndarray
    sup_norms: np.ndarray
    h_half_norms: np.ndarray
    local_energies: np.ndarray
    states: list
    formulation: str
    meta: dict = field(default_factory=dict)

    @property
    def final_state(self) -> WaveState:
        return self.states[-1]

    def csv_rows(self, strichartz_partials=None):
        rows = []
        for i, t in enumerate(self.times):
            part = "" if strichartz_partials is None else strichartz_partials[i]
            rows.append(
                (t, self.energies[i], self.sup_norms[i],
                 self.h_half_norms[i], part)
            )
        return rows


class _FluxOperator:
    """Finite-volume divergence form (F u')'/rho on the cell grid, with
    zero flux through r=0 and a zero Dirichlet value beyond R_max."""

    def __init__(self, grid: RadialGrid, F_faces: np.ndarray, rho_cells: np.ndarray):
        self.grid = grid
        self.F = np.asarray(F_faces, dtype=float)
        self.rho = np.asarray(rho_cells, dtype=float)
        self._scale = 1.0 / (grid.dr**2 * self.rho)

    def apply(self, u: np.ndarray) -> np.ndarray:
        flux = np.empty(self.grid.N + 1)
        flux[0] = 0.0
        flux[1:-1] = self.F[1:-1] * np.diff(u)
        flux[-1] = -self.F[-1] * u[-1]
        return np.diff(flux) * self._scale

    def quadratic_form(self, u: np.ndarray) -> float:
        """sum over faces of F (du/dr)^2, the discrete gradient energy
        (times dr it approximates the integral of F u'^2)."""
        du2 = np.diff(u) ** 2
        edge = u[-1] ** 2
        return float(
            (np.sum(self.F[1:-1] * du2) + self.F[-1] * edge) / self.grid.dr**2
        )


class _Discretization:
    """Everything precomputable for one scenario and formulation."""

    def __init__(self, scenario: Scenario, formulation: str):
        self.scenario = scenario
        self.formulation = formulation
        self.grid = RadialGrid(
            float(scenario.grid["R_max"]), int(scenario.grid["N"])
        )
        self.profile = scenario.profile()
        self.target = scenario.target_profile()
        n, k = scenario.n, scenario.k
        self.n, self.k = n, k
        self.m = n + 2 * k
        self.lbar = k * (k + n - 2)
        r = self.grid.nodes
        self.h_nodes = self.profile(r)
        self.w_nodes = weight_w(self.profile, n, k, r)
        if formulation == "phi":
            F = self.profile(self.grid.faces) ** (n - 1)
            rho = _simpson_cells(self.grid, lambda x: self.profile(x) ** (n - 1))
            self.op = _FluxOperator(self.grid, F, rho)
            # The linear part of the nonlinearity, lbar*phi/h^2, is singular
            # at the origin and must cancel the FV Laplacian discretely, not
            # just in the continuum.  Near 0 we therefore evaluate the
            # diagonal through the regular mode w, using the exact identity
            # (Delta_h - lbar/h^2) w = -V w; away from 0 the pointwise value
            # agrees with it to second order and avoids boundary pollution.
            V = compute_V(self.profile, n, k, r)
            balanced = self.op.apply(self.w_nodes) / self.w_nodes + V
            pointwise = self.lbar / self.h_nodes**2
            self.lin_diag = np.where(r < 1.0, balanced, pointwise)
            self.V = None
            self.pref = None
        elif formulation == "psi":
            F = self.grid.faces ** (self.m - 1)
            rho = _power_cells(self.grid, self.m)
            self.op = _FluxOperator(self.grid, F, rho)
            self.V = compute_V(self.profile, n, k, r)
            self.pref, _ = gamma_weights(self.profile, n, k, r)
        else:
            raise DomainError(f"unknown formulation {formulation!r}")

    def acceleration(self, u: np.ndarray) -> np.ndarray:
        if self.formulation == "phi":
            # lbar*g(u)g'(u)/h^2 = lin_diag*u + Gamma(u)*u*(u/h)^2, with the
            # cubic remainder smooth at the origin (u ~ r^k, h ~ r)
            gam = gamma_decompose(self.target, self.lbar, u)
            cubic = gam * u * (u / self.h_nodes) ** 2
            return self.op.apply(u) - self.lin_diag * u - cubic
        gam = gamma_decompose(self.target, self.lbar, self.w_nodes * u)
        return self.op.apply(u) - self.V * u - self.pref * u**3 * gam

    def to_phi(self, u: np.ndarray) -> np.ndarray:
        return u if self.formulation == "phi" else self.w_nodes * u

    def initial_state(self) -> WaveState:
        phi0, phi1 = self.scenario.initial_data(self.grid.nodes)
        if self.formulation == "psi":
            return WaveState(0.0, phi0 / self.w_nodes, phi1 / self.w_nodes, "psi")
        return WaveState(0.0, phi0, phi1, "phi")


@lru_cache(maxsize=4)
def _free_operator(R_max: float, N: int, m: int) -> DiscreteRadialOperator:
    return build_operator(RadialGrid(R_max, N), m)


def energy(state: WaveState, scenario: Scenario) -> float:
    """Discrete conserved energy of the phi-form flow,

      E = 1/2 integral (phi_t^2 + phi_r^2 + lbar g(phi)^2/h^2) h^(n-1) dr,

    evaluated with the same finite-volume weights as the stencil so the
    semidiscrete flow conserves it exactly.  psi-form states are
    transformed to the phi-form first."""
    disc = _Discretization(scenario, "phi")
    if state.formulation == "psi":
        phi = disc.w_nodes * state.field
        phi_t = disc.w_nodes * state.velocity
    else:
        phi = state.field
        phi_t = state.velocity
    return _phi_form_energy(disc, phi, phi_t)


def _phi_form_energy(disc: "_Discretization", phi, phi_t) -> float:
    """FV quadrature of the phi-form energy, with the potential term the
    exact antiderivative of the discrete force (so the semidiscrete flow
    conserves it and the leapfrog drift is pure O(dt^2))."""
    g = disc.target(phi)
    rho = disc.op.rho
    pot = disc.lin_diag * phi**2 + disc.lbar * (g**2 - phi**2) / disc.h_nodes**2
    val = np.sum(rho * phi_t**2) + np.sum(rho * pot)
    val += disc.op.quadratic_form(phi)
    return 0.5 * disc.grid.dr * val


def _psi_form_energy(disc: "_Discretization", psi, psi_t) -> float:
    """Discrete energy conserved by the semidiscrete psi-form flow; it
    agrees with the phi-form energy in the continuum limit."""
    rho = disc.op.rho
    w, h = disc.w_nodes, disc.h_nodes
    s = w * psi
    g = disc.target(s)
    pot = disc.V * psi**2 + disc.lbar * (g**2 - s**2) / (h * w) ** 2
    val = np.sum(rho * psi_t**2) + np.sum(rho * pot)
    val += disc.op.quadratic_form(psi)
    return 0.5 * disc.grid.dr * val


def _local_energy(disc: _Discretization, phi, phi_t, radius: float) -> float:
    """Energy density integrated over the ball r < radius."""
    mask = disc.grid.nodes < radius
    rho = disc.op.rho[mask]
    g = disc.target(phi[mask])
    dens = rho * (phi_t[mask] ** 2 + disc.lbar * g**2 / disc.h_nodes[mask] ** 2)
    du = np.diff(phi) / disc.grid.dr
    fmask = disc.grid.faces[1:-1] < radius
    grad = np.sum(disc.op.F[1:-1][fmask] * du[fmask] ** 2)
    return 0.5 * disc.grid.dr * (np.sum(dens) + grad)


def integrate(
    scenario: Scenario,
    formulation: str = "phi",
    initial_state: Optional[WaveState] = None,
    spectral_diagnostics: bool = True,
    keep_states: bool = True,
    ceiling: Optional[float] = None,
) -> Trajectory:
    """Velocity-Verlet integration of the scenario to time T with
    snapshots every snap_every.  Raises BlowUp when the field exceeds
    BLOWUP_FACTOR times its initial sup or becomes non-finite."""
    disc = _Discretization(scenario, formulation)
    grid = disc.grid
    dt_factor = float(scenario.time["dt_factor"])
    if dt_factor > 0.5:
        raise CFLViolation(f"dt_factor {dt_factor} exceeds 0.5")
    T = float(scenario.time["T"])
    # land exactly on T: shrink dt below the CFL target if needed
    n_steps = max(1, math.ceil(T / (dt_factor * grid.dr))) if T > 0 else 0
    dt = T / n_steps if n_steps else dt_factor * grid.dr
    snap_stride = max(1, int(round(float(scenario.time["snap_every"]) / dt))) if n_steps else 1

    state = initial_state or disc.initial_state()
    if state.formulation != formulation:
        raise DomainError("initial state formulation does not match")
    u = np.array(state.field, dtype=float)
    v = np.array(state.velocity, dtype=float)
    t0 = state.t

    sup0 = float(np.max(np.abs(disc.to_phi(u))))
    if ceiling is None:
        ceiling = BLOWUP_FACTOR * sup0 if sup0 > 0 else 1.0
    ball = grid.R_max / 3.0

    free_op = None
    if spectral_diagnostics:
        free_op = _free_operator(grid.R_max, grid.N, disc.m)

    times, energies, sups, halves, locals_ = [], [], [], [], []
    states = []

    def check(t, uu):
        phi = disc.to_phi(uu)
        a = np.abs(phi)
        if not np.all(np.isfinite(a)) or np.max(a) > ceiling:
            bad = np.argmax(np.where(np.isfinite(a), a, np.inf))
            raise BlowUp(t, grid.nodes[bad])

    # the energy quadrature always lives on the phi-form discretization
    phi_disc = _Discretization(scenario, "phi") if formulation == "psi" else disc

    def _energy_fast(uu, vv, phi, phi_t):
        if formulation == "psi":
            return _psi_form_energy(disc, uu, vv)
        return _phi_form_energy(phi_disc, phi, phi_t)

    def snapshot(t, uu, vv):
        phi = disc.to_phi(uu)
        phi_t = disc.to_phi(vv)
        times.append(t)
        energies.append(_energy_fast(uu, vv, phi, phi_t))
        sups.append(float(np.max(np.abs(phi))))
        if free_op is not None:
            psi = uu if formulation == "psi" else phi / disc.w_nodes
            halves.append(frac_norm(free_op, 0.5, psi))
        else:
            halves.append(math.nan)
        locals_.append(_local_energy(phi_disc, phi, phi_t, ball))
        if keep_states:
            states.append(WaveState(t, uu.copy(), vv.copy(), formulation))

    check(t0, u)
    snapshot(t0, u, v)
    a = disc.acceleration(u)
    for step in range(1, n_steps + 1):
        v += 0.5 * dt * a
        u += dt * v
        a = disc.acceleration(u)
        v += 0.5 * dt * a
        t = t0 + step * dt
        check(t, u)
        if step % snap_stride == 0 or step == n_steps:
            snapshot(t, u, v)

    return Trajectory(
        times=np.array(times),
        energies=np.array(energies),
        sup_norms=np.array(sups),
        h_half_norms=np.array(halves),
        local_energies=np.array(locals_),
        states=states,
        formulation=formulation,
        meta={
            "dt": dt,
            "n_steps": n_steps,
            "ceiling": ceiling,
            "ball_radius": ball,
            "energy_functional": formulation,
            "scenario": scenario.to_json(),
        },
    )


def consistency_check(scenario: Scenario) -> dict:
    """Integrate both formulations on the same data and report the max
    over snapshots of || w psi - phi ||_inf."""
    traj_phi = integrate(scenario, "phi", spectral_diagnostics=False)
    traj_psi = integrate(scenario, "psi", spectral_diagnostics=False)
    disc = _Discretization(scenario, "psi")
    per = []
    for sp, sq in zip(traj_phi.states, traj_psi.states):
        per.append(float(np.max(np.abs(sp.field - disc.w_nodes * sq.field))))
    return {
        "mismatch": max(per) if per else 0.0,
        "per_snapshot": per,
        "times": traj_phi.times.tolist(),
        "N": int(scenario.grid["N"]),
    }


def strichartz_trace(
    trajectory: Trajectory, scenario: Scenario, return_partials: bool = False
):
    """Discrete L^p_t H^((n-1)/2)_q norm of the run: the reduced field
    w^(-1) phi is measured with the free-operator fractional calculus on
    R^m, L^q by radial quadrature, then L^p in time by the trapezoid
    rule over the stored snapshots."""
    if not trajectory.states:
        raise DomainError("trajectory carries no stored states")
    sc = scenario
    grid = RadialGrid(float(sc.grid["R_max"]), int(sc.grid["N"]))
    idx = indices(sc.n, sc.k)
    p, q = float(idx["p"]), float(idx["q"])
    m = idx["m"]
    op = _free_operator(grid.R_max, grid.N, m)
    s = (sc.n - 1) / 2
    disc = _Discretization(sc, trajectory.formulation)
    wq = grid.volume_weights(m)
    powered = (1.0 + np.maximum(op.eigenvalues, 0.0)) ** (s / 2)
    lq = []
    for st in trajectory.states:
        psi = st.field if st.formulation == "psi" else st.field / disc.w_nodes
        g = op.from_coefficients(powered * op.coefficients(psi))
        lq.append(float(np.sum(wq * np.abs(g) ** q) ** (1.0 / q)))
    lq = np.array(lq)
    partials = np.zeros_like(lq)
    if len(lq) > 1:
        cum = np.concatenate(
            [[0.0], np.cumsum(np.diff(trajectory.times) * 0.5 * (lq[1:] ** p + lq[:-1] ** p))]
        )
        partials = cum ** (1.0 / p)
    total = float(partials[-1])
    if return_partials:
        return total, partials
    return total
