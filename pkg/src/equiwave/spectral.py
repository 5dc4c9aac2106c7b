"""Radial discretization of -Delta + W on R^m and its functional calculus.

Radial functions v(r) are sampled on a cell-centered grid.  The operator
acts on the symmetrized variable vtilde = r^((m-1)/2) v, where it becomes
a symmetric tridiagonal matrix: a finite-volume divergence-form stencil
for (r^(m-1) v')' / r^(m-1), conjugated by r^((m-1)/2).  The flux through
the r=0 face vanishes identically (regularity) and the outer boundary is
a zero Dirichlet value at R_max.  The eigendecomposition then gives exact
discrete calculus for |D|^s, <D>^s, e^(it sqrt(nu+H)) and resolvents.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Optional, Union

import numpy as np
import scipy.linalg

from .errors import (
    DimensionError,
    DomainError,
    NegativeEigenvalue,
    SingularSystem,
    TruncationTooSmall,
)

EIG_TOL = 1e-8  # below -EIG_TOL an eigenvalue is treated as a real failure


@dataclass(frozen=True)
class RadialGrid:
    """Cell-centered grid on [0, R_max]: r_j = (j+1/2) dr, dr = R_max/N."""

    R_max: float
    N: int

    def __post_init__(self):
        if self.R_max <= 0 or self.N < 2:
            raise DomainError("need R_max > 0 and N >= 2")

    @property
    def dr(self) -> float:
        return self.R_max / self.N

    @cached_property
    def nodes(self) -> np.ndarray:
        return (np.arange(self.N) + 0.5) * self.dr

    @cached_property
    def faces(self) -> np.ndarray:
        return np.arange(self.N + 1) * self.dr

    def surface_constant(self, m: int) -> float:
        """Area of the unit sphere in R^m."""
        return 2.0 * math.pi ** (m / 2) / math.gamma(m / 2)

    def volume_weights(self, m: int) -> np.ndarray:
        """Quadrature weights for integrals over R^m of radial functions."""
        return self.surface_constant(m) * self.nodes ** (m - 1) * self.dr

    def l2_norm(self, v, m: int) -> float:
        v = np.asarray(v)
        return float(np.sqrt(np.sum(np.abs(v) ** 2 * self.volume_weights(m)).real))


def _divergence_form_tridiag(grid: RadialGrid, rho_faces, rho_cells):
    """Symmetric tridiagonal for -(rho u')'/rho conjugated by rho^(1/2).

    rho_cells must be cell averages of rho, not midpoint values: the
    averages keep the stencil second order in the first cell at r=0.
    """
    dr2 = grid.dr**2
    diag = (rho_faces[:-1] + rho_faces[1:]) / (dr2 * rho_cells)
    off = -rho_faces[1:-1] / (dr2 * np.sqrt(rho_cells[:-1] * rho_cells[1:]))
    return diag, off


def _power_cells(grid: RadialGrid, m: int) -> np.ndarray:
    """Exact cell averages of r^(m-1)."""
    f = grid.faces
    return (f[1:] ** m - f[:-1] ** m) / (m * grid.dr)


def _simpson_cells(grid: RadialGrid, fn) -> np.ndarray:
    """Simpson cell averages of a positive function."""
    lo, hi = fn(grid.faces[:-1]), fn(grid.faces[1:])
    mid = fn(grid.nodes)
    return (lo + 4.0 * mid + hi) / 6.0


@dataclass
class DiscreteRadialOperator:
    """H = -Delta + W on radial functions of R^m, symmetrized."""

    grid: RadialGrid
    m: int
    W_samples: np.ndarray
    diag: np.ndarray = field(repr=False, default=None)
    offdiag: np.ndarray = field(repr=False, default=None)
    rho_cells: np.ndarray = field(repr=False, default=None)

    @cached_property
    def _eig(self):
        lam, vec = scipy.linalg.eigh_tridiagonal(self.diag, self.offdiag)
        return lam, vec

    @property
    def eigenvalues(self) -> np.ndarray:
        return self._eig[0]

    @property
    def eigenvectors(self) -> np.ndarray:
        return self._eig[1]

    @property
    def lambda_floor(self) -> float:
        # infrared cutoff imposed by truncation to [0, R_max]
        return (math.pi / (2.0 * self.grid.R_max)) ** 2

    def symmetrize(self, v) -> np.ndarray:
        return np.asarray(v) * np.sqrt(self.rho_cells)

    def unsymmetrize(self, vt) -> np.ndarray:
        return np.asarray(vt) / np.sqrt(self.rho_cells)

    def apply(self, v) -> np.ndarray:
        """H v for a radial grid function v."""
        vt = self.symmetrize(v)
        out = self.diag * vt
        out[:-1] += self.offdiag * vt[1:]
        out[1:] += self.offdiag * vt[:-1]
        return self.unsymmetrize(out)

    def coefficients(self, v) -> np.ndarray:
        return self.eigenvectors.T @ self.symmetrize(v)

    def from_coefficients(self, c) -> np.ndarray:
        return self.unsymmetrize(self.eigenvectors @ np.asarray(c))

    def spectrum_table(self):
        lam = self.eigenvalues
        return np.arange(len(lam)), lam


def build_operator(
    grid: RadialGrid, m: int, W: Union[Callable, np.ndarray, None] = None
) -> DiscreteRadialOperator:
    """Second-order symmetric tridiagonal discretization of -Delta + W."""
    if m < 5:
        raise DimensionError(f"radial reduction requires m >= 5, got {m}")
    r = grid.nodes
    if W is None:
        Ws = np.zeros(grid.N)
    elif callable(W):
        Ws = np.asarray(W(r), dtype=float)
    else:
        Ws = np.asarray(W, dtype=float)
        if Ws.shape != r.shape:
            raise DomainError("W sample length does not match the grid")
    rho = _power_cells(grid, m)
    diag, off = _divergence_form_tridiag(grid, grid.faces ** (m - 1), rho)
    return DiscreteRadialOperator(grid, m, Ws, diag + Ws, off, rho)


def _powered(lam: np.ndarray, s: float, shift: str, floor: float) -> np.ndarray:
    if np.min(lam) < -EIG_TOL:
        raise NegativeEigenvalue(f"eigenvalue {np.min(lam)} below -{EIG_TOL}")
    if shift == "inhomogeneous":
        base = 1.0 + np.maximum(lam, 0.0)
    elif shift == "homogeneous":
        base = np.maximum(lam, floor if s < 0 else 0.0)
    else:
        raise DomainError(f"unknown shift {shift!r}")
    return base**s


def frac_norm(
    op: DiscreteRadialOperator, s: float, v, shift: str = "homogeneous"
) -> float:
    """|| H^(s/2) v ||_{L^2(R^m)} (or <H>^(s/2)) via eigen-calculus."""
    c = op.coefficients(v)
    p = _powered(op.eigenvalues, s, shift, op.lambda_floor)
    scale = op.grid.surface_constant(op.m) * op.grid.dr
    return float(np.sqrt(scale * np.sum(p * np.abs(c) ** 2)))


def evolve_linear(
    op: DiscreteRadialOperator,
    f,
    g,
    nu: float,
    t: float,
    return_velocity: bool = False,
):
    """u(t) = cos(t sqrt(nu+H)) f + sin(t sqrt(nu+H)) (nu+H)^(-1/2) g."""
    if nu < 0:
        raise DomainError("nu must be nonnegative")
    lam = op.eigenvalues + nu
    if np.min(lam) < -EIG_TOL:
        raise NegativeEigenvalue(f"nu + lambda_min = {np.min(lam)}")
    om = np.sqrt(np.maximum(lam, 0.0))
    cf = op.coefficients(f)
    cg = op.coefficients(g)
    # sin(t om)/om, continuous at om = 0
    sinc = t * np.sinc(t * om / math.pi)
    u = op.from_coefficients(np.cos(t * om) * cf + sinc * cg)
    if not return_velocity:
        return u
    ut = op.from_coefficients(-om * np.sin(t * om) * cf + np.cos(t * om) * cg)
    return u, ut


def resolve(
    kappa: complex,
    f,
    grid: RadialGrid,
    m: Optional[int] = None,
    W: Union[Callable, np.ndarray, None] = None,
    profile=None,
    n: Optional[int] = None,
    h_infinity: float = 0.0,
) -> np.ndarray:
    """Solve the truncated radial Helmholtz problem

      u'' + (m-1)/r u' + kappa^2 u - W u = f        (flat R^m form), or
      u'' + (n-1) h'/h u' + kappa^2 u = f           (manifold form),

    with regularity at 0 and zero value at R_max.  Valid when the decay
    rate Im sqrt(kappa^2 - h_infinity) times R_max is at least 5.
    """
    kappa = complex(kappa)
    if kappa.imag <= 0:
        raise DomainError("resolvent frequency needs Im kappa > 0")
    kdec = np.emath.sqrt(kappa**2 - h_infinity)
    if kdec.imag < 0:
        kdec = -kdec
    if kdec.imag * grid.R_max < 5.0:
        raise TruncationTooSmall(
            f"Im sqrt(kappa^2 - h_inf) * R_max = {kdec.imag * grid.R_max:.3f} < 5"
        )
    r = grid.nodes
    if profile is not None:
        if n is None or n < 3:
            raise DomainError("manifold form needs n >= 3")
        rho = _simpson_cells(grid, lambda x: profile(x) ** (n - 1))
        diag, off = _divergence_form_tridiag(grid, profile(grid.faces) ** (n - 1), rho)
    else:
        if m is None or m < 3:
            raise DomainError("flat form needs m >= 3")
        rho = _power_cells(grid, m)
        diag, off = _divergence_form_tridiag(grid, grid.faces ** (m - 1), rho)
        if W is not None:
            diag = diag + (np.asarray(W(r)) if callable(W) else np.asarray(W))
    rho_half = np.sqrt(rho)
    f = np.asarray(f)
    ft = rho_half * f
    # (kappa^2 I - A) u~ = f~ with A = -(rho u')'/rho (+W), symmetrized
    ab = np.zeros((3, grid.N), dtype=complex)
    ab[0, 1:] = -off
    ab[1, :] = kappa**2 - diag
    ab[2, :-1] = -off
    try:
        ut = scipy.linalg.solve_banded((1, 1), ab, ft)
    except (scipy.linalg.LinAlgError, ValueError) as exc:
        raise SingularSystem(str(exc)) from exc
    if not np.all(np.isfinite(ut)):
        raise SingularSystem("non-finite resolvent solution")
    return ut / rho_half


@dataclass
class SpectralFunction:
    """A grid function carried as coefficients in the eigenbasis."""

    op: DiscreteRadialOperator
    coeffs: np.ndarray

    @classmethod
    def from_grid(cls, op: DiscreteRadialOperator, v) -> "SpectralFunction":
        return cls(op, op.coefficients(v))

    def to_grid(self) -> np.ndarray:
        return self.op.from_coefficients(self.coeffs)

    def l2_norm(self) -> float:
        scale = self.op.grid.surface_constant(self.op.m) * self.op.grid.dr
        return float(np.sqrt(scale * np.sum(np.abs(self.coeffs) ** 2)))
