"""Declarative run configuration: a single JSON file describing the
manifold, target, equivariance degree, grid, time stepping, initial
data, and which estimate checks to run."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Union

import numpy as np

from .errors import CFLViolation, ScenarioError
from .profiles import MetricProfile, TargetProfile, metric_profile, target_profile

KNOWN_CHECKS = ("hardy", "smoothing", "strichartz", "dimshift")
KNOWN_SHAPES = ("gaussian", "zero")


@dataclass
class Scenario:
    name: str
    manifold: dict
    target: dict
    n: int
    k: int
    delta0: Union[float, str]  # a number, or "search"
    grid: dict                 # {"R_max": float, "N": int}
    time: dict                 # {"T", "dt_factor", "snap_every"}
    data: dict                 # {"shape", "amplitude", "width", ...}
    checks: list = field(default_factory=list)
    seed: int = 0

    def __post_init__(self):
        if self.n < 3 or self.k < 1:
            raise ScenarioError("need n >= 3 and k >= 1")
        if isinstance(self.delta0, str):
            if self.delta0 != "search":
                raise ScenarioError(f"delta0 must be a number or 'search'")
        elif not 0 < float(self.delta0) < 1:
            raise ScenarioError("delta0 must lie in (0,1)")
        for key in ("R_max", "N"):
            if key not in self.grid:
                raise ScenarioError(f"grid spec is missing {key!r}")
        if self.grid["R_max"] <= 0 or int(self.grid["N"]) < 2:
            raise ScenarioError("grid needs R_max > 0 and N >= 2")
        t = self.time
        for key in ("T", "dt_factor", "snap_every"):
            if key not in t:
                raise ScenarioError(f"time spec is missing {key!r}")
        if t["dt_factor"] > 0.5:
            raise CFLViolation(
                f"dt_factor {t['dt_factor']} exceeds the CFL limit 0.5"
            )
        if t["dt_factor"] <= 0 or t["T"] < 0 or t["snap_every"] <= 0:
            raise ScenarioError("time parameters must be positive")
        shape = self.data.get("shape", "gaussian")
        if shape not in KNOWN_SHAPES:
            raise ScenarioError(f"unknown data shape {shape!r}")
        if t["T"] > self.grid["R_max"] - self.support_radius:
            raise ScenarioError(
                "horizon violates the causality budget: need "
                f"T <= R_max - data support ({self.grid['R_max']} - "
                f"{self.support_radius:.2f})"
            )
        for c in self.checks:
            if c not in KNOWN_CHECKS:
                raise ScenarioError(
                    f"unknown check {c!r}; known: {KNOWN_CHECKS}"
                )
        # eager profile validation
        self.profile()
        self.target_profile()

    @property
    def support_radius(self) -> float:
        """Radius beyond which the initial data is negligible."""
        if self.data.get("shape", "gaussian") == "zero":
            return 0.0
        width = float(self.data.get("width", 1.0))
        center = float(self.data.get("center", 0.0))
        return center + 6.0 * width

    def profile(self) -> MetricProfile:
        spec = dict(self.manifold)
        try:
            return metric_profile(spec.pop("kind"), **spec)
        except (KeyError, Exception) as exc:
            raise ScenarioError(f"bad manifold spec: {exc}") from exc

    def target_profile(self) -> TargetProfile:
        spec = dict(self.target)
        try:
            return target_profile(spec.pop("kind"), **spec)
        except (KeyError, Exception) as exc:
            raise ScenarioError(f"bad target spec: {exc}") from exc

    def initial_data(self, r: np.ndarray):
        """(field, velocity) samples of the geometric field phi."""
        shape = self.data.get("shape", "gaussian")
        if shape == "zero":
            return np.zeros_like(r), np.zeros_like(r)
        amp = float(self.data.get("amplitude", 0.05))
        width = float(self.data.get("width", 1.0))
        center = float(self.data.get("center", 0.0))
        vamp = float(self.data.get("velocity_amplitude", 0.0))
        bump = r**self.k * np.exp(-(((r - center) / width) ** 2))
        return amp * bump, vamp * bump

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "manifold": self.manifold,
            "target": self.target,
            "n": self.n,
            "k": self.k,
            "delta0": self.delta0,
            "grid": self.grid,
            "time": self.time,
            "data": self.data,
            "checks": list(self.checks),
            "seed": self.seed,
        }


def load_scenario(path) -> Scenario:
    path = Path(path)
    try:
        raw = json.loads(path.read_text())
    except FileNotFoundError as exc:
        raise ScenarioError(f"scenario file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"scenario file is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ScenarioError("scenario must be a JSON object")
    known = {
        "name", "manifold", "target", "n", "k", "delta0",
        "grid", "time", "data", "checks", "seed",
    }
    unknown = set(raw) - known
    if unknown:
        raise ScenarioError(f"unknown scenario fields: {sorted(unknown)}")
    defaults = {
        "name": path.stem,
        "delta0": "search",
        "grid": {"R_max": 60.0, "N": 4000},
        "time": {"T": 50.0, "dt_factor": 0.1, "snap_every": 0.5},
        "data": {"shape": "gaussian", "amplitude": 0.05},
        "checks": [],
        "seed": 0,
    }
    merged = {**defaults, **raw}
    for req in ("manifold", "target", "n", "k"):
        if req not in merged:
            raise ScenarioError(f"scenario is missing {req!r}")
    try:
        return Scenario(**merged)
    except TypeError as exc:
        raise ScenarioError(str(exc)) from exc
