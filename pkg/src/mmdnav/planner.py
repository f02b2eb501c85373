"""One-step reactive planner: grid search over controls minimizing
MMD(violations, delta) + goal-tracking + control-effort costs."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._accel import mmd_costs
from .dynamics import ControlInput, RobotState
from .mmd import KernelConfig, mmd_cost
from .noise import SampleSet
from .vo import constraint_values, select_pairs, violation_vector


class PlanningError(RuntimeError):
    """Raised when no grid candidate has a finite cost."""


@dataclass
class ControlGrid:
    v_min: float = 0.0
    v_max: float = 1.5
    omega_max: float = 1.0
    v_res: int = 25
    omega_res: int = 25

    def __post_init__(self):
        if self.v_min >= self.v_max:
            raise ValueError("need v_min < v_max")
        if self.omega_max <= 0:
            raise ValueError("need omega_max > 0")
        if self.v_res < 1 or self.omega_res < 1:
            raise ValueError("grid resolution must be >= 1 per axis")

    @property
    def size(self) -> int:
        return self.v_res * self.omega_res

    def candidates(self) -> np.ndarray:
        """(size, 2) array of (v, omega), v-major then omega."""
        v = np.linspace(self.v_min, self.v_max, self.v_res)
        w = np.linspace(-self.omega_max, self.omega_max, self.omega_res)
        vv, ww = np.meshgrid(v, w, indexing="ij")
        return np.column_stack([vv.ravel(), ww.ravel()])

    def contains(self, control: ControlInput) -> bool:
        return (self.v_min - 1e-12 <= control.v <= self.v_max + 1e-12
                and abs(control.omega) <= self.omega_max + 1e-12)


@dataclass
class CostWeights:
    w1: float = 1.0    # velocity tracking
    w2: float = 0.02   # control effort

    def __post_init__(self):
        if self.w1 < 0 or self.w2 < 0:
            raise ValueError("cost weights must be non-negative")


@dataclass
class PlannerConfig:
    grid: ControlGrid = field(default_factory=ControlGrid)
    weights: CostWeights = field(default_factory=CostWeights)
    kernel: KernelConfig = field(default_factory=KernelConfig)
    pair_budget: int = 500
    v_max_desired: float = 1.0
    eta: float = 0.95   # success-reporting threshold only; not in the cost
    r_margin: float = 0.0  # safety inflation added to R during planning only

    def __post_init__(self):
        if self.pair_budget != "all" and int(self.pair_budget) < 1:
            raise ValueError("pair budget must be >= 1")
        if not 0 < self.eta <= 1:
            raise ValueError("eta must lie in (0, 1]")
        if self.r_margin < 0:
            raise ValueError("r_margin must be >= 0")

    def to_dict(self) -> dict:
        return {
            "grid": {"v": [self.grid.v_min, self.grid.v_max],
                     "omega_max": self.grid.omega_max,
                     "resolution": [self.grid.v_res, self.grid.omega_res]},
            "weights": {"w1": self.weights.w1, "w2": self.weights.w2},
            "gamma": self.kernel.gamma,
            "pair_budget": self.pair_budget,
            "eta": self.eta,
            "v_max_desired": self.v_max_desired,
            "r_margin": self.r_margin,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "PlannerConfig":
        g = d.get("grid", {})
        grid = ControlGrid(v_min=g.get("v", [0.0, 1.5])[0],
                           v_max=g.get("v", [0.0, 1.5])[1],
                           omega_max=g.get("omega_max", 1.0),
                           v_res=g.get("resolution", [25, 25])[0],
                           omega_res=g.get("resolution", [25, 25])[1])
        w = d.get("weights", {})
        return cls(grid=grid,
                   weights=CostWeights(w.get("w1", 1.0), w.get("w2", 0.02)),
                   kernel=KernelConfig(d.get("gamma", 0.1)),
                   pair_budget=d.get("pair_budget", 500),
                   v_max_desired=d.get("v_max_desired", 1.0),
                   eta=d.get("eta", 0.95),
                   r_margin=d.get("r_margin", 0.0))


def desired_velocity(x, goal, v_max_desired: float) -> np.ndarray:
    """Full-speed unit vector toward the goal; zero once (numerically) there."""
    d = np.asarray(goal, dtype=float) - np.asarray(x, dtype=float)
    dist = np.linalg.norm(d)
    if dist <= 1e-6:
        return np.zeros(2)
    return v_max_desired * d / dist


def _nominal_velocities(controls: np.ndarray, theta: float, dt: float) -> np.ndarray:
    ang = theta + controls[:, 1] * dt
    return np.column_stack([controls[:, 0] * np.cos(ang),
                            controls[:, 0] * np.sin(ang)])


def evaluate_cost(control: ControlInput, robot_samples: SampleSet,
                  control_noise: SampleSet, obstacle_sample_sets,
                  v_d, state_nominal: RobotState, config: PlannerConfig,
                  dt: float, R: float, pair_seed: int = 0) -> float:
    """Cost of one candidate: summed per-obstacle MMD + tracking + effort."""
    if not config.grid.contains(control):
        raise ValueError(f"control {control} outside grid bounds")
    total = 0.0
    for idx, obs in enumerate(obstacle_sample_sets):
        viol = violation_vector(robot_samples, control, control_noise, obs,
                                R=R + config.r_margin, dt=dt,
                                pair_budget=config.pair_budget,
                                seed=pair_seed + idx)
        total += mmd_cost(viol, kernel=config.kernel)
    ctrl = np.array([[control.v, control.omega]])
    v_nom = _nominal_velocities(ctrl, state_nominal.theta, dt)[0]
    total += config.weights.w1 * float(np.sum((v_nom - np.asarray(v_d)) ** 2))
    total += config.weights.w2 * (control.v ** 2 + control.omega ** 2)
    return total


def plan(state_nominal: RobotState, robot_samples: SampleSet,
         control_noise: SampleSet, obstacle_sample_sets, goal,
         config: PlannerConfig, dt: float, R: float,
         pair_seed: int = 0) -> tuple[ControlInput, np.ndarray]:
    """Evaluate every grid candidate and return the minimizer plus the full
    cost table (enumeration order: v-major then omega; ties to lowest index).
    """
    controls = config.grid.candidates()
    v_d = desired_velocity(state_nominal.x, goal, config.v_max_desired)

    costs = np.zeros(len(controls))
    rs = robot_samples.samples
    cn = control_noise.samples
    for idx, obs_set in enumerate(obstacle_sample_sets):
        obs = obs_set.samples
        pi, pj = select_pairs(rs.shape[0], obs.shape[0], config.pair_budget,
                              pair_seed + idx)
        f = constraint_values(controls, rs[:, :2], rs[:, 2], cn,
                              obs[:, :2], obs[:, 2:], pi, pj,
                              R + config.r_margin, dt)
        h = np.maximum(f, 0.0)
        w = np.full(h.shape[1], 1.0 / h.shape[1])
        costs += mmd_costs(h, w, config.kernel.gamma)

    v_nom = _nominal_velocities(controls, state_nominal.theta, dt)
    costs += config.weights.w1 * np.sum((v_nom - v_d) ** 2, axis=1)
    costs += config.weights.w2 * np.sum(controls ** 2, axis=1)

    if not np.isfinite(costs).any():
        raise PlanningError("no grid candidate has a finite cost")
    best = int(np.argmin(costs))
    return ControlInput(controls[best, 0], controls[best, 1]), costs
