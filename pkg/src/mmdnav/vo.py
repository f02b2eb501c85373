"""Velocity-obstacle constraint, its violation, and pairwise violation vectors.

The constraint value f is negative exactly when the current relative velocity
steers clear of the obstacle disk; its positive part h = max(0, f) is the
violation whose empirical distribution the planner pushes toward the point
mass at zero.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dynamics import ControlInput
from .noise import SampleSet

# below this squared relative speed the cone test degenerates to a static
# overlap test (violation iff the disks already intersect)
STATIC_SPEED_SQ = 1e-12


@dataclass
class ViolationVector:
    h: np.ndarray            # non-negative violations, one per sample pair
    weights: np.ndarray      # pair weights, sum to 1
    pair_index: np.ndarray   # (N, 2) robot/obstacle sample indices

    def __post_init__(self):
        self.h = np.asarray(self.h, dtype=float).reshape(-1)
        self.weights = np.asarray(self.weights, dtype=float).reshape(-1)
        self.pair_index = np.asarray(self.pair_index, dtype=int).reshape(-1, 2)
        if (self.h < 0).any():
            raise ValueError("violations must be non-negative")
        if abs(self.weights.sum() - 1.0) > 1e-9:
            raise ValueError("pair weights must sum to 1")
        if not (len(self.h) == len(self.weights) == len(self.pair_index)):
            raise ValueError("h, weights and pair_index must have equal length")


def vo_constraint(x_r, v_r, x_o, v_o, R: float) -> float:
    """Cone constraint value f; f <= 0 means the relative velocity is safe."""
    if R <= 0:
        raise ValueError("combined radius R must be positive")
    r = np.asarray(x_r, dtype=float) - np.asarray(x_o, dtype=float)
    v = np.asarray(v_r, dtype=float) - np.asarray(v_o, dtype=float)
    rr = float(r @ r)
    vv = float(v @ v)
    if vv < STATIC_SPEED_SQ:
        return R * R - rr
    rv = float(r @ v)
    return rv * rv / vv - rr + R * R


def violation(f: float) -> float:
    return max(0.0, float(f))


def select_pairs(n_r: int, n_o: int, pair_budget, seed: int):
    """Pair index arrays; full Cartesian product in row-major (i, j) order,
    or a uniform without-replacement subsample when the budget is smaller."""
    total = n_r * n_o
    if pair_budget == "all" or int(pair_budget) >= total:
        flat = np.arange(total)
    else:
        budget = int(pair_budget)
        if budget < 1:
            raise ValueError("pair budget must be >= 1")
        flat = np.random.default_rng(seed).choice(total, size=budget, replace=False)
    return flat // n_o, flat % n_o


def constraint_values(controls: np.ndarray, robot_xy: np.ndarray,
                      robot_theta: np.ndarray, control_noise: np.ndarray,
                      obstacle_xy: np.ndarray, obstacle_v: np.ndarray,
                      pi: np.ndarray, pj: np.ndarray,
                      R: float, dt: float) -> np.ndarray:
    """Raw (un-floored) f values, shape (n_controls, n_pairs).

    Robot sample i couples its own heading sample with its own control
    disturbance sample; obstacle sample j contributes position and velocity.
    """
    if R <= 0:
        raise ValueError("combined radius R must be positive")
    controls = np.atleast_2d(controls)
    speed = controls[:, 0:1] + control_noise[None, :, 0]            # (C, n_r)
    ang = robot_theta[None, :] + (controls[:, 1:2] + control_noise[None, :, 1]) * dt
    vx = speed * np.cos(ang)
    vy = speed * np.sin(ang)

    r = robot_xy[pi] - obstacle_xy[pj]                              # (P, 2)
    rvx = vx[:, pi] - obstacle_v[pj, 0]                             # (C, P)
    rvy = vy[:, pi] - obstacle_v[pj, 1]

    rr = r[:, 0] ** 2 + r[:, 1] ** 2
    rv = r[:, 0] * rvx + r[:, 1] * rvy
    vv = rvx ** 2 + rvy ** 2
    static = vv < STATIC_SPEED_SQ
    vv_safe = np.where(static, 1.0, vv)
    f = rv * rv / vv_safe - rr + R * R
    return np.where(static, R * R - rr, f)


def violation_vector(robot_samples: SampleSet, control: ControlInput,
                     control_noise: SampleSet, obstacle_samples: SampleSet,
                     R: float, dt: float, pair_budget="all",
                     seed: int = 0, pairs=None) -> ViolationVector:
    """Empirical violation distribution over robot x obstacle sample pairs.

    ``robot_samples`` rows are (x, y, theta); ``control_noise`` rows are
    (eps_v, eps_omega), index-aligned with the robot samples;
    ``obstacle_samples`` rows are (x, y, vx, vy). ``pairs`` short-circuits
    the budgeted selection with precomputed index arrays.
    """
    rs = robot_samples.samples
    cn = control_noise.samples
    obs = obstacle_samples.samples
    if rs.shape[0] != cn.shape[0]:
        raise ValueError("robot samples and control noise must have equal counts")
    if rs.shape[1] != 3 or cn.shape[1] != 2 or obs.shape[1] != 4:
        raise ValueError("expected robot (x,y,theta), noise (eps_v,eps_w), "
                         "obstacle (x,y,vx,vy) sample layouts")
    if pairs is None:
        pi, pj = select_pairs(rs.shape[0], obs.shape[0], pair_budget, seed)
    else:
        pi, pj = pairs
    ctrl = np.array([[control.v, control.omega]])
    f = constraint_values(ctrl, rs[:, :2], rs[:, 2], cn, obs[:, :2], obs[:, 2:],
                          pi, pj, R, dt)[0]
    h = np.maximum(f, 0.0)
    w = np.full(len(h), 1.0 / len(h))
    return ViolationVector(h, w, np.column_stack([pi, pj]))
