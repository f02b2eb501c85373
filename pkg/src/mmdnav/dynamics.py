"""Discrete-time unicycle robot and constant-velocity obstacle models."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass
class RobotState:
    x: np.ndarray          # position (m)
    theta: float           # heading (rad), unwrapped

    def __post_init__(self):
        self.x = np.asarray(self.x, dtype=float).reshape(2)
        self.theta = float(self.theta)


@dataclass
class ControlInput:
    v: float               # commanded linear speed (m/s)
    omega: float           # commanded angular rate (rad/s)

    def __post_init__(self):
        self.v = float(self.v)
        self.omega = float(self.omega)


@dataclass
class ObstacleState:
    x: np.ndarray          # position (m)
    v: np.ndarray          # velocity (m/s)

    def __post_init__(self):
        self.x = np.asarray(self.x, dtype=float).reshape(2)
        self.v = np.asarray(self.v, dtype=float).reshape(2)


@dataclass
class Disturbance:
    eps_v: float = 0.0     # additive speed disturbance (m/s)
    eps_omega: float = 0.0  # additive angular-rate disturbance (rad/s)


def realized_velocity(state: RobotState, control: ControlInput,
                      dist: Disturbance, dt: float) -> np.ndarray:
    """Linear velocity actually executed, heading evaluated post-rotation."""
    if dt <= 0:
        raise ValueError("dt must be positive")
    speed = control.v + dist.eps_v
    ang = state.theta + (control.omega + dist.eps_omega) * dt
    return np.array([speed * np.cos(ang), speed * np.sin(ang)])


def step_robot(state: RobotState, control: ControlInput,
               dist: Disturbance, dt: float) -> RobotState:
    vel = realized_velocity(state, control, dist, dt)
    return RobotState(state.x + vel * dt,
                      state.theta + (control.omega + dist.eps_omega) * dt)


def step_obstacle(state: ObstacleState, dt: float) -> ObstacleState:
    if dt <= 0:
        raise ValueError("dt must be positive")
    return ObstacleState(state.x + state.v * dt, state.v)
