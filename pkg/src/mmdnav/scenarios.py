"""Built-in benchmark scenarios and planner configurations.

These are the setups exercised by the test suite and the CLI examples:
a head-on encounter, the single-obstacle homotopy benchmark (combine with
``sim.bias_sweep_scenario`` for the noise sweep), and a five-obstacle field.

The kernel bandwidth deserves a note: the VO constraint value is bounded by
R**2, so useful gammas scale like 1/R**4. The benchmark radii around 1 m
put gamma in the tens; the library default of 0.1 matches unit-scale h.
"""

from __future__ import annotations

import numpy as np

from .dynamics import ObstacleState, RobotState
from .mmd import KernelConfig
from .noise import bias_sweep_model, isotropic_model
from .planner import ControlGrid, CostWeights, PlannerConfig
from .sim import NoiseBundle, Scenario, bias_sweep_scenario


def default_config() -> PlannerConfig:
    """Full-resolution configuration (625 candidates, 500-pair budget)."""
    return PlannerConfig(grid=ControlGrid(0.0, 1.5, 1.0, 25, 25),
                         weights=CostWeights(0.01, 0.0025),
                         kernel=KernelConfig(50.0),
                         pair_budget=500, v_max_desired=1.2, eta=0.9,
                         r_margin=0.1)


def benchmark_config() -> PlannerConfig:
    """Reduced configuration sized for Monte-Carlo batches."""
    return PlannerConfig(grid=ControlGrid(0.0, 1.5, 0.8, 11, 11),
                         weights=CostWeights(0.01, 0.0005),
                         kernel=KernelConfig(50.0),
                         pair_budget=245, v_max_desired=1.2, eta=0.9,
                         r_margin=0.1)


def _base_noise(obstacle_level: int = 1) -> NoiseBundle:
    return NoiseBundle(
        robot_position=isotropic_model((0.0, 0.0), 0.04),
        actuation=isotropic_model((0.0, 0.0), 0.03),
        obstacle_position=bias_sweep_model(obstacle_level),
        obstacle_velocity=isotropic_model((0.0, 0.0), 0.02),
        theta_std=0.0,
    )


def head_on(n_samples: int = 30) -> Scenario:
    """Robot driving north into an obstacle coming straight at it.

    The encounter starts inside the velocity-obstacle cone (the obstacle is
    too close for a single-step escape), so the early violation distribution
    has positive mass before the planner works its way out.
    """
    return Scenario(
        start=RobotState((0.0, 0.0), np.pi / 2),
        goal=(0.0, 6.0),
        obstacles=[ObstacleState((0.0, 2.5), (0.0, -0.6))],
        R=0.8, dt=0.25, horizon=60,
        noise=_base_noise(obstacle_level=4),
        n_robot=n_samples, n_obstacle=n_samples,
        favorable_side="none", seed=0,
        goal_tolerance=0.4,
    )


def homotopy_benchmark(k: int = 1, n_samples: int = 35) -> Scenario:
    """Single-obstacle side-selection benchmark.

    The obstacle closes fast enough that the achievable lateral offset is
    tight, so the side choice matters. The sweep noise piles obstacle mass
    toward +x (the robot's right when heading north); passing on the left
    clears the tight majority cluster while the right grazes the wide
    minority one, so the left is the favorable homotopy.
    """
    base = Scenario(
        start=RobotState((0.0, 0.0), np.pi / 2),
        goal=(0.0, 6.0),
        obstacles=[ObstacleState((0.0, 5.5), (0.0, -0.9))],
        R=1.2, dt=0.25, horizon=80,
        noise=_base_noise(obstacle_level=1),
        n_robot=n_samples, n_obstacle=n_samples,
        favorable_side="left", seed=0,
        goal_tolerance=0.4,
    )
    return bias_sweep_scenario(base, k)


def five_obstacle_benchmark(k: int = 6, n_samples: int = 25) -> Scenario:
    """Obstacle field whose entry gate is only safely passable off-center.

    The two gate obstacles carry right-shifted bimodal position noise, so
    the true free corridor sits right of the nominal centerline. A planner
    that sees the sample distribution threads it; one that sees only the
    moment-matched blob perceives a symmetric gate and aims down the middle,
    where the hidden cluster of the left obstacle actually lives.
    """
    base = Scenario(
        start=RobotState((0.0, 0.0), np.pi / 2),
        goal=(0.0, 8.0),
        obstacles=[
            ObstacleState((-1.40, 2.4), (0.0, 0.0)),
            ObstacleState((1.40, 2.4), (0.0, 0.0)),
            ObstacleState((1.10, 5.4), (0.0, -0.1)),
            ObstacleState((-2.20, 4.8), (0.0, 0.0)),
            ObstacleState((-1.60, 6.6), (0.0, 0.0)),
        ],
        R=0.7, dt=0.25, horizon=100,
        noise=_base_noise(obstacle_level=1),
        n_robot=n_samples, n_obstacle=n_samples,
        favorable_side="none", seed=0,
        goal_tolerance=0.4,
    )
    return bias_sweep_scenario(base, k)
