"""Closed-loop episodes, Monte-Carlo runner, and benchmark metrics."""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field

import numpy as np

from .dynamics import ControlInput, Disturbance, ObstacleState, RobotState, step_obstacle, step_robot
from .noise import MixtureModel, SampleSet, bias_sweep_model, sample_mixture
from .planner import PlannerConfig, PlanningError, plan

GOAL_TOLERANCE = 0.2  # m


@dataclass
class NoiseBundle:
    """Perception and actuation noise models for one scenario.

    Robot heading perception noise is a plain Gaussian std (the positional
    models are 2-D mixtures and heading is a separate scalar channel).
    """
    robot_position: MixtureModel
    actuation: MixtureModel
    obstacle_position: MixtureModel
    obstacle_velocity: MixtureModel
    theta_std: float = 0.0

    def to_dict(self) -> dict:
        return {
            "robot_position": self.robot_position.to_dict(),
            "actuation": self.actuation.to_dict(),
            "obstacle_position": self.obstacle_position.to_dict(),
            "obstacle_velocity": self.obstacle_velocity.to_dict(),
            "theta_std": self.theta_std,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "NoiseBundle":
        return cls(robot_position=MixtureModel.from_dict(d["robot_position"]),
                   actuation=MixtureModel.from_dict(d["actuation"]),
                   obstacle_position=MixtureModel.from_dict(d["obstacle_position"]),
                   obstacle_velocity=MixtureModel.from_dict(d["obstacle_velocity"]),
                   theta_std=d.get("theta_std", 0.0))


@dataclass
class Scenario:
    start: RobotState
    goal: np.ndarray
    obstacles: list[ObstacleState]
    R: float                      # combined robot+obstacle radius (m)
    dt: float
    horizon: int
    noise: NoiseBundle
    n_robot: int = 50
    n_obstacle: int = 50
    favorable_side: str = "none"  # {left, right, none}
    seed: int = 0
    goal_tolerance: float = GOAL_TOLERANCE

    def __post_init__(self):
        self.goal = np.asarray(self.goal, dtype=float).reshape(2)
        if self.R <= 0 or self.dt <= 0 or self.horizon < 1:
            raise ValueError("need R > 0, dt > 0, horizon >= 1")
        if self.n_robot < 1 or self.n_obstacle < 1:
            raise ValueError("sample counts must be >= 1")
        if self.favorable_side not in ("left", "right", "none"):
            raise ValueError(f"bad favorable_side {self.favorable_side!r}")

    def to_dict(self) -> dict:
        return {
            "start": {"x": self.start.x.tolist(), "theta": self.start.theta},
            "goal": self.goal.tolist(),
            "obstacles": [{"x": o.x.tolist(), "v": o.v.tolist()} for o in self.obstacles],
            "R": self.R, "dt": self.dt, "horizon": self.horizon,
            "noise": self.noise.to_dict(),
            "n_robot": self.n_robot, "n_obstacle": self.n_obstacle,
            "favorable_side": self.favorable_side,
            "seed": self.seed, "goal_tolerance": self.goal_tolerance,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Scenario":
        return cls(start=RobotState(d["start"]["x"], d["start"]["theta"]),
                   goal=d["goal"],
                   obstacles=[ObstacleState(o["x"], o["v"]) for o in d["obstacles"]],
                   R=d["R"], dt=d["dt"], horizon=d["horizon"],
                   noise=NoiseBundle.from_dict(d["noise"]),
                   n_robot=d.get("n_robot", 50), n_obstacle=d.get("n_obstacle", 50),
                   favorable_side=d.get("favorable_side", "none"),
                   seed=d.get("seed", 0),
                   goal_tolerance=d.get("goal_tolerance", GOAL_TOLERANCE))


def load_scenario(path) -> Scenario:
    with open(path) as f:
        return Scenario.from_dict(json.load(f))


def save_scenario(scenario: Scenario, path) -> None:
    with open(path, "w") as f:
        json.dump(scenario.to_dict(), f, indent=2)


@dataclass
class TrajectoryLog:
    states: list[RobotState] = field(default_factory=list)       # nominal, per step
    controls: list[ControlInput] = field(default_factory=list)
    disturbances: list[Disturbance] = field(default_factory=list)
    obstacle_states: list[list[ObstacleState]] = field(default_factory=list)
    coll_fractions: list[float] = field(default_factory=list)
    costs: list[float] = field(default_factory=list)              # chosen-candidate cost
    step_seeds: list[tuple] = field(default_factory=list)         # for exact step replay
    reached_goal: bool = False
    final_state: RobotState | None = None

    @property
    def steps(self) -> int:
        return len(self.controls)


@dataclass
class Metrics:
    success: bool
    reached_goal: bool
    smoothness: float
    deviation: float
    max_coll_fraction: float
    side: str
    steps: int

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


def collision_sample_fraction(robot_position_samples: np.ndarray,
                              obstacle_position_samples, R: float) -> float:
    """Fraction of robot/obstacle sample pairs closer than R; with several
    obstacle sets, the worst (maximum) fraction."""
    rx = np.atleast_2d(np.asarray(robot_position_samples, dtype=float))
    if rx.shape[0] < 1:
        raise ValueError("empty robot sample set")
    sets = obstacle_position_samples
    if isinstance(sets, np.ndarray) and sets.ndim == 2:
        sets = [sets]
    worst = 0.0
    for ox in sets:
        ox = np.atleast_2d(np.asarray(ox, dtype=float))
        d = np.linalg.norm(rx[:, None, :] - ox[None, :, :], axis=2)
        worst = max(worst, float((d < R).mean()))
    return worst


def _perception_sets(scenario: Scenario, noise: NoiseBundle, state: RobotState,
                     obstacles: list[ObstacleState], seeds):
    """Sample sets the planner sees, re-centered on the nominal states."""
    s_robot, s_act, s_obs = seeds
    pos = sample_mixture(noise.robot_position, scenario.n_robot, s_robot).samples
    if noise.theta_std > 0:
        dtheta = np.random.default_rng(s_robot + 1).normal(0.0, noise.theta_std,
                                                           scenario.n_robot)
    else:
        dtheta = np.zeros(scenario.n_robot)
    robot = SampleSet(np.column_stack([state.x + pos, state.theta + dtheta]))
    ctrl_noise = sample_mixture(noise.actuation, scenario.n_robot, s_act)
    obstacle_sets = []
    for j, obs in enumerate(obstacles):
        dp = sample_mixture(noise.obstacle_position, scenario.n_obstacle,
                            s_obs + 2 * j).samples
        dv = sample_mixture(noise.obstacle_velocity, scenario.n_obstacle,
                            s_obs + 2 * j + 1).samples
        obstacle_sets.append(SampleSet(np.column_stack([obs.x + dp, obs.v + dv])))
    return robot, ctrl_noise, obstacle_sets


def run_episode(scenario: Scenario, config: PlannerConfig, seed: int | None = None,
                belief: NoiseBundle | None = None) -> TrajectoryLog:
    """Run one closed-loop episode.

    ``belief`` swaps the noise models used to build the planner's sample
    sets (e.g. the Gaussian ablation); the world keeps evolving under the
    scenario's true noise, and collision statistics are always measured
    against true-noise samples.
    """
    if seed is None:
        seed = scenario.seed
    rng = np.random.default_rng(seed)
    state = scenario.start
    obstacles = list(scenario.obstacles)
    log = TrajectoryLog()

    for step in range(scenario.horizon):
        if np.linalg.norm(state.x - scenario.goal) <= scenario.goal_tolerance:
            log.reached_goal = True
            break
        seeds = tuple(int(s) for s in rng.integers(0, 2 ** 31 - 1, size=5))
        s_robot, s_act, s_obs, s_pair, s_world = seeds

        robot, ctrl_noise, obstacle_sets = _perception_sets(
            scenario, belief or scenario.noise, state, obstacles,
            (s_robot, s_act, s_obs))
        try:
            control, costs = plan(state, robot, ctrl_noise, obstacle_sets,
                                  scenario.goal, config, scenario.dt,
                                  scenario.R, pair_seed=s_pair)
        except PlanningError as e:
            raise PlanningError(f"step {step}: {e}") from e

        if belief is not None:
            true_robot, _, true_obstacle_sets = _perception_sets(
                scenario, scenario.noise, state, obstacles, (s_robot, s_act, s_obs))
        else:
            true_robot, true_obstacle_sets = robot, obstacle_sets
        frac = collision_sample_fraction(
            true_robot.samples[:, :2],
            [o.samples[:, :2] for o in true_obstacle_sets], scenario.R)

        eps = sample_mixture(scenario.noise.actuation, 1, s_world).samples[0]
        dist = Disturbance(eps[0], eps[1])

        log.states.append(state)
        log.controls.append(control)
        log.disturbances.append(dist)
        log.obstacle_states.append(list(obstacles))
        log.coll_fractions.append(frac)
        log.costs.append(float(costs.min()))
        log.step_seeds.append(seeds)

        state = step_robot(state, control, dist, scenario.dt)
        obstacles = [step_obstacle(o, scenario.dt) for o in obstacles]
    else:
        log.reached_goal = bool(
            np.linalg.norm(state.x - scenario.goal) <= scenario.goal_tolerance)

    log.final_state = state
    return log


def replay_step_inputs(scenario: Scenario, log: TrajectoryLog, step: int,
                       belief: NoiseBundle | None = None):
    """Rebuild the exact planner inputs of a logged step from its seeds."""
    if not 0 <= step < log.steps:
        raise IndexError(f"step {step} outside episode of {log.steps} steps")
    s_robot, s_act, s_obs, s_pair, _ = log.step_seeds[step]
    robot, ctrl_noise, obstacle_sets = _perception_sets(
        scenario, belief or scenario.noise, log.states[step],
        log.obstacle_states[step], (s_robot, s_act, s_obs))
    return robot, ctrl_noise, obstacle_sets, s_pair


def homotopy_side(log: TrajectoryLog, scenario: Scenario) -> str:
    """Side of the obstacle passed at closest approach, relative to the
    start-to-goal direction: positive cross product means 'left'."""
    if len(scenario.obstacles) != 1:
        raise ValueError("homotopy side is defined for single-obstacle scenarios")
    if log.steps == 0:
        return "none"
    best_d, best_w = np.inf, None
    for state, obs_states in zip(log.states, log.obstacle_states):
        w = state.x - obs_states[0].x
        d = np.linalg.norm(w)
        if d < best_d:
            best_d, best_w = d, w
    g = scenario.goal - scenario.start.x
    cross = g[0] * best_w[1] - g[1] * best_w[0]
    if abs(cross) < 1e-9:
        return "none"
    return "left" if cross > 0 else "right"


def _line_deviation(points: np.ndarray, start: np.ndarray, goal: np.ndarray) -> float:
    d = goal - start
    n = np.linalg.norm(d)
    if n < 1e-12:
        return float(np.linalg.norm(points - start, axis=1).mean())
    # perpendicular distance to the start->goal line
    cross = (points[:, 0] - start[0]) * d[1] - (points[:, 1] - start[1]) * d[0]
    return float(np.abs(cross).mean() / n)


def compute_metrics(log: TrajectoryLog, scenario: Scenario, eta: float) -> Metrics:
    u = np.array([[c.v, c.omega] for c in log.controls]) if log.steps else np.zeros((0, 2))
    smooth = float(np.sum(np.sum(np.diff(u, axis=0) ** 2, axis=1))) if len(u) > 1 else 0.0
    pts = np.array([s.x for s in log.states]) if log.steps else np.zeros((0, 2))
    dev = _line_deviation(pts, scenario.start.x, scenario.goal) if len(pts) else 0.0
    max_frac = max(log.coll_fractions, default=0.0)
    side = homotopy_side(log, scenario) if len(scenario.obstacles) == 1 else "none"
    success = log.reached_goal and max_frac <= 1.0 - eta
    return Metrics(success=success, reached_goal=log.reached_goal,
                   smoothness=smooth, deviation=dev,
                   max_coll_fraction=max_frac, side=side, steps=log.steps)


def monte_carlo(scenario: Scenario, config: PlannerConfig, runs: int,
                base_seed: int, belief: NoiseBundle | None = None) -> dict:
    """Seeded batch of episodes with aggregated metrics.

    Individual planning failures are recorded per seed, not fatal.
    """
    if runs < 1:
        raise ValueError("need runs >= 1")
    episodes, failures = [], []
    for seed in range(base_seed, base_seed + runs):
        try:
            log = run_episode(scenario, config, seed=seed, belief=belief)
        except PlanningError as e:
            failures.append({"seed": seed, "error": str(e)})
            continue
        episodes.append((seed, compute_metrics(log, scenario, config.eta)))

    mets = [m for _, m in episodes]
    n = len(mets)
    sides = [m.side for m in mets]
    report = {
        "runs": runs,
        "completed": n,
        "failures": failures,
        "success_rate": (sum(m.success for m in mets) / n) if n else 0.0,
        "goal_rate": (sum(m.reached_goal for m in mets) / n) if n else 0.0,
        "mean_smoothness": float(np.mean([m.smoothness for m in mets])) if n else 0.0,
        "mean_deviation": float(np.mean([m.deviation for m in mets])) if n else 0.0,
        "mean_max_coll_fraction": float(np.mean([m.max_coll_fraction for m in mets])) if n else 0.0,
        "side_frequency": {s: sides.count(s) / n if n else 0.0
                           for s in ("left", "right", "none")},
        "favorable_side": scenario.favorable_side,
        "favorable_frequency": (sides.count(scenario.favorable_side) / n
                                if n and scenario.favorable_side != "none" else 0.0),
        "episodes": [{"seed": s, **m.to_dict()} for s, m in episodes],
    }
    return report


def bias_sweep_scenario(scenario: Scenario, k: int) -> Scenario:
    """Scenario variant with level-k sweep noise on obstacle position
    perception.

    Obstacle nominal positions are shifted by minus the sweep-mixture mean so
    the *perceived mean* obstacle position is identical across levels; only
    the shape of the uncertainty (bias, multimodality) changes with k.
    """
    model = bias_sweep_model(k)
    shift = model.mean()
    noise = dataclasses.replace(scenario.noise, obstacle_position=model)
    obstacles = [ObstacleState(o.x - shift, o.v) for o in scenario.obstacles]
    return dataclasses.replace(scenario, noise=noise, obstacles=obstacles)
