"""Reactive collision avoidance under non-Gaussian uncertainty by matching
the velocity-obstacle violation distribution to a Dirac delta in RKHS."""

from ._accel import USING_NUMBA, set_threads
from .baseline import gaussianize_bundle, gaussianize_scenario
from .dynamics import (ControlInput, Disturbance, ObstacleState, RobotState,
                       realized_velocity, step_obstacle, step_robot)
from .mmd import DeltaWeights, KernelConfig, mmd_cost, mmd_direct, rbf
from .noise import (MixtureComponent, MixtureModel, SampleSet, bias_sweep_model,
                    gaussian_approximation, gaussian_model, isotropic_model,
                    load_model, load_samples_csv, sample_mixture, save_model)
from .planner import (ControlGrid, CostWeights, PlannerConfig, PlanningError,
                      desired_velocity, evaluate_cost, plan)
from .sim import (Metrics, NoiseBundle, Scenario, TrajectoryLog,
                  bias_sweep_scenario, collision_sample_fraction,
                  compute_metrics, homotopy_side, load_scenario, monte_carlo,
                  replay_step_inputs, run_episode, save_scenario)
from .vo import ViolationVector, violation, violation_vector, vo_constraint

__version__ = "0.1.0"
