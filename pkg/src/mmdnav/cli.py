"""Command-line entry point.

Subcommands: run a single episode, batch Monte-Carlo runs, the noise-bias
sweep, and violation-histogram export. All outputs are plot-ready CSV/JSON;
rendering is left to external tools.

``MMDNAV_THREADS`` caps the worker-thread count of the jitted kernels
(default: all available cores).
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys

import numpy as np

from . import _accel
from .baseline import gaussianize_bundle
from .planner import PlannerConfig, PlanningError
from .sim import (Scenario, bias_sweep_scenario, compute_metrics, load_scenario,
                  monte_carlo, replay_step_inputs, run_episode)
from .vo import constraint_values, select_pairs

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_RUNTIME = 2

TRAJECTORY_HEADER = ["step", "x", "y", "theta", "v_cmd", "w_cmd", "cost", "coll_frac"]


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_CONFIG):
        super().__init__(message)
        self.code = code


def _atomic_write_csv(path, header, rows) -> None:
    tmp = f"{path}.tmp"
    with open(tmp, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(header)
        w.writerows(rows)
    os.replace(tmp, path)


def _atomic_write_json(path, obj) -> None:
    tmp = f"{path}.tmp"
    with open(tmp, "w") as f:
        json.dump(obj, f, indent=2, sort_keys=True)
        f.write("\n")
    os.replace(tmp, path)


def _load_scenario(path) -> Scenario:
    if not os.path.exists(path):
        raise CliError(f"scenario file not found: {path}")
    try:
        return load_scenario(path)
    except json.JSONDecodeError as e:
        raise CliError(f"malformed JSON in scenario file {path}: {e}")
    except (KeyError, TypeError, ValueError) as e:
        raise CliError(f"invalid scenario schema in {path}: {e}")


def _load_config(path) -> PlannerConfig:
    if path is None:
        return PlannerConfig()
    if not os.path.exists(path):
        raise CliError(f"config file not found: {path}")
    try:
        with open(path) as f:
            return PlannerConfig.from_dict(json.load(f))
    except json.JSONDecodeError as e:
        raise CliError(f"malformed JSON in config file {path}: {e}")
    except (KeyError, TypeError, ValueError) as e:
        raise CliError(f"invalid planner config in {path}: {e}")


def _belief(scenario: Scenario, mode: str, seed: int):
    if mode == "gaussian":
        return gaussianize_bundle(scenario.noise, seed)
    return None


def _trajectory_rows(log):
    rows = []
    for i in range(log.steps):
        s, c = log.states[i], log.controls[i]
        rows.append([i, f"{s.x[0]:.9f}", f"{s.x[1]:.9f}", f"{s.theta:.9f}",
                     f"{c.v:.9f}", f"{c.omega:.9f}", f"{log.costs[i]:.9f}",
                     f"{log.coll_fractions[i]:.9f}"])
    return rows


def cmd_run(args) -> int:
    scenario = _load_scenario(args.scenario)
    config = _load_config(args.config)
    os.makedirs(args.out, exist_ok=True)
    belief = _belief(scenario, args.mode, args.seed)
    try:
        log = run_episode(scenario, config, seed=args.seed, belief=belief)
    except PlanningError as e:
        raise CliError(f"planning failed: {e}", EXIT_RUNTIME)
    _atomic_write_csv(os.path.join(args.out, "trajectory.csv"),
                      TRAJECTORY_HEADER, _trajectory_rows(log))
    metrics = compute_metrics(log, scenario, config.eta)
    _atomic_write_json(os.path.join(args.out, "metrics.json"), metrics.to_dict())
    return EXIT_OK


def cmd_montecarlo(args) -> int:
    scenario = _load_scenario(args.scenario)
    config = _load_config(args.config)
    os.makedirs(args.out, exist_ok=True)
    belief = _belief(scenario, args.mode, args.seed)
    report = monte_carlo(scenario, config, args.runs, args.seed, belief=belief)
    report["mode"] = args.mode
    _atomic_write_json(os.path.join(args.out, "report.json"), report)
    return EXIT_OK


def cmd_sweep(args) -> int:
    scenario = _load_scenario(args.scenario)
    config = _load_config(args.config)
    if scenario.favorable_side == "none":
        raise CliError("sweep requires a scenario with favorable_side set")
    os.makedirs(args.out, exist_ok=True)
    rows = []
    for k in range(1, 9):
        scen_k = bias_sweep_scenario(scenario, k)
        for mode in ("exact", "gaussian"):
            belief = _belief(scen_k, mode, args.seed)
            rep = monte_carlo(scen_k, config, args.runs, args.seed, belief=belief)
            rows.append([k, mode,
                         f"{rep['favorable_frequency']:.6f}",
                         f"{rep['mean_max_coll_fraction']:.6f}",
                         f"{rep['mean_smoothness']:.6f}"])
    _atomic_write_csv(os.path.join(args.out, "sweep.csv"),
                      ["k", "mode", "favorable_freq", "mean_coll_frac",
                       "mean_smoothness"], rows)
    return EXIT_OK


def cmd_histogram(args) -> int:
    scenario = _load_scenario(args.scenario)
    config = _load_config(args.config)
    os.makedirs(args.out, exist_ok=True)
    path = os.path.join(args.out, "histogram.csv")
    if not scenario.obstacles:
        _atomic_write_csv(path, ["obstacle", "f", "h"], [])
        return EXIT_OK
    belief = _belief(scenario, args.mode, args.seed)
    try:
        log = run_episode(scenario, config, seed=args.seed, belief=belief)
    except PlanningError as e:
        raise CliError(f"planning failed: {e}", EXIT_RUNTIME)
    step = args.step if args.step >= 0 else log.steps + args.step
    if not 0 <= step < log.steps:
        raise CliError(f"step {args.step} outside episode of {log.steps} steps",
                       EXIT_RUNTIME)
    robot, ctrl_noise, obstacle_sets, s_pair = replay_step_inputs(
        scenario, log, step, belief=belief)
    control = log.controls[step]
    ctrl = np.array([[control.v, control.omega]])
    rows = []
    for idx, obs_set in enumerate(obstacle_sets):
        rs, obs = robot.samples, obs_set.samples
        pi, pj = select_pairs(rs.shape[0], obs.shape[0], config.pair_budget,
                              s_pair + idx)
        f = constraint_values(ctrl, rs[:, :2], rs[:, 2], ctrl_noise.samples,
                              obs[:, :2], obs[:, 2:], pi, pj,
                              scenario.R, scenario.dt)[0]
        for fv in f:
            rows.append([idx, f"{fv:.9f}", f"{max(fv, 0.0):.9f}"])
    _atomic_write_csv(path, ["obstacle", "f", "h"], rows)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mmdnav",
                                description="MMD distribution-matching reactive "
                                            "collision avoidance")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--scenario", required=True, help="scenario JSON file")
        sp.add_argument("--config", default=None, help="planner config JSON file")
        sp.add_argument("--out", required=True, help="output directory")
        sp.add_argument("--seed", type=int, default=0, help="base seed")
        sp.add_argument("--mode", choices=("exact", "gaussian"), default="exact",
                        help="exact noise or Gaussian-ablation planning")

    sp = sub.add_parser("run", help="run one episode, write trajectory + metrics")
    common(sp)
    sp.set_defaults(func=cmd_run)

    sp = sub.add_parser("montecarlo", help="seeded batch of episodes")
    common(sp)
    sp.add_argument("--runs", type=int, default=100)
    sp.set_defaults(func=cmd_montecarlo)

    sp = sub.add_parser("sweep", help="bias sweep k=1..8, both planning modes")
    common(sp)
    sp.add_argument("--runs", type=int, default=100)
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("histogram", help="violation values of the chosen "
                                          "control at one step")
    common(sp)
    sp.add_argument("--step", type=int, default=-1,
                    help="step index (negative counts from the end)")
    sp.set_defaults(func=cmd_histogram)
    return p


def main(argv=None) -> int:
    threads = os.environ.get("MMDNAV_THREADS")
    if threads:
        try:
            _accel.set_threads(int(threads))
        except ValueError:
            print(f"mmdnav: bad MMDNAV_THREADS value {threads!r}", file=sys.stderr)
            return EXIT_CONFIG
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as e:
        print(f"mmdnav: {e}", file=sys.stderr)
        return e.code


if __name__ == "__main__":
    sys.exit(main())
