"""Gaussian ablation: plan on moment-matched single-Gaussian noise models
while the world keeps its true (possibly multimodal) noise."""

from __future__ import annotations

import dataclasses

from .noise import MixtureModel, gaussian_approximation, sample_mixture
from .sim import NoiseBundle, Scenario

APPROX_SAMPLES = 10_000


def gaussianize_model(model: MixtureModel, seed: int) -> MixtureModel:
    return gaussian_approximation(sample_mixture(model, APPROX_SAMPLES, seed))


def gaussianize_bundle(noise: NoiseBundle, seed: int) -> NoiseBundle:
    return NoiseBundle(
        robot_position=gaussianize_model(noise.robot_position, seed),
        actuation=gaussianize_model(noise.actuation, seed + 1),
        obstacle_position=gaussianize_model(noise.obstacle_position, seed + 2),
        obstacle_velocity=gaussianize_model(noise.obstacle_velocity, seed + 3),
        theta_std=noise.theta_std,
    )


def gaussianize_scenario(scenario: Scenario, seed: int = 0) -> Scenario:
    """Scenario with every noise mixture replaced by its moment-matched
    Gaussian. Pass the result's ``noise`` as the planner belief to keep the
    world dynamics on the true noise."""
    return dataclasses.replace(scenario,
                               noise=gaussianize_bundle(scenario.noise, seed))
