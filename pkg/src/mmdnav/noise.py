"""Non-parametric disturbance models as finite 2-D Gaussian mixtures.

Mixtures cover every qualitative feature we need from the sensor noise
(bias, multimodality) while staying trivial to sample. Raw sample files
(CSV) are also accepted for truly non-parametric data.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

# Two-component family interpolating from a single Gaussian (k=1) to a
# strongly biased bimodal mixture (k=8). Constants live here so the whole
# sweep is documented in one place; callers may build their own mixtures.
SWEEP_LEVELS = 8
SWEEP_WEIGHT_STEP = 0.06      # minority-mode weight beta_k = step * (k - 1)
SWEEP_OFFSET_STEP = 0.12      # minority-mode mean offset (m) per level
SWEEP_SIGMA_MAIN = 0.05       # std of the main mode (m)
SWEEP_SIGMA_MINOR = 0.08      # std of the minority mode (m)


@dataclass
class MixtureComponent:
    weight: float
    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self):
        self.weight = float(self.weight)
        self.mean = np.asarray(self.mean, dtype=float).reshape(2)
        self.cov = np.asarray(self.cov, dtype=float).reshape(2, 2)
        if not 0.0 <= self.weight <= 1.0:
            raise ValueError(f"component weight {self.weight} not in [0, 1]")
        if not np.allclose(self.cov, self.cov.T):
            raise ValueError("covariance must be symmetric")
        if np.linalg.eigvalsh(self.cov).min() < -1e-12:
            raise ValueError("covariance must be positive semi-definite")


@dataclass
class MixtureModel:
    components: list[MixtureComponent] = field(default_factory=list)

    def __post_init__(self):
        if not self.components:
            raise ValueError("mixture needs at least one component")
        total = sum(c.weight for c in self.components)
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"component weights sum to {total}, expected 1")

    @property
    def weights(self) -> np.ndarray:
        return np.array([c.weight for c in self.components])

    def mean(self) -> np.ndarray:
        """Analytic mixture mean."""
        return sum(c.weight * c.mean for c in self.components)

    def covariance(self) -> np.ndarray:
        """Analytic mixture covariance (law of total variance)."""
        m = self.mean()
        cov = np.zeros((2, 2))
        for c in self.components:
            d = c.mean - m
            cov += c.weight * (c.cov + np.outer(d, d))
        return cov

    def to_dict(self) -> dict:
        return {
            "components": [
                {"weight": c.weight, "mean": c.mean.tolist(), "cov": c.cov.tolist()}
                for c in self.components
            ]
        }

    @classmethod
    def from_dict(cls, d: dict) -> "MixtureModel":
        return cls([
            MixtureComponent(c["weight"], c["mean"], c["cov"])
            for c in d["components"]
        ])


def gaussian_model(mean, cov) -> MixtureModel:
    """Single-component convenience constructor."""
    return MixtureModel([MixtureComponent(1.0, mean, cov)])


def isotropic_model(mean, sigma: float) -> MixtureModel:
    return gaussian_model(mean, (sigma ** 2) * np.eye(2))


@dataclass
class SampleSet:
    samples: np.ndarray

    def __post_init__(self):
        self.samples = np.atleast_2d(np.asarray(self.samples, dtype=float))
        if self.samples.shape[0] < 1:
            raise ValueError("sample set must contain at least one sample")
        if not np.isfinite(self.samples).all():
            raise ValueError("sample set contains non-finite entries")

    @property
    def n(self) -> int:
        return self.samples.shape[0]

    @property
    def dim(self) -> int:
        return self.samples.shape[1]


def sample_mixture(model: MixtureModel, n: int, seed: int) -> SampleSet:
    """Draw n i.i.d. samples; bit-identical for a fixed (model, n, seed)."""
    if n < 1:
        raise ValueError("need n >= 1 samples")
    rng = np.random.default_rng(seed)
    idx = rng.choice(len(model.components), size=n, p=model.weights)
    out = np.empty((n, 2))
    for j, comp in enumerate(model.components):
        mask = idx == j
        m = int(mask.sum())
        if m:
            out[mask] = rng.multivariate_normal(comp.mean, comp.cov, size=m)
    return SampleSet(out)


def gaussian_approximation(samples: SampleSet) -> MixtureModel:
    """Moment-matched single Gaussian (ML covariance, divisor n)."""
    if samples.n < 2:
        raise ValueError("need at least 2 samples for a Gaussian approximation")
    x = samples.samples
    mean = x.mean(axis=0)
    d = x - mean
    cov = d.T @ d / samples.n
    return gaussian_model(mean, cov)


def bias_sweep_model(k: int, *, weight_step: float = SWEEP_WEIGHT_STEP,
                     offset_step: float = SWEEP_OFFSET_STEP,
                     sigma_main: float = SWEEP_SIGMA_MAIN,
                     sigma_minor: float = SWEEP_SIGMA_MINOR) -> MixtureModel:
    """Gaussian-to-bimodal family, level k in 1..8.

    k=1 is a plain zero-mean Gaussian; higher k shifts weight into a second
    mode displaced along +x, making the distribution increasingly biased.
    """
    if not 1 <= int(k) <= SWEEP_LEVELS:
        raise ValueError(f"sweep level k={k} outside 1..{SWEEP_LEVELS}")
    k = int(k)
    beta = weight_step * (k - 1)
    main = MixtureComponent(1.0 - beta, (0.0, 0.0), (sigma_main ** 2) * np.eye(2))
    if beta == 0.0:
        return MixtureModel([main])
    minor = MixtureComponent(beta, (offset_step * (k - 1), 0.0),
                             (sigma_minor ** 2) * np.eye(2))
    return MixtureModel([main, minor])


def save_model(model: MixtureModel, path) -> None:
    with open(path, "w") as f:
        json.dump(model.to_dict(), f, indent=2)


def load_model(path) -> MixtureModel:
    with open(path) as f:
        return MixtureModel.from_dict(json.load(f))


def load_samples_csv(path) -> SampleSet:
    """One sample per row, columns = dimensions, no header."""
    return SampleSet(np.loadtxt(path, delimiter=",", ndmin=2))
