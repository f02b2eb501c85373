"""RBF-kernel MMD between the violation distribution and the point mass at 0.

``mmd_cost`` is the production path (shared with the planner's batched
kernel); ``mmd_direct`` expands every inner product as explicit double sums
over fully materialized kernel matrices and exists purely as an independent
check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._accel import mmd_costs
from .vo import ViolationVector


@dataclass
class KernelConfig:
    gamma: float = 0.1

    def __post_init__(self):
        if self.gamma <= 0:
            raise ValueError("kernel bandwidth gamma must be positive")


@dataclass
class DeltaWeights:
    b: np.ndarray

    def __post_init__(self):
        self.b = np.asarray(self.b, dtype=float).reshape(-1)
        if (self.b < 0).any():
            raise ValueError("delta weights must be non-negative")
        if abs(self.b.sum() - 1.0) > 1e-9:
            raise ValueError("delta weights must sum to 1")


def rbf(c1: float, c2: float, gamma: float) -> float:
    if gamma <= 0:
        raise ValueError("kernel bandwidth gamma must be positive")
    d = float(c1) - float(c2)
    return math.exp(-gamma * d * d)


def _uniform_delta(n: int) -> DeltaWeights:
    return DeltaWeights(np.full(n, 1.0 / n))


def mmd_cost(viol: ViolationVector, delta_weights: DeltaWeights | None = None,
             kernel: KernelConfig = KernelConfig()) -> float:
    """Squared MMD via the kernel trick.

    Only the h-vs-h Gram matrix is formed: every Dirac sample is zero, so
    the cross matrix has identical columns (a single kappa vector) and the
    delta-delta matrix is all ones. With both weight vectors summing to 1
    the delta side collapses to constants and any valid ``delta_weights``
    gives the same value.
    """
    # delta_weights only enter through their sum (=1), so they drop out here
    return float(mmd_costs(viol.h[None, :], viol.weights, kernel.gamma)[0])


def mmd_direct(viol: ViolationVector, delta_weights: DeltaWeights | None = None,
               kernel: KernelConfig = KernelConfig()) -> float:
    """Oracle: materializes all three kernel matrices in full.

    Unlike ``mmd_cost`` it takes no structural shortcuts: K_c0 and K_00 are
    built element by element even though their entries are redundant, and
    the three quadratic forms are evaluated directly. Intended for small
    violation vectors (a few hundred pairs at most).
    """
    h = viol.h
    a = viol.weights
    b = (_uniform_delta(len(h)) if delta_weights is None else delta_weights).b
    g = kernel.gamma
    zeros = np.zeros(len(b))
    k_cc = np.exp(-g * (h[:, None] - h[None, :]) ** 2)
    k_c0 = np.exp(-g * (h[:, None] - zeros[None, :]) ** 2)
    k_00 = np.exp(-g * (zeros[:, None] - zeros[None, :]) ** 2)
    m_cc = float(a @ k_cc @ a)
    m_c0 = float(a @ k_c0 @ b)
    m_00 = float(b @ k_00 @ b)
    return m_cc - 2.0 * m_c0 + m_00
