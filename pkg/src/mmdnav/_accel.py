"""Hot numeric kernels with numba acceleration and a pure-numpy fallback.

The only runtime-critical loop in the whole pipeline is the batched MMD
evaluation: one squared-MMD value per control candidate, each requiring a
quadratic pass over the violation vector. Everything else is cheap numpy.

Set ``MMDNAV_PURE_NUMPY=1`` in the environment (before import) to force the
numpy fallback. Results are identical to within ~1e-15; see
``benchmarks/bench_kernels.py`` for the speed difference.
"""

from __future__ import annotations

import math
import os

import numpy as np

_DISABLE = os.environ.get("MMDNAV_PURE_NUMPY", "").strip().lower() in ("1", "true", "yes")

USING_NUMBA = False
if not _DISABLE:
    try:
        import numba
        from numba import njit, prange

        USING_NUMBA = True
    except ImportError:  # pragma: no cover - numba is a hard dep, but degrade anyway
        pass


def set_threads(n: int) -> None:
    """Limit the worker-thread count of the jitted kernels (no-op without numba)."""
    if USING_NUMBA:
        numba.set_num_threads(max(1, int(n)))


def _mmd_costs_numpy(H: np.ndarray, a: np.ndarray, gamma: float) -> np.ndarray:
    # reference path: full kernel matrix per row
    out = np.empty(H.shape[0])
    for c in range(H.shape[0]):
        h = H[c]
        if not h.any():
            # exp(0)=1 everywhere, so the three terms cancel exactly
            out[c] = 0.0
            continue
        d = h[:, None] - h[None, :]
        m_cc = a @ np.exp(-gamma * d * d) @ a
        m_c0 = a @ np.exp(-gamma * h * h)
        out[c] = max(m_cc - 2.0 * m_c0 + 1.0, 0.0)
    return out


if USING_NUMBA:

    @njit(parallel=True, fastmath=True, cache=True)
    def _mmd_costs_jit(H, a, gamma):  # pragma: no cover - exercised via wrapper
        n_ctrl, n = H.shape
        out = np.empty(n_ctrl)
        for c in prange(n_ctrl):
            all_zero = True
            for p in range(n):
                if H[c, p] != 0.0:
                    all_zero = False
                    break
            if all_zero:
                out[c] = 0.0
                continue
            m_cc = 0.0
            m_c0 = 0.0
            for p in range(n):
                hp = H[c, p]
                ap = a[p]
                m_cc += ap * ap
                m_c0 += ap * math.exp(-gamma * hp * hp)
                # upper triangle only; K_cc is symmetric
                for q in range(p + 1, n):
                    d = hp - H[c, q]
                    m_cc += 2.0 * ap * a[q] * math.exp(-gamma * d * d)
            v = m_cc - 2.0 * m_c0 + 1.0
            out[c] = v if v > 0.0 else 0.0
        return out


def mmd_costs(H: np.ndarray, a: np.ndarray, gamma: float) -> np.ndarray:
    """Squared MMD to the point mass at zero, one value per row of ``H``.

    ``H`` is (n_controls, n_pairs) of non-negative violation values and ``a``
    the shared pair weights (summing to 1). Exploits that the Dirac side
    contributes a constant column (kappa) and an all-ones matrix, so only the
    h-vs-h Gram matrix is ever formed.
    """
    H = np.ascontiguousarray(H, dtype=np.float64)
    a = np.ascontiguousarray(a, dtype=np.float64)
    if USING_NUMBA:
        return _mmd_costs_jit(H, a, float(gamma))
    return _mmd_costs_numpy(H, a, float(gamma))
