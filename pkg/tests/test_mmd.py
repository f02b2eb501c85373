import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mmdnav._accel import _mmd_costs_numpy, mmd_costs
from mmdnav.mmd import DeltaWeights, KernelConfig, mmd_cost, mmd_direct, rbf
from mmdnav.vo import ViolationVector


def _viol(h, weights=None):
    h = np.asarray(h, dtype=float)
    w = (np.full(len(h), 1.0 / len(h)) if weights is None
         else np.asarray(weights, dtype=float))
    idx = np.column_stack([np.arange(len(h)), np.zeros(len(h), dtype=int)])
    return ViolationVector(h, w, idx)


def test_rbf_values():
    assert rbf(0.0, 0.0, 0.1) == 1.0
    assert np.isclose(rbf(1.0, 0.0, 0.1), np.exp(-0.1))
    assert rbf(0.3, 1.7, 0.5) == rbf(1.7, 0.3, 0.5)
    with pytest.raises(ValueError):
        rbf(0.0, 0.0, 0.0)


def test_single_pair_closed_form():
    # 2 * (1 - exp(-gamma)) for h = [1]
    got = mmd_cost(_viol([1.0]), kernel=KernelConfig(0.1))
    assert abs(got - 0.190325) < 1e-6


def test_two_pair_closed_form():
    got = mmd_cost(_viol([0.0, 1.0]), kernel=KernelConfig(0.1))
    assert abs(got - 0.047581) < 1e-6


def test_all_zero_is_exactly_zero():
    assert mmd_cost(_viol(np.zeros(17))) == 0.0
    assert mmd_direct(_viol(np.zeros(17))) == 0.0


def test_nonnegative_and_increasing_in_single_h():
    prev = -1.0
    for h in np.linspace(0.0, 4.0, 40):
        cur = mmd_cost(_viol([h]), kernel=KernelConfig(0.5))
        assert cur >= 0.0
        assert cur >= prev
        prev = cur


def test_delta_weights_do_not_change_value():
    v = _viol([0.2, 1.5, 0.0])
    b = DeltaWeights([0.6, 0.3, 0.1])
    k = KernelConfig(0.3)
    assert np.isclose(mmd_cost(v, b, k), mmd_cost(v, None, k), atol=1e-12)
    assert np.isclose(mmd_direct(v, b, k), mmd_direct(v, None, k), atol=1e-12)


def test_oracle_equivalence_randomized():
    rng = np.random.default_rng(42)
    for _ in range(300):
        n = int(rng.integers(1, 101))
        h = rng.uniform(0.0, 5.0, n)
        w = rng.uniform(0.1, 1.0, n)
        w /= w.sum()
        gamma = float(rng.choice([0.01, 0.1, 1.0]))
        v = _viol(h, w)
        k = KernelConfig(gamma)
        assert abs(mmd_cost(v, kernel=k) - mmd_direct(v, kernel=k)) < 1e-9


@given(st.lists(st.floats(0.0, 5.0), min_size=1, max_size=40),
       st.sampled_from([0.01, 0.1, 1.0]))
@settings(max_examples=60, deadline=None)
def test_oracle_equivalence_property(h, gamma):
    v = _viol(h)
    k = KernelConfig(gamma)
    assert abs(mmd_cost(v, kernel=k) - mmd_direct(v, kernel=k)) < 1e-9


def test_batched_kernel_matches_numpy_reference():
    rng = np.random.default_rng(9)
    H = rng.uniform(0.0, 2.0, (13, 50))
    H[3] = 0.0  # exact-zero row
    a = rng.uniform(0.1, 1.0, 50)
    a /= a.sum()
    fast = mmd_costs(H, a, 0.7)
    ref = _mmd_costs_numpy(H, a, 0.7)
    assert fast[3] == 0.0 and ref[3] == 0.0
    assert np.allclose(fast, ref, atol=1e-12)
    assert (fast >= 0.0).all()


def test_kernel_config_validation():
    with pytest.raises(ValueError):
        KernelConfig(-1.0)
    with pytest.raises(ValueError):
        DeltaWeights([0.5, 0.6])
