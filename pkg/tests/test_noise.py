import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mmdnav.noise import (MixtureComponent, MixtureModel, SampleSet,
                          bias_sweep_model, gaussian_approximation,
                          gaussian_model, isotropic_model, load_model,
                          load_samples_csv, sample_mixture, save_model)


def test_component_validation():
    with pytest.raises(ValueError):
        MixtureComponent(1.5, (0, 0), np.eye(2))
    with pytest.raises(ValueError):
        MixtureComponent(1.0, (0, 0), [[1.0, 0.5], [0.4, 1.0]])  # asymmetric
    with pytest.raises(ValueError):
        MixtureComponent(1.0, (0, 0), [[1.0, 2.0], [2.0, 1.0]])  # indefinite


def test_model_weights_must_sum_to_one():
    c = MixtureComponent(0.5, (0, 0), np.eye(2))
    with pytest.raises(ValueError):
        MixtureModel([c])
    with pytest.raises(ValueError):
        MixtureModel([])


def test_analytic_mean_and_covariance():
    m = MixtureModel([
        MixtureComponent(0.7, (0.0, 0.0), 0.04 * np.eye(2)),
        MixtureComponent(0.3, (1.0, 0.0), 0.09 * np.eye(2)),
    ])
    assert np.allclose(m.mean(), [0.3, 0.0])
    # law of total variance along x: within + between
    var_x = 0.7 * 0.04 + 0.3 * 0.09 + 0.7 * 0.3 * 1.0
    assert np.isclose(m.covariance()[0, 0], var_x)
    assert np.isclose(m.covariance()[1, 1], 0.7 * 0.04 + 0.3 * 0.09)


def test_sampling_is_deterministic_and_matches_moments():
    m = bias_sweep_model(6)
    s1 = sample_mixture(m, 4000, seed=5)
    s2 = sample_mixture(m, 4000, seed=5)
    assert np.array_equal(s1.samples, s2.samples)
    assert np.allclose(s1.samples.mean(axis=0), m.mean(), atol=0.02)
    assert np.allclose(np.cov(s1.samples.T, bias=True), m.covariance(), atol=0.01)


def test_sampling_rejects_bad_n():
    with pytest.raises(ValueError):
        sample_mixture(isotropic_model((0, 0), 1.0), 0, seed=0)


def test_gaussian_approximation_moment_matches():
    m = bias_sweep_model(8)
    s = sample_mixture(m, 20000, seed=1)
    g = gaussian_approximation(s)
    assert len(g.components) == 1
    assert np.allclose(g.mean(), s.samples.mean(axis=0))
    assert np.allclose(g.covariance(), np.cov(s.samples.T, bias=True), atol=1e-9)
    with pytest.raises(ValueError):
        gaussian_approximation(SampleSet([[0.0, 0.0]]))


@given(st.integers(min_value=1, max_value=8))
@settings(max_examples=8, deadline=None)
def test_bias_sweep_family(k):
    m = bias_sweep_model(k)
    beta = 0.06 * (k - 1)
    if k == 1:
        assert len(m.components) == 1
        assert np.allclose(m.mean(), 0.0)
    else:
        assert len(m.components) == 2
        assert np.isclose(m.components[1].weight, beta)
        assert np.allclose(m.components[1].mean, [0.12 * (k - 1), 0.0])
    assert np.isclose(m.weights.sum(), 1.0)


def test_bias_sweep_rejects_out_of_range():
    for k in (0, 9):
        with pytest.raises(ValueError):
            bias_sweep_model(k)


def test_model_json_roundtrip(tmp_path):
    m = bias_sweep_model(4)
    p = tmp_path / "model.json"
    save_model(m, p)
    m2 = load_model(p)
    assert json.dumps(m.to_dict()) == json.dumps(m2.to_dict())


def test_load_samples_csv(tmp_path):
    p = tmp_path / "samples.csv"
    p.write_text("0.0,1.0\n2.0,3.0\n")
    s = load_samples_csv(p)
    assert s.n == 2 and s.dim == 2
    assert np.array_equal(s.samples, [[0.0, 1.0], [2.0, 3.0]])


def test_sample_set_validation():
    with pytest.raises(ValueError):
        SampleSet(np.array([[np.nan, 0.0]]))
