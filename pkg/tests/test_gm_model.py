"""Gaussian-mixture model construction, sampling, distances, and unit handling."""

import numpy as np
import pytest

from semcom.errors import DomainError, UnitsError
from semcom.gm_model import (
    GmModel,
    average_pool,
    default_scale,
    discriminant_gain,
    mahalanobis,
    make_binary_model,
    make_ten_class_model,
    posterior,
    sample,
    to_quantized_units,
)
from semcom.seeding import substream


def test_binary_model_shape_and_pattern():
    m = make_binary_model(10, amplitude=2.0, variance=4.0)
    assert m.num_classes == 2 and m.dims == 10
    assert np.all(m.centroids[0] == 2.0)
    assert np.all(m.centroids[1] == -2.0)
    assert np.all(m.covariance_diag == 4.0)
    assert m.units == "feature"


def test_ten_class_model_block_pattern():
    m = make_ten_class_model(100)
    assert m.num_classes == 10 and m.dims == 100
    for label in range(10):
        block = m.centroids[label, label * 10 : (label + 1) * 10]
        assert np.all(block == -1.0)
        rest = np.delete(m.centroids[label], np.s_[label * 10 : (label + 1) * 10])
        assert np.all(rest == 1.0)
    with pytest.raises(DomainError):
        make_ten_class_model(55)


def test_model_validation():
    with pytest.raises(DomainError):
        GmModel(np.zeros((1, 3)), np.ones(3))
    with pytest.raises(DomainError):
        GmModel(np.zeros((2, 3)), np.ones(4))
    with pytest.raises(DomainError):
        GmModel(np.zeros((2, 3)), np.array([1.0, 0.0, 1.0]))
    with pytest.raises(DomainError):
        GmModel(np.full((2, 3), np.nan), np.ones(3))
    with pytest.raises(DomainError):
        GmModel(np.zeros((2, 3)), np.ones(3), units="volts")


def test_sampling_is_seeded_and_centered():
    m = make_binary_model(50, amplitude=1.5, variance=2.0)
    a = sample(m, 0, substream(1234, 0), count=20_000)
    b = sample(m, 0, substream(1234, 0), count=20_000)
    assert np.array_equal(a, b)
    assert a.shape == (20_000, 50)
    assert a.mean(axis=0) == pytest.approx(np.full(50, 1.5), abs=0.05)
    assert a.var(axis=0) == pytest.approx(np.full(50, 2.0), abs=0.12)
    single = sample(m, 1, substream(1, 1))
    assert single.shape == (50,)
    with pytest.raises(DomainError):
        sample(m, 2, substream(1, 2))


def test_mahalanobis_hand_values():
    m = GmModel(np.array([[0.0, 0.0], [3.0, 4.0]]), np.array([1.0, 4.0]))
    assert mahalanobis(m, np.array([3.0, 4.0]), 0) == pytest.approx(np.sqrt(9 + 4))
    assert mahalanobis(m, np.array([3.0, 4.0]), 1) == 0.0
    # extra isotropic variance widens the metric
    assert mahalanobis(m, np.array([3.0, 4.0]), 0, extra_variance=1.0) == pytest.approx(
        np.sqrt(9.0 / 2.0 + 16.0 / 5.0)
    )
    with pytest.raises(DomainError):
        mahalanobis(m, np.zeros(2), 0, extra_variance=-1.0)


def test_discriminant_gain_pinned_values():
    assert discriminant_gain(make_binary_model(100, 1.0), 0, 1) == pytest.approx(20.0)
    assert discriminant_gain(make_binary_model(100, 2.0), 0, 1) == pytest.approx(40.0)
    ten = make_ten_class_model(100)
    assert discriminant_gain(ten, 0, 1) == pytest.approx(np.sqrt(80.0))
    with pytest.raises(DomainError):
        discriminant_gain(ten, 3, 3)


def test_discriminant_gain_is_unit_invariant():
    m = make_binary_model(12, amplitude=0.7, variance=0.3)
    q = to_quantized_units(m, 123.4)
    assert discriminant_gain(q, 0, 1) == pytest.approx(discriminant_gain(m, 0, 1))


def test_average_pool():
    views = [np.array([1.0, 2.0]), np.array([3.0, 6.0])]
    assert average_pool(views) == pytest.approx(np.array([2.0, 4.0]))
    assert average_pool(np.array([5.0, 7.0])) == pytest.approx(np.array([5.0, 7.0]))
    with pytest.raises(DomainError):
        average_pool(np.empty((0, 2)))


def test_posterior_properties():
    m = make_ten_class_model(100)
    rng = substream(9, 0)
    x = sample(m, 4, rng)
    post = posterior(m, x)
    assert post.shape == (10,)
    assert post.sum() == pytest.approx(1.0, abs=1e-12)
    assert int(np.argmax(post)) == 4
    # compare in an unsaturated regime: heavy extra variance keeps post < 1
    blurred = posterior(m, x, extra_variance=40.0)
    assert blurred[4] < 1.0
    # more pooled views sharpen the posterior toward the argmax
    sharper = posterior(m, x, extra_variance=40.0, views=5)
    assert sharper[4] > blurred[4]
    # and extra variance flattens it
    flatter = posterior(m, x, extra_variance=80.0)
    assert flatter[4] < blurred[4]
    with pytest.raises(DomainError):
        posterior(m, x, views=0)


def test_posterior_matches_manual_softmax():
    m = GmModel(np.array([[1.0, 0.0], [-1.0, 0.0], [0.0, 2.0]]), np.array([0.5, 2.0]))
    x = np.array([0.3, 0.4])
    post = posterior(m, x, extra_variance=0.25, views=3)
    var = m.covariance_diag + 0.25
    logits = np.array(
        [-1.5 * float(np.sum((x - mu) ** 2 / var)) for mu in m.centroids]
    )
    expected = np.exp(logits - logits.max())
    expected /= expected.sum()
    assert post == pytest.approx(expected, rel=1e-12)


def test_unit_conversion_and_guards():
    m = make_binary_model(8, amplitude=1.0, variance=2.0)
    q = to_quantized_units(m, 10.0)
    assert q.units == "quantized"
    assert np.all(q.centroids == m.centroids * 10.0)
    assert np.all(q.covariance_diag == m.covariance_diag * 100.0)
    with pytest.raises(UnitsError):
        to_quantized_units(q, 2.0)
    with pytest.raises(DomainError):
        to_quantized_units(m, 0.0)


def test_default_scale_keeps_guard_band_in_range():
    m = make_binary_model(16, amplitude=1.0, variance=1.0)
    n_bits = 12
    s = default_scale(m, n_bits, guard=4.0)
    top = (np.abs(m.centroids).max() + 4.0 * np.sqrt(m.covariance_diag.max())) * s
    assert top == pytest.approx((1 << (n_bits - 1)) - 1)
    with pytest.raises(UnitsError):
        default_scale(to_quantized_units(m, s), n_bits)


def test_from_dict_round_trip():
    m = GmModel.from_dict(
        {"centroids": [[1.0, 2.0], [-1.0, -2.0]], "covariance_diag": [1.0, 0.5]}
    )
    assert m.dims == 2 and m.num_classes == 2 and m.units == "feature"
