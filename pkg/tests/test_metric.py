"""Tests for four-velocities, the Gordon metric and the field Lagrangian."""

import math

import numpy as np
import pytest

from open_horizon.core.errors import MetricError, SuperluminalError
from open_horizon.core.metric import (
    MINKOWSKI,
    REST,
    FieldStrength,
    FourVelocity,
    MetricTensor,
    Variance,
    contravariant_metric,
    covariant_metric,
    four_velocity,
    inverse_residual,
    lagrangian_covariant,
    lagrangian_geometric,
    lagrangian_magnitude,
    lagrangian_rest,
    metric_determinant,
    minkowski_norm,
    volume_factor,
)


def _random_velocity(rng, max_speed=0.99):
    axis = rng.normal(size=3)
    axis /= np.linalg.norm(axis)
    return four_velocity(rng.uniform(0.0, max_speed) * axis)


def test_four_velocity():
    u = four_velocity([0.6, 0.0, 0.0])
    assert u.gamma == pytest.approx(1.25)
    assert minkowski_norm(u.vector) == pytest.approx(1.0, abs=1e-12)
    assert np.allclose(u.beta, [0.6, 0.0, 0.0])
    assert np.allclose(u.covector, [1.25, -0.75, 0.0, 0.0])

    with pytest.raises(SuperluminalError):
        four_velocity([1.0, 0.0, 0.0])
    with pytest.raises(SuperluminalError):
        four_velocity([0.8, 0.8, 0.0])
    with pytest.raises(MetricError):
        FourVelocity((1.0, 0.5, 0.0, 0.0))


def test_rest_frame_metric():
    """At rest g^{mu nu} = diag(eps, -1, -1, -1)."""
    g = contravariant_metric(4.0, REST)
    assert g.variance is Variance.CONTRAVARIANT
    assert np.array_equal(g.components, np.diag([4.0, -1.0, -1.0, -1.0]))

    g_down = covariant_metric(4.0, REST)
    assert np.allclose(g_down.components, np.diag([0.25, -1.0, -1.0, -1.0]))


def test_vacuum_metric_is_minkowski():
    u = four_velocity([0.3, -0.4, 0.5])
    assert np.array_equal(contravariant_metric(1.0, u).components, MINKOWSKI)
    assert np.array_equal(covariant_metric(1.0, u).components, MINKOWSKI)


def test_epsilon_below_one_rejected():
    with pytest.raises(MetricError):
        contravariant_metric(0.5, REST)
    with pytest.raises(MetricError):
        covariant_metric(math.inf, REST)


def test_metric_tensor_validation():
    with pytest.raises(MetricError):
        MetricTensor(np.eye(3), Variance.COVARIANT)
    asymmetric = np.diag([1.0, -1.0, -1.0, -1.0])
    asymmetric[0, 1] = 0.5
    with pytest.raises(MetricError):
        MetricTensor(asymmetric, Variance.COVARIANT)

    g = contravariant_metric(2.0, four_velocity([0.5, 0.0, 0.0]))
    with pytest.raises(ValueError):
        g.components[0, 0] = 3.0


def test_signature_is_lorentzian():
    rng = np.random.default_rng(7)
    for _ in range(100):
        u = _random_velocity(rng)
        eps = rng.uniform(1.0, 100.0)
        assert contravariant_metric(eps, u).signature() == (1, 3)
        assert covariant_metric(eps, u).is_lorentzian()


def test_inverse_and_determinant_identities():
    """10^4 random (eps, beta): g^ g_ = 1 and det g^ = -eps to 1e-12."""
    rng = np.random.default_rng(2024)
    worst_inverse = 0.0
    worst_det = 0.0
    for _ in range(10_000):
        eps = rng.uniform(1.0, 100.0)
        u = _random_velocity(rng)
        g_up = contravariant_metric(eps, u)
        g_down = covariant_metric(eps, u)
        worst_inverse = max(worst_inverse, inverse_residual(g_up, g_down))
        worst_det = max(worst_det, abs(metric_determinant(g_up) + eps) / eps)
    assert worst_inverse < 1e-12
    assert worst_det < 1e-12


def test_moving_medium_components():
    """eps = 2, beta = 0.5 along x: gamma^2 = 4/3."""
    g = contravariant_metric(2.0, four_velocity([0.5, 0.0, 0.0])).components
    assert g[0, 0] == pytest.approx(7.0 / 3.0, rel=1e-14)
    assert g[0, 1] == pytest.approx(2.0 / 3.0, rel=1e-14)
    assert g[1, 0] == g[0, 1]
    assert g[1, 1] == pytest.approx(-2.0 / 3.0, rel=1e-14)
    rest = np.array(g)
    rest[:2, :2] = np.diag([1.0, -1.0])
    assert np.allclose(rest, MINKOWSKI, rtol=0.0, atol=1e-15)


def test_determinant_examples():
    assert metric_determinant(contravariant_metric(4.0, REST)) == pytest.approx(-4.0, rel=1e-15)
    g = contravariant_metric(2.0, four_velocity([0.5, 0.3, 0.0]))
    assert metric_determinant(g) == pytest.approx(-2.0, rel=1e-13)
    assert np.linalg.det(g.components) == pytest.approx(-2.0, rel=1e-12)


def test_determinant_fallback():
    """A metric that is not a rank-one update of Minkowski goes through LU."""
    g = MetricTensor(np.diag([2.0, -3.0, -1.0, -0.5]), Variance.COVARIANT)
    assert metric_determinant(g) == pytest.approx(-3.0)
    assert metric_determinant(MetricTensor(MINKOWSKI, Variance.COVARIANT)) == -1.0


def test_volume_factor():
    assert volume_factor(4.0) == 2.0
    assert volume_factor(1.0) == 1.0


def test_field_strength_tensor():
    F = FieldStrength((1.0, 2.0, 3.0), (4.0, 5.0, 6.0))
    tensor = F.tensor()
    assert np.array_equal(tensor, -tensor.T)
    assert tensor[0, 1] == 1.0
    # F_12 = -B_3, F_23 = -B_1, F_31 = -B_2
    assert tensor[1, 2] == -6.0
    assert tensor[2, 3] == -4.0
    assert tensor[3, 1] == -5.0


def test_lagrangian_rest_frame():
    """At rest the covariant form reduces to (eps E^2 - B^2) / 2."""
    F = FieldStrength((1.0, -2.0, 0.5), (0.3, 0.0, -1.5))
    eps = 3.0
    expected = 0.5 * (eps * 5.25 - 2.34)
    assert lagrangian_rest(F, eps) == pytest.approx(expected, rel=1e-15)
    assert lagrangian_covariant(F, REST, eps) == pytest.approx(expected, rel=1e-14)
    assert lagrangian_geometric(F, contravariant_metric(eps, REST)) == pytest.approx(expected, rel=1e-14)


def test_lagrangian_equivalence():
    """Covariant and geometric forms agree on 10^3 random (F, u, eps)."""
    rng = np.random.default_rng(11)
    for _ in range(1000):
        eps = rng.uniform(1.0, 100.0)
        u = _random_velocity(rng)
        F = FieldStrength(tuple(rng.normal(size=3)), tuple(rng.normal(size=3)))
        g = contravariant_metric(eps, u)
        gap = abs(lagrangian_covariant(F, u, eps) - lagrangian_geometric(F, g))
        assert gap <= 1e-12 * lagrangian_magnitude(F, g)


def test_lagrangian_geometric_needs_contravariant():
    F = FieldStrength((1.0, 0.0, 0.0), (0.0, 0.0, 0.0))
    with pytest.raises(MetricError):
        lagrangian_geometric(F, covariant_metric(2.0, REST))
