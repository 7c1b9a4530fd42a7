"""Tests for the (t, r) metric block and the static-form transformation."""

import numpy as np
import pytest

from open_horizon.core.errors import (
    FlowProfileError,
    HorizonSingularityError,
    MetricError,
    NoHorizonError,
)
from open_horizon.flow.coords import (
    RadialMetricComponents,
    covariant_block,
    interval_check,
    metric_profile,
    radial_block,
    radial_inverse_block,
    radial_inverse_derivative,
    static_form,
    static_radius,
    static_surface_gravity,
)
from open_horizon.flow.horizon import surface_gravity


EPS = 4.0


def test_block_outside_horizon(black_hole):
    block = radial_block(black_hole, EPS, 2.0)
    # v = -0.4, gamma^2 = 1 / 0.84, k = 0.75
    assert block.g00 == pytest.approx(1.0 - 0.75 / 0.84, rel=1e-12)
    assert block.g01 == pytest.approx(-0.75 * 0.4 / 0.84, rel=1e-12)
    assert block.g11 == pytest.approx(-1.0 - 0.75 * 0.16 / 0.84, rel=1e-12)
    assert block.discriminant == pytest.approx(1.0 / EPS, rel=1e-12)
    assert block.g00 > 0


def test_block_vanishes_on_horizon(black_hole):
    block = radial_block(black_hole, EPS, 1.6)
    assert abs(block.g00) < 1e-12
    with pytest.raises(HorizonSingularityError):
        static_form(block)


def test_static_form_inside(black_hole):
    block = radial_block(black_hole, EPS, 1.2)
    g00, g_rr = static_form(block)
    # r~ is timelike inside the horizon
    assert g00 < 0
    assert g_rr > 0
    assert g_rr == pytest.approx(-0.25 / g00, rel=1e-12)


def test_white_hole_mirrors_g01(black_hole, white_hole):
    black = radial_block(black_hole, EPS, 2.5)
    white = radial_block(white_hole, EPS, 2.5)
    assert white.g00 == pytest.approx(black.g00)
    assert white.g11 == pytest.approx(black.g11)
    assert white.g01 == pytest.approx(-black.g01)


def test_component_validation(black_hole):
    with pytest.raises(MetricError):
        RadialMetricComponents(g00=1.0, g01=0.0, g11=1.0, r=1.0)
    with pytest.raises(MetricError):
        RadialMetricComponents(g00=float('nan'), g01=0.0, g11=-1.0, r=1.0)
    with pytest.raises(FlowProfileError):
        radial_block(black_hole, EPS, 0.5)
    with pytest.raises(MetricError):
        covariant_block(black_hole, 0.9, 2.0)


def test_inverse_block(black_hole):
    r = np.linspace(0.9, 7.5, 50)
    g00, g01, g11 = covariant_block(black_hole, EPS, r)
    gtt, gtr, grr = radial_inverse_block(black_hole, EPS, r)
    np.testing.assert_allclose(gtt * g00 + gtr * g01, 1.0, atol=1e-12)
    np.testing.assert_allclose(gtt * g01 + gtr * g11, 0.0, atol=1e-12)
    np.testing.assert_allclose(gtr * g01 + grr * g11, 1.0, atol=1e-12)


def test_inverse_derivative(white_hole):
    r = np.array([0.95, 1.3, 1.6, 2.4, 5.0])
    h = 1e-6
    plus = radial_inverse_block(white_hole, EPS, r + h)
    minus = radial_inverse_block(white_hole, EPS, r - h)
    analytic = radial_inverse_derivative(white_hole, EPS, r)
    for hi, lo, d in zip(plus, minus, analytic):
        np.testing.assert_allclose(d, (hi - lo) / (2 * h), rtol=1e-6, atol=1e-8)


@pytest.mark.parametrize('flow', ['black_hole', 'white_hole'])
def test_interval_preserved(flow, request):
    profile = request.getfixturevalue(flow)
    rng = np.random.default_rng(7)
    checked = 0
    for r in np.linspace(0.9, 7.5, 20):
        block = radial_block(profile, EPS, r)
        if abs(block.g00) <= 1e-3:
            continue
        samples = rng.normal(size=(100, 2))
        assert interval_check(block, samples) < 1e-10
        checked += 1
    assert checked >= 18


def test_interval_mismatch_near_horizon(black_hole):
    """Rounding in the shift g01/g00 grows as g00 -> 0, but stays finite."""
    rng = np.random.default_rng(11)
    samples = rng.normal(size=(100, 2))
    mismatches = []
    for gap in (1e-1, 1e-2, 1e-3, 1e-4, 1e-5):
        block = radial_block(black_hole, EPS, 1.6 + gap)
        assert abs(block.g00) > 1e-6
        mismatches.append(interval_check(block, samples))
    assert np.all(np.isfinite(mismatches))
    assert mismatches[-1] > mismatches[0]
    assert mismatches[-1] < 1e-6
    # Time-only displacements are untouched by the transform
    assert interval_check(radial_block(black_hole, EPS, 1.6 + 1e-5), [(1.0, 0.0)]) < 1e-15

    with pytest.raises(HorizonSingularityError):
        interval_check(radial_block(black_hole, EPS, 1.6 + 1e-7), samples)


def test_static_surface_gravity(black_hole, white_hole):
    expected = surface_gravity(black_hole, EPS)
    assert static_surface_gravity(black_hole, EPS) == pytest.approx(expected, rel=1e-10)
    assert static_surface_gravity(white_hole, EPS) == pytest.approx(expected, rel=1e-10)
    with pytest.raises(NoHorizonError):
        static_surface_gravity(black_hole, 1.01)


def test_static_radius(black_hole):
    # g01^2 - g00 g11 = 1 / eps, so r~ = (r - r_ref) / sqrt(eps)
    r = np.linspace(1.0, 6.0, 11)
    r_static = static_radius(black_hole, EPS, r, r_ref=1.0)
    np.testing.assert_allclose(r_static, (r - 1.0) / 2.0, atol=1e-10)
    assert np.all(np.diff(r_static) > 0)
    with pytest.raises(FlowProfileError):
        static_radius(black_hole, EPS, [2.0, 1.0])


def test_metric_profile(black_hole):
    frame = metric_profile(black_hole, EPS, [1.2, 1.6, 2.0])
    assert list(frame.columns) == ['r', 'g00', 'g01', 'g11', 'g00_static', 'g_rr_static']
    assert np.isnan(frame['g00_static'][1])
    assert np.isnan(frame['g_rr_static'][1])
    assert frame['g00_static'][0] < 0 < frame['g00_static'][2]
    assert not frame[['g00', 'g01', 'g11']].isna().any().any()
