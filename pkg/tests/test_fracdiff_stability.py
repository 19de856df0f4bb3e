import math

import numpy as np
import pytest

from src.fracdiff.errors import ValidationError
from src.fracdiff.models import StabilityPoint
from src.fracdiff.stability import (
    amplification_factor,
    boundary_curve,
    boundary_point,
    closed_form_lambda,
    is_stable,
    boundary_residual,
)


def test_real_axis_crossings():
    e = math.exp(-0.7)
    far = boundary_point(0.7, math.pi)
    near = boundary_point(0.7, 0.0)

    assert far.lambda_r == pytest.approx(2 * (1 + e) / (1 - e), rel=1e-13)
    assert far.lambda_r == pytest.approx(5.9457354545, abs=1e-9)
    assert near.lambda_r == pytest.approx(2 * (1 - e) / (1 + e), rel=1e-13)
    assert near.lambda_r == pytest.approx(0.6728, abs=1e-4)
    assert near.lambda_i == 0.0
    assert abs(far.lambda_i) <= 1e-12


def test_large_q_tau_approaches_excluded_point():
    point = boundary_point(50.0, math.pi)
    assert abs(point.lam - 2.0) <= 1e-6


def test_residual_at_far_crossing():
    e = math.exp(-2.5)
    point = boundary_point(2.5, math.pi)
    assert point.lambda_r == pytest.approx(2 * (1 + e) / (1 - e), rel=1e-13)
    assert boundary_residual(point) <= 1e-12


def test_random_points_satisfy_defining_relation(rng):
    thetas = rng.uniform(0.0, 2.0 * math.pi, 10_000)
    q_taus = rng.uniform(0.2, 10.0, 10_000)
    for theta, q_tau in zip(thetas, q_taus):
        point = boundary_point(q_tau, theta)
        closed = closed_form_lambda(q_tau, theta)
        assert boundary_residual(point) <= 1e-12
        assert abs(point.lam - closed) <= 1e-13 * max(1.0, abs(closed))
        # |G| loses accuracy as lambda nears the pole at 2
        pole_distance = min(1.0, abs(1.0 - 0.5 * point.lam))
        assert abs(abs(amplification_factor(q_tau, point.lam)) - 1.0) <= 1e-12 / pole_distance


def test_perturbed_point_fails_relation():
    point = boundary_point(0.7, 0.0)
    moved = StabilityPoint(
        theta=point.theta,
        q_tau=point.q_tau,
        lambda_r=point.lambda_r + 1e-3,
        lambda_i=point.lambda_i,
        c=point.c,
    )
    assert boundary_residual(moved) >= 1e-4


@pytest.mark.parametrize("q_tau", [0.1, 0.7, 1.2, 2.5, 8.0])
def test_reflection_symmetry(q_tau):
    for theta in np.linspace(0.1, 3.0, 13):
        p = boundary_point(q_tau, theta)
        r = boundary_point(q_tau, 2.0 * math.pi - theta)
        assert r.lambda_r == pytest.approx(p.lambda_r, rel=1e-12)
        assert r.lambda_i == pytest.approx(-p.lambda_i, rel=1e-12)


@pytest.mark.parametrize("q_tau", [0.7, 1.2, 2.5])
def test_curve_is_closed_and_right_of_imaginary_axis(q_tau):
    curve = boundary_curve(q_tau)
    assert curve.q_tau == q_tau
    assert len(curve.points) == 721
    first, last = curve.points[0], curve.points[-1]
    assert (first.lambda_r, first.lambda_i) == (last.lambda_r, last.lambda_i)
    assert min(p.lambda_r for p in curve.points) > 0.0
    assert max(boundary_residual(p) for p in curve.points) <= 1e-12


def test_eight_samples_give_nine_points():
    curve = boundary_curve(0.7, samples=8)
    assert len(curve.points) == 9
    assert curve.points[4].theta == pytest.approx(math.pi)


def test_small_q_tau_collapses_to_imaginary_axis():
    point = boundary_point(1e-6, 1.0)
    assert 0.0 < point.lambda_r < 1e-5


def test_curves_shrink_toward_two_as_q_tau_grows():
    spreads = [
        max(abs(p.lam - 2.0) for p in boundary_curve(q, samples=360).points)
        for q in (0.7, 1.2, 2.5, 10.0)
    ]
    assert spreads == sorted(spreads, reverse=True)
    assert spreads[-1] < 1e-3


def test_left_half_plane_is_stable(rng):
    for _ in range(2000):
        lam = complex(-rng.exponential(5.0), rng.normal(0.0, 10.0))
        assert is_stable(rng.uniform(0.01, 5.0), lam)


def test_inside_the_curve_is_unstable():
    assert not is_stable(0.7, 1.9)
    assert not is_stable(0.7, 2.0)
    assert amplification_factor(0.7, 2.0) == complex(math.inf, 0.0)
    assert is_stable(0.7, 6.5)


@pytest.mark.parametrize("q_tau", [0.0, -1.0, float("nan"), float("inf")])
def test_rejects_bad_q_tau(q_tau):
    with pytest.raises(ValidationError):
        boundary_point(q_tau, 0.0)
    with pytest.raises(ValidationError):
        boundary_curve(q_tau)


@pytest.mark.parametrize("samples", [0, 7, 10.5])
def test_rejects_too_few_samples(samples):
    with pytest.raises(ValidationError):
        boundary_curve(0.7, samples=samples)
