import numpy as np
import pytest

import src.fracdiff.harness as harness
from src.fracdiff.errors import NestingError, RegistryError, UndefinedRateError, ValidationError
from src.fracdiff.harness import (
    PRESETS,
    max_error,
    preset_study,
    rate,
    refinement_study,
    run_preset,
)
from src.fracdiff.models import Axis, Grid, TimeMesh, Trajectory
from src.fracdiff.problems import builtin_problem
from src.fracdiff.stepper import integrate


def _trajectory(N, M, states):
    return Trajectory(
        grid=Grid(0.0, 1.0, N), mesh=TimeMesh(1.0, M), steps=np.arange(M + 1), states=states, stats=[]
    )


def test_max_error_of_identical_runs_is_zero():
    traj = integrate(builtin_problem("example2"), 16, 8)
    report = max_error(traj, traj)
    assert report.error == 0.0
    assert report.compared_points == 9 * 17
    assert report.h == 0.125
    assert report.tau == 0.125


def test_max_error_single_point_perturbation(rng):
    ref = _trajectory(8, 4, rng.standard_normal((5, 7)))
    states = ref.states[[0, 2, 4]][:, [1, 3, 5]].copy()
    states[1, 2] += 1e-3
    report = max_error(ref, _trajectory(4, 2, states))
    assert report.error == pytest.approx(1e-3, rel=1e-9)
    assert report.compared_points == 15


def test_max_error_requires_nesting():
    ref = _trajectory(8, 4, np.zeros((5, 7)))
    with pytest.raises(NestingError):
        max_error(ref, _trajectory(3, 4, np.zeros((5, 2))))


def test_max_error_rejects_reference_missing_coarse_steps():
    problem = builtin_problem("example2")
    endpoints_only = integrate(problem, 32, 32, store_steps=[0, 32])
    coarse = integrate(problem, 16, 16)
    with pytest.raises(NestingError, match="coarse steps"):
        max_error(endpoints_only, coarse)

    report = max_error(integrate(problem, 32, 32), coarse)
    assert report.compared_points == 17 * 17


def test_rate_examples():
    assert rate(1.6739e-02, 4.1883e-03, 1 / 32, 1 / 64) == pytest.approx(1.9988, abs=1e-4)
    assert rate(1.8068e-02, 9.3471e-03, 1 / 16, 1 / 32) == pytest.approx(0.9509, abs=1e-4)
    assert rate(4e-4, 1e-4, 0.2, 0.1) == pytest.approx(2.0, abs=1e-14)


def test_rate_errors():
    with pytest.raises(UndefinedRateError):
        rate(0.0, 1e-3, 0.2, 0.1)
    with pytest.raises(UndefinedRateError):
        rate(1e-3, -1e-4, 0.2, 0.1)
    with pytest.raises(ValidationError):
        rate(1e-3, 1e-4, 0.1, 0.2)
    with pytest.raises(ValidationError):
        rate(1e-3, 1e-4, 0.1, 0.1)


def test_self_comparison_gives_single_zero_row():
    table = refinement_study(builtin_problem("example2"), 0.7, "time", 16, [16], 16, 16)
    assert len(table.rows) == 1
    assert table.rows[0].error == 0.0
    assert table.rows[0].rate is None
    assert table.expected_order == 2.0


def test_zero_error_row_leaves_rate_undefined():
    table = refinement_study(builtin_problem("example2"), 0.7, Axis.TIME, 16, [8, 16], 16, 16)
    assert table.rows[1].error == 0.0
    assert table.rows[1].rate is None


def test_reference_runs_once_and_stores_only_coincident_levels(monkeypatch):
    calls = []

    def spy(problem, N, M, tol, max_iter, store_steps=None):
        calls.append((N, M, None if store_steps is None else list(store_steps)))
        return integrate(problem, N, M, tol, max_iter, store_steps)

    monkeypatch.setattr(harness, "integrate", spy)
    table = refinement_study(builtin_problem("example2"), 0.7, Axis.TIME, 16, [8, 16], 16, 64)

    assert calls[0] == (16, 64, list(range(0, 65, 4)))
    assert [c[:2] for c in calls[1:]] == [(16, 8), (16, 16)]
    assert [r.resolution for r in table.rows] == [8, 16]
    assert table.fixed_resolution == 16
    assert (table.ref_N, table.ref_M) == (16, 64)


def test_concurrent_rows_match_sequential_rows():
    problem = builtin_problem("example2")
    sequential = refinement_study(problem, 0.7, "space", 16, [8, 16, 32], 64, 16)
    threaded = refinement_study(problem, 0.7, "space", 16, [8, 16, 32], 64, 16, jobs=3)
    assert sequential.errors == threaded.errors
    assert sequential.rates == threaded.rates
    assert sequential.expected_order == pytest.approx(1.3)


def test_resolutions_must_nest():
    problem = builtin_problem("example2")
    with pytest.raises(NestingError):
        refinement_study(problem, 0.7, "time", 16, [24], 16, 64)
    with pytest.raises(NestingError):
        refinement_study(problem, 0.7, "time", 24, [8], 64, 64)
    with pytest.raises(NestingError):
        refinement_study(problem, 0.7, "space", 24, [8], 64, 64)
    with pytest.raises(ValidationError):
        refinement_study(problem, 0.7, "time", 16, [32, 16], 64, 64)
    with pytest.raises(ValidationError):
        refinement_study(problem, 0.7, "time", 16, [], 64, 64)
    with pytest.raises(ValidationError):
        refinement_study(problem, 0.7, "time", 16, [16], 64, 64, jobs=0)
    with pytest.raises(ValueError):
        refinement_study(problem, 0.7, "diagonal", 16, [16], 64, 64)


def test_presets():
    assert sorted(PRESETS) == ["table1", "table2", "table3", "table4"]
    full = preset_study("table3")
    desk = preset_study("table3", desk=True)
    assert (full.reference, full.resolutions) == (1024, (64, 128, 256, 512))
    assert (desk.reference, desk.name) == (512, "table3-desk")
    assert max(desk.resolutions) <= 128
    for preset in PRESETS.values():
        assert all(preset.reference % r == 0 for r in preset.resolutions)
        assert all(512 % r == 0 for r in preset.desk_resolutions)
    with pytest.raises(RegistryError):
        preset_study("table5")


def _assert_monotone(table):
    errors = table.errors
    assert all(b < a for a, b in zip(errors, errors[1:])), errors


@pytest.mark.slow
def test_desk_temporal_order_example1():
    table = run_preset(preset_study("table1", desk=True), 0.6)
    assert table.axis is Axis.TIME
    assert [r.resolution for r in table.rows] == [32, 64, 128]
    _assert_monotone(table)
    for r in table.rates[1:]:
        assert 1.7 <= r <= 2.3


@pytest.mark.slow
def test_desk_spatial_order_example1():
    table = refinement_study(builtin_problem("example1"), 0.7, Axis.SPACE, None, [16, 32, 64, 128], 512, 512)
    assert table.fixed_resolution == 512
    assert table.expected_order == pytest.approx(1.3)
    _assert_monotone(table)
    for r in table.rates[1:]:
        assert 0.9 <= r <= 1.7


@pytest.mark.slow
def test_desk_orders_example2():
    temporal = run_preset(preset_study("table3", desk=True), 0.7)
    spatial = run_preset(preset_study("table4", desk=True), 0.7)
    _assert_monotone(temporal)
    _assert_monotone(spatial)
    assert [r.resolution for r in temporal.rows] == [32, 64, 128]
    assert [r.resolution for r in spatial.rows] == [32, 64, 128]
    for r in temporal.rates[1:]:
        assert 1.7 <= r <= 2.3
    for r in spatial.rates[1:]:
        assert 0.9 <= r <= 1.7


@pytest.mark.full_scale
def test_table1_replication():
    table = run_preset(preset_study("table1"), 0.6)
    expected_errors = [1.6739e-02, 4.1883e-03, 1.1086e-03, 2.6787e-04]
    for row, expected in zip(table.rows, expected_errors):
        assert row.error == pytest.approx(expected, rel=0.25)
    for observed, expected in zip(table.rates[1:], [1.9988, 1.9177, 2.0491]):
        assert observed == pytest.approx(expected, abs=0.1)


@pytest.mark.full_scale
def test_table2_replication():
    table = run_preset(preset_study("table2"), 0.9)
    for observed, expected in zip(table.rates[1:], [0.9509, 1.0511, 1.1394]):
        assert observed == pytest.approx(expected, abs=0.1)


@pytest.mark.full_scale
def test_table3_and_table4_replication():
    temporal = run_preset(preset_study("table3"), 0.7)
    spatial = run_preset(preset_study("table4"), 0.7)
    for observed, expected in zip(temporal.rates[1:], [1.8834, 1.9169, 2.1452]):
        assert observed == pytest.approx(expected, abs=0.15)
    for observed, expected in zip(spatial.rates[1:], [1.1285, 1.3058, 1.6830]):
        assert observed == pytest.approx(expected, abs=0.15)
