import math

import numpy as np
import pytest

from src.fracdiff.errors import RegistryError, ValidationError
from src.fracdiff.models import FractionalOrder, Grid
from src.fracdiff.problems import (
    builtin_problem,
    make_initial,
    make_reaction,
    problem_from_config,
    registry_listing,
)


def _config(**overrides):
    config = {
        "name": "custom",
        "a": 0.0,
        "b": 1.0,
        "T": 0.5,
        "alpha": 0.75,
        "d_plus": {"kind": "right_power", "params": {"origin": 1.0}},
        "d_minus": {"kind": "constant", "params": {"value": 2.0}},
        "reaction": {"kind": "sine"},
        "u0": {"kind": "bump", "params": {"scale": 10, "left": 0, "right": 1}},
    }
    config.update(overrides)
    return config


def test_example1_definition():
    problem = builtin_problem("example1")
    assert (problem.a, problem.b, problem.T, problem.alpha) == (0.0, 1.0, 1.0, 0.6)
    np.testing.assert_array_equal(problem.u0(np.array([0.0, 1.0])), [0.0, 0.0])
    assert problem.u0(np.array([0.5]))[0] == pytest.approx(0.625)
    assert problem.reaction(np.array([0.25]))[0] == pytest.approx(100 * 0.25 * -0.25 * 0.75)


def test_example1_coefficient_sampling():
    problem = builtin_problem("example1").with_alpha(0.7)
    grid = problem.grid(8)
    x = grid.nodes()
    samples = problem.diffusion_samples(grid)
    np.testing.assert_allclose(samples.d_plus, (1.0 - x[:-1]) ** 0.7)
    np.testing.assert_allclose(samples.d_minus, x[1:] ** 0.7)
    assert samples.N == 8


def test_example2_definition():
    problem = builtin_problem("example2")
    assert (problem.a, problem.b, problem.T) == (-1.0, 1.0, 1.0)
    assert problem.d_plus(np.array([0.0]), 0.6)[0] == 1.0
    assert problem.d_plus(np.array([-0.5]), 0.6)[0] == pytest.approx(1.5 * math.exp(0.5))
    assert problem.d_minus(np.array([0.3]), 0.6)[0] == 1.0

    ends = problem.u0(np.array([-1.0, 1.0]))
    expected = 4 * math.exp(-10) / (math.exp(-10) + 1) ** 2
    np.testing.assert_allclose(ends, [expected, expected], rtol=1e-12)
    assert ends[0] == pytest.approx(1.8157e-4, rel=1e-3)
    assert problem.u0(np.array([0.0]))[0] == pytest.approx(1.0)


def test_example2_jump_node_takes_right_branch():
    problem = builtin_problem("example2")
    grid = problem.grid(4)
    np.testing.assert_allclose(
        problem.diffusion_samples(grid).d_plus,
        [1.5 * math.e, 1.5 * math.exp(0.5), 1.0, 1.0],
    )


def test_initial_state_is_interior_only():
    problem = builtin_problem("example1")
    grid = problem.grid(10)
    u = problem.initial_state(grid)
    assert u.shape == (9,)
    np.testing.assert_allclose(u, 10 * grid.interior() ** 2 * (1 - grid.interior()) ** 2)


def test_grid_nodes():
    grid = Grid(-1.0, 1.0, 3)
    x = grid.nodes()
    assert grid.h == pytest.approx(2.0 / 3.0)
    assert x[0] == -1.0 and x[-1] == 1.0
    assert grid.interior().shape == (2,)
    with pytest.raises(ValidationError):
        Grid(0.0, 1.0, 1)
    with pytest.raises(ValidationError):
        Grid(1.0, 0.0, 4)


def test_fractional_order():
    assert FractionalOrder(0.7).beta == pytest.approx(0.3)
    assert FractionalOrder.coerce(FractionalOrder(0.6)).value == 0.6
    for bad in (0.5, 1.0, float("inf")):
        with pytest.raises(ValidationError):
            FractionalOrder(bad)


def test_with_alpha_validates():
    with pytest.raises(ValidationError):
        builtin_problem("example1").with_alpha(1.0)
    assert builtin_problem("example2").with_alpha(0.9).order.value == 0.9


def test_unknown_problem_lists_available_names():
    with pytest.raises(RegistryError) as info:
        builtin_problem("example3")
    assert isinstance(info.value, KeyError)
    assert str(info.value) == "unknown problem 'example3'; available: example1, example2"


def test_registry_listing():
    listing = registry_listing()
    assert listing["problems"] == ["example1", "example2"]
    assert "cubic" in listing["reactions"]
    assert "piecewise_exponential" in listing["coefficients"]
    assert "logistic_pulse" in listing["initial data"]


def test_cubic_lipschitz_estimate():
    reaction = make_reaction("cubic")
    assert reaction.lipschitz(np.array([0.0, 0.625])) == pytest.approx(50.0)
    assert reaction.lipschitz(np.array([])) == 0.0
    assert make_reaction("sine", amplitude=2.0).lipschitz(np.array([0.0, 1.0])) == pytest.approx(2.0)


def test_problem_from_config():
    problem = problem_from_config(_config())
    assert problem.name == "custom"
    assert problem.T == 0.5
    assert problem.reaction.name == "sine"
    x = np.array([0.25, 0.5])
    np.testing.assert_allclose(problem.d_plus(x, 0.75), (1 - x) ** 0.75)
    np.testing.assert_allclose(problem.d_minus(x, 0.75), [2.0, 2.0])


def test_config_missing_fields():
    config = _config()
    del config["T"]
    with pytest.raises(ValidationError, match="missing T"):
        problem_from_config(config)
    with pytest.raises(ValidationError, match="'u0'"):
        problem_from_config(_config(u0=None))


def test_config_unknown_kind():
    with pytest.raises(RegistryError, match="unknown reaction 'tanh'"):
        problem_from_config(_config(reaction={"kind": "tanh"}))


def test_config_bad_parameters():
    with pytest.raises(ValidationError, match="invalid registry parameters"):
        problem_from_config(_config(reaction={"kind": "sine", "params": {"freq": 2}}))
    with pytest.raises(ValidationError, match="numeric"):
        problem_from_config(_config(reaction={"kind": "sine", "params": {"amplitude": "big"}}))
    with pytest.raises(ValidationError, match="mapping"):
        problem_from_config(_config(reaction={"kind": "sine", "params": [1, 2]}))


def test_config_rejects_incompatible_initial_data():
    shifted = {"kind": "bump", "params": {"left": 0.2, "right": 1.0}}
    with pytest.raises(ValidationError, match="vanish"):
        problem_from_config(_config(u0=shifted))
    # a looser tolerance admits it
    loose = problem_from_config(_config(u0=shifted, endpoint_tolerance=1.0))
    assert loose.endpoint_tolerance == 1.0


def test_config_rejects_bad_horizon_and_order():
    with pytest.raises(ValidationError):
        problem_from_config(_config(T=0))
    with pytest.raises(ValidationError):
        problem_from_config(_config(alpha=0.4))


def test_initial_data_registry():
    pulse = make_initial("logistic_pulse", steepness=10.0)
    x = np.array([-0.3, 0.1])
    np.testing.assert_allclose(pulse(x), 4 * np.exp(10 * x) / (np.exp(10 * x) + 1) ** 2, rtol=1e-13)
    with pytest.raises(RegistryError):
        make_initial("gaussian")
