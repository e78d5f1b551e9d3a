import numpy as np
import pytest

from hpdesign.vqa.optimizer import OptimizerConfig, evaluate_only, minimize


def quadratic(x):
    return float(np.sum((np.asarray(x) - 1.0) ** 2))


def test_minimize_quadratic():
    result = minimize(quadratic, [0.0, 0.0],
                      OptimizerConfig(max_evals=1000, tol=1e-8))
    assert result.value == pytest.approx(0.0, abs=1e-4)
    assert np.allclose(result.params, [1.0, 1.0], atol=1e-2)
    assert result.terminated_by == 'converged'
    assert result.evals == len(result.trace)
    assert [k for k, _ in result.trace] == list(range(1, result.evals + 1))


def test_result_is_best_point_seen():
    result = minimize(quadratic, [3.0, -2.0], OptimizerConfig(max_evals=8))
    values = [v for _, v in result.trace]
    assert result.value == min(values)
    assert result.value <= quadratic([3.0, -2.0])
    assert quadratic(result.params) == pytest.approx(result.value)


def test_max_evals_is_reported():
    result = minimize(quadratic, [5.0, 5.0, 5.0],
                      OptimizerConfig(max_evals=10, tol=1e-12))
    assert result.evals <= 10
    if result.evals == 10:
        assert result.terminated_by == 'max_evals'


def test_evaluate_only():
    result = evaluate_only(quadratic, [2.0, 1.0])
    assert result.evals == 1
    assert result.value == pytest.approx(1.0)
    assert result.trace == [(1, pytest.approx(1.0))]
    assert result.params.tolist() == [2.0, 1.0]


def test_invalid_budget():
    with pytest.raises(ValueError):
        minimize(quadratic, [0.0], OptimizerConfig(max_evals=0))


def test_to_json():
    data = evaluate_only(quadratic, [1.0]).to_json()
    assert data == {
        'params': [1.0],
        'value': 0.0,
        'evals': 1,
        'terminated_by': 'max_evals',
        'trace': [[1, 0.0]],
    }
