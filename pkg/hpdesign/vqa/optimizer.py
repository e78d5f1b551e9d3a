from dataclasses import dataclass, field
import logging
from typing import Callable, List, Sequence, Tuple

import numpy as np
import scipy.optimize

from hpdesign import config


@dataclass(frozen=True)
class OptimizerConfig:
    max_evals: int = config.DEFAULT_MAX_EVALS
    tol: float = config.DEFAULT_TOL
    rhobeg: float = config.DEFAULT_RHOBEG


@dataclass
class OptResult:
    params: np.ndarray
    value: float
    evals: int
    terminated_by: str
    trace: List[Tuple[int, float]] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            'params': self.params.tolist(),
            'value': self.value,
            'evals': self.evals,
            'terminated_by': self.terminated_by,
            'trace': [list(point) for point in self.trace],
        }


class _Tracker:
    """Records every evaluation and remembers the best point seen"""

    def __init__(self, fun: Callable[[np.ndarray], float]):
        self.fun = fun
        self.trace: List[Tuple[int, float]] = []
        self.best_value = np.inf
        self.best_params = None

    def __call__(self, x: np.ndarray) -> float:
        value = float(self.fun(x))
        self.trace.append((len(self.trace) + 1, value))
        logging.debug(f'Evaluation {len(self.trace)}: {value:.6f}')

        if value < self.best_value:
            self.best_value = value
            self.best_params = np.array(x, dtype=np.float64)
        return value


def evaluate_only(fun: Callable[[np.ndarray], float],
                  init_params: Sequence[float]) -> OptResult:
    tracker = _Tracker(fun)
    tracker(np.asarray(init_params, dtype=np.float64))
    return OptResult(
        params=tracker.best_params, value=tracker.best_value, evals=1,
        terminated_by='max_evals', trace=tracker.trace)


def minimize(fun: Callable[[np.ndarray], float],
             init_params: Sequence[float],
             cfg: OptimizerConfig = OptimizerConfig()) -> OptResult:
    """COBYLA from init_params. Returns the best point evaluated, which is
    never worse than the starting point."""
    if cfg.max_evals < 1:
        raise ValueError(f'max_evals must be at least 1, got {cfg.max_evals}')

    x0 = np.asarray(init_params, dtype=np.float64)
    tracker = _Tracker(fun)
    scipy.optimize.minimize(
        tracker, x0, method='COBYLA', tol=cfg.tol,
        options={'maxiter': cfg.max_evals, 'rhobeg': cfg.rhobeg})

    evals = len(tracker.trace)
    terminated_by = 'max_evals' if evals >= cfg.max_evals else 'converged'
    if terminated_by == 'max_evals':
        logging.warning(
            f'Optimizer stopped after exhausting {cfg.max_evals} evaluations')

    return OptResult(
        params=tracker.best_params, value=tracker.best_value, evals=evals,
        terminated_by=terminated_by, trace=tracker.trace)
