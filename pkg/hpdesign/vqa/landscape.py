from dataclasses import dataclass
import math
from typing import Tuple

import numpy as np

from hpdesign import ansatz
from hpdesign import config
from hpdesign import execution
from hpdesign.exceptions import BadVariant
from hpdesign.lattice import Instance
from hpdesign.timing import timed
from hpdesign.vqa.objective import ExactExpectation, Objective, ObjectiveSpec


@dataclass(frozen=True)
class Grid:
    """beta runs over its closed range along rows, gamma over its half-open
    range along columns"""
    beta_range: Tuple[float, float] = (0.0, math.pi)
    gamma_range: Tuple[float, float] = (0.0, 2 * math.pi)
    beta_points: int = config.LANDSCAPE_RESOLUTION
    gamma_points: int = config.LANDSCAPE_RESOLUTION

    def __post_init__(self):
        if self.beta_points < 1 or self.gamma_points < 1:
            raise ValueError(
                f'A grid needs at least one point per axis, got '
                f'{self.beta_points}x{self.gamma_points}')

    def betas(self) -> np.ndarray:
        return np.linspace(*self.beta_range, self.beta_points)

    def gammas(self) -> np.ndarray:
        return np.linspace(*self.gamma_range, self.gamma_points,
                           endpoint=False)


@dataclass(eq=False)
class Landscape:
    instance: Instance
    variant: str
    betas: np.ndarray
    gammas: np.ndarray
    values: np.ndarray

    def argmin_cell(self) -> Tuple[int, int]:
        row, col = np.unravel_index(np.argmin(self.values), self.values.shape)
        return int(row), int(col)

    def argmin(self) -> Tuple[float, float]:
        row, col = self.argmin_cell()
        return float(self.betas[row]), float(self.gammas[col])


def landscape_scan(instance: Instance, variant: str, grid: Grid = Grid(),
                   lam: float = config.DEFAULT_LAMBDA) -> Landscape:
    """Exact p=1 energy on a (beta, gamma) grid"""
    if not isinstance(ansatz.parse_variant(variant), ansatz.QaoaVariant):
        raise BadVariant(f'{variant} has no (beta, gamma) landscape')

    objective = Objective(ObjectiveSpec(
        instance=instance, variant=variant, layers=1,
        mode=ExactExpectation(), lam=lam))
    betas, gammas = grid.betas(), grid.gammas()

    def row(beta: float):
        return [objective.expectation([beta, gamma]) for gamma in gammas]

    with timed(f'Landscape of {variant} on {instance.label}'):
        values = np.array(execution.run_parallel(row, betas))

    return Landscape(instance=instance, variant=variant, betas=betas,
                     gammas=gammas, values=values)


def argmin_quantile(a: Landscape, b: Landscape) -> float:
    """Fraction of b's grid values at or below b's value at a's minimum"""
    if a.values.shape != b.values.shape \
            or not np.allclose(a.betas, b.betas) \
            or not np.allclose(a.gammas, b.gammas):
        raise ValueError('Landscapes were scanned on different grids')

    value = b.values[a.argmin_cell()]
    return float(np.count_nonzero(b.values <= value) / b.values.size)
