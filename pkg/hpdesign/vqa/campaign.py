from dataclasses import dataclass, field, replace
import logging
import math
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from hpdesign import ansatz
from hpdesign import config
from hpdesign import execution
from hpdesign.exceptions import ArityMismatch, ConfigException
from hpdesign.lattice import Instance
from hpdesign.timing import timed
from hpdesign.vqa.objective import (
    EvaluationMode, ExactExpectation, Objective, ObjectiveSpec)
from hpdesign.vqa.optimizer import (
    OptimizerConfig, OptResult, evaluate_only, minimize)


# spawn key of the sampling pass that follows optimization
FINAL_PASS_KEY = 0xF1AA1


@dataclass(frozen=True)
class CampaignTemplate:
    """Settings shared by every run of every instance in a chain.

    `donation` defaults to on for the hardware-efficient ansatz and off
    for QAOA. `warm_start` replaces the starting point of every run on the
    first instance; with max_evals = 0 the runs only evaluate it."""
    variant: str
    layers: int = 1
    mode: EvaluationMode = ExactExpectation()
    lam: float = config.DEFAULT_LAMBDA
    optimizer: OptimizerConfig = OptimizerConfig()
    runs: int = config.DEFAULT_RUNS
    seed: int = 0
    final_shots: int = config.DEFAULT_FINAL_SHOTS
    qaoa_init: str = 'pi'
    grow: bool = True
    donation: Optional[bool] = None
    exact_mixer: bool = False
    warm_start: Optional[Tuple[float, ...]] = None

    def __post_init__(self):
        if self.qaoa_init not in ('pi', 'random'):
            raise ConfigException(
                f'qaoa_init must be "pi" or "random", got {self.qaoa_init}')
        if self.runs < 1:
            raise ConfigException(f'runs must be at least 1, got {self.runs}')
        if self.final_shots < 1:
            raise ConfigException(
                f'final_shots must be at least 1, got {self.final_shots}')

    @property
    def is_qaoa(self) -> bool:
        return ansatz.is_qaoa(self.variant)

    @property
    def donates(self) -> bool:
        if self.donation is None:
            return not self.is_qaoa
        return self.donation


@dataclass
class RunRecord:
    run: int
    seed: int
    initial_params: np.ndarray
    result: OptResult
    counts: Dict[str, int]
    success_rate: float
    exact_success: float
    stages: List[OptResult] = field(default_factory=list)

    @property
    def shots(self) -> int:
        return sum(self.counts.values())

    def to_json(self) -> dict:
        return {
            'run': self.run,
            'seed': self.seed,
            'initial_params': self.initial_params.tolist(),
            'result': self.result.to_json(),
            'stages': [stage.to_json() for stage in self.stages],
            'counts': self.counts,
            'success_rate': self.success_rate,
            'exact_success': self.exact_success,
        }


@dataclass
class Campaign:
    instance: Instance
    variant: str
    mode: str
    layers: int
    runs: List[RunRecord]

    @property
    def success_rates(self) -> np.ndarray:
        return np.array([r.success_rate for r in self.runs])

    @property
    def mean_success(self) -> float:
        return float(self.success_rates.mean())

    @property
    def standard_error(self) -> float:
        if len(self.runs) < 2:
            return 0.0
        rates = self.success_rates
        return float(rates.std(ddof=1) / math.sqrt(len(rates)))

    @property
    def best_run(self) -> RunRecord:
        """Highest success rate, the earliest run on ties"""
        best = self.runs[0]
        for record in self.runs[1:]:
            if record.success_rate > best.success_rate:
                best = record
        return best

    def summary(self) -> str:
        return (f'n={self.instance.n} n_h={self.instance.n_h} {self.variant} '
                f'{self.mode}: success {self.mean_success:.4f} '
                f'+- {self.standard_error:.4f} over {len(self.runs)} runs')

    def to_json(self) -> dict:
        instance = self.instance
        return {
            'instance': {
                'n': instance.n,
                'n_h': instance.n_h,
                'e_min': instance.e_min,
                'moves': instance.structure.moves,
                'solution': instance.solution.bits
                if instance.solution else None,
            },
            'variant': self.variant,
            'mode': self.mode,
            'layers': self.layers,
            'mean_success': self.mean_success,
            'standard_error': self.standard_error,
            'runs': [r.to_json() for r in self.runs],
        }


def interp_grow(params_p: Sequence[float]) -> np.ndarray:
    """Grow (beta, gamma) schedules of p layers to p + 1 by linear
    interpolation; each schedule is zero-padded at both ends and entry i
    of the new one is ((i-1) old[i-1] + (p-i+1) old[i]) / p"""
    params = np.asarray(params_p, dtype=np.float64)
    if params.ndim != 1 or params.size < 2 or params.size % 2:
        raise ArityMismatch(
            f'QAOA parameters come in (beta, gamma) pairs, got {params.size}')

    p = params.size // 2

    def grow(schedule: np.ndarray) -> np.ndarray:
        padded = np.concatenate([[0.0], schedule, [0.0]])
        i = np.arange(1, p + 2)
        return ((i - 1) * padded[i - 1] + (p - i + 1) * padded[i]) / p

    return np.concatenate([grow(params[:p]), grow(params[p:])])


def donate(params_small: Sequence[float], n_small: int, n_large: int,
           rng: np.random.Generator) -> np.ndarray:
    """Starting point for a wider hardware-efficient circuit: rotation
    angles of the first n_small qubits are copied slot by slot, all others
    are drawn uniformly from [0, 2 pi)"""
    if n_small >= n_large:
        raise ValueError(
            f'Donation needs a smaller donor, got {n_small} -> {n_large}')

    params_small = np.asarray(params_small, dtype=np.float64)
    blocks, rest = divmod(params_small.size, 2 * n_small)
    if rest or blocks not in (2, 3):
        raise ArityMismatch(
            f'{params_small.size} parameters do not fit a hardware-efficient '
            f'circuit on {n_small} qubits')

    params = rng.uniform(0, 2 * math.pi, size=2 * n_large * blocks)
    for block in range(blocks):
        for q in range(n_small):
            for rotation in (0, 1):
                params[ansatz.hea_slot(n_large, block, q, rotation)] = \
                    params_small[ansatz.hea_slot(n_small, block, q, rotation)]
    return params


def run_seed(seed: int, instance: Instance, run: int) -> int:
    sequence = np.random.SeedSequence([seed, instance.n, instance.n_h, run])
    return int(sequence.generate_state(1)[0])


@dataclass(frozen=True, eq=False)
class _Donor:
    params: np.ndarray
    n: int


def _optimize(objective: Objective, init: np.ndarray,
              cfg: OptimizerConfig) -> OptResult:
    if cfg.max_evals == 0:
        return evaluate_only(objective, init)
    return minimize(objective, init, cfg)


def _spec(template: CampaignTemplate, instance: Instance, layers: int,
          seed: int) -> ObjectiveSpec:
    return ObjectiveSpec(
        instance=instance, variant=template.variant, layers=layers,
        mode=template.mode, seed=seed, lam=template.lam,
        exact_mixer=template.exact_mixer)


def _run_qaoa(template: CampaignTemplate, instance: Instance, run: int,
              seed: int, rng: np.random.Generator, donor: Optional[_Donor],
              warm: bool) -> Tuple[np.ndarray, List[OptResult], Objective]:
    if warm:
        layers = template.layers
        init = np.asarray(template.warm_start, dtype=np.float64)
    else:
        layers = 1 if template.grow else template.layers
        if donor is not None:
            init = donor.params
        elif template.qaoa_init == 'random' and run > 0:
            init = rng.uniform(0, 2 * math.pi, size=2 * layers)
        else:
            init = ansatz.qaoa_start(layers)

    start = np.array(init, dtype=np.float64)
    stages = []
    while True:
        objective = Objective(_spec(template, instance, layers, seed))
        result = _optimize(objective, init, template.optimizer)
        stages.append(result)
        if layers >= template.layers:
            return start, stages, objective

        logging.debug(
            f'Run {run} on {instance.label}: p={layers} reached '
            f'{result.value:.6f}, growing to p={layers + 1}')
        init = interp_grow(result.params)
        layers += 1


def _run_hea(template: CampaignTemplate, instance: Instance, seed: int,
             rng: np.random.Generator, donor: Optional[_Donor],
             warm: bool) -> Tuple[np.ndarray, List[OptResult], Objective]:
    objective = Objective(_spec(template, instance, template.layers, seed))

    if warm:
        init = np.asarray(template.warm_start, dtype=np.float64)
    elif donor is None:
        init = rng.uniform(0, 2 * math.pi, size=objective.num_params)
    elif donor.n == instance.n:
        init = donor.params
    else:
        init = donate(donor.params, donor.n, instance.n, rng)

    result = _optimize(objective, init, template.optimizer)
    return np.array(init, dtype=np.float64), [result], objective


def run_once(template: CampaignTemplate, instance: Instance, run: int,
             donor: Optional[_Donor] = None, warm: bool = False) -> RunRecord:
    seed = run_seed(template.seed, instance, run)
    rng = np.random.default_rng(seed)

    if template.is_qaoa:
        start, stages, objective = _run_qaoa(
            template, instance, run, seed, rng, donor, warm)
    else:
        start, stages, objective = _run_hea(
            template, instance, seed, rng, donor, warm)

    result = stages[-1]
    final_seed = np.random.SeedSequence([seed, FINAL_PASS_KEY])
    counts = objective.sample_counts(
        result.params, template.final_shots, final_seed)
    exact_success = objective.success_probability(result.params)

    if isinstance(template.mode, ExactExpectation):
        success_rate = exact_success
    else:
        solution = instance.solution.bits
        success_rate = counts.get(solution, 0) / template.final_shots

    logging.debug(
        f'Run {run} on {instance.label}: energy {result.value:.6f} after '
        f'{sum(s.evals for s in stages)} evaluations, success {success_rate}')
    return RunRecord(
        run=run, seed=seed, initial_params=start, result=result,
        counts=counts, success_rate=success_rate,
        exact_success=exact_success, stages=stages)


def _donor_from(campaign: Campaign, template: CampaignTemplate) -> _Donor:
    best = campaign.best_run
    # QAOA chains hand over the first-stage angles, growth restarts from p=1
    params = best.stages[0].params if template.is_qaoa else best.result.params
    return _Donor(params=params, n=campaign.instance.n)


def iter_campaigns(instances: Iterable[Instance], template: CampaignTemplate,
                   previous: Optional[Campaign] = None) -> Iterator[Campaign]:
    """Run every instance in order, yielding each Campaign as it finishes.
    With donation on, the best run of one instance seeds all runs of the
    next; `previous` continues an earlier chain."""
    if previous is not None and (previous.mode != template.mode.name
                                 or previous.variant != template.variant):
        raise ConfigException(
            f'Cannot continue a {previous.variant} {previous.mode} chain '
            f'with {template.variant} {template.mode.name} runs')

    donor = None
    if previous is not None and template.donates:
        donor = _donor_from(previous, template)
    last_n = previous.instance.n if previous is not None else 0

    for position, instance in enumerate(instances):
        if instance.solution is None:
            raise ValueError(
                f'Instance {instance.label} has no known solution')
        if instance.n < last_n:
            raise ValueError(
                f'Instances must be ordered by size, {instance.label} '
                f'follows n={last_n}')
        last_n = instance.n

        warm = template.warm_start is not None and position == 0 \
            and previous is None

        with timed(f'Campaign {template.variant} on {instance.label}'):
            records = execution.run_parallel(
                lambda run: run_once(template, instance, run, donor, warm),
                range(template.runs))

        campaign = Campaign(
            instance=instance, variant=template.variant,
            mode=template.mode.name, layers=template.layers, runs=records)
        logging.info(campaign.summary())
        yield campaign

        if template.donates:
            donor = _donor_from(campaign, template)


def run_campaign(instances: Iterable[Instance], template: CampaignTemplate,
                 runs: Optional[int] = None) -> List[Campaign]:
    if runs is not None:
        template = replace(template, runs=runs)
    return list(iter_campaigns(instances, template))
