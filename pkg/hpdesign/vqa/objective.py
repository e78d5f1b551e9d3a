from abc import ABC, abstractmethod
from dataclasses import dataclass, field
import functools
import logging
from typing import Dict, Optional, Sequence

import numpy as np

from hpdesign import ansatz
from hpdesign import bits
from hpdesign import config
from hpdesign.ansatz import ParameterizedCircuit, SectorMixer
from hpdesign.lattice import Instance
from hpdesign.qubo import DiagonalCost, QuboModel, build_qubo, diagonal
from hpdesign.quantum.gates import decompose
from hpdesign.quantum.noise import NoiseModel, run_noisy_indices
from hpdesign.quantum.simulator import (
    Statevector, expectation_diagonal, run_circuit, sample_indices)
from hpdesign.resources import ensure_statevector_fits


def sub_seed(seed: int, params: Sequence[float]) -> np.random.SeedSequence:
    """Seed derived from the run seed and the exact bit pattern of the
    parameters, so a repeated evaluation draws the same shots"""
    words = np.ascontiguousarray(params, dtype=np.float64).view(np.uint32)
    return np.random.SeedSequence([seed, *words.tolist()])


class EvaluationMode(ABC):
    name = ''

    @abstractmethod
    def energy(self, objective: 'Objective', params: np.ndarray) -> float:
        """Value handed to the optimizer"""

    @abstractmethod
    def counts(self, objective: 'Objective', params: np.ndarray,
               shots: int, seed: np.random.SeedSequence) -> Dict[int, int]:
        """Measured basis indices of a sampling pass"""


@dataclass(frozen=True)
class ExactExpectation(EvaluationMode):
    name = 'exact'

    def energy(self, objective, params):
        return objective.expectation(params)

    def counts(self, objective, params, shots, seed):
        return sample_indices(
            objective.state(params), shots, np.random.default_rng(seed))


@dataclass(frozen=True)
class Sampled(EvaluationMode):
    shots: int = config.DEFAULT_SHOTS
    name = 'sampled'

    def __post_init__(self):
        if self.shots < 1:
            raise ValueError(f'Sampled evaluation needs shots >= 1, '
                             f'got {self.shots}')

    def energy(self, objective, params):
        counts = self.counts(
            objective, params, self.shots, sub_seed(objective.seed, params))
        return objective.mean_energy(counts)

    def counts(self, objective, params, shots, seed):
        return sample_indices(
            objective.state(params), shots, np.random.default_rng(seed))


@dataclass(frozen=True)
class Noisy(EvaluationMode):
    noise: NoiseModel = field(default_factory=NoiseModel)
    shots: int = config.DEFAULT_SHOTS
    name = 'noisy'

    def __post_init__(self):
        if self.shots < 1:
            raise ValueError(f'Noisy evaluation needs shots >= 1, '
                             f'got {self.shots}')

    def energy(self, objective, params):
        counts = self.counts(
            objective, params, self.shots, sub_seed(objective.seed, params))
        return objective.mean_energy(counts)

    def counts(self, objective, params, shots, seed):
        # errors attach to native gates, so the state preparation is
        # simulated as part of the noisy circuit
        circuit = decompose(ansatz.bind(objective.circuit, params))
        master = int(seed.generate_state(1)[0])
        return run_noisy_indices(circuit, self.noise, shots, master)


@dataclass(frozen=True)
class ObjectiveSpec:
    instance: Instance
    variant: str
    layers: int = 1
    mode: EvaluationMode = ExactExpectation()
    seed: int = 0
    lam: float = config.DEFAULT_LAMBDA
    exact_mixer: bool = False


@dataclass(frozen=True, eq=False)
class _Compiled:
    model: QuboModel
    cost: DiagonalCost
    circuit: ParameterizedCircuit
    prep_state: Statevector
    sector: Optional[SectorMixer]


@functools.lru_cache(maxsize=16)
def _compile(instance: Instance, variant: str, layers: int, lam: float,
             exact_mixer: bool) -> _Compiled:
    model = build_qubo(instance.contact_map, instance.n_h, lam)
    circuit = ansatz.build(variant, model, layers)
    ensure_statevector_fits(model.n)
    prep_state = run_circuit(circuit.prep, Statevector.basis(model.n))

    sector = None
    if exact_mixer:
        qaoa = ansatz.parse_variant(variant)
        if not isinstance(qaoa, ansatz.QaoaVariant) \
                or not qaoa.conserves_weight:
            raise ValueError(
                f'The exact sector mixer needs an XY QAOA variant, '
                f'got {variant}')
        sector = SectorMixer(model.n, instance.n_h, qaoa.mixer)

    cost = diagonal(model)
    if exact_mixer and cost.table is None:
        raise ValueError('The exact sector mixer needs a tabulated cost')

    logging.debug(
        f'Compiled {variant} with {layers} layers for instance '
        f'{instance.label} ({circuit.num_params} parameters)')
    return _Compiled(model, cost, circuit, prep_state, sector)


class Objective:
    """Energy of an instance as a function of the circuit parameters"""

    def __init__(self, spec: ObjectiveSpec):
        if isinstance(spec.mode, Noisy) and spec.exact_mixer:
            raise ValueError('The exact sector mixer has no gate-level form '
                             'to attach noise to')

        self.spec = spec
        compiled = _compile(spec.instance, spec.variant, spec.layers,
                            spec.lam, spec.exact_mixer)
        self.model = compiled.model
        self.cost = compiled.cost
        self.circuit = compiled.circuit
        self.prep_state = compiled.prep_state
        self.sector = compiled.sector

    @property
    def seed(self) -> int:
        return self.spec.seed

    @property
    def num_params(self) -> int:
        return self.circuit.num_params

    def state(self, params: Sequence[float]) -> Statevector:
        body = ansatz.bind_body(self.circuit, params)
        if self.sector is None:
            return run_circuit(body, self.prep_state)

        p = self.circuit.layers
        params = np.asarray(params, dtype=np.float64)
        amplitudes = self.prep_state.amplitudes.copy()
        support = self.sector.support
        for beta, gamma in zip(params[:p], params[p:]):
            amplitudes *= np.exp(-1j * gamma * self.cost.table)
            mixed = self.sector.unitary(beta) @ amplitudes[support]
            amplitudes[support] = mixed
        return Statevector(self.model.n, amplitudes)

    def __call__(self, params: Sequence[float]) -> float:
        params = np.asarray(params, dtype=np.float64)
        return float(self.spec.mode.energy(self, params))

    def expectation(self, params: Sequence[float]) -> float:
        return expectation_diagonal(self.state(params), self.cost)

    def mean_energy(self, counts: Dict[int, int]) -> float:
        indices = np.fromiter(counts.keys(), dtype=np.int64)
        weights = np.fromiter(counts.values(), dtype=np.float64)
        return float(weights @ self.cost.values(indices) / weights.sum())

    def success_probability(self, params: Sequence[float]) -> float:
        """Noiseless overlap of the final state with the known solution"""
        solution = self.spec.instance.solution
        if solution is None:
            raise ValueError(
                f'Instance {self.spec.instance.label} has no known solution')
        amplitude = self.state(params).amplitudes[solution.index]
        return float(abs(amplitude) ** 2)

    def sample_counts(self, params: Sequence[float], shots: int,
                      seed: np.random.SeedSequence) -> Dict[str, int]:
        params = np.asarray(params, dtype=np.float64)
        counts = self.spec.mode.counts(self, params, shots, seed)
        return {bits.index_to_bitstring(k, self.model.n): c
                for k, c in sorted(counts.items())}


def objective(spec: ObjectiveSpec, params: Sequence[float]) -> float:
    return Objective(spec)(params)
