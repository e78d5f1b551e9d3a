from dataclasses import dataclass
import logging
import math
from typing import Dict, List, Optional

import numpy as np

from hpdesign import bits
from hpdesign import config
from hpdesign import execution
from hpdesign.exceptions import DimensionMismatch
from hpdesign.quantum.gates import Circuit, Gate, GateKind, TWO_QUBIT
from hpdesign.quantum.simulator import Statevector, apply_gate
from hpdesign.resources import statevector_bytes


CHECKPOINT_BYTES = 256 * 2 ** 20

_PAULIS = (None, GateKind.X, GateKind.Y, GateKind.Z)


@dataclass(frozen=True)
class NoiseModel:
    """Depolarizing errors after every gate and independent readout flips.

    p1 and p2 are the probabilities that a one- or two-qubit gate is
    followed by a uniformly drawn non-identity Pauli on its qubits."""
    p1: float = config.DEFAULT_P1
    p2: float = config.DEFAULT_P2
    p_ro: float = config.DEFAULT_P_RO

    def __post_init__(self):
        for name in ('p1', 'p2', 'p_ro'):
            value = getattr(self, name)
            if not 0 <= value <= 1:
                raise ValueError(f'{name}={value} is not a probability')

    @property
    def is_noiseless(self) -> bool:
        return self.p1 == 0 and self.p2 == 0 and self.p_ro == 0

    def gate_error_probability(self, gate: Gate) -> float:
        if gate.kind == GateKind.BARRIER:
            return 0.0
        return self.p2 if gate.kind in TWO_QUBIT else self.p1


def pauli_error(gate: Gate, draw: int) -> List[Gate]:
    """Map a draw in [0, 15) to a non-identity Pauli on the gate's qubits"""
    if len(gate.qubits) == 1:
        return [Gate(_PAULIS[draw % 3 + 1], gate.qubits)]

    first, second = divmod(draw + 1, 4)
    errors = []
    for kind, q in ((_PAULIS[first], gate.qubits[0]),
                    (_PAULIS[second], gate.qubits[1])):
        if kind is not None:
            errors.append(Gate(kind, (q,)))
    return errors


@dataclass
class _Shot:
    errors: Dict[int, int]
    uniform: float
    readout_mask: int


def _draw_shot(seed: int, shot: int, error_p: np.ndarray,
               n: int, p_ro: float) -> _Shot:
    rng = np.random.default_rng([seed, shot])
    positions = np.flatnonzero(rng.random(len(error_p)) < error_p)
    draws = rng.integers(0, 15, size=len(positions))
    uniform = rng.random()
    flips = rng.random(n) < p_ro

    mask = 0
    for q in np.flatnonzero(flips):
        mask |= 1 << (n - 1 - int(q))
    return _Shot(dict(zip(positions.tolist(), draws.tolist())), uniform, mask)


def _pick(cumulative: np.ndarray, uniform: float) -> int:
    index = int(np.searchsorted(
        cumulative, uniform * cumulative[-1], side='right'))
    return min(index, len(cumulative) - 1)


def run_noisy_indices(
        c: Circuit, nm: NoiseModel, shots: int, seed: int,
        initial: Optional[Statevector] = None) -> Dict[int, int]:
    if initial is None:
        initial = Statevector.basis(c.n)
    if initial.n != c.n:
        raise DimensionMismatch(
            f'{c.n}-qubit circuit on a {initial.n}-qubit state')
    if shots < 1:
        raise ValueError(f'At least one shot is needed, got {shots}')

    gates = c.gates
    n_gates = len(gates)
    error_p = np.array([nm.gate_error_probability(g) for g in gates])

    # ideal pass, keeping a copy of the state every `stride` gates so that
    # trajectories restart from the last checkpoint before their first error
    max_checkpoints = max(1, CHECKPOINT_BYTES // statevector_bytes(c.n))
    stride = max(1, math.ceil(math.sqrt(n_gates)),
                 math.ceil(n_gates / max_checkpoints))
    checkpoints: List[Statevector] = []
    state = initial.copy()
    for g, gate in enumerate(gates):
        if g % stride == 0:
            checkpoints.append(state.copy())
        apply_gate(state, gate)
    ideal = state

    draws = [_draw_shot(seed, s, error_p, c.n, nm.p_ro) for s in range(shots)]
    faulty = [s for s, d in enumerate(draws) if d.errors]
    logging.debug(
        f'{len(faulty)} of {shots} trajectories carry gate errors '
        f'({n_gates} gates, checkpoint stride {stride})')

    def trajectory(shot: int) -> int:
        errors = draws[shot].errors
        block = min(errors) // stride
        traj = checkpoints[block].copy()
        for g in range(block * stride, n_gates):
            apply_gate(traj, gates[g])
            if g in errors:
                for pauli in pauli_error(gates[g], errors[g]):
                    apply_gate(traj, pauli)
        return _pick(np.cumsum(traj.probabilities()), draws[shot].uniform)

    outcomes = dict(zip(faulty, execution.run_parallel(trajectory, faulty)))

    cumulative = np.cumsum(ideal.probabilities())
    counts: Dict[int, int] = {}
    for s, d in enumerate(draws):
        if s in outcomes:
            k = outcomes[s]
        else:
            k = _pick(cumulative, d.uniform)
        k ^= d.readout_mask
        counts[k] = counts.get(k, 0) + 1

    return dict(sorted(counts.items()))


def run_noisy(c: Circuit, nm: NoiseModel, shots: int, seed: int,
              initial: Optional[Statevector] = None) -> Dict[str, int]:
    """Counts of measured bitstrings over `shots` noisy trajectories.
    Shot s draws from its own stream seeded with (seed, s), so the result
    does not depend on the thread count."""
    return {
        bits.index_to_bitstring(k, c.n): count
        for k, count in run_noisy_indices(c, nm, shots, seed, initial).items()}
