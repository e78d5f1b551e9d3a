from dataclasses import dataclass
import enum
import math
from typing import Dict, Optional

import numpy as np

from hpdesign import bits
from hpdesign.exceptions import BadComposition, DimensionMismatch
from hpdesign.qubo import DiagonalCost
from hpdesign.quantum.gates import (
    Circuit, DIAGONAL, Gate, GateKind, gate_matrix)
from hpdesign.resources import ensure_statevector_fits


class InitialState(enum.Enum):
    UI = 'ui'
    BI = 'bi'
    DI = 'di'


@dataclass(eq=False)
class Statevector:
    """Amplitudes in big-endian order: qubit 0 is the leading tensor axis"""
    n: int
    amplitudes: np.ndarray

    def __post_init__(self):
        if self.amplitudes.shape != (2 ** self.n,):
            raise DimensionMismatch(
                f'{len(self.amplitudes)} amplitudes for {self.n} qubits')

    @classmethod
    def basis(cls, n: int, index: int = 0) -> 'Statevector':
        ensure_statevector_fits(n)
        amplitudes = np.zeros(2 ** n, dtype=complex)
        amplitudes[index] = 1
        return cls(n, amplitudes)

    def copy(self) -> 'Statevector':
        return Statevector(self.n, self.amplitudes.copy())

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def amplitude(self, bitstring: str) -> complex:
        return complex(self.amplitudes[bits.bitstring_to_index(bitstring)])


def init_state(n: int, kind: InitialState,
               n_h: Optional[int] = None) -> Statevector:
    ensure_statevector_fits(n)

    if kind == InitialState.UI:
        return Statevector(n, np.full(2 ** n, 2 ** (-n / 2), dtype=complex))

    if n_h is None or not 0 <= n_h <= n:
        raise BadComposition(f'n_h={n_h} is outside [0, {n}]')

    if kind == InitialState.BI:
        # |1...10...0>, the first n_h qubits set
        return Statevector.basis(n, ((1 << n_h) - 1) << (n - n_h))

    support = bits.weight_indices(n, n_h)
    amplitudes = np.zeros(2 ** n, dtype=complex)
    amplitudes[support] = 1 / math.sqrt(len(support))
    return Statevector(n, amplitudes)


def _slice(n: int, assignment: Dict[int, int]):
    index = [slice(None)] * n
    for q, value in assignment.items():
        index[q] = value
    return tuple(index)


def _apply_diagonal(tensor: np.ndarray, gate: Gate, n: int):
    # diagonal gates scale sub-blocks in place
    diag = np.diag(gate_matrix(gate))
    if len(gate.qubits) == 1:
        (q,) = gate.qubits
        for value in (0, 1):
            tensor[_slice(n, {q: value})] *= diag[value]
        return

    a, b = gate.qubits
    for va in (0, 1):
        for vb in (0, 1):
            tensor[_slice(n, {a: va, b: vb})] *= diag[2 * va + vb]


def apply_gate(state: Statevector, gate: Gate) -> None:
    """Apply one gate in place"""
    n = state.n
    if gate.kind == GateKind.BARRIER:
        return

    tensor = state.amplitudes.reshape([2] * n)
    if gate.kind in DIAGONAL:
        _apply_diagonal(tensor, gate, n)
        return

    k = len(gate.qubits)
    matrix = gate_matrix(gate)
    moved = np.moveaxis(tensor, gate.qubits, range(k))
    shape = moved.shape
    result = (matrix @ moved.reshape(2 ** k, -1)).reshape(shape)
    tensor[...] = np.moveaxis(result, range(k), gate.qubits)


def run_circuit(c: Circuit, s0: Statevector) -> Statevector:
    if c.n != s0.n:
        raise DimensionMismatch(
            f'{c.n}-qubit circuit on a {s0.n}-qubit state')

    state = s0.copy()
    for gate in c.gates:
        apply_gate(state, gate)
    return state


def expectation_diagonal(s: Statevector, d: DiagonalCost) -> float:
    if s.n != d.n:
        raise DimensionMismatch(
            f'{d.n}-qubit cost on a {s.n}-qubit state')

    probabilities = s.probabilities()
    if d.table is not None:
        return float(probabilities @ d.table)

    support = np.flatnonzero(probabilities)
    return float(probabilities[support] @ d.values(support))


def sample_indices(s: Statevector, shots: int,
                   rng: np.random.Generator) -> Dict[int, int]:
    if shots < 1:
        raise ValueError(f'At least one shot is needed, got {shots}')

    probabilities = s.probabilities()
    counts = rng.multinomial(shots, probabilities / probabilities.sum())
    hits = np.flatnonzero(counts)
    return {int(k): int(counts[k]) for k in hits}


def sample(s: Statevector, shots: int,
           rng: np.random.Generator) -> Dict[str, int]:
    return {
        bits.index_to_bitstring(k, s.n): count
        for k, count in sample_indices(s, shots, rng).items()}
