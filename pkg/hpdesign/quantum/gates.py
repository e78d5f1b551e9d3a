from dataclasses import dataclass
import enum
import math
from typing import Dict, Iterable, List, Tuple

import numpy as np

from hpdesign.exceptions import DimensionMismatch


class GateKind(enum.Enum):
    RX = 'rx'
    RY = 'ry'
    RZ = 'rz'
    X = 'x'
    Y = 'y'
    Z = 'z'
    H = 'h'
    CNOT = 'cx'
    CZ = 'cz'
    RZZ = 'rzz'
    RXXPLUSYY = 'rxx_plus_yy'
    CRY = 'cry'
    BARRIER = 'barrier'


PARAMETERIZED = {
    GateKind.RX, GateKind.RY, GateKind.RZ, GateKind.RZZ,
    GateKind.RXXPLUSYY, GateKind.CRY}
TWO_QUBIT = {
    GateKind.CNOT, GateKind.CZ, GateKind.RZZ, GateKind.RXXPLUSYY,
    GateKind.CRY}
DIAGONAL = {GateKind.RZ, GateKind.Z, GateKind.CZ, GateKind.RZZ}

# gate set every circuit is rewritten into for depth accounting
NATIVE = {
    GateKind.RX, GateKind.RY, GateKind.RZ, GateKind.X, GateKind.Y,
    GateKind.Z, GateKind.H, GateKind.CNOT, GateKind.CZ, GateKind.BARRIER}

_SQRT2_INV = 1 / math.sqrt(2)
_FIXED = {
    GateKind.X: np.array([[0, 1], [1, 0]], dtype=complex),
    GateKind.Y: np.array([[0, -1j], [1j, 0]], dtype=complex),
    GateKind.Z: np.array([[1, 0], [0, -1]], dtype=complex),
    GateKind.H: np.array([[1, 1], [1, -1]], dtype=complex) * _SQRT2_INV,
    GateKind.CNOT: np.array(
        [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]],
        dtype=complex),
    GateKind.CZ: np.diag([1, 1, 1, -1]).astype(complex),
}


@dataclass(frozen=True)
class Gate:
    kind: GateKind
    qubits: Tuple[int, ...]
    angle: float = 0.0

    def __post_init__(self):
        if len(set(self.qubits)) != len(self.qubits):
            raise DimensionMismatch(
                f'Gate {self.kind.value} acts twice on a qubit: {self.qubits}')

        if self.kind != GateKind.BARRIER:
            arity = 2 if self.kind in TWO_QUBIT else 1
            if len(self.qubits) != arity:
                raise DimensionMismatch(
                    f'Gate {self.kind.value} takes {arity} qubits, '
                    f'got {self.qubits}')

    def to_json(self) -> dict:
        data = {'gate': self.kind.value, 'qubits': list(self.qubits)}
        if self.kind in PARAMETERIZED:
            data['angle'] = self.angle
        return data


def rx(q: int, theta: float) -> Gate:
    return Gate(GateKind.RX, (q,), theta)


def ry(q: int, theta: float) -> Gate:
    return Gate(GateKind.RY, (q,), theta)


def rz(q: int, theta: float) -> Gate:
    return Gate(GateKind.RZ, (q,), theta)


def cnot(control: int, target: int) -> Gate:
    return Gate(GateKind.CNOT, (control, target))


def cry(control: int, target: int, theta: float) -> Gate:
    return Gate(GateKind.CRY, (control, target), theta)


@dataclass(frozen=True)
class Circuit:
    n: int
    gates: Tuple[Gate, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, 'gates', tuple(self.gates))
        for gate in self.gates:
            if any(q < 0 or q >= self.n for q in gate.qubits):
                raise DimensionMismatch(
                    f'Gate {gate.kind.value} on {gate.qubits} does not fit '
                    f'a {self.n}-qubit circuit')

    def __add__(self, other: 'Circuit') -> 'Circuit':
        if other.n != self.n:
            raise DimensionMismatch(
                f'Cannot append a {other.n}-qubit circuit to a '
                f'{self.n}-qubit one')
        return Circuit(self.n, self.gates + other.gates)

    def __len__(self):
        return len(self.gates)

    def count_ops(self) -> Dict[str, int]:
        counts: Dict[str, int] = {}
        for gate in self.gates:
            counts[gate.kind.value] = counts.get(gate.kind.value, 0) + 1
        return dict(sorted(counts.items()))

    def to_json(self) -> dict:
        return {'n': self.n, 'gates': [g.to_json() for g in self.gates]}


def gate_matrix(gate: Gate) -> np.ndarray:
    """Dense unitary; for two-qubit gates the first listed qubit is the
    more significant one"""
    kind, t = gate.kind, gate.angle
    c, s = math.cos(t / 2), math.sin(t / 2)

    if kind in _FIXED:
        return _FIXED[kind]
    if kind == GateKind.RX:
        return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)
    if kind == GateKind.RY:
        return np.array([[c, -s], [s, c]], dtype=complex)
    if kind == GateKind.RZ:
        return np.diag([np.exp(-0.5j * t), np.exp(0.5j * t)])
    if kind == GateKind.RZZ:
        return np.diag([np.exp(-0.5j * t), np.exp(0.5j * t),
                        np.exp(0.5j * t), np.exp(-0.5j * t)])
    if kind == GateKind.RXXPLUSYY:
        # exp(-i t (XX + YY) / 2) only mixes |01> and |10>
        cc, ss = math.cos(t), math.sin(t)
        return np.array([
            [1, 0, 0, 0],
            [0, cc, -1j * ss, 0],
            [0, -1j * ss, cc, 0],
            [0, 0, 0, 1]], dtype=complex)
    if kind == GateKind.CRY:
        m = np.eye(4, dtype=complex)
        m[2:, 2:] = [[c, -s], [s, c]]
        return m

    raise ValueError(f'Gate {kind.value} has no matrix')


def _rewrite(gate: Gate) -> List[Gate]:
    kind, t = gate.kind, gate.angle

    if kind == GateKind.RZZ:
        a, b = gate.qubits
        return [cnot(a, b), rz(b, t), cnot(a, b)]

    if kind == GateKind.CRY:
        control, target = gate.qubits
        return [ry(target, t / 2), cnot(control, target),
                ry(target, -t / 2), cnot(control, target)]

    if kind == GateKind.RXXPLUSYY:
        # conjugating by RX(pi/2) on both qubits turns XX + YY into XX + ZZ,
        # and CNOT maps XX + ZZ onto X(a) + Z(b)
        a, b = gate.qubits
        return [rx(a, -math.pi / 2), rx(b, -math.pi / 2), cnot(a, b),
                rx(a, t), rz(b, t), cnot(a, b),
                rx(a, math.pi / 2), rx(b, math.pi / 2)]

    return [gate]


def decompose(circuit: Circuit) -> Circuit:
    """Rewrite into CNOT, CZ and single-qubit gates"""
    gates: List[Gate] = []
    for gate in circuit.gates:
        gates.extend(_rewrite(gate))
    return Circuit(circuit.n, tuple(gates))


def layer_depth(n: int, gates: Iterable[Gate]) -> int:
    """Number of layers when every gate is scheduled as soon as its qubits
    are free. Barriers are not counted."""
    level = [0] * n
    for gate in gates:
        if gate.kind == GateKind.BARRIER:
            continue
        start = max(level[q] for q in gate.qubits)
        for q in gate.qubits:
            level[q] = start + 1
    return max(level, default=0)
