"""Dicke state preparation by split-and-cyclic-shift unitaries.

The circuit takes |1^k 0^(n-k)> to the uniform superposition of all
weight-k basis states using O(k n) gates and O(n) depth. Doubly
controlled RY rotations are expanded into CRY and CNOT gates, so the
emitted circuit only uses CNOT and CRY.
"""
import math
from typing import List, Sequence

from hpdesign.exceptions import BadComposition
from hpdesign.quantum.gates import Circuit, Gate, cnot, cry


# every emitted circuit has at most DICKE_GATE_CONSTANT * k * n gates
DICKE_GATE_CONSTANT = 8


def _ccry(first: int, second: int, target: int, theta: float) -> List[Gate]:
    return [
        cry(second, target, theta / 2),
        cnot(first, second),
        cry(second, target, -theta / 2),
        cnot(first, second),
        cry(first, target, theta / 2),
    ]


def _split_cyclic_shift(qubits: Sequence[int], m: int, k: int) -> List[Gate]:
    """SCS_{m,k} on k + 1 qubits"""
    gates: List[Gate] = []

    a, b = qubits[k - 1], qubits[k]
    gates += [
        cnot(a, b),
        cry(b, a, 2 * math.acos(math.sqrt(1 / m))),
        cnot(a, b),
    ]

    for l in range(2, k + 1):
        x, y, z = qubits[k - l], qubits[k - l + 1], qubits[k]
        gates.append(cnot(x, z))
        gates += _ccry(z, y, x, 2 * math.acos(math.sqrt(l / m)))
        gates.append(cnot(x, z))

    return gates


def _mirrored(gate: Gate, n: int) -> Gate:
    return Gate(gate.kind, tuple(n - 1 - q for q in gate.qubits), gate.angle)


def dicke_prep_circuit(n: int, n_h: int) -> Circuit:
    if not 0 < n_h < n:
        raise BadComposition(
            f'Dicke preparation needs 0 < n_h < n, got n={n} n_h={n_h}')

    # the construction is laid out with the ones on the last qubits and is
    # mirrored at the end so they start on the first n_h
    k = n_h
    gates: List[Gate] = []
    for l in range(n, k, -1):
        gates += _split_cyclic_shift(range(l - k - 1, l), l, k)
    for l in range(k, 1, -1):
        gates += _split_cyclic_shift(range(l), l, l - 1)

    return Circuit(n, tuple(_mirrored(g, n) for g in gates))
