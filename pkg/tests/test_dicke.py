import numpy as np
import pytest

from hpdesign.ansatz import prep_circuit
from hpdesign.exceptions import BadComposition
from hpdesign.quantum import dicke
from hpdesign.quantum.gates import GateKind
from hpdesign.quantum.simulator import (
    InitialState, Statevector, init_state, run_circuit)


def fidelity(a: Statevector, b: Statevector) -> float:
    return abs(np.vdot(a.amplitudes, b.amplitudes)) ** 2


def small_cases(max_n):
    return [(n, k) for n in range(2, max_n + 1) for k in range(1, n)]


@pytest.mark.parametrize('n, n_h', small_cases(8))
def test_prepares_dicke_state(n, n_h):
    prepared = run_circuit(
        prep_circuit(n, InitialState.DI, n_h), Statevector.basis(n))
    assert fidelity(prepared, init_state(n, InitialState.DI, n_h)) \
        >= 1 - 1e-10


@pytest.mark.slow
@pytest.mark.parametrize('n, n_h', [
    (n, k) for n, k in small_cases(12) if n > 8])
def test_prepares_dicke_state_large(n, n_h):
    prepared = run_circuit(
        prep_circuit(n, InitialState.DI, n_h), Statevector.basis(n))
    assert fidelity(prepared, init_state(n, InitialState.DI, n_h)) \
        >= 1 - 1e-10


@pytest.mark.parametrize('n, n_h', small_cases(12))
def test_gate_count(n, n_h):
    circuit = dicke.dicke_prep_circuit(n, n_h)
    assert len(circuit) <= dicke.DICKE_GATE_CONSTANT * n_h * n
    assert set(circuit.count_ops()) <= {'cx', 'cry'}


def test_prep_circuit_starts_from_ones():
    circuit = prep_circuit(6, InitialState.DI, 2)
    assert [g.kind for g in circuit.gates[:2]] == [GateKind.X, GateKind.X]
    assert [g.qubits for g in circuit.gates[:2]] == [(0,), (1,)]


def test_invalid_weights():
    with pytest.raises(BadComposition):
        dicke.dicke_prep_circuit(4, 0)
    with pytest.raises(BadComposition):
        dicke.dicke_prep_circuit(4, 4)
