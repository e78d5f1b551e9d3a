from dataclasses import dataclass
import enum
import math
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import scipy.linalg

from hpdesign import bits
from hpdesign.exceptions import ArityMismatch, BadLayers, BadVariant
from hpdesign.qubo import QuboModel, ising_coefficients
from hpdesign.quantum import dicke
from hpdesign.quantum.gates import (
    Circuit, Gate, GateKind, decompose, layer_depth)
from hpdesign.quantum.simulator import InitialState


class Mixer(enum.Enum):
    X = 'x'
    XY_FC = 'xyfc'
    XY_RING = 'xyring'


@dataclass(frozen=True)
class QaoaVariant:
    mixer: Mixer
    init: InitialState

    def __post_init__(self):
        if (self.mixer, self.init) not in _VALID_QAOA:
            raise BadVariant(
                f'Mixer {self.mixer.value} with initial state '
                f'{self.init.value} is not a supported QAOA variant')

    @property
    def conserves_weight(self) -> bool:
        return self.mixer != Mixer.X

    @property
    def name(self) -> str:
        return f'qaoa-{self.mixer.value}-{self.init.value}'


_VALID_QAOA = {
    (Mixer.X, InitialState.UI),
    (Mixer.XY_FC, InitialState.BI),
    (Mixer.XY_FC, InitialState.DI),
    (Mixer.XY_RING, InitialState.BI),
    (Mixer.XY_RING, InitialState.DI),
}

HEA_VARIANTS = {'hea-1': 1, 'hea-2': 2}


def variant_names() -> List[str]:
    qaoa = sorted(f'qaoa-{m.value}-{i.value}' for m, i in _VALID_QAOA)
    return qaoa + sorted(HEA_VARIANTS)


def parse_variant(name: str) -> Union[QaoaVariant, int]:
    """QaoaVariant for QAOA identifiers, the layer count for HEA ones"""
    if name in HEA_VARIANTS:
        return HEA_VARIANTS[name]

    parts = name.split('-')
    if len(parts) != 3 or parts[0] != 'qaoa':
        raise BadVariant(
            f'Unknown variant "{name}", choose one of '
            f'{", ".join(variant_names())}')
    try:
        return QaoaVariant(Mixer(parts[1]), InitialState(parts[2]))
    except ValueError:
        raise BadVariant(
            f'Unknown variant "{name}", choose one of '
            f'{", ".join(variant_names())}')


def is_qaoa(name: str) -> bool:
    return isinstance(parse_variant(name), QaoaVariant)


@dataclass(frozen=True)
class GateTemplate:
    """A gate whose angle is scale * params[slot], or the fixed angle
    when slot is None"""
    kind: GateKind
    qubits: Tuple[int, ...]
    slot: Optional[int] = None
    scale: float = 1.0
    angle: float = 0.0

    def bind(self, params: np.ndarray) -> Gate:
        if self.slot is None:
            return Gate(self.kind, self.qubits, self.angle)
        return Gate(self.kind, self.qubits, self.scale * params[self.slot])


@dataclass(frozen=True)
class ParameterizedCircuit:
    n: int
    prep: Circuit
    templates: Tuple[GateTemplate, ...]
    num_params: int
    variant: str
    layers: int
    init: Optional[InitialState] = None
    n_h: Optional[int] = None


def prep_circuit(n: int, init: InitialState, n_h: int) -> Circuit:
    if init == InitialState.UI:
        return Circuit(n, tuple(Gate(GateKind.H, (q,)) for q in range(n)))

    ones = Circuit(n, tuple(Gate(GateKind.X, (q,)) for q in range(n_h)))
    if init == InitialState.BI or n_h in (0, n):
        return ones
    return ones + dicke.dicke_prep_circuit(n, n_h)


def xy_pairs(n: int, mixer: Mixer) -> List[Tuple[int, int]]:
    if mixer == Mixer.XY_FC:
        return [(i, j) for i in range(n) for j in range(i + 1, n)]

    even = [(i, i + 1) for i in range(0, n - 1, 2)]
    odd = [(i, i + 1) for i in range(1, n - 1, 2)]
    wrap = [(n - 1, 0)] if n > 2 else []
    return even + odd + wrap


def build_qaoa(m: QuboModel, v: QaoaVariant, p: int) -> ParameterizedCircuit:
    """Parameters are (beta_1..beta_p, gamma_1..gamma_p). Each layer is the
    cost unitary exp(-i gamma C), exact up to a global phase, followed by
    one Trotter step of the mixer."""
    if p < 1:
        raise BadLayers(f'QAOA needs at least one layer, got {p}')

    n = m.n
    fields, couplings, _ = ising_coefficients(m)
    templates: List[GateTemplate] = []

    for k in range(p):
        beta, gamma = k, p + k
        for q in range(n):
            templates.append(GateTemplate(
                GateKind.RZ, (q,), gamma, 2 * float(fields[q])))
        for (i, j), coupling in couplings.items():
            templates.append(GateTemplate(
                GateKind.RZZ, (i, j), gamma, 2 * coupling))

        if v.mixer == Mixer.X:
            for q in range(n):
                templates.append(GateTemplate(GateKind.RX, (q,), beta, 2))
        else:
            for pair in xy_pairs(n, v.mixer):
                templates.append(GateTemplate(
                    GateKind.RXXPLUSYY, pair, beta, 2))

    return ParameterizedCircuit(
        n=n, prep=prep_circuit(n, v.init, m.n_h), templates=tuple(templates),
        num_params=2 * p, variant=v.name, layers=p, init=v.init, n_h=m.n_h)


def hea_slot(n: int, block: int, qubit: int, rotation: int) -> int:
    """Parameter index of the RY (rotation 0) or RZ (rotation 1) angle on
    `qubit` in rotation block `block`"""
    return 2 * n * block + 2 * qubit + rotation


def build_hea(n: int, layers: int) -> ParameterizedCircuit:
    if layers not in (1, 2):
        raise BadLayers(f'The hardware-efficient ansatz has 1 or 2 layers, '
                        f'got {layers}')
    if n < 2:
        raise BadLayers(f'The hardware-efficient ansatz needs two qubits, '
                        f'got {n}')

    def rotations(block: int) -> List[GateTemplate]:
        out = []
        for q in range(n):
            for rotation, kind in enumerate((GateKind.RY, GateKind.RZ)):
                out.append(GateTemplate(
                    kind, (q,), hea_slot(n, block, q, rotation)))
        return out

    entangler = [
        GateTemplate(GateKind.CNOT, (c, c + 1)) for c in range(n - 2, -1, -1)]

    templates = rotations(0)
    for block in range(1, layers + 1):
        templates += entangler + rotations(block)

    return ParameterizedCircuit(
        n=n, prep=Circuit(n), templates=tuple(templates),
        num_params=2 * n * (layers + 1), variant=f'hea-{layers}',
        layers=layers)


def build(name: str, m: QuboModel, layers: int) -> ParameterizedCircuit:
    """Circuit for a variant identifier; `layers` is p for QAOA"""
    variant = parse_variant(name)
    if isinstance(variant, QaoaVariant):
        return build_qaoa(m, variant, layers)
    return build_hea(m.n, variant)


def _check_arity(pc: ParameterizedCircuit,
                 params: Sequence[float]) -> np.ndarray:
    params = np.asarray(params, dtype=np.float64)
    if params.shape != (pc.num_params,):
        raise ArityMismatch(
            f'{pc.variant} takes {pc.num_params} parameters, '
            f'got {params.size}')
    return params


def bind_body(pc: ParameterizedCircuit, params: Sequence[float]) -> Circuit:
    """The parameterized part only, without state preparation"""
    params = _check_arity(pc, params)
    return Circuit(pc.n, tuple(t.bind(params) for t in pc.templates))


def bind(pc: ParameterizedCircuit, params: Sequence[float]) -> Circuit:
    return pc.prep + bind_body(pc, params)


def depth(c: Circuit) -> int:
    """Layer depth after rewriting into CNOT and single-qubit rotations,
    assuming all-to-all connectivity"""
    return layer_depth(c.n, decompose(c).gates)


def qaoa_start(p: int) -> np.ndarray:
    """The (pi, ..., pi) starting point of the first QAOA stage"""
    return np.full(2 * p, math.pi)


class SectorMixer:
    """Exact exp(-i beta M) for an XY mixer restricted to the weight-n_h
    basis states, M = sum over pairs of (XX + YY)"""

    def __init__(self, n: int, n_h: int, mixer: Mixer):
        if mixer == Mixer.X:
            raise BadVariant('The X mixer does not conserve Hamming weight')

        self.support = bits.weight_indices(n, n_h)
        position: Dict[int, int] = {
            int(k): i for i, k in enumerate(self.support)}
        hamiltonian = np.zeros((len(self.support), len(self.support)))

        for col, k in enumerate(self.support.tolist()):
            for i, j in xy_pairs(n, mixer):
                bi, bj = (k >> (n - 1 - i)) & 1, (k >> (n - 1 - j)) & 1
                if bi != bj:
                    swapped = k ^ (1 << (n - 1 - i)) ^ (1 << (n - 1 - j))
                    hamiltonian[position[swapped], col] += 2

        self.hamiltonian = hamiltonian

    def unitary(self, beta: float) -> np.ndarray:
        return scipy.linalg.expm(-1j * beta * self.hamiltonian)
