from dataclasses import dataclass
import logging
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

from hpdesign import bits
from hpdesign import config
from hpdesign.exceptions import (
    BadComposition, BadLambda, BoundExceeded, LengthMismatch)
from hpdesign.lattice import ContactMap


# Energies are sums of a few multiples of lambda, minimizers are compared
# with this slack.
ENERGY_TOLERANCE = 1e-9

# bits enumerated as a dense table per block of the split enumeration
SPLIT_LOW_BITS = 16
MATERIALIZE_LOW_BITS = 12
BLOCK_ELEMENTS = 2 ** 22

Bitstring = Union[str, Sequence[int], np.ndarray]


@dataclass(frozen=True, eq=False)
class QuboModel:
    """Penalized design energy -sum w_ij s_i s_j + lam (sum s_i - n_h)^2
    expanded into constant, linear and upper triangular quadratic terms"""
    n: int
    linear: np.ndarray
    quadratic: np.ndarray
    constant: float
    lam: float
    n_h: int
    contact_map: ContactMap

    def to_json(self) -> dict:
        return {
            'n': self.n,
            'n_h': self.n_h,
            'lambda': self.lam,
            'constant': self.constant,
            'linear': self.linear.tolist(),
            'quadratic': [
                [i, j, float(self.quadratic[i, j])]
                for i in range(self.n) for j in range(i + 1, self.n)
                if self.quadratic[i, j] != 0],
        }


def build_qubo(
        cm: ContactMap, n_h: int, lam: float = config.DEFAULT_LAMBDA,
        allow_unpenalized: bool = False) -> QuboModel:
    """`allow_unpenalized` admits lam = 0, the bare contact energy whose
    trivial minimizer is the all-H chain"""
    if lam < 0 or (lam == 0 and not allow_unpenalized):
        raise BadLambda(f'The penalty weight must be positive, got {lam}')
    if not 0 <= n_h <= cm.n:
        raise BadComposition(f'n_h={n_h} is outside [0, {cm.n}]')

    n = cm.n
    linear = np.full(n, lam * (1 - 2 * n_h), dtype=np.float64)
    quadratic = np.triu(np.full((n, n), 2 * lam, dtype=np.float64), k=1)
    for i, j in cm.contacts:
        quadratic[i, j] -= 1

    linear.flags.writeable = False
    quadratic.flags.writeable = False
    return QuboModel(
        n=n, linear=linear, quadratic=quadratic, constant=lam * n_h ** 2,
        lam=lam, n_h=n_h, contact_map=cm)


def _as_bits(m: QuboModel, s: Bitstring) -> np.ndarray:
    b = bits.bits_from(s)
    if len(b) != m.n:
        raise LengthMismatch(f'Bitstring of length {len(b)} for {m.n} qubits')
    return b.astype(np.float64)


def qubo_energy(m: QuboModel, s: Bitstring) -> float:
    b = _as_bits(m, s)
    return float(m.constant + m.linear @ b + b @ m.quadratic @ b)


def penalized_energy(cm: ContactMap, n_h: int, lam: float,
                     s: Bitstring) -> float:
    """Direct evaluation of the penalized design energy, without expansion"""
    b = bits.bits_from(s)
    contacts = sum(int(b[i]) * int(b[j]) for i, j in cm.contacts)
    return float(-contacts + lam * (int(b.sum()) - n_h) ** 2)


def energies_of(m: QuboModel, indices: np.ndarray) -> np.ndarray:
    """Vectorized energies of basis indices"""
    indices = np.asarray(indices, dtype=np.int64)
    out = np.empty(len(indices), dtype=np.float64)
    step = max(1, BLOCK_ELEMENTS // max(m.n, 1))

    for start in range(0, len(indices), step):
        chunk = indices[start:start + step]
        b = bits.bit_matrix(chunk, m.n).astype(np.float64)
        pairs = np.einsum('ij,ij->i', b @ m.quadratic, b)
        out[start:start + step] = m.constant + b @ m.linear + pairs
    return out


def _block_energies(m: QuboModel, lo: int, hi: int):
    """Energy contribution of qubits lo..hi-1 alone, for every setting of
    those qubits, together with the bit table"""
    width = hi - lo
    b = bits.bit_matrix(np.arange(2 ** width), width).astype(np.float64)
    q = m.quadratic[lo:hi, lo:hi]
    return b @ m.linear[lo:hi] + np.einsum('ij,ij->i', b @ q, b), b


def _split_blocks(
        m: QuboModel, low: int,
        weight: Optional[int] = None) -> Iterator[Tuple[int, np.ndarray]]:
    """Yield (first index, energies) over all 2^n indices in contiguous
    blocks. The last `low` qubits are tabulated once and combined with each
    setting of the leading qubits. With `weight` set, indices of any other
    Hamming weight get +inf."""
    high = m.n - low
    low_energy, low_bits = _block_energies(m, high, m.n)
    high_energy, high_bits = _block_energies(m, 0, high)
    cross = m.quadratic[:high, high:]
    low_weight = low_bits.sum(axis=1)
    high_weight = high_bits.sum(axis=1)

    rows = max(1, BLOCK_ELEMENTS // 2 ** low)
    for start in range(0, 2 ** high, rows):
        h = slice(start, start + rows)
        block = (m.constant + high_energy[h, None] + low_energy[None, :]
                 + (high_bits[h] @ cross) @ low_bits.T)
        if weight is not None:
            matches = high_weight[h, None] + low_weight[None, :] == weight
            block = np.where(matches, block, np.inf)
        yield start << low, block.ravel()


def brute_force_min(m: QuboModel, weight_restricted: bool = False
                    ) -> Tuple[float, List[str]]:
    """Exact minimum and every minimizing bitstring, over all 2^n strings or
    only those with n_h ones"""
    if m.n > config.MAX_BRUTE_FORCE_N:
        raise BoundExceeded(
            f'Brute force over {m.n} bits exceeds the bound of '
            f'{config.MAX_BRUTE_FORCE_N}')

    weight = m.n_h if weight_restricted else None
    best = np.inf
    winners: List[int] = []

    for first, block in _split_blocks(m, min(m.n, SPLIT_LOW_BITS), weight):
        lowest = block.min()
        if not np.isfinite(lowest):
            continue
        if lowest < best - ENERGY_TOLERANCE:
            best = lowest
            winners = []
        if lowest <= best + ENERGY_TOLERANCE:
            hits = np.flatnonzero(block <= best + ENERGY_TOLERANCE)
            winners.extend((first + hits).tolist())

    logging.debug(
        f'Brute force over {m.n} bits: minimum {best} '
        f'with {len(winners)} minimizers')
    return float(best), [bits.index_to_bitstring(k, m.n) for k in winners]


class DiagonalCost:
    """The cost Hamiltonian as a function of the basis index. Tabulated up
    to MATERIALIZE_MAX_QUBITS qubits, evaluated on demand above that."""

    def __init__(self, model: QuboModel):
        self.model = model
        self.table: Optional[np.ndarray] = None

        if model.n <= config.MATERIALIZE_MAX_QUBITS:
            low = min(model.n, MATERIALIZE_LOW_BITS)
            self.table = np.concatenate(
                [block for _, block in _split_blocks(model, low)])
            self.table.flags.writeable = False

    @property
    def n(self) -> int:
        return self.model.n

    def __call__(self, index: int) -> float:
        if self.table is not None:
            return float(self.table[index])
        return float(energies_of(self.model, np.array([index]))[0])

    def values(self, indices: np.ndarray) -> np.ndarray:
        if self.table is not None:
            return self.table[indices]
        return energies_of(self.model, indices)


def diagonal(m: QuboModel) -> DiagonalCost:
    return DiagonalCost(m)


Couplings = Dict[Tuple[int, int], float]


def ising_coefficients(m: QuboModel) -> Tuple[np.ndarray, Couplings, float]:
    """Fields h, couplings J and offset with C = offset + sum h_i Z_i +
    sum J_ij Z_i Z_j under s_i = (1 - Z_i) / 2"""
    sym = m.quadratic + m.quadratic.T
    fields = -m.linear / 2 - sym.sum(axis=1) / 4
    couplings = {
        (i, j): float(m.quadratic[i, j]) / 4
        for i in range(m.n) for j in range(i + 1, m.n)
        if m.quadratic[i, j] != 0}
    offset = (m.constant + m.linear.sum() / 2
              + np.triu(m.quadratic, k=1).sum() / 4)
    return fields, couplings, float(offset)
