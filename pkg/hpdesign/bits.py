import itertools
from typing import Iterable

import numpy as np

from hpdesign.exceptions import BadToken


# Bitstrings are big-endian: character i is qubit i and bead i, and the
# basis index of "1100" is 12.

def index_to_bitstring(index: int, n: int) -> str:
    return format(int(index), f'0{n}b')


def bitstring_to_index(bitstring: str) -> int:
    return int(bitstring, 2)


def bit_matrix(indices: np.ndarray, n: int) -> np.ndarray:
    indices = np.asarray(indices, dtype=np.int64)
    shifts = np.arange(n - 1, -1, -1, dtype=np.int64)
    return ((indices[:, None] >> shifts) & 1).astype(np.uint8)


def popcount(indices: np.ndarray, n: int) -> np.ndarray:
    return bit_matrix(indices, n).sum(axis=1)


def weight_indices(n: int, weight: int) -> np.ndarray:
    """All basis indices of Hamming weight `weight`, ascending."""
    indices = [
        sum(1 << (n - 1 - i) for i in ones)
        for ones in itertools.combinations(range(n), weight)]
    return np.array(sorted(indices), dtype=np.int64)


def bits_from(bits: Iterable) -> np.ndarray:
    """Accept '0101', 'PHPH' or a sequence of ints and return a uint8 array."""
    if isinstance(bits, str):
        table = {'0': 0, '1': 1, 'P': 0, 'H': 1}
        try:
            return np.array([table[c] for c in bits], dtype=np.uint8)
        except KeyError as e:
            raise BadToken(f'Invalid bit character {e} in "{bits}"')

    return np.asarray(list(bits), dtype=np.uint8)
