from dataclasses import dataclass, field
import functools
import logging
from typing import Dict, FrozenSet, List, Optional, Tuple

import numpy as np

from hpdesign import bits
from hpdesign import config
from hpdesign import execution
from hpdesign.exceptions import (
    BadComposition, BadToken, BoundExceeded, LengthMismatch,
    NoValidInstance, SelfIntersection, TooShort)
from hpdesign.resources import build_bound_help_text
from hpdesign.timing import timed


MOVES = {'R': (1, 0), 'L': (-1, 0), 'U': (0, 1), 'D': (0, -1)}

# quarter turn counter-clockwise and mirror across the x axis; together
# they generate the eight point symmetries of the square lattice
_ROTATE = str.maketrans('RULD', 'ULDR')
_MIRROR = str.maketrans('UD', 'DU')
_REVERSE = str.maketrans('RLUD', 'LRDU')

# chain length -> (number of H beads, known minimum E_HP)
REFERENCE_INSTANCES: Dict[int, Tuple[int, int]] = {
    4: (2, -1),
    8: (4, -3),
    10: (4, -4),
    11: (5, -4),
    12: (4, -4),
    13: (8, -6),
    14: (8, -7),
    15: (8, -7),
    16: (6, -6),
    17: (6, -6),
    18: (8, -8),
    19: (8, -8),
    20: (8, -8),
    21: (10, -10),
    22: (10, -11),
    23: (10, -10),
    24: (10, -11),
    25: (13, -13),
    26: (14, -14),
    27: (13, -13),
    28: (13, -13),
}

CENSUS_CHUNK_BYTES = 64 * 2 ** 20


def walk_coordinates(moves: str) -> Tuple[Tuple[int, int], ...]:
    x, y = 0, 0
    coords = [(0, 0)]
    seen = {(0, 0)}

    for move in moves:
        try:
            dx, dy = MOVES[move]
        except KeyError:
            raise BadToken(f'Invalid move "{move}" in "{moves}"')

        x, y = x + dx, y + dy
        if (x, y) in seen:
            raise SelfIntersection(
                f'Walk "{moves}" revisits site {(x, y)} at bead {len(coords)}')
        seen.add((x, y))
        coords.append((x, y))

    return tuple(coords)


def canonicalize(moves: str) -> str:
    """Representative of the symmetry orbit: first move R, first turn U"""
    while not moves.startswith('R'):
        moves = moves.translate(_ROTATE)

    first_turn = next((m for m in moves if m != 'R'), None)
    if first_turn == 'D':
        moves = moves.translate(_MIRROR)

    return moves


def symmetry_images(moves: str) -> FrozenSet[str]:
    images = set()
    rotated = moves
    for _ in range(4):
        images.add(rotated)
        images.add(rotated.translate(_MIRROR))
        rotated = rotated.translate(_ROTATE)
    return frozenset(images)


def orbit_size(moves: str) -> int:
    return len(symmetry_images(moves))


@dataclass(frozen=True)
class Structure:
    moves: str
    original: str = field(default='', compare=False)
    coords: Tuple[Tuple[int, int], ...] = field(
        default=(), compare=False, repr=False)

    def __post_init__(self):
        if not self.coords:
            object.__setattr__(self, 'coords', walk_coordinates(self.moves))
        if not self.original:
            object.__setattr__(self, 'original', self.moves)

    @property
    def n(self) -> int:
        return len(self.moves) + 1

    def reversed(self) -> 'Structure':
        """The same walk traversed from the last bead to the first"""
        return parse_structure(self.moves[::-1].translate(_REVERSE))


@dataclass(frozen=True)
class ContactMap:
    n: int
    contacts: FrozenSet[Tuple[int, int]]

    def pairs(self) -> List[Tuple[int, int]]:
        return sorted(self.contacts)

    def weights(self) -> np.ndarray:
        w = np.zeros((self.n, self.n), dtype=np.int64)
        for i, j in self.contacts:
            w[i, j] = 1
        return w

    def __len__(self):
        return len(self.contacts)


@dataclass(frozen=True)
class HPSequence:
    bits: str

    def __post_init__(self):
        if not self.bits or set(self.bits) - {'0', '1'}:
            raise BadToken(f'Sequence "{self.bits}" is not a 0/1 string')

    @classmethod
    def parse(cls, text: str) -> 'HPSequence':
        """Accepts both 0/1 strings and H/P letters"""
        return cls(text.upper().translate(str.maketrans('HP', '10')))

    @classmethod
    def from_index(cls, index: int, n: int) -> 'HPSequence':
        return cls(bits.index_to_bitstring(index, n))

    @property
    def index(self) -> int:
        return bits.bitstring_to_index(self.bits)

    @property
    def weight(self) -> int:
        return self.bits.count('1')

    def as_letters(self) -> str:
        return self.bits.translate(str.maketrans('10', 'HP'))

    def reversed(self) -> 'HPSequence':
        return HPSequence(self.bits[::-1])

    def __len__(self):
        return len(self.bits)


@dataclass(frozen=True)
class Instance:
    structure: Structure
    contact_map: ContactMap
    n_h: int
    e_min: int
    solution: Optional[HPSequence] = None

    def __post_init__(self):
        if not 0 <= self.n_h <= self.n:
            raise BadComposition(
                f'n_h={self.n_h} is outside [0, {self.n}]')

        if self.solution is not None:
            if self.solution.weight != self.n_h:
                raise BadComposition(
                    f'Solution {self.solution.bits} does not have '
                    f'{self.n_h} H beads')
            energy = hp_energy(self.contact_map, self.solution)
            if energy != self.e_min:
                raise NoValidInstance(
                    f'Solution energy {energy} differs from e_min '
                    f'{self.e_min}')

    @property
    def n(self) -> int:
        return self.contact_map.n

    @property
    def label(self) -> str:
        return f'{self.n}:{self.n_h}'


@dataclass(frozen=True)
class FoldReport:
    ground_states: Tuple[Structure, ...]
    unique_ground_state_is_target: bool
    probability: float
    beta: float
    ground_energy: int
    target_energy: int


@dataclass
class Census:
    """Ground states of every sequence over every canonical walk of length n.

    Arrays indexed by sequence position hold the maximum HH contact count,
    the number of canonical walks reaching it and the first such walk.
    """
    n: int
    n_h: Optional[int]
    structures: Tuple[Structure, ...]
    sequences: np.ndarray
    best_contacts: np.ndarray
    degeneracy: np.ndarray
    best_structure: np.ndarray
    designability: np.ndarray

    @property
    def unique_fraction(self) -> float:
        return float(np.count_nonzero(self.degeneracy == 1)) \
            / len(self.sequences)

    def designing_sequences(self, index: int) -> List[HPSequence]:
        mask = (self.degeneracy == 1) & (self.best_structure == index)
        return [HPSequence.from_index(k, self.n)
                for k in self.sequences[mask]]

    def designing_table(self) -> Dict[int, List[HPSequence]]:
        """designing_sequences of every designable structure in one pass"""
        unique = self.degeneracy == 1
        table: Dict[int, List[HPSequence]] = {}
        for k, index in zip(self.sequences[unique].tolist(),
                            self.best_structure[unique].tolist()):
            table.setdefault(index, []).append(
                HPSequence.from_index(k, self.n))
        return table

    def ranking(self) -> List[int]:
        """Structure indices with nonzero designability, most designable
        first, ties by move string"""
        designable = np.flatnonzero(self.designability)
        return sorted(
            designable.tolist(),
            key=lambda i: (-int(self.designability[i]),
                           self.structures[i].moves))


def parse_structure(text: str) -> Structure:
    if len(text) < 1:
        raise TooShort('A structure needs at least two beads')

    for move in text:
        if move not in MOVES:
            raise BadToken(f'Invalid move "{move}" in "{text}"')

    walk_coordinates(text)
    return Structure(moves=canonicalize(text), original=text)


def contact_map(s: Structure) -> ContactMap:
    position = {coord: i for i, coord in enumerate(s.coords)}
    contacts = set()

    for i, (x, y) in enumerate(s.coords):
        for neighbour in ((x + 1, y), (x, y + 1)):
            j = position.get(neighbour)
            if j is not None and abs(i - j) >= 2:
                contacts.add((min(i, j), max(i, j)))

    return ContactMap(n=s.n, contacts=frozenset(contacts))


def hp_energy(cm: ContactMap, seq: HPSequence) -> int:
    if len(seq) != cm.n:
        raise LengthMismatch(
            f'Sequence of length {len(seq)} on a chain of {cm.n} beads')

    return -sum(
        1 for i, j in cm.contacts
        if seq.bits[i] == '1' and seq.bits[j] == '1')


def check_enumeration_bound(n: int, what: str):
    if n < 2:
        raise TooShort(f'A chain needs at least two beads, got {n}')
    if n > config.MAX_ENUMERATION_N:
        raise BoundExceeded(
            build_bound_help_text(n, config.MAX_ENUMERATION_N, what))


@functools.lru_cache(maxsize=None)
def _canonical_walks(n: int) -> Tuple[Structure, ...]:
    # Grow walks depth-first in DLRU order so the output comes out sorted.
    # The first step is fixed to R and D is refused until the first turn.
    walks = []
    path = ['R']
    coords = [(0, 0), (1, 0)]
    occupied = set(coords)

    def grow(turned: bool):
        if len(path) == n - 1:
            walks.append(Structure(moves=''.join(path), coords=tuple(coords)))
            return

        x, y = coords[-1]
        for move in sorted(MOVES):
            if move == 'D' and not turned:
                continue
            dx, dy = MOVES[move]
            site = (x + dx, y + dy)
            if site in occupied:
                continue

            occupied.add(site)
            coords.append(site)
            path.append(move)
            grow(turned or move != 'R')
            path.pop()
            coords.pop()
            occupied.remove(site)

    grow(False)
    logging.debug(f'Enumerated {len(walks)} canonical walks of {n} beads')
    return tuple(walks)


def enumerate_saws(n: int) -> List[Structure]:
    check_enumeration_bound(n, 'Walk enumeration')
    return list(_canonical_walks(n))


def candidate_pairs(n: int) -> List[Tuple[int, int]]:
    """Bead pairs that can ever touch: on the square lattice only beads an
    odd number (at least 3) of steps apart along the chain can be neighbours"""
    return [(i, j) for i in range(n) for j in range(i + 3, n, 2)]


@functools.lru_cache(maxsize=None)
def _contact_matrix(n: int) -> np.ndarray:
    pairs = candidate_pairs(n)
    column = {pair: k for k, pair in enumerate(pairs)}
    walks = _canonical_walks(n)

    matrix = np.zeros((len(walks), len(pairs)), dtype=np.float32)
    for row, walk in enumerate(walks):
        for pair in contact_map(walk).contacts:
            matrix[row, column[pair]] = 1
    matrix.flags.writeable = False
    return matrix


@functools.lru_cache(maxsize=None)
def _orbit_sizes(n: int) -> np.ndarray:
    sizes = np.array(
        [orbit_size(w.moves) for w in _canonical_walks(n)], dtype=np.float64)
    sizes.flags.writeable = False
    return sizes


@functools.lru_cache(maxsize=None)
def _walk_index(n: int) -> Dict[str, int]:
    return {w.moves: i for i, w in enumerate(_canonical_walks(n))}


def _hh_matrix(n: int, sequences: np.ndarray) -> np.ndarray:
    """pairs x sequences indicator of both beads being H"""
    b = bits.bit_matrix(sequences, n).astype(np.float32)
    pairs = candidate_pairs(n)
    if not pairs:
        return np.zeros((0, len(sequences)), dtype=np.float32)
    first = np.array([i for i, _ in pairs])
    second = np.array([j for _, j in pairs])
    return (b[:, first] * b[:, second]).T


def _scan(contacts: np.ndarray, hh: np.ndarray, start: int):
    hits = contacts @ hh
    best = hits.max(axis=0)
    count = (hits == best).sum(axis=0)
    arg = hits.argmax(axis=0) + start
    return best, count, arg


@functools.lru_cache(maxsize=8)
def _census(n: int, n_h: Optional[int]) -> Census:
    walks = _canonical_walks(n)
    contacts = _contact_matrix(n)

    if n_h is None:
        sequences = np.arange(2 ** n, dtype=np.int64)
    else:
        sequences = bits.weight_indices(n, n_h)
    hh = _hh_matrix(n, sequences)

    chunk = max(1, CENSUS_CHUNK_BYTES // (4 * len(sequences)))
    starts = range(0, len(walks), chunk)

    def scan_chunk(start: int):
        logging.debug(f'Census n={n}: scanning walks {start}..{start + chunk}')
        return _scan(contacts[start:start + chunk], hh, start)

    with timed(f'Design census for n={n}'):
        partials = execution.run_parallel(scan_chunk, starts)

    # merge in walk order so the reported ground state is the first one
    best, count, arg = partials[0]
    for best_c, count_c, arg_c in partials[1:]:
        better = best_c > best
        equal = best_c == best
        count = np.where(
            better, count_c, np.where(equal, count + count_c, count))
        arg = np.where(better, arg_c, arg)
        best = np.maximum(best, best_c)

    unique = count == 1
    designability = np.bincount(arg[unique], minlength=len(walks))

    census = Census(
        n=n, n_h=n_h, structures=walks, sequences=sequences,
        best_contacts=best.astype(np.int64), degeneracy=count.astype(np.int64),
        best_structure=arg.astype(np.int64), designability=designability)
    logging.info(
        f'Census n={n}: {len(walks)} walks, {len(sequences)} sequences, '
        f'unique ground state fraction {census.unique_fraction:.4f}')
    return census


def design_census(n: int, n_h: Optional[int] = None) -> Census:
    check_enumeration_bound(n, 'Design census')
    if n_h is not None and not 0 <= n_h <= n:
        raise BadComposition(f'n_h={n_h} is outside [0, {n}]')
    return _census(n, n_h)


def _unique_weight_minimizer(
        cm: ContactMap, n_h: int) -> Optional[Tuple[HPSequence, int]]:
    sequences = bits.weight_indices(cm.n, n_h)
    b = bits.bit_matrix(sequences, cm.n)
    energies = np.zeros(len(sequences), dtype=np.int64)
    for i, j in cm.contacts:
        energies -= b[:, i] & b[:, j]

    lowest = energies.min()
    winners = np.flatnonzero(energies == lowest)
    if len(winners) != 1:
        return None
    return HPSequence.from_index(sequences[winners[0]], cm.n), int(lowest)


def select_instance(n: int, n_h: int) -> Instance:
    """Most designable structure whose weight-n_h design problem has a unique
    solution that folds back onto it.

    Above the enumeration bound the instance is loaded from the instance
    directory instead and only the uniqueness of its solution is checked.
    """
    if not 0 <= n_h <= n:
        raise BadComposition(f'n_h={n_h} is outside [0, {n}]')

    if n > config.MAX_ENUMERATION_N:
        from hpdesign import instance_io
        return instance_io.load_instance(n, n_h)

    census = design_census(n)
    walks = census.structures

    for index in census.ranking():
        structure = walks[index]
        cm = contact_map(structure)
        found = _unique_weight_minimizer(cm, n_h)
        if found is None:
            continue

        solution, e_min = found
        # full census covers all 2^n sequences, so position == index
        k = solution.index
        if census.degeneracy[k] != 1 or census.best_structure[k] != index:
            continue

        tied = [
            walks[i].moves for i in census.ranking()
            if census.designability[i] == census.designability[index]]
        if len(tied) > 1:
            logging.warning(
                f'{len(tied)} structures share designability '
                f'{census.designability[index]} at n={n}; '
                f'picked {structure.moves}')

        logging.info(
            f'Selected n={n} n_h={n_h} structure {structure.moves} '
            f'(designability {census.designability[index]}, '
            f'e_min {e_min})')
        return Instance(
            structure=structure, contact_map=cm, n_h=n_h, e_min=e_min,
            solution=solution)

    raise NoValidInstance(
        f'No structure of {n} beads has a unique weight-{n_h} design '
        f'that folds onto it')


def _walk_energies(seq: HPSequence) -> np.ndarray:
    hh = _hh_matrix(len(seq), np.array([seq.index]))[:, 0]
    return -(_contact_matrix(len(seq)) @ hh).astype(np.int64)


def fold_verify(seq: HPSequence, target: Structure, beta: float) -> FoldReport:
    """Ground states of `seq` and its Boltzmann probability of being folded
    into `target`, summed over every conformation of the chain"""
    if len(seq) != target.n:
        raise LengthMismatch(
            f'Sequence of length {len(seq)} against a {target.n}-bead target')
    check_enumeration_bound(target.n, 'Fold verification')

    n = target.n
    walks = _canonical_walks(n)
    energies = _walk_energies(seq)
    ground = int(energies.min())
    ground_states = np.flatnonzero(energies == ground)

    t = _walk_index(n)[canonicalize(target.moves)]
    weights = _orbit_sizes(n) * np.exp(-beta * (energies - ground))
    probability = float(weights[t] / weights.sum())

    return FoldReport(
        ground_states=tuple(walks[i] for i in ground_states),
        unique_ground_state_is_target=(
            len(ground_states) == 1 and ground_states[0] == t),
        probability=probability,
        beta=beta,
        ground_energy=ground,
        target_energy=int(energies[t]))


def energy_level_probabilities(
        seq: HPSequence, beta: float) -> Dict[int, float]:
    check_enumeration_bound(len(seq), 'Fold verification')

    energies = _walk_energies(seq)
    shifted = energies - energies.min()
    weights = _orbit_sizes(len(seq)) * np.exp(-beta * shifted)
    total = weights.sum()

    return {
        int(level): float(weights[energies == level].sum() / total)
        for level in np.unique(energies)}
