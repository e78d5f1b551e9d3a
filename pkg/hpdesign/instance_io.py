"""Versioned instance files and instance derivation beyond the census.

An instance file is UTF-8 text with one `key value` pair per line:

    version 1
    n <number of beads>
    nh <number of H beads>
    emin <minimum contact energy>
    moves <canonical R/L/U/D walk>
    solution <0/1 string>

`solution` is optional. Loading always re-checks that the weight-nh design
problem on the stored structure has exactly one minimizer at emin.
"""
import logging
import math
from pathlib import Path
from typing import Dict, Optional, Set

import numpy as np

from hpdesign import config
from hpdesign import paths
from hpdesign.exceptions import (
    BoundExceeded, HpDesignException, InstanceFileException, NoValidInstance)
from hpdesign.lattice import (
    MOVES, HPSequence, Instance, contact_map, parse_structure)
from hpdesign.qubo import brute_force_min, build_qubo
from hpdesign.report import atomic_write
from hpdesign.resources import build_bound_help_text


FORMAT_VERSION = 1

# bias of the random walk growth towards sites with many occupied
# neighbours
COMPACTNESS = 2.0


def format_instance(instance: Instance) -> str:
    lines = [
        f'version {FORMAT_VERSION}',
        f'n {instance.n}',
        f'nh {instance.n_h}',
        f'emin {instance.e_min}',
        f'moves {instance.structure.moves}',
    ]
    if instance.solution is not None:
        lines.append(f'solution {instance.solution.bits}')
    return '\n'.join(lines) + '\n'


def write_instance(instance: Instance, path: Path):
    atomic_write(path, format_instance(instance))


def unique_minimizer(instance: Instance) -> Optional[HPSequence]:
    """The single weight-n_h minimizer if there is exactly one and it
    reaches e_min"""
    model = build_qubo(instance.contact_map, instance.n_h)
    value, minimizers = brute_force_min(model, weight_restricted=True)
    if len(minimizers) != 1 or round(value) != instance.e_min:
        return None
    return HPSequence(minimizers[0])


def _fields(text: str, source: str) -> Dict[str, str]:
    fields = {}
    for number, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith('#'):
            continue
        key, _, value = line.partition(' ')
        if not value:
            raise InstanceFileException(
                f'{source}:{number}: expected "key value", got "{line}"')
        fields[key] = value.strip()
    return fields


def parse_instance(text: str, source: str = '<string>',
                   verify: bool = True) -> Instance:
    fields = _fields(text, source)

    missing = {'version', 'n', 'nh', 'emin', 'moves'} - fields.keys()
    if missing:
        raise InstanceFileException(
            f'{source}: missing {", ".join(sorted(missing))}')
    if fields['version'] != str(FORMAT_VERSION):
        raise InstanceFileException(
            f'{source}: unsupported version {fields["version"]}')

    try:
        n, n_h = int(fields['n']), int(fields['nh'])
        e_min = int(fields['emin'])
        structure = parse_structure(fields['moves'])
        solution = HPSequence(fields['solution']) \
            if 'solution' in fields else None
        if structure.n != n:
            raise InstanceFileException(
                f'{source}: moves describe {structure.n} beads, n is {n}')
        instance = Instance(
            structure=structure, contact_map=contact_map(structure),
            n_h=n_h, e_min=e_min, solution=solution)
    except InstanceFileException:
        raise
    except (ValueError, HpDesignException) as e:
        raise InstanceFileException(f'{source}: {e}')

    if not verify:
        return instance

    minimizer = unique_minimizer(instance)
    if minimizer is None or (solution is not None and minimizer != solution):
        logging.warning(f'{source} failed re-verification')
        raise InstanceFileException(
            f'{source}: the weight-{n_h} design problem does not have a '
            f'unique minimizer at {e_min}')

    return Instance(
        structure=structure, contact_map=instance.contact_map, n_h=n_h,
        e_min=e_min, solution=minimizer)


def read_instance(path: Path, verify: bool = True) -> Instance:
    try:
        text = path.read_text(encoding='utf-8')
    except OSError as e:
        raise InstanceFileException(f'Cannot read instance file {path}: {e}')
    return parse_instance(text, str(path), verify)


def load_instance(n: int, n_h: int, folder: Optional[Path] = None) -> Instance:
    """Pre-derived instance from the instance directory"""
    path = paths.instance_path(n, n_h, folder)
    if not path.is_file():
        raise BoundExceeded(
            build_bound_help_text(n, config.MAX_ENUMERATION_N,
                                  'Instance selection'))

    instance = read_instance(path)
    if instance.n != n or instance.n_h != n_h:
        raise InstanceFileException(
            f'{path} holds n={instance.n} n_h={instance.n_h}, '
            f'expected n={n} n_h={n_h}')
    logging.info(f'Loaded instance {instance.label} from {path}')
    return instance


def _compact_walk(n: int, rng: np.random.Generator) -> Optional[str]:
    """Grow one self-avoiding walk, preferring sites next to earlier beads.
    None if the walk traps itself."""
    x, y = 0, 0
    occupied = {(0, 0)}
    moves = []

    for _ in range(n - 1):
        options = []
        weights = []
        for move, (dx, dy) in sorted(MOVES.items()):
            site = (x + dx, y + dy)
            if site in occupied:
                continue
            touching = sum(
                (site[0] + ex, site[1] + ey) in occupied
                for ex, ey in MOVES.values()) - 1
            options.append((move, site))
            weights.append(math.exp(COMPACTNESS * touching))

        if not options:
            return None
        weights = np.array(weights) / sum(weights)
        move, (x, y) = options[rng.choice(len(options), p=weights)]
        occupied.add((x, y))
        moves.append(move)

    return ''.join(moves)


def search_instance(n: int, n_h: int, rng: np.random.Generator,
                    attempts: int = 100,
                    e_min: Optional[int] = None) -> Instance:
    """Random compact structures until one has a unique weight-n_h design,
    optionally at a prescribed minimum energy. Whether that design folds
    back onto the structure is not checked."""
    seen: Set[str] = set()

    for attempt in range(attempts):
        moves = _compact_walk(n, rng)
        if moves is None:
            continue
        structure = parse_structure(moves)
        if structure.moves in seen:
            continue
        seen.add(structure.moves)

        cm = contact_map(structure)
        value, minimizers = brute_force_min(
            build_qubo(cm, n_h), weight_restricted=True)
        energy = round(value)
        logging.debug(
            f'Attempt {attempt}: {structure.moves} has {len(minimizers)} '
            f'minimizers at {energy}')
        if len(minimizers) != 1 or (e_min is not None and energy != e_min):
            continue

        logging.info(
            f'Derived n={n} n_h={n_h} structure {structure.moves} '
            f'(e_min {energy}) after {attempt + 1} attempts')
        return Instance(
            structure=structure, contact_map=cm, n_h=n_h, e_min=energy,
            solution=HPSequence(minimizers[0]))

    raise NoValidInstance(
        f'No unique weight-{n_h} design found among {len(seen)} structures '
        f'of {n} beads')
