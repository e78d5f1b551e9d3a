import enum
from pathlib import Path
from typing import Optional

from hpdesign import config


class OutputKind(enum.Enum):
    INSTANCE = enum.auto()
    CENSUS = enum.auto()
    RUNS_CSV = enum.auto()
    RUNS_JSON = enum.auto()
    LANDSCAPE = enum.auto()


def instance_filename(n: int, n_h: int) -> str:
    return f'hp-n{n}-nh{n_h}.inst'


def instance_path(n: int, n_h: int, folder: Optional[Path] = None) -> Path:
    folder = config.INSTANCE_DIR if folder is None else folder
    return folder / instance_filename(n, n_h)


def census_path(n: int, folder: Optional[Path] = None) -> Path:
    folder = config.OUTPUT_DIR if folder is None else folder
    return folder / f'census-n{n}.csv'


def output_path(
        kind: OutputKind, name: str, folder: Optional[Path] = None) -> Path:
    folder = config.OUTPUT_DIR if folder is None else folder

    if kind == OutputKind.RUNS_CSV:
        suffix = '.csv'
    elif kind == OutputKind.RUNS_JSON:
        suffix = '.json'
    elif kind == OutputKind.LANDSCAPE:
        suffix = '-landscape.csv'
    else:
        raise ValueError(f'Unknown output kind {kind}')

    return folder / f'{name}{suffix}'
