import psutil

from hpdesign import config
from hpdesign.exceptions import BoundExceeded


AMPLITUDE_BYTES = 16


def statevector_bytes(n: int) -> int:
    return AMPLITUDE_BYTES * 2 ** n


def ensure_statevector_fits(n: int):
    if n > config.MAX_STATEVECTOR_N:
        raise BoundExceeded(
            f'{n} qubits exceed the simulator bound of '
            f'{config.MAX_STATEVECTOR_N}')

    needed = statevector_bytes(n)
    available = psutil.virtual_memory().available
    if needed > available:
        raise BoundExceeded(
            f'A {n}-qubit statevector needs {needed} bytes, '
            f'only {available} are available')


def build_bound_help_text(n: int, bound: int, what: str) -> str:
    return (
        f'{what} for n={n} exceeds the enumeration bound of {bound}. '
        f'Raise HPDESIGN_MAX_ENUMERATION (at most 16) or provide a '
        f'pre-derived instance file in the instance directory.')
