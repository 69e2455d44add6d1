# src/independence/bitsets.py
"""
Helpers de conjuntos codificados como máscaras de bits
"""

from typing import Iterator, List


def submasks(mask: int) -> Iterator[int]:
    """Todos los submasks de mask (incluido 0) en orden creciente"""
    sub = 0
    while True:
        yield sub
        sub = (sub - mask) & mask
        if sub == 0:
            return


def nonempty_submasks(mask: int) -> Iterator[int]:
    for sub in submasks(mask):
        if sub:
            yield sub


def proper_nonempty_submasks(mask: int) -> Iterator[int]:
    for sub in submasks(mask):
        if sub and sub != mask:
            yield sub


def single_bits(mask: int) -> List[int]:
    bits = []
    while mask:
        low = mask & -mask
        bits.append(low)
        mask ^= low
    return bits


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def is_singleton(mask: int) -> bool:
    return mask != 0 and mask & (mask - 1) == 0
