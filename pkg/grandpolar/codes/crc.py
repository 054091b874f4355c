"""
Systematic CRC as a linear map.

Convention: the message ``m`` (bit 0 = highest-degree coefficient) is followed
by the ``r`` remainder bits of ``x^r m(x) mod g(x)``, most significant first,
with zero initial state and no reflection. Polynomials are ints including the
leading term, e.g. ``0xE21`` for CRC-11.
"""

from __future__ import annotations

import numpy as np

from grandpolar.errors import ConstructionError
from grandpolar.gf2 import BitMatrix


def crc_degree(poly: int) -> int:
    """Degree ``r`` of a CRC polynomial; rejects zero and non-unit trailing term."""
    if poly <= 0:
        raise ConstructionError("CRC polynomial must be nonzero")
    if not poly & 1:
        raise ConstructionError(f"CRC polynomial {poly:#x} has a zero trailing coefficient")
    return poly.bit_length() - 1


def crc_remainder(message: np.ndarray, poly: int) -> np.ndarray:
    """Remainder bits of ``x^r m(x) mod g(x)`` by long division."""
    r = crc_degree(poly)
    gen = np.array([(poly >> (r - j)) & 1 for j in range(r + 1)], dtype=np.uint8)
    work = np.concatenate([np.asarray(message, dtype=np.uint8) & 1, np.zeros(r, dtype=np.uint8)])
    for i in range(work.size - r):
        if work[i]:
            work[i : i + r + 1] ^= gen
    return work[work.size - r :]


def crc_attach(message: np.ndarray, poly: int) -> np.ndarray:
    return np.concatenate([np.asarray(message, dtype=np.uint8), crc_remainder(message, poly)])


def crc_generator_matrix(k: int, poly: int) -> BitMatrix:
    """``k x (k + r)`` generator ``[I_k | P]`` of the systematic CRC."""
    if k < 1:
        raise ConstructionError(f"message length must be positive, got {k}")
    r = crc_degree(poly)
    low = poly ^ (1 << r)
    # state_j = x^j mod g(x), an r-bit int
    states = []
    state = 1 if r else 0
    for _ in range(k + r):
        states.append(state)
        state <<= 1
        if r and state >> r:
            state = (state ^ (1 << r)) ^ low
    gen = np.zeros((k, k + r), dtype=np.uint8)
    gen[np.arange(k), np.arange(k)] = 1
    for i in range(k):
        rem = states[r + k - 1 - i]
        for t in range(r):
            gen[i, k + t] = (rem >> (r - 1 - t)) & 1
    return BitMatrix.from_array(gen)
