"""
Polar transform and information-set selection.

Rows follow natural (non bit-reversed) index order, as in TS 38.212.
"""

from __future__ import annotations

from typing import Iterable, List

import numpy as np

from grandpolar.codes.ts38212 import reliability_sequence
from grandpolar.errors import ConstructionError
from grandpolar.gf2 import BitMatrix

KERNEL = np.array([[1, 0], [1, 1]], dtype=np.uint8)


def _log2_exact(n: int) -> int:
    if n < 1 or n & (n - 1):
        raise ConstructionError(f"polar block length must be a power of two, got {n}")
    return n.bit_length() - 1


def kernel_power(n: int) -> np.ndarray:
    """m-fold Kronecker power of ``[[1,0],[1,1]]`` for ``n = 2^m``."""
    m = _log2_exact(n)
    out = np.ones((1, 1), dtype=np.uint8)
    for _ in range(m):
        out = np.kron(out, KERNEL)
    return out


def polar_generator(n: int, info_set: Iterable[int]) -> BitMatrix:
    """Rows of the polar transform indexed by ``info_set``, ascending."""
    rows = sorted(set(int(i) for i in info_set))
    full = kernel_power(n)
    if rows and (rows[0] < 0 or rows[-1] >= n):
        raise ConstructionError(f"information set index outside 0..{n - 1}")
    if not rows:
        return BitMatrix.zeros(0, n)
    return BitMatrix.from_array(full[rows])


def bhattacharyya_parameters(n: int, design: float = 0.5) -> np.ndarray:
    """Bhattacharyya parameters of the ``n`` bit channels of a BEC(design)."""
    m = _log2_exact(n)
    z = np.array([design])
    for _ in range(m):
        nxt = np.empty(2 * z.size)
        nxt[0::2] = 2 * z - z * z
        nxt[1::2] = z * z
        z = nxt
    return z


def bhattacharyya_info_set(n: int, size: int, design: float = 0.5) -> List[int]:
    """Indices of the ``size`` most reliable bit channels (smallest Z)."""
    if not 0 <= size <= n:
        raise ConstructionError(f"cannot select {size} of {n} polar rows")
    z = bhattacharyya_parameters(n, design)
    # stable sort on (Z, -index): ties go to the larger index
    order = np.lexsort((-np.arange(n), z))
    return sorted(order[:size].tolist())


def ts38212_info_set(n: int, size: int) -> List[int]:
    """The ``size`` most reliable indices of the TS 38.212 polar sequence."""
    _log2_exact(n)
    if not 0 <= size <= n:
        raise ConstructionError(f"cannot select {size} of {n} polar rows")
    seq = reliability_sequence(n)
    return sorted(seq[n - size :])
