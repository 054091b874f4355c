"""
Noise-pattern enumeration in BSC likelihood order.

Patterns come by nondecreasing Hamming weight; within a weight, the flip
subsets follow colexicographic order of their (support-relative) indices, so
a weight-w subset ``c_1 < ... < c_w`` has rank ``sum C(c_i, i)``. Rank of a
pattern over all weights is ``count_up_to_weight(m, w - 1) + colex_rank``.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterator, List, Optional, Sequence, Tuple

from scipy.special import comb

from grandpolar.errors import DimensionError
from grandpolar.gf2 import BitVector


@lru_cache(maxsize=65536)
def binomial(n: int, k: int) -> int:
    """Exact ``C(n, k)``; zero outside ``0 <= k <= n``."""
    if k < 0 or n < 0 or k > n:
        return 0
    return int(comb(n, k, exact=True))


def count_up_to_weight(n_support: int, w: int) -> int:
    """Number of patterns of weight at most ``w`` on ``n_support`` positions."""
    if not 0 <= w <= n_support:
        raise ValueError(f"need 0 <= w <= {n_support}, got w={w}")
    return sum(binomial(n_support, b) for b in range(w + 1))


def weight_covered_by(n_support: int, budget: int) -> int:
    """Largest ``w`` whose full weight class fits in ``budget`` queries, or -1."""
    total, w = 0, -1
    while w < n_support:
        nxt = total + binomial(n_support, w + 1)
        if nxt > budget:
            break
        total, w = nxt, w + 1
    return w


def colex_rank(subset: Sequence[int]) -> int:
    return sum(binomial(c, i + 1) for i, c in enumerate(sorted(subset)))


def colex_unrank(rank: int, w: int) -> List[int]:
    """The weight-``w`` subset at colex position ``rank``, ascending."""
    if rank < 0:
        raise ValueError(f"rank must be nonnegative, got {rank}")
    out = [0] * w
    for i in range(w, 0, -1):
        c = i - 1
        while binomial(c + 1, i) <= rank:
            c += 1
        out[i - 1] = c
        rank -= binomial(c, i)
    return out


def colex_ranges(m: int, w: int, parts: int) -> List[Tuple[int, int]]:
    """Split the ``C(m, w)`` weight-``w`` ranks into contiguous ``[start, stop)`` chunks."""
    if parts < 1:
        raise ValueError(f"parts must be positive, got {parts}")
    total = binomial(m, w)
    parts = max(1, min(parts, total))
    bounds = [total * i // parts for i in range(parts + 1)]
    return [(bounds[i], bounds[i + 1]) for i in range(parts)]


def _colex_successor(c: List[int], m: int) -> bool:
    w = len(c)
    for i in range(w):
        ceiling = c[i + 1] if i + 1 < w else m
        if c[i] + 1 < ceiling:
            c[i] += 1
            for j in range(i):
                c[j] = j
            return True
    return False


class PatternCursor:
    """
    Streaming successor over flip patterns supported on ``support``.

    The first ``advance`` emits the zero pattern; each call returns the
    positions that toggle relative to the previous pattern, or ``None`` once
    weight ``len(support)`` is done.
    """

    __slots__ = ("n", "support", "_combo", "_state", "_emitted")

    _FRESH, _SEEDED, _ACTIVE, _DONE = range(4)

    def __init__(self, n: int, support: Optional[Sequence[int]] = None) -> None:
        positions = tuple(range(n)) if support is None else tuple(sorted(set(int(i) for i in support)))
        if positions and (positions[0] < 0 or positions[-1] >= n):
            raise DimensionError(f"support index outside 0..{n - 1}")
        self.n = n
        self.support: Tuple[int, ...] = positions
        self._combo: List[int] = []
        self._state = self._FRESH
        self._emitted = 0

    @classmethod
    def starting_at(cls, n: int, support: Optional[Sequence[int]], weight: int, rank: int) -> "PatternCursor":
        """Cursor whose first emission is the weight-``weight`` pattern of colex ``rank``."""
        cur = cls(n, support)
        if not 0 <= weight <= len(cur.support) or rank >= binomial(len(cur.support), weight):
            raise ValueError(f"no weight-{weight} pattern of rank {rank} on {len(cur.support)} positions")
        cur._combo = colex_unrank(rank, weight)
        cur._state = cls._SEEDED
        return cur

    @property
    def current_weight(self) -> int:
        return len(self._combo)

    @property
    def emitted(self) -> int:
        return self._emitted

    @property
    def exhausted(self) -> bool:
        return self._state == self._DONE

    def positions(self) -> Tuple[int, ...]:
        """Flip positions of the most recent emission."""
        return tuple(self.support[i] for i in self._combo)

    def advance(self) -> Optional[Tuple[int, ...]]:
        if self._state == self._DONE:
            return None
        if self._state in (self._FRESH, self._SEEDED):
            self._state = self._ACTIVE
            self._emitted += 1
            return self.positions()

        before = set(self._combo)
        if not _colex_successor(self._combo, len(self.support)):
            w = len(self._combo) + 1
            if w > len(self.support):
                self._state = self._DONE
                return None
            self._combo = list(range(w))
        self._emitted += 1
        return tuple(self.support[i] for i in sorted(before.symmetric_difference(self._combo)))

    def next_pattern(self) -> Optional[BitVector]:
        if self.advance() is None:
            return None
        return BitVector.from_indices(self.n, self.positions())

    def __iter__(self) -> Iterator[BitVector]:
        while True:
            pattern = self.next_pattern()
            if pattern is None:
                return
            yield pattern


def masked_cursor(n: int, s: BitVector) -> PatternCursor:
    """Cursor over the set bits of ``s`` (1 = unreliable, may flip)."""
    if len(s) != n:
        raise DimensionError(f"mask has {len(s)} bits, expected {n}")
    return PatternCursor(n, s.indices())
