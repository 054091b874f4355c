"""
GRAND, GRANDAB and SGRANDAB.

Every decoder queries noise patterns ``z`` in likelihood order and stops at the
first ``y ^ z`` with zero syndrome, i.e. the first ``z`` with ``H z = H y``.
Q counts membership queries including the successful one and never exceeds the
budget; when nothing decodes, Q is the number of patterns actually tried
(the budget, or ``2^l`` for an exhausted mask of size ``l``).

Two engines share those semantics:

``table``
    Whole colex ranges of pattern syndromes are formed with numpy. The
    weight-w syndromes with largest flip position ``j`` are the weight-(w-1)
    syndromes over positions ``< j`` XOR column ``j``, so each weight class is
    the concatenation of such ranges and the first row equal to ``H y`` is the
    lowest-rank hit.
``cursor``
    Steps a ``PatternCursor`` and updates the syndrome by the cursor's flip
    deltas, one column XOR per toggled position. With ``workers > 1`` each
    weight class is split into contiguous colex ranges, every range is
    scanned from its own ``PatternCursor.starting_at``, and the lowest-rank
    hit over all ranges wins, so Q matches the serial scan.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache, partial
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from grandpolar.codes.ca_polar import Code
from grandpolar.decoding.patterns import (
    PatternCursor,
    binomial,
    colex_ranges,
    colex_unrank,
    count_up_to_weight,
)
from grandpolar.errors import DimensionError
from grandpolar.gf2 import BitVector

logger = logging.getLogger(__name__)

ENGINES = ("table", "cursor")
DEFAULT_CACHE_WEIGHT = 3


@dataclass(frozen=True)
class GuessBudget:
    """Query budget ``T``; ``None`` is unbounded (plain GRAND)."""

    T: Optional[int] = None

    def __post_init__(self) -> None:
        if self.T is not None and self.T < 1:
            raise ValueError(f"guess budget must be a positive integer, got {self.T}")

    @classmethod
    def unbounded(cls) -> "GuessBudget":
        return cls(None)

    @classmethod
    def for_weight(cls, n: int, w: int) -> "GuessBudget":
        return cls(count_up_to_weight(n, w))

    @property
    def bounded(self) -> bool:
        return self.T is not None

    def limit(self, support_size: int) -> int:
        """Queries a decode over ``support_size`` positions may make."""
        space = 1 << support_size
        return space if self.T is None else min(self.T, space)

    def __str__(self) -> str:
        return "unbounded" if self.T is None else str(self.T)


@dataclass(frozen=True)
class DecodeOutcome:
    codeword: Optional[BitVector]
    success: bool
    queries: int

    @property
    def d(self) -> int:
        return int(self.success)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "codeword": self.codeword.to_hex() if self.codeword is not None else None,
            "success": self.d,
            "queries": self.queries,
        }


class SyndromeSpace:
    """
    Colex-ordered syndromes of all patterns over a fixed support.

    ``cols[i]`` is the packed H column of the i-th support position. Weight
    classes up to ``cache_weight`` are materialised on first use; heavier ones
    are streamed block by block.
    """

    def __init__(self, cols: np.ndarray, cache_weight: int = DEFAULT_CACHE_WEIGHT) -> None:
        self.cols = cols
        self.m = cols.shape[0]
        self.cache_weight = cache_weight
        self._tables: Dict[int, np.ndarray] = {0: np.zeros((1, cols.shape[1]), dtype=np.uint64)}

    def table(self, w: int) -> np.ndarray:
        """All weight-``w`` syndromes in colex order."""
        if w not in self._tables:
            prev = self.table(w - 1)
            parts = [prev[: binomial(j, w - 1)] ^ self.cols[j] for j in range(w - 1, self.m)]
            self._tables[w] = (
                np.concatenate(parts) if parts else np.zeros((0, self.cols.shape[1]), dtype=np.uint64)
            )
            logger.debug("syndrome table: weight %d over %d positions, %d rows", w, self.m, len(self._tables[w]))
        return self._tables[w]

    def blocks(self, w: int, limit: int) -> Iterator[Tuple[int, np.ndarray]]:
        """``(first rank, syndromes)`` ranges covering weight-``w`` subsets of ``0..limit-1``."""
        if w <= self.cache_weight:
            rows = binomial(limit, w)
            if rows:
                yield 0, self.table(w)[:rows]
            return
        offset = 0
        for j in range(w - 1, limit):
            for start, block in self.blocks(w - 1, j):
                yield offset + start, block ^ self.cols[j]
            offset += binomial(j, w - 1)

    def first_match(self, target: np.ndarray, max_queries: int) -> Optional[Tuple[int, int]]:
        """``(weight, colex rank)`` of the lowest-rank pattern hitting ``target`` within budget."""
        base = 0
        for w in range(self.m + 1):
            if base >= max_queries:
                return None
            for start, block in self.blocks(w, self.m):
                if base + start >= max_queries:
                    return None
                hits = np.flatnonzero(np.all(block == target, axis=1))
                if hits.size:
                    rank = start + int(hits[0])
                    return (w, rank) if base + rank < max_queries else None
            base += binomial(self.m, w)
        return None


def _word_ints(words: np.ndarray) -> List[int]:
    return [sum(int(x) << (64 * i) for i, x in enumerate(row)) for row in words]


class GrandDecoder:
    """Noise-guessing decoder bound to one code; reusable and safe to share."""

    def __init__(
        self, code: Code, engine: str = "table", cache_weight: int = DEFAULT_CACHE_WEIGHT, workers: int = 1
    ) -> None:
        if engine not in ENGINES:
            raise ValueError(f"unknown engine {engine!r}; choose from {', '.join(ENGINES)}")
        if workers < 1:
            raise ValueError(f"workers must be positive, got {workers}")
        if workers > 1 and engine != "cursor":
            raise ValueError("range-split workers need the cursor engine")
        self.code = code
        self.engine = engine
        self.workers = workers
        self.cache_weight = cache_weight
        self._full: Optional[SyndromeSpace] = None
        self._col_ints: Optional[List[int]] = None

    def _check(self, y: BitVector, s: Optional[BitVector]) -> None:
        if len(y) != self.code.n:
            raise DimensionError(f"received word has {len(y)} bits, code length is {self.code.n}")
        if s is not None and len(s) != self.code.n:
            raise DimensionError(f"mask has {len(s)} bits, code length is {self.code.n}")

    def decode(
        self,
        y: BitVector,
        budget: GuessBudget = GuessBudget(),
        mask: Optional[BitVector] = None,
    ) -> DecodeOutcome:
        """Decode ``y``; ``mask`` (1 = unreliable) restricts which bits may flip."""
        self._check(y, mask)
        support = list(range(self.code.n)) if mask is None else mask.indices()
        target = self.code.syndrome(y).words
        limit = budget.limit(len(support))
        if self.engine == "table":
            positions, queries = self._search_table(target, support, limit, len(support) == self.code.n)
        else:
            positions, queries = self._search_cursor(target, support, limit)
        if positions is None:
            return DecodeOutcome(None, False, queries)
        return DecodeOutcome(y ^ BitVector.from_indices(self.code.n, positions), True, queries)

    def _space(self, support: Sequence[int], full: bool) -> SyndromeSpace:
        if full:
            if self._full is None:
                self._full = SyndromeSpace(self.code.h_columns, self.cache_weight)
            return self._full
        cols = self.code.h_columns[np.asarray(support, dtype=np.int64)]
        return SyndromeSpace(cols, self.cache_weight)

    def _search_table(
        self, target: np.ndarray, support: Sequence[int], limit: int, full: bool
    ) -> Tuple[Optional[List[int]], int]:
        hit = self._space(support, full).first_match(target, limit)
        if hit is None:
            return None, limit
        w, rank = hit
        queries = (count_up_to_weight(len(support), w - 1) if w else 0) + rank + 1
        return [support[i] for i in colex_unrank(rank, w)], queries

    def _columns(self) -> List[int]:
        if self._col_ints is None:
            self._col_ints = _word_ints(self.code.h_columns)
        return self._col_ints

    def _search_cursor(
        self, target: np.ndarray, support: Sequence[int], limit: int
    ) -> Tuple[Optional[List[int]], int]:
        acc = _word_ints(target.reshape(1, -1))[0]
        if self.workers > 1:
            return self._search_ranges(acc, support, limit)
        cols = self._columns()
        cursor = PatternCursor(self.code.n, support)
        queries = 0
        while queries < limit:
            deltas = cursor.advance()
            if deltas is None:
                break
            queries += 1
            for p in deltas:
                acc ^= cols[p]
            if acc == 0:
                return list(cursor.positions()), queries
        return None, queries

    def _scan_range(self, acc: int, support: Sequence[int], w: int, bounds: Tuple[int, int]) -> Optional[int]:
        """Lowest weight-``w`` colex rank in ``[start, stop)`` whose syndrome cancels ``acc``."""
        start, stop = bounds
        cols = self._columns()
        cursor = PatternCursor.starting_at(self.code.n, support, w, start)
        for rank in range(start, stop):
            for p in cursor.advance() or ():
                acc ^= cols[p]
            if acc == 0:
                return rank
        return None

    def _search_ranges(self, acc: int, support: Sequence[int], limit: int) -> Tuple[Optional[List[int]], int]:
        m = len(support)
        base = 0
        with ThreadPoolExecutor(max_workers=self.workers) as pool:
            for w in range(m + 1):
                if base >= limit:
                    break
                last = min(binomial(m, w), limit - base)
                ranges = [(a, min(b, last)) for a, b in colex_ranges(m, w, self.workers) if a < last]
                hits = [r for r in pool.map(partial(self._scan_range, acc, support, w), ranges) if r is not None]
                if hits:
                    rank = min(hits)
                    return [support[i] for i in colex_unrank(rank, w)], base + rank + 1
                base += binomial(m, w)
        return None, limit


@lru_cache(maxsize=16)
def decoder_for(code: Code, engine: str = "table", workers: int = 1) -> GrandDecoder:
    return GrandDecoder(code, engine=engine, workers=workers)


def grand_decode(y: BitVector, code: Code, budget: GuessBudget = GuessBudget(), engine: str = "table") -> DecodeOutcome:
    return decoder_for(code, engine).decode(y, budget)


def grandab_decode(y: BitVector, code: Code, ab: int, engine: str = "table") -> DecodeOutcome:
    """GRAND abandoning after every pattern of weight ``<= ab`` has been tried."""
    if not 0 <= ab <= code.n:
        raise ValueError(f"abandonment weight must lie in 0..{code.n}, got {ab}")
    return decoder_for(code, engine).decode(y, GuessBudget.for_weight(code.n, ab))


def sgrandab_decode(
    y: BitVector, s: BitVector, code: Code, budget: GuessBudget, engine: str = "table"
) -> DecodeOutcome:
    """Masked GRAND: only bits with ``s = 1`` may be flipped."""
    return decoder_for(code, engine).decode(y, budget, mask=s)


def sgrandab_budget(n: int, w: int) -> GuessBudget:
    """Query count of all patterns up to weight ``w`` on ``n`` bits, whatever the mask size."""
    return GuessBudget.for_weight(n, w)
