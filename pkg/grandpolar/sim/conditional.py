"""
Conditional Monte-Carlo strata.

A hard stratum fixes the number of flipped bits ``b``; a soft stratum fixes the
mask length ``l`` and the number ``b_u`` of flips inside the mask. Trials draw
from ``rng_for(seed, stream, *stratum, trial)``, so results do not depend on
how trials are split across workers.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.stats import binomtest

from grandpolar.channel.bpsk import (
    STREAM_CONDITIONAL_HARD,
    STREAM_CONDITIONAL_SOFT,
    random_bits,
    rng_for,
    sample_flip_positions,
)
from grandpolar.codes.ca_polar import Code, encode
from grandpolar.decoding.grand import GuessBudget, decoder_for
from grandpolar.gf2 import BitVector
from grandpolar.sim.pool import resolve_jobs, run_tasks, trial_chunks

logger = logging.getLogger(__name__)

CORRECT, WRONG, ABANDONED = 0, 1, 2


@dataclass(frozen=True)
class TrialRecords:
    """Per-trial ``Q`` and status (CORRECT / WRONG / ABANDONED)."""

    queries: np.ndarray
    status: np.ndarray

    @classmethod
    def concat(cls, parts: Sequence["TrialRecords"]) -> "TrialRecords":
        if not parts:
            return cls(np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int8))
        return cls(np.concatenate([p.queries for p in parts]), np.concatenate([p.status for p in parts]))

    def __len__(self) -> int:
        return int(self.queries.size)

    def rethreshold(self, budget: GuessBudget) -> "TrialRecords":
        """Outcomes under a smaller budget: a decode needing more queries is abandoned at ``T``."""
        if budget.T is None:
            return self
        over = self.queries > budget.T
        status = np.where(over, ABANDONED, self.status).astype(np.int8)
        return TrialRecords(np.minimum(self.queries, budget.T), status)


@dataclass(frozen=True)
class ConditionalStats:
    b: int
    trials: int
    wrong: int
    abandoned: int
    q_hist: Tuple[Tuple[int, int], ...]
    l: Optional[int] = None
    budget: Optional[int] = None

    @classmethod
    def from_records(
        cls, records: TrialRecords, b: int, l: Optional[int] = None, budget: Optional[int] = None
    ) -> "ConditionalStats":
        if len(records) == 0:
            raise ValueError("a stratum needs at least one trial")
        values, counts = np.unique(records.queries, return_counts=True)
        return cls(
            b=b,
            trials=len(records),
            wrong=int(np.count_nonzero(records.status == WRONG)),
            abandoned=int(np.count_nonzero(records.status == ABANDONED)),
            q_hist=tuple((int(v), int(c)) for v, c in zip(values, counts)),
            l=l,
            budget=budget,
        )

    @classmethod
    def exact_zero(cls, l: Optional[int] = None, budget: Optional[int] = None, trials: int = 1) -> "ConditionalStats":
        """The noiseless stratum: the zero pattern decodes at ``Q = 1``."""
        return cls(b=0, trials=trials, wrong=0, abandoned=0, q_hist=((1, trials),), l=l, budget=budget)

    @property
    def soft(self) -> bool:
        return self.l is not None

    @property
    def errors(self) -> int:
        return self.wrong + self.abandoned

    @property
    def cond_bler(self) -> float:
        return self.errors / self.trials

    @property
    def cond_wrong(self) -> float:
        return self.wrong / self.trials

    @property
    def cond_abandon(self) -> float:
        return self.abandoned / self.trials

    @property
    def mean_q(self) -> float:
        return sum(q * c for q, c in self.q_hist) / self.trials

    @property
    def var_q(self) -> float:
        mean = self.mean_q
        return sum(c * (q - mean) ** 2 for q, c in self.q_hist) / self.trials

    @property
    def q_cdf(self) -> List[Tuple[int, float]]:
        out, seen = [], 0
        for q, c in self.q_hist:
            seen += c
            out.append((q, seen / self.trials))
        return out

    def bler_interval(self, confidence: float = 0.95) -> Tuple[float, float]:
        """Wilson interval for ``cond_bler``."""
        ci = binomtest(self.errors, self.trials).proportion_ci(confidence_level=confidence, method="wilson")
        return float(ci.low), float(ci.high)

    def condition(self) -> Dict[str, int]:
        return {"b": self.b} if self.l is None else {"l": self.l, "b_u": self.b}


def outcome_status(decoded: Optional[BitVector], c: BitVector) -> int:
    if decoded is None:
        return ABANDONED
    return CORRECT if decoded == c else WRONG


def hard_trials(
    code: Code, b: int, budget: GuessBudget, seed: int, start: int, stop: int, engine: str = "table"
) -> TrialRecords:
    """Trials ``start..stop-1`` of hard stratum ``b``."""
    decoder = decoder_for(code, engine)
    queries = np.empty(stop - start, dtype=np.int64)
    status = np.empty(stop - start, dtype=np.int8)
    for i, trial in enumerate(range(start, stop)):
        rng = rng_for(seed, STREAM_CONDITIONAL_HARD, b, trial)
        c = encode(code, random_bits(code.k, rng))
        y = c ^ sample_flip_positions(code.n, b, rng)
        out = decoder.decode(y, budget)
        queries[i] = out.queries
        status[i] = outcome_status(out.codeword, c)
    return TrialRecords(queries, status)


def soft_trials(
    code: Code, l: int, b_u: int, budget: GuessBudget, seed: int, start: int, stop: int, engine: str = "table"
) -> TrialRecords:
    """Trials of soft stratum ``(l, b_u)``: random ``l``-bit mask, ``b_u`` flips inside it."""
    decoder = decoder_for(code, engine)
    queries = np.empty(stop - start, dtype=np.int64)
    status = np.empty(stop - start, dtype=np.int8)
    for i, trial in enumerate(range(start, stop)):
        rng = rng_for(seed, STREAM_CONDITIONAL_SOFT, l, b_u, trial)
        c = encode(code, random_bits(code.k, rng))
        mask = np.sort(rng.choice(code.n, size=l, replace=False))
        flips = mask[rng.choice(l, size=b_u, replace=False)] if b_u else []
        s = BitVector.from_indices(code.n, mask.tolist())
        y = c ^ BitVector.from_indices(code.n, list(flips))
        out = decoder.decode(y, budget, mask=s)
        queries[i] = out.queries
        status[i] = outcome_status(out.codeword, c)
    return TrialRecords(queries, status)


def _hard_budget(n: int, ab: Optional[int]) -> GuessBudget:
    if ab is None:
        return GuessBudget.unbounded()
    if not 0 <= ab <= n:
        raise ValueError(f"abandonment weight must lie in 0..{n}, got {ab}")
    return GuessBudget.for_weight(n, ab)


def hard_records(
    code: Code,
    flips: Iterable[int],
    budget: GuessBudget,
    trials: int,
    seed: int,
    jobs: Optional[int] = None,
    engine: str = "table",
) -> Dict[int, TrialRecords]:
    """Raw trial records for several hard strata, scheduled as one batch."""
    jobs = resolve_jobs(jobs)
    flips = sorted(set(flips))
    for b in flips:
        if not 0 <= b <= code.n:
            raise ValueError(f"flip count must lie in 0..{code.n}, got {b}")
    tasks = [
        (code, b, budget, seed, start, stop, engine)
        for b in flips
        for start, stop in trial_chunks(trials, jobs)
    ]
    logger.info("hard strata b=%s: %d trials each, budget %s, seed %d, %d jobs", flips, trials, budget, seed, jobs)
    results = run_tasks(hard_trials, tasks, jobs)
    out: Dict[int, List[TrialRecords]] = {b: [] for b in flips}
    for task, rec in zip(tasks, results):
        out[task[1]].append(rec)
    return {b: TrialRecords.concat(parts) for b, parts in out.items()}


def run_conditional_hard(
    code: Code,
    b: int,
    ab: Optional[int],
    trials: int,
    seed: int,
    jobs: Optional[int] = None,
    engine: str = "table",
) -> ConditionalStats:
    """GRANDAB on random codewords hit by exactly ``b`` flips; ``ab=None`` is plain GRAND."""
    if trials < 1:
        raise ValueError(f"trials must be positive, got {trials}")
    budget = _hard_budget(code.n, ab)
    records = hard_records(code, [b], budget, trials, seed, jobs, engine)[b]
    return ConditionalStats.from_records(records, b, budget=budget.T)


def hard_strata(
    code: Code,
    ab_values: Sequence[int],
    trials: int,
    seed: int,
    jobs: Optional[int] = None,
    engine: str = "table",
) -> Dict[int, Dict[int, ConditionalStats]]:
    """
    Strata ``b = 0..AB`` for every requested AB from one batch of simulations.

    Trials run once under the largest budget; a smaller budget's outcome is
    the same decode truncated at its ``T``.
    """
    if not ab_values:
        return {}
    top = max(ab_values)
    records = hard_records(code, range(top + 1), _hard_budget(code.n, top), trials, seed, jobs, engine)
    out: Dict[int, Dict[int, ConditionalStats]] = {}
    for ab in sorted(set(ab_values)):
        budget = _hard_budget(code.n, ab)
        out[ab] = {
            b: ConditionalStats.from_records(records[b].rethreshold(budget), b, budget=budget.T)
            for b in range(ab + 1)
        }
    return out


def run_conditional_soft(
    code: Code,
    l: int,
    b_u: int,
    budget: GuessBudget,
    trials: int,
    seed: int,
    jobs: Optional[int] = None,
    engine: str = "table",
) -> ConditionalStats:
    """SGRANDAB on random codewords with a random ``l``-bit mask holding ``b_u`` flips."""
    return soft_strata(code, [(l, b_u)], budget, trials, seed, jobs, engine, exact_zero=False)[(l, b_u)]


def soft_strata(
    code: Code,
    grid: Iterable[Tuple[int, int]],
    budget: GuessBudget,
    trials: int,
    seed: int,
    jobs: Optional[int] = None,
    engine: str = "table",
    exact_zero: bool = True,
) -> Dict[Tuple[int, int], ConditionalStats]:
    """Soft strata over ``grid``; ``b_u = 0`` strata are filled exactly unless ``exact_zero`` is off."""
    if trials < 1:
        raise ValueError(f"trials must be positive, got {trials}")
    jobs = resolve_jobs(jobs)
    cells = sorted(set(grid))
    for l, b_u in cells:
        if not 0 <= b_u <= l <= code.n:
            raise ValueError(f"need 0 <= b_u <= l <= {code.n}, got l={l} b_u={b_u}")
    out: Dict[Tuple[int, int], ConditionalStats] = {}
    simulate = []
    for l, b_u in cells:
        if b_u == 0 and exact_zero:
            out[(l, 0)] = ConditionalStats.exact_zero(l=l, budget=budget.T, trials=trials)
        else:
            simulate.append((l, b_u))
    tasks = [
        (code, l, b_u, budget, seed, start, stop, engine)
        for l, b_u in simulate
        for start, stop in trial_chunks(trials, jobs)
    ]
    if tasks:
        logger.info(
            "soft strata: %d cells x %d trials, budget %s, seed %d, %d jobs",
            len(simulate), trials, budget, seed, jobs,
        )
    grouped: Dict[Tuple[int, int], List[TrialRecords]] = {cell: [] for cell in simulate}
    for task, rec in zip(tasks, run_tasks(soft_trials, tasks, jobs)):
        grouped[(task[1], task[2])].append(rec)
    for (l, b_u), parts in grouped.items():
        out[(l, b_u)] = ConditionalStats.from_records(TrialRecords.concat(parts), b_u, l=l, budget=budget.T)
    return out