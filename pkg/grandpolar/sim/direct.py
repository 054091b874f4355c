"""End-to-end Monte-Carlo: sample the channel, decode, count."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Any, Dict, Optional

import numpy as np

from grandpolar.channel.bpsk import (
    STREAM_DIRECT,
    ChannelModel,
    MaskSpec,
    random_bits,
    rng_for,
    sample_received,
)
from grandpolar.codes.ca_polar import Code, encode
from grandpolar.decoding.grand import GuessBudget, decoder_for
from grandpolar.sim.conditional import ABANDONED, WRONG, TrialRecords, outcome_status
from grandpolar.sim.pool import resolve_jobs, run_tasks, trial_chunks

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DirectStats:
    snr_db: float
    trials: int
    wrong: int
    abandoned: int
    q_total: int
    budget: Optional[int] = None
    merr: Optional[float] = None

    @property
    def errors(self) -> int:
        return self.wrong + self.abandoned

    @property
    def bler(self) -> float:
        return self.errors / self.trials

    @property
    def bler_se(self) -> float:
        return math.sqrt(self.bler * (1 - self.bler) / self.trials)

    @property
    def mean_q(self) -> float:
        return self.q_total / self.trials

    def to_dict(self) -> Dict[str, Any]:
        return {
            "snr_db": self.snr_db,
            "trials": self.trials,
            "bler": self.bler,
            "bler_se": self.bler_se,
            "wrong": self.wrong,
            "abandoned": self.abandoned,
            "mean_q": self.mean_q,
            "budget": self.budget,
            "merr": self.merr,
        }


def direct_trials(
    code: Code,
    ch: ChannelModel,
    mask: Optional[MaskSpec],
    budget: GuessBudget,
    seed: int,
    start: int,
    stop: int,
    engine: str = "table",
) -> TrialRecords:
    decoder = decoder_for(code, engine)
    queries = np.empty(stop - start, dtype=np.int64)
    status = np.empty(stop - start, dtype=np.int8)
    for i, trial in enumerate(range(start, stop)):
        rng = rng_for(seed, STREAM_DIRECT, trial)
        c = encode(code, random_bits(code.k, rng))
        rx = sample_received(c, ch, mask, rng)
        out = decoder.decode(rx.y, budget, mask=rx.s if mask is not None else None)
        queries[i] = out.queries
        status[i] = outcome_status(out.codeword, c)
    return TrialRecords(queries, status)


def simulate_direct(
    code: Code,
    ch: ChannelModel,
    trials: int,
    seed: int,
    budget: GuessBudget = GuessBudget(),
    mask: Optional[MaskSpec] = None,
    jobs: Optional[int] = None,
    engine: str = "table",
) -> DirectStats:
    """Transmit ``trials`` random codewords over ``ch``; SGRANDAB when ``mask`` is given."""
    if trials < 1:
        raise ValueError(f"trials must be positive, got {trials}")
    if ch.n != code.n:
        raise ValueError(f"channel block length {ch.n} differs from code length {code.n}")
    jobs = resolve_jobs(jobs)
    logger.info("direct run at %g dB: %d trials, budget %s, seed %d, %d jobs", ch.snr_db, trials, budget, seed, jobs)
    tasks = [(code, ch, mask, budget, seed, start, stop, engine) for start, stop in trial_chunks(trials, jobs)]
    rec = TrialRecords.concat(run_tasks(direct_trials, tasks, jobs))
    return DirectStats(
        snr_db=ch.snr_db,
        trials=len(rec),
        wrong=int(np.count_nonzero(rec.status == WRONG)),
        abandoned=int(np.count_nonzero(rec.status == ABANDONED)),
        q_total=int(rec.queries.sum()),
        budget=budget.T,
        merr=mask.merr if mask is not None else None,
    )
