"""
Stratified combiners: conditional estimates weighted by exact stratum probabilities.

Hard detection, with ``B ~ Binomial(n, p)`` flips and ``T`` the AB budget::

    BLER = sum_{b<=AB} P(err | b) P(B=b) + P(B > AB)
    E[Q] = sum_{b<=AB} E[Q | b] P(B=b) + T P(B > AB)

Soft detection conditions on the mask length ``L`` and the flips ``B_u`` inside
the mask, given that no reliable bit flipped (probability ``1 - merr``). A
reliable flip can never be undone, so::

    BLER = merr + (1 - merr) * sum_l P(L=l) sum_{b_u} P(err | l, b_u) P(B_u=b_u | l)

Flip counts past the budget-reachable weight cannot decode correctly and count
as errors at ``Q = min(T, 2^l)``; cells with probability below ``floor`` that
were not simulated are folded the same way.
"""

from __future__ import annotations

import logging
import math
from dataclasses import asdict, dataclass
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence, Set, Tuple, Union

import numpy as np
from scipy.stats import binom

from grandpolar.channel.bpsk import ChannelModel, MaskSpec, binomial_pmfs, binomial_tail, flip_prob, uncoded_bler
from grandpolar.decoding.grand import GuessBudget
from grandpolar.decoding.patterns import count_up_to_weight, weight_covered_by
from grandpolar.errors import StrataError
from grandpolar.sim.conditional import ConditionalStats

logger = logging.getLogger(__name__)

DEFAULT_FLOOR = 1e-10
AB_THRESHOLD = 1.0 / 3.0


@dataclass(frozen=True)
class CurvePoint:
    """
    One SNR point. ``bler = bler_wrong + bler_abandon + bler_tail``: wrong
    codewords and abandonments inside simulated strata, plus the closed-form
    remainder (flips past AB, unreachable or folded cells, mask errors).
    """

    snr_db: float
    bler: float
    mean_q: float
    bler_wrong: float
    bler_abandon: float
    bler_tail: float
    bler_se: float
    mean_q_se: float = 0.0
    ab: Optional[int] = None
    merr: Optional[float] = None
    budget: Optional[int] = None
    uncoded_bler: Optional[float] = None
    mean_q_bound: Optional[float] = None

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def unreliable_prob(mask: MaskSpec) -> float:
    """Probability a bit is masked given that no reliable bit flipped."""
    return min(1.0, mask.q / (1.0 - mask.reliable_flip))


def combine_hard(stats: Mapping[int, ConditionalStats], ch: ChannelModel, ab: int) -> CurvePoint:
    n = ch.n
    if not 0 <= ab <= n:
        raise StrataError(f"abandonment weight must lie in 0..{n}, got {ab}")
    missing = [b for b in range(ab + 1) if b not in stats]
    if missing:
        raise StrataError(f"no conditional stratum for b={missing} (AB={ab})")
    T = count_up_to_weight(n, ab)
    for b in range(ab + 1):
        if stats[b].budget is not None and stats[b].budget != T:
            raise StrataError(f"stratum b={b} was simulated with budget {stats[b].budget}, AB={ab} needs {T}")

    p = flip_prob(ch)
    pmf = binomial_pmfs(n, p)
    tail = binomial_tail(n, p, ab)
    wrong = sum(pmf[b] * stats[b].cond_wrong for b in range(ab + 1))
    abandon = sum(pmf[b] * stats[b].cond_abandon for b in range(ab + 1))
    mean_q = sum(pmf[b] * stats[b].mean_q for b in range(ab + 1)) + T * tail
    var = sum(pmf[b] ** 2 * stats[b].cond_bler * (1 - stats[b].cond_bler) / stats[b].trials for b in range(ab + 1))
    var_q = sum(pmf[b] ** 2 * stats[b].var_q / stats[b].trials for b in range(ab + 1))
    return CurvePoint(
        snr_db=ch.snr_db,
        bler=min(1.0, float(wrong + abandon + tail)),
        mean_q=float(mean_q),
        bler_wrong=float(wrong),
        bler_abandon=float(abandon),
        bler_tail=float(tail),
        bler_se=math.sqrt(var),
        mean_q_se=math.sqrt(var_q),
        ab=ab,
        budget=T,
        uncoded_bler=uncoded_bler(ch),
    )


def _query_cap(budget: GuessBudget, l: int) -> float:
    return float(budget.limit(l))


def reachable_weight(l: int, budget: GuessBudget) -> int:
    """Heaviest flip count that can still be found correctly on an ``l``-bit mask."""
    if budget.T is None:
        return l
    full = weight_covered_by(l, budget.T)
    if full >= l or count_up_to_weight(l, full) == budget.T:
        return min(full, l)
    return full + 1


def soft_grid(
    n: int, masks: Iterable[MaskSpec], budget: GuessBudget, floor: float = DEFAULT_FLOOR
) -> List[Tuple[int, int]]:
    """Cells ``(l, b_u)`` whose probability reaches ``floor`` under any of ``masks``."""
    cells: Set[Tuple[int, int]] = set()
    for mask in masks:
        p_l = binomial_pmfs(n, unreliable_prob(mask))
        for l in np.flatnonzero(p_l >= floor).tolist():
            top = reachable_weight(l, budget)
            p_b = np.exp(binom.logpmf(np.arange(top + 1), l, mask.p_u))
            cells.update((l, int(b)) for b in np.flatnonzero(p_l[l] * p_b >= floor))
    return sorted(cells)


def combine_soft(
    stats: Mapping[Tuple[int, int], ConditionalStats],
    mask: MaskSpec,
    ch: ChannelModel,
    budget: GuessBudget,
    floor: float = DEFAULT_FLOOR,
) -> CurvePoint:
    n = ch.n
    q = unreliable_prob(mask)
    p_l = binomial_pmfs(n, q)

    wrong = abandon = tail = 0.0
    mean_q = var = var_q = 0.0
    folded = 0
    for l in range(n + 1):
        if p_l[l] == 0.0:
            continue
        top = reachable_weight(l, budget)
        cap = _query_cap(budget, l)
        p_b = np.exp(binom.logpmf(np.arange(l + 1), l, mask.p_u))
        for b_u in range(top + 1):
            w = p_l[l] * p_b[b_u]
            cell = stats.get((l, b_u))
            if cell is None and b_u == 0:
                cell = ConditionalStats.exact_zero(l=l, budget=budget.T)
            if cell is None:
                if w >= floor:
                    raise StrataError(f"no conditional stratum for l={l}, b_u={b_u} (weight {w:.3g})")
                folded += 1
                tail += w
                mean_q += w * cap
                continue
            if cell.budget != budget.T:
                raise StrataError(f"stratum l={l}, b_u={b_u} was simulated with budget {cell.budget}, need {budget}")
            wrong += w * cell.cond_wrong
            abandon += w * cell.cond_abandon
            mean_q += w * cell.mean_q
            var += w * w * cell.cond_bler * (1 - cell.cond_bler) / cell.trials
            var_q += w * w * cell.var_q / cell.trials
        over = float(p_b[top + 1 :].sum())
        tail += p_l[l] * over
        mean_q += p_l[l] * over * cap

    if folded:
        logger.debug("combine_soft: %d low-probability cells folded as errors", folded)
    keep = 1.0 - mask.merr
    bler = mask.merr + keep * (wrong + abandon + tail)
    return CurvePoint(
        snr_db=ch.snr_db,
        bler=min(1.0, bler),
        mean_q=float(mean_q),
        bler_wrong=keep * wrong,
        bler_abandon=keep * abandon,
        bler_tail=mask.merr + keep * tail,
        bler_se=keep * math.sqrt(var),
        mean_q_se=keep * math.sqrt(var_q),
        merr=mask.merr,
        budget=budget.T,
        uncoded_bler=uncoded_bler(ch),
        mean_q_bound=float(keep * mean_q + mask.merr * _query_cap(budget, n)),
    )


def select_ab(
    cond_blers: Union[Sequence[float], Mapping[int, Union[float, ConditionalStats]]],
    threshold: float = AB_THRESHOLD,
) -> int:
    """Largest AB whose strata ``b <= AB`` all keep the conditional BLER at or below ``threshold``."""
    if isinstance(cond_blers, Mapping):
        values = []
        for b in range(len(cond_blers)):
            if b not in cond_blers:
                raise StrataError(f"select_ab needs contiguous strata from b=0; b={b} is missing")
            v = cond_blers[b]
            values.append(v.cond_bler if isinstance(v, ConditionalStats) else float(v))
    else:
        values = [float(v) for v in cond_blers]
    ab = 0
    for b, v in enumerate(values):
        if v > threshold:
            break
        ab = b
    return ab
