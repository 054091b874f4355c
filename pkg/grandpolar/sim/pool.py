"""Process pool for (stratum, trial range) tasks with order-preserving results."""

from __future__ import annotations

import logging
import os
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Callable, List, Optional, Sequence, Tuple

logger = logging.getLogger(__name__)

JOBS_ENV = "GRANDPOLAR_JOBS"
MIN_CHUNK = 250


def default_jobs() -> int:
    raw = os.environ.get(JOBS_ENV, "").strip()
    if not raw:
        return 1
    try:
        jobs = int(raw)
    except ValueError:
        logger.warning("ignoring %s=%r: not an integer", JOBS_ENV, raw)
        return 1
    return max(1, jobs)


def resolve_jobs(jobs: Optional[int]) -> int:
    return default_jobs() if jobs is None else max(1, int(jobs))


def trial_chunks(trials: int, jobs: int, min_chunk: int = MIN_CHUNK) -> List[Tuple[int, int]]:
    """Contiguous ``[start, stop)`` trial ranges; a single range when serial."""
    if trials <= 0:
        return []
    if jobs <= 1:
        return [(0, trials)]
    parts = max(1, min(4 * jobs, trials // min_chunk))
    bounds = [trials * i // parts for i in range(parts + 1)]
    return [(bounds[i], bounds[i + 1]) for i in range(parts) if bounds[i] < bounds[i + 1]]


def run_tasks(fn: Callable[..., Any], tasks: Sequence[Tuple[Any, ...]], jobs: int) -> List[Any]:
    """``[fn(*t) for t in tasks]``, fanned out over ``jobs`` processes."""
    if jobs <= 1 or len(tasks) <= 1:
        return [fn(*t) for t in tasks]
    width = min(jobs, len(tasks))
    logger.debug("dispatching %d tasks to %d worker processes", len(tasks), width)
    with ProcessPoolExecutor(max_workers=width) as pool:
        futures = [pool.submit(fn, *t) for t in tasks]
        return [f.result() for f in futures]
