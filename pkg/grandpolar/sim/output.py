"""
CSV / JSON rendering of simulation results.

CSV starts with ``# schema: grandpolar-<kind> v1``, then optional ``#`` notes,
then a header row. JSON carries the same columns under ``rows``.
"""

from __future__ import annotations

import csv
import io
import json
import os
import sys
from pathlib import Path
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence

from grandpolar.channel.bpsk import ChannelModel, MaskSpec, flip_prob
from grandpolar.sim.combine import CurvePoint
from grandpolar.sim.conditional import ConditionalStats

SCHEMA_VERSION = 1
SNR_NOTE = "snr_db is -10*log10(sigma^2), not Eb/N0"

CONDITIONAL_COLUMNS = (
    "l", "b", "trials", "budget", "cond_bler", "bler_lo", "bler_hi",
    "cond_wrong", "cond_abandon", "mean_q",
)
QCDF_COLUMNS = ("l", "b", "q", "cdf")
CURVE_HARD_COLUMNS = (
    "snr_db", "ab", "budget", "bler", "bler_se", "bler_wrong", "bler_abandon",
    "bler_tail", "mean_q", "mean_q_se", "uncoded_bler",
)
CURVE_SOFT_COLUMNS = (
    "snr_db", "merr", "budget", "bler", "bler_se", "bler_wrong", "bler_abandon",
    "bler_tail", "mean_q", "mean_q_se", "mean_q_bound", "uncoded_bler",
)
MASK_COLUMNS = (
    "snr_db", "sigma", "n", "merr", "flip_prob", "tau", "low", "high", "q", "p_u", "reliable_flip",
)
SELECT_AB_COLUMNS = ("code", "ab", "threshold", "trials")
DIRECT_COLUMNS = ("snr_db", "trials", "bler", "bler_se", "wrong", "abandoned", "mean_q", "budget", "merr")


def atomic_write_text(path: Path, content: str) -> None:
    """Write file atomically (temp + rename)."""
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(path.suffix + f".tmp.{os.getpid()}")
    tmp.write_text(content, encoding="utf-8")
    os.replace(tmp, path)


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


def render_csv(kind: str, columns: Sequence[str], rows: Iterable[Mapping[str, Any]], notes: Sequence[str] = ()) -> str:
    buf = io.StringIO()
    buf.write(f"# schema: grandpolar-{kind} v{SCHEMA_VERSION}\n")
    for note in notes:
        buf.write(f"# {note}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(row.get(c)) for c in columns])
    return buf.getvalue()


def render_json(kind: str, columns: Sequence[str], rows: Iterable[Mapping[str, Any]], notes: Sequence[str] = ()) -> str:
    doc = {
        "schema": f"grandpolar-{kind}",
        "version": SCHEMA_VERSION,
        "notes": list(notes),
        "rows": [{c: row.get(c) for c in columns} for row in rows],
    }
    return json.dumps(doc, indent=2) + "\n"


def render(kind: str, columns: Sequence[str], rows: Iterable[Mapping[str, Any]], fmt: str = "csv", notes: Sequence[str] = ()) -> str:
    if fmt == "json":
        return render_json(kind, columns, list(rows), notes)
    if fmt == "csv":
        return render_csv(kind, columns, rows, notes)
    raise ValueError(f"unknown output format {fmt!r}")


def emit(text: str, out: Optional[Path] = None) -> None:
    if out is None:
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        atomic_write_text(Path(out), text)


# -- rows ------------------------------------------------------------------


def conditional_row(stats: ConditionalStats) -> Dict[str, Any]:
    lo, hi = stats.bler_interval()
    return {
        "l": stats.l,
        "b": stats.b,
        "trials": stats.trials,
        "budget": stats.budget,
        "cond_bler": stats.cond_bler,
        "bler_lo": lo,
        "bler_hi": hi,
        "cond_wrong": stats.cond_wrong,
        "cond_abandon": stats.cond_abandon,
        "mean_q": stats.mean_q,
    }


def q_cdf_rows(stats: ConditionalStats) -> List[Dict[str, Any]]:
    return [{"l": stats.l, "b": stats.b, "q": q, "cdf": p} for q, p in stats.q_cdf]


def curve_row(point: CurvePoint) -> Dict[str, Any]:
    return point.to_dict()


def mask_row(ch: ChannelModel, mask: MaskSpec) -> Dict[str, Any]:
    return {
        "snr_db": ch.snr_db,
        "sigma": ch.sigma,
        "n": ch.n,
        "merr": mask.merr,
        "flip_prob": flip_prob(ch),
        "tau": mask.tau,
        "low": mask.low,
        "high": mask.high,
        "q": mask.q,
        "p_u": mask.p_u,
        "reliable_flip": mask.reliable_flip,
    }
