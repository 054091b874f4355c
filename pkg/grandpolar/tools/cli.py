#!/usr/bin/env python3
"""
grandpolar command line.

Usage:
    python run_grand.py encode --code ul128_105 < info.hex
    python run_grand.py decode --code ul128_105 --received 0x... [--mask 0x...] [--ab 3]
    python run_grand.py conditional --code ul128_105 --flips 0:4 --ab 3 --trials 10000
    python run_grand.py curve-hard --ab 1,2,3 --snr 6:0.5:10 --seed 7
    python run_grand.py curve-soft --merr 1e-4 --budget-weight 3 --snr 6:0.5:10 --seed 7
    python run_grand.py select-ab --code dl128_99 --seed 7
    python run_grand.py mask-threshold --merr 1e-4 --snr 9
    python run_grand.py direct --ab 3 --snr 7 --trials 100000 --seed 7

Results go to stdout (or ``--out``) as CSV or JSON; log lines go to stderr.

Exit codes:
    0  success
    1  domain failure (invalid code config, unattainable mask error rate, ...)
    2  bad arguments
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from grandpolar import log
from grandpolar.channel.bpsk import ChannelModel, mask_threshold
from grandpolar.codes.ca_polar import Code, build_code, encode
from grandpolar.codes.config import list_presets, load_code_spec
from grandpolar.decoding.grand import ENGINES, GuessBudget, decoder_for, sgrandab_budget
from grandpolar.errors import DimensionError, GrandError
from grandpolar.gf2 import BitVector
from grandpolar.sim import output
from grandpolar.sim.combine import (
    AB_THRESHOLD,
    DEFAULT_FLOOR,
    combine_hard,
    combine_soft,
    select_ab,
    soft_grid,
)
from grandpolar.sim.conditional import ConditionalStats, hard_records, hard_strata, run_conditional_hard, soft_strata
from grandpolar.sim.direct import simulate_direct

logger = logging.getLogger(__name__)

DEFAULT_CODE = "ul128_105"
DEFAULT_TRIALS = 10_000


class UsageError(Exception):
    """Argument values argparse cannot check by itself."""


# -- argument parsing ------------------------------------------------------


def parse_grid(text: str) -> List[float]:
    """``start:step:stop`` (inclusive), a comma list, or a single value."""
    text = text.strip()
    try:
        if ":" in text:
            start, step, stop = (float(t) for t in text.split(":"))
            if step <= 0 or stop < start:
                raise UsageError(f"grid {text!r} needs step > 0 and stop >= start")
            count = int(round((stop - start) / step)) + 1
            return [round(start + i * step, 10) for i in range(count)]
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError as e:
        raise UsageError(f"cannot parse grid {text!r}: {e}") from e


def parse_int_list(text: str) -> List[int]:
    """``lo:hi`` (inclusive), a comma list, or a single integer."""
    text = text.strip()
    try:
        if ":" in text:
            lo, hi = (int(t) for t in text.split(":"))
            return list(range(lo, hi + 1))
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError as e:
        raise UsageError(f"cannot parse integer list {text!r}: {e}") from e


def parse_float_list(text: str) -> List[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError as e:
        raise UsageError(f"cannot parse number list {text!r}: {e}") from e


def parse_word(text: str, n: int, what: str) -> BitVector:
    """``0x``-prefixed hex or a plain 0/1 string of length ``n``."""
    text = text.strip()
    try:
        if text.lower().startswith("0x"):
            return BitVector.from_hex(text, n)
        if set(text) <= {"0", "1"} and len(text) == n:
            return BitVector.from_bits(text)
    except (ValueError, DimensionError) as e:
        raise UsageError(f"{what}: {e}") from e
    raise UsageError(f"{what} must be 0x-hex or {n} binary digits")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--code", default=DEFAULT_CODE, help=f"Preset name or config path (presets: {', '.join(list_presets())})")
    common.add_argument("--seed", type=int, default=None, help="Base seed (mandatory for curve-hard / curve-soft)")
    common.add_argument("--trials", type=int, default=DEFAULT_TRIALS, help="Trials per stratum")
    common.add_argument("--format", choices=("csv", "json"), default="csv", help="Output format")
    common.add_argument("--jobs", type=int, default=None, help="Worker processes (default: $GRANDPOLAR_JOBS or 1)")
    common.add_argument("--engine", choices=ENGINES, default="table", help="Guessing engine")
    common.add_argument("--out", type=Path, default=None, help="Write results to this file instead of stdout")
    common.add_argument("--dump-matrices", type=Path, default=None, metavar="DIR", help="Write G.txt and H.txt to DIR")
    common.add_argument("--verbose", "-v", action="store_true", help="Debug logging")

    parser = argparse.ArgumentParser(prog="grandpolar", description="GRAND decoders for CA-Polar codes")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("encode", parents=[common], help="Encode hex information words (stdin or --info)")
    p.add_argument("--info", action="append", default=None, help="Hex information word; repeatable")

    p = sub.add_parser("decode", parents=[common], help="Decode one received word")
    p.add_argument("--received", required=True, help="Received word (0x-hex or binary string)")
    p.add_argument("--mask", default=None, help="Reliability mask, 1 = unreliable (SGRANDAB)")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--ab", type=int, default=None, help="Abandon after all patterns up to this weight")
    g.add_argument("--budget", type=int, default=None, help="Explicit query budget T")
    p.add_argument("--workers", type=int, default=1, help="Split each weight class over this many colex ranges (cursor engine)")

    p = sub.add_parser("conditional", parents=[common], help="Conditional statistics per flip count")
    p.add_argument("--flips", required=True, help="b (or b_u with --mask-length): 3, 0:4 or 1,2,4")
    p.add_argument("--ab", type=int, default=None, help="Hard-detection abandonment weight (default: unbounded)")
    p.add_argument("--mask-length", type=int, default=None, help="Soft strata: number l of unreliable bits")
    p.add_argument("--budget-weight", type=int, default=3, help="Soft strata budget: all patterns up to this weight on n bits")
    p.add_argument("--cdf", action="store_true", help="Emit the query-count CDF instead of summary rows")

    p = sub.add_parser("curve-hard", parents=[common], help="GRANDAB BLER and E[Q] over an SNR grid")
    p.add_argument("--ab", default="3", help="Abandonment weights, e.g. 1,2,3,4")
    p.add_argument("--snr", required=True, help="SNR grid in dB: start:step:stop or a list")

    p = sub.add_parser("curve-soft", parents=[common], help="SGRANDAB BLER and E[Q] over an SNR grid")
    p.add_argument("--merr", default="1e-4", help="Mask error rates, e.g. 1e-3,1e-4")
    p.add_argument("--budget-weight", type=int, default=3, help="Budget: all patterns up to this weight on n bits")
    p.add_argument("--snr", required=True, help="SNR grid in dB")
    p.add_argument("--floor", type=float, default=DEFAULT_FLOOR, help="Probability below which strata are folded")

    p = sub.add_parser("select-ab", parents=[common], help="Largest AB with conditional BLER <= threshold")
    p.add_argument("--max-ab", type=int, default=6, help="Highest flip count to simulate")
    p.add_argument("--threshold", type=float, default=AB_THRESHOLD, help="Conditional BLER threshold")

    p = sub.add_parser("mask-threshold", parents=[common], help="Reliability threshold table")
    p.add_argument("--merr", default="1e-4", help="Mask error rates")
    p.add_argument("--snr", required=True, help="SNR grid in dB")
    p.add_argument("-n", type=int, default=None, help="Block length (default: the code's n)")

    p = sub.add_parser("direct", parents=[common], help="End-to-end Monte-Carlo over the BPSK channel")
    p.add_argument("--snr", required=True, help="SNR grid in dB")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--ab", type=int, default=None, help="GRANDAB abandonment weight")
    g.add_argument("--budget-weight", type=int, default=None, help="Query budget as all patterns up to this weight")
    p.add_argument("--merr", type=float, default=None, help="Use a reliability mask with this error rate (SGRANDAB)")

    return parser


# -- helpers ---------------------------------------------------------------


def _load_code(args: argparse.Namespace) -> Code:
    code = build_code(load_code_spec(args.code))
    logger.info("code %s: n=%d k=%d, %d parity checks", code.name, code.n, code.k, code.redundancy)
    if args.dump_matrices is not None:
        output.atomic_write_text(args.dump_matrices / "G.txt", code.G.to_text())
        output.atomic_write_text(args.dump_matrices / "H.txt", code.H.to_text())
        logger.info("wrote G.txt and H.txt to %s", args.dump_matrices)
    return code


def _seed(args: argparse.Namespace, required: bool = False) -> int:
    if args.seed is None:
        if required:
            raise UsageError(f"{args.command} needs an explicit --seed")
        args.seed = 0
    return args.seed


def _check_trials(args: argparse.Namespace) -> None:
    if args.trials < 1:
        raise UsageError("--trials must be positive")


def _check_weight(value: int, n: int, flag: str) -> int:
    if not 0 <= value <= n:
        raise UsageError(f"{flag} must lie in 0..{n}")
    return value


def _emit(args: argparse.Namespace, kind: str, columns: Sequence[str], rows: List[Dict], notes: Sequence[str] = ()) -> None:
    output.emit(output.render(kind, columns, rows, args.format, notes), args.out)


# -- subcommands -----------------------------------------------------------


def cmd_encode(args: argparse.Namespace) -> int:
    code = _load_code(args)
    words = args.info if args.info else [line for line in sys.stdin.read().split() if line]
    rows = []
    for text in words:
        try:
            x = BitVector.from_hex(text, code.k)
        except (ValueError, DimensionError) as e:
            raise UsageError(f"information word {text!r}: {e}") from e
        rows.append({"info": x.to_hex(), "codeword": encode(code, x).to_hex()})
    if args.format == "json":
        output.emit(json.dumps(rows, indent=2) + "\n", args.out)
    else:
        output.emit("".join(f"{r['codeword']}\n" for r in rows), args.out)
    return 0


def cmd_decode(args: argparse.Namespace) -> int:
    code = _load_code(args)
    y = parse_word(args.received, code.n, "--received")
    s = parse_word(args.mask, code.n, "--mask") if args.mask is not None else None
    if args.ab is not None:
        if not 0 <= args.ab <= code.n:
            raise UsageError(f"--ab must lie in 0..{code.n}")
        budget = GuessBudget.for_weight(code.n, args.ab)
    elif args.budget is not None:
        if args.budget < 1:
            raise UsageError("--budget must be positive")
        budget = GuessBudget(args.budget)
    else:
        budget = GuessBudget.unbounded()
    if args.workers < 1:
        raise UsageError("--workers must be positive")
    if args.workers > 1 and args.engine != "cursor":
        raise UsageError("--workers needs --engine cursor")
    outcome = decoder_for(code, args.engine, args.workers).decode(y, budget, mask=s)
    doc = outcome.to_dict()
    doc["budget"] = budget.T
    output.emit(json.dumps(doc, indent=2) + "\n", args.out)
    return 0


def cmd_conditional(args: argparse.Namespace) -> int:
    _check_trials(args)
    code = _load_code(args)
    seed = _seed(args)
    flips = parse_int_list(args.flips)
    if args.mask_length is not None:
        l = args.mask_length
        if any(not 0 <= b <= l for b in flips) or not 0 <= l <= code.n:
            raise UsageError(f"need 0 <= b_u <= l <= {code.n}")
        budget = sgrandab_budget(code.n, _check_weight(args.budget_weight, code.n, "--budget-weight"))
        cells = soft_strata(code, [(l, b) for b in flips], budget, args.trials, seed, args.jobs, args.engine, exact_zero=False)
        stats = [cells[(l, b)] for b in sorted(set(flips))]
    else:
        if any(not 0 <= b <= code.n for b in flips):
            raise UsageError(f"flip counts must lie in 0..{code.n}")
        if args.ab is not None and not 0 <= args.ab <= code.n:
            raise UsageError(f"--ab must lie in 0..{code.n}")
        budget = GuessBudget.unbounded() if args.ab is None else GuessBudget.for_weight(code.n, args.ab)
        records = hard_records(code, flips, budget, args.trials, seed, args.jobs, args.engine)
        stats = [ConditionalStats.from_records(records[b], b, budget=budget.T) for b in sorted(records)]
    notes = [f"code {code.name}, seed {seed}, budget {budget}"]
    if args.cdf:
        rows = [row for st in stats for row in output.q_cdf_rows(st)]
        _emit(args, "qcdf", output.QCDF_COLUMNS, rows, notes)
    else:
        _emit(args, "conditional", output.CONDITIONAL_COLUMNS, [output.conditional_row(st) for st in stats], notes)
    return 0


def cmd_curve_hard(args: argparse.Namespace) -> int:
    _check_trials(args)
    seed = _seed(args, required=True)
    code = _load_code(args)
    abs_ = parse_int_list(args.ab)
    if not abs_ or any(not 0 <= ab <= code.n for ab in abs_):
        raise UsageError(f"--ab values must lie in 0..{code.n}")
    grid = parse_grid(args.snr)
    strata = hard_strata(code, abs_, args.trials, seed, args.jobs, args.engine)
    rows = [
        output.curve_row(combine_hard(strata[ab], ChannelModel.from_snr(snr, code.n), ab))
        for ab in sorted(strata)
        for snr in grid
    ]
    notes = [f"code {code.name}, seed {seed}, {args.trials} trials per stratum", output.SNR_NOTE]
    _emit(args, "curve-hard", output.CURVE_HARD_COLUMNS, rows, notes)
    return 0


def cmd_curve_soft(args: argparse.Namespace) -> int:
    _check_trials(args)
    seed = _seed(args, required=True)
    code = _load_code(args)
    merrs = parse_float_list(args.merr)
    grid = parse_grid(args.snr)
    if not 0 <= args.budget_weight <= code.n:
        raise UsageError(f"--budget-weight must lie in 0..{code.n}")
    budget = sgrandab_budget(code.n, args.budget_weight)
    points: List[Tuple[float, ChannelModel]] = []
    for merr in merrs:
        for snr in grid:
            points.append((merr, ChannelModel.from_snr(snr, code.n)))
    masks = [mask_threshold(ch, merr) for merr, ch in points]
    cells = soft_grid(code.n, masks, budget, args.floor)
    logger.info("soft grid: %d cells over %d SNR x merr points", len(cells), len(points))
    strata = soft_strata(code, cells, budget, args.trials, seed, args.jobs, args.engine)
    rows = [
        output.curve_row(combine_soft(strata, mask, ch, budget, args.floor))
        for (merr, ch), mask in zip(points, masks)
    ]
    notes = [f"code {code.name}, seed {seed}, {args.trials} trials per stratum, floor {args.floor:g}", output.SNR_NOTE]
    _emit(args, "curve-soft", output.CURVE_SOFT_COLUMNS, rows, notes)
    return 0


def cmd_select_ab(args: argparse.Namespace) -> int:
    _check_trials(args)
    code = _load_code(args)
    seed = _seed(args)
    if not 0 <= args.max_ab < code.n:
        raise UsageError(f"--max-ab must lie in 0..{code.n - 1}")
    blers: Dict[int, float] = {0: 0.0}
    # Budget AB = b covers every pattern no heavier than the true noise, so it
    # decodes exactly like unbounded GRAND on a weight-b stratum.
    for b in range(1, args.max_ab + 2):
        st = run_conditional_hard(code, b, b, args.trials, seed, args.jobs, args.engine)
        blers[b] = st.cond_bler
        logger.info("b=%d: conditional BLER %.4f", b, st.cond_bler)
        if st.cond_bler > args.threshold:
            break
    ab = select_ab(blers, args.threshold)
    rows = [{"code": code.name, "ab": ab, "threshold": args.threshold, "trials": args.trials}]
    _emit(args, "select-ab", output.SELECT_AB_COLUMNS, rows, [f"seed {seed}"])
    return 0


def cmd_mask_threshold(args: argparse.Namespace) -> int:
    if args.n is None:
        n = _load_code(args).n
    elif args.n < 1:
        raise UsageError("-n must be positive")
    else:
        n = args.n
    rows = []
    for merr in parse_float_list(args.merr):
        for snr in parse_grid(args.snr):
            ch = ChannelModel.from_snr(snr, n)
            rows.append(output.mask_row(ch, mask_threshold(ch, merr)))
    _emit(args, "mask-threshold", output.MASK_COLUMNS, rows, [output.SNR_NOTE])
    return 0


def cmd_direct(args: argparse.Namespace) -> int:
    _check_trials(args)
    code = _load_code(args)
    seed = _seed(args)
    if args.ab is not None:
        budget = GuessBudget.for_weight(code.n, _check_weight(args.ab, code.n, "--ab"))
    elif args.budget_weight is not None:
        budget = sgrandab_budget(code.n, _check_weight(args.budget_weight, code.n, "--budget-weight"))
    else:
        budget = GuessBudget.unbounded()
    rows = []
    for snr in parse_grid(args.snr):
        ch = ChannelModel.from_snr(snr, code.n)
        mask = mask_threshold(ch, args.merr) if args.merr is not None else None
        stats = simulate_direct(code, ch, args.trials, seed, budget, mask, args.jobs, args.engine)
        rows.append(stats.to_dict())
    _emit(args, "direct", output.DIRECT_COLUMNS, rows, [f"code {code.name}, seed {seed}", output.SNR_NOTE])
    return 0


COMMANDS = {
    "encode": cmd_encode,
    "decode": cmd_decode,
    "conditional": cmd_conditional,
    "curve-hard": cmd_curve_hard,
    "curve-soft": cmd_curve_soft,
    "select-ab": cmd_select_ab,
    "mask-threshold": cmd_mask_threshold,
    "direct": cmd_direct,
}


def cli_main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    log.configure(args.verbose)
    try:
        return COMMANDS[args.command](args)
    except UsageError as e:
        sys.stderr.write(parser.format_usage())
        logger.error("%s", e)
        return 2
    except GrandError as e:
        logger.critical("%s", e)
        return 1


def main() -> int:
    return cli_main()


if __name__ == "__main__":
    sys.exit(main())
