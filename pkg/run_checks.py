#!/usr/bin/env python3
"""
run_checks.py - One-click local test run

Usage:
    python run_checks.py           # Preset checks + unit tests (acceptance tests skipped)
    python run_checks.py --quick   # Preset checks only (skip tests)
    python run_checks.py --slow    # Also run the minutes-scale acceptance tests
    python run_checks.py --verbose # Detailed output

This script:
1. Checks that the shipped code presets load and build
2. Runs the unit tests unless --quick (and, with --slow, the acceptance tests)
"""

from __future__ import annotations

import argparse
import os
import subprocess
import sys
from datetime import datetime
from pathlib import Path
from typing import Dict, List, Optional

REPO_ROOT = Path(__file__).resolve().parent
SLOW_ENV = "GRANDPOLAR_SLOW_TESTS"


def run_command(cmd: List[str], description: str, verbose: bool = False, env: Optional[Dict[str, str]] = None) -> bool:
    """Run a command and return success status."""
    print(f"\n{'=' * 60}")
    print(f"▶ {description}")
    print("=" * 60)

    if verbose:
        print(f"  Command: {' '.join(cmd)}")

    try:
        result = subprocess.run(
            cmd,
            capture_output=not verbose,
            text=True,
            cwd=REPO_ROOT,
            env=env,
        )
    except OSError as e:
        print(f"❌ {description} - ERROR: {e}")
        return False

    if result.returncode == 0:
        print(f"✅ {description} - PASSED")
        if verbose and result.stdout:
            print(result.stdout)
        return True
    print(f"❌ {description} - FAILED")
    if result.stdout:
        print(result.stdout)
    if result.stderr:
        print(result.stderr, file=sys.stderr)
    return False


def main(argv: Optional[List[str]] = None) -> int:
    parser = argparse.ArgumentParser(description="One-click grandpolar checks")
    speed = parser.add_mutually_exclusive_group()
    speed.add_argument("--quick", "-q", action="store_true", help="Quick check (skip tests)")
    speed.add_argument("--slow", action="store_true", help=f"Also run acceptance tests ({SLOW_ENV}=1)")
    parser.add_argument("--verbose", "-v", action="store_true", help="Verbose output")
    args = parser.parse_args(argv)

    print(f"""
╔══════════════════════════════════════════════════════════════╗
║                grandpolar - Local Check Suite                ║
║                     {datetime.now().strftime('%Y-%m-%d %H:%M:%S')}                      ║
╚══════════════════════════════════════════════════════════════╝
    """)

    env = dict(os.environ)
    env.pop(SLOW_ENV, None)
    if args.slow:
        env[SLOW_ENV] = "1"

    results = []

    # Step 1: presets build
    for preset in ("ul128_105", "dl128_99"):
        results.append(run_command(
            [sys.executable, "run_grand.py", "mask-threshold", "--code", preset, "--merr", "1e-4", "--snr", "9"],
            f"Preset {preset}",
            verbose=args.verbose,
            env=env,
        ))

    # Step 2: tests
    if not args.quick:
        test_cmd = [
            sys.executable, "-m", "unittest",
            "discover", "-s", "grandpolar/tests", "-t", ".",
            "-p", "test_*.py",
            "-v" if args.verbose else "-q",
        ]
        results.append(run_command(
            test_cmd,
            "Unit + acceptance tests" if args.slow else "Unit tests",
            verbose=args.verbose,
            env=env,
        ))
    else:
        print("\n⏭️  Skipping tests (--quick mode)")

    print(f"\n{'=' * 60}")
    print("SUMMARY")
    print("=" * 60)
    passed = sum(results)
    total = len(results)
    if all(results):
        print(f"\n✅ ALL CHECKS PASSED ({passed}/{total})\n")
        return 0
    print(f"\n❌ SOME CHECKS FAILED ({passed}/{total} passed)\n")
    return 1


if __name__ == "__main__":
    raise SystemExit(main())
