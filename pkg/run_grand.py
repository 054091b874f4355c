#!/usr/bin/env python3
"""run_grand.py - grandpolar command line from a source checkout.

Usage:
    python run_grand.py --help
    python run_grand.py curve-hard --code ul128_105 --ab 3 --snr 6:0.5:10 --seed 1
"""

from __future__ import annotations

import sys
from pathlib import Path

REPO_ROOT = Path(__file__).resolve().parent
if str(REPO_ROOT) not in sys.path:
    sys.path.insert(0, str(REPO_ROOT))

from grandpolar.tools.cli import cli_main  # noqa: E402

if __name__ == "__main__":
    raise SystemExit(cli_main())
