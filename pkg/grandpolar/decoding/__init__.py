"""
Decoding Package

Noise guessing in BSC likelihood order:
    - patterns: PatternCursor, masked_cursor, count_up_to_weight, colex ranks
    - grand: GrandDecoder, grand_decode, grandab_decode, sgrandab_decode
"""

from .grand import (
    DecodeOutcome,
    GrandDecoder,
    GuessBudget,
    grand_decode,
    grandab_decode,
    sgrandab_budget,
    sgrandab_decode,
)
from .patterns import PatternCursor, count_up_to_weight, masked_cursor

__all__ = [
    "DecodeOutcome",
    "GrandDecoder",
    "GuessBudget",
    "PatternCursor",
    "count_up_to_weight",
    "grand_decode",
    "grandab_decode",
    "masked_cursor",
    "sgrandab_budget",
    "sgrandab_decode",
]
