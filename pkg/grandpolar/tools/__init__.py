"""
Tools Package

    - cli: the ``grandpolar`` command line (encode, decode, conditional,
      curve-hard, curve-soft, select-ab, mask-threshold, direct)
"""

__all__ = ["cli"]
