"""
grandpolar - noise-guessing decoders for CA-Polar codes

Library and simulation harness for GRAND, GRANDAB and SGRANDAB on arbitrary
binary linear block codes, with a CA-Polar encoder and a stratified
BLER / query-count evaluation pipeline.

Subpackages:
    - gf2: packed GF(2) vectors, matrices, rank and null space
    - codes: CRC, polar transform, CA-Polar construction, code configs
    - decoding: pattern enumeration and the GRAND family of decoders
    - channel: BPSK over AWGN, reliability masks, samplers
    - sim: conditional strata, combiners, direct Monte-Carlo, output
    - tools: command-line interface
    - tests: unit and acceptance tests
"""

__version__ = "1.0.0"
__author__ = "grandpolar"
