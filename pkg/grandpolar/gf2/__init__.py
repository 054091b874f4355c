"""
GF(2) linear algebra

Provides the bit-packed substrate for encoding and syndrome checks:
    - BitVector / BitMatrix: immutable packed binary vectors and matrices
    - xor, mat_vec_mul, mat_mul, transpose
    - row_reduce, rank, null_space_basis
"""

from .bitlinalg import (
    BitMatrix,
    BitVector,
    RowReduction,
    mat_mul,
    mat_vec_mul,
    null_space_basis,
    pack_bits,
    rank,
    row_reduce,
    transpose,
    unpack_words,
    words_for,
    xor,
)

__all__ = [
    "BitMatrix",
    "BitVector",
    "RowReduction",
    "mat_mul",
    "mat_vec_mul",
    "null_space_basis",
    "pack_bits",
    "rank",
    "row_reduce",
    "transpose",
    "unpack_words",
    "words_for",
    "xor",
]
