"""Tests for packed GF(2) vectors and matrices."""

from __future__ import annotations

import unittest

import numpy as np
from hypothesis import assume, given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from grandpolar.errors import ConstructionError, DimensionError
from grandpolar.gf2 import (
    BitMatrix,
    BitVector,
    mat_mul,
    mat_vec_mul,
    null_space_basis,
    rank,
    row_reduce,
    transpose,
    xor,
)


def bit_arrays(min_len: int = 0, max_len: int = 150):
    return st.integers(min_len, max_len).flatmap(
        lambda n: arrays(np.uint8, n, elements=st.integers(0, 1))
    )


def bit_matrices(max_rows: int = 12, max_cols: int = 80):
    return st.tuples(st.integers(1, max_rows), st.integers(1, max_cols)).flatmap(
        lambda shape: arrays(np.uint8, shape, elements=st.integers(0, 1))
    )


class TestBitVector(unittest.TestCase):
    def test_zeros_and_ones(self):
        self.assertTrue(BitVector.zeros(70).is_zero())
        self.assertEqual(BitVector.ones(70).weight(), 70)
        self.assertEqual(len(BitVector.zeros(0)), 0)

    def test_indexing_across_word_boundary(self):
        v = BitVector.from_indices(130, [0, 63, 64, 129])
        self.assertEqual([v[i] for i in (0, 1, 63, 64, 65, 129)], [1, 0, 1, 1, 0, 1])
        self.assertEqual(v[-1], 1)
        self.assertEqual(v.indices(), [0, 63, 64, 129])
        with self.assertRaises(IndexError):
            v[130]

    def test_hex_is_big_endian(self):
        v = BitVector.from_bits("1000")
        self.assertEqual(v.to_hex(), "8")
        self.assertEqual(BitVector.from_hex("0x8", 4), v)
        self.assertEqual(BitVector.from_hex("01", 8).indices(), [7])

    def test_hex_overflow_rejected(self):
        with self.assertRaises(DimensionError):
            BitVector.from_hex("1ff", 8)

    def test_from_indices_out_of_range(self):
        with self.assertRaises(DimensionError):
            BitVector.from_indices(8, [8])

    def test_bad_bit_string(self):
        with self.assertRaises(ValueError):
            BitVector.from_bits("0120")

    def test_xor_length_mismatch(self):
        with self.assertRaises(DimensionError):
            xor(BitVector.zeros(3), BitVector.zeros(4))

    @given(bit_arrays(), st.data())
    def test_xor_matches_numpy(self, a, data):
        b = data.draw(arrays(np.uint8, a.size, elements=st.integers(0, 1)))
        got = BitVector.from_bits(a) ^ BitVector.from_bits(b)
        np.testing.assert_array_equal(got.to_array(), a ^ b)

    @given(bit_arrays())
    def test_weight_and_string(self, a):
        v = BitVector.from_bits(a)
        self.assertEqual(v.weight(), int(a.sum()))
        self.assertEqual(v.to_string(), "".join(str(int(x)) for x in a))

    @given(bit_arrays(), st.data())
    def test_xor_is_associative_and_commutative(self, a, data):
        b, c = (
            BitVector.from_bits(data.draw(arrays(np.uint8, a.size, elements=st.integers(0, 1))))
            for _ in range(2)
        )
        a = BitVector.from_bits(a)
        self.assertEqual(xor(a, b), xor(b, a))
        self.assertEqual(xor(xor(a, b), c), xor(a, xor(b, c)))
        self.assertTrue(xor(a, a).is_zero())

    def test_equality_and_hash(self):
        a = BitVector.from_bits("0110")
        b = BitVector.from_indices(4, [1, 2])
        self.assertEqual(a, b)
        self.assertEqual(hash(a), hash(b))
        self.assertNotEqual(a, BitVector.from_bits("01100"))


class TestBitMatrix(unittest.TestCase):
    def test_text_format(self):
        m = BitMatrix.from_array(np.array([[1, 0, 1], [0, 1, 1]]))
        self.assertEqual(m.to_text(), "2 3\n101\n011\n")
        self.assertEqual(BitMatrix.from_text(m.to_text()), m)

    def test_text_row_count_checked(self):
        with self.assertRaises(DimensionError):
            BitMatrix.from_text("3 2\n10\n01\n")

    def test_empty_matrix_text(self):
        m = BitMatrix.zeros(0, 5)
        self.assertEqual(BitMatrix.from_text(m.to_text()).shape, (0, 5))

    def test_from_rows_ragged(self):
        with self.assertRaises(DimensionError):
            BitMatrix.from_rows(["101", "01"])

    def test_non_binary_entries(self):
        with self.assertRaises(ValueError):
            BitMatrix.from_array(np.array([[0, 2]]))

    @given(bit_matrices(), st.data())
    def test_mat_vec_mul_matches_numpy(self, a, data):
        v = data.draw(arrays(np.uint8, a.shape[1], elements=st.integers(0, 1)))
        got = mat_vec_mul(BitMatrix.from_array(a), BitVector.from_bits(v))
        np.testing.assert_array_equal(got.to_array(), (a.astype(np.int64) @ v) & 1)

    def test_mat_mul_shape_mismatch(self):
        with self.assertRaises(DimensionError):
            mat_mul(BitMatrix.zeros(2, 3), BitMatrix.zeros(2, 3))

    @given(bit_matrices())
    def test_transpose_involution(self, a):
        m = BitMatrix.from_array(a)
        self.assertEqual(transpose(transpose(m)), m)
        np.testing.assert_array_equal(m.T.to_array(), a.T)


class TestRowReduction(unittest.TestCase):
    def test_identity_rank(self):
        self.assertEqual(rank(BitMatrix.identity(70)), 70)

    def test_dependent_rows(self):
        m = BitMatrix.from_rows(["1100", "0110", "1010"])
        self.assertEqual(rank(m), 2)

    @given(bit_matrices())
    def test_rank_bounded_and_row_space_preserved(self, a):
        m = BitMatrix.from_array(a)
        reduced, pivots = row_reduce(m)
        self.assertLessEqual(len(pivots), min(m.shape))
        self.assertEqual(pivots, sorted(pivots))
        self.assertEqual(rank(BitMatrix.from_rows(m.row_vectors() + reduced.row_vectors())), len(pivots))

    @given(bit_matrices())
    def test_reduced_form_is_rref_and_idempotent(self, a):
        reduced, pivots = row_reduce(BitMatrix.from_array(a))
        r = reduced.to_array()
        for i, col in enumerate(pivots):
            self.assertEqual(r[i, col], 1)
            self.assertEqual(int(r[:, col].sum()), 1)
            self.assertFalse(r[i, :col].any())
        self.assertFalse(r[len(pivots) :].any())
        self.assertEqual(row_reduce(reduced), (reduced, pivots))

    def test_worked_examples(self):
        prod = mat_mul(BitMatrix.from_rows(["11"]), BitMatrix.from_rows(["10", "11"]))
        self.assertEqual(prod, BitMatrix.from_rows(["01"]))
        reduced, pivots = row_reduce(BitMatrix.from_rows(["11", "11"]))
        self.assertEqual(reduced, BitMatrix.from_rows(["11", "00"]))
        self.assertEqual(pivots, [0])

    @settings(max_examples=60)
    @given(bit_matrices(max_rows=10, max_cols=90))
    def test_null_space_is_dual(self, a):
        g = BitMatrix.from_array(a)
        assume(rank(g) == g.rows)
        h = null_space_basis(g)
        self.assertEqual(h.shape, (g.cols - g.rows, g.cols))
        if h.rows:
            self.assertTrue(mat_mul(h, g.T).is_zero())
            self.assertEqual(rank(h), h.rows)

    def test_null_space_of_square_full_rank(self):
        h = null_space_basis(BitMatrix.identity(5))
        self.assertEqual(h.shape, (0, 5))

    def test_rank_deficient_names_row(self):
        g = BitMatrix.from_rows(["1100", "0011", "1111"])
        with self.assertRaises(ConstructionError) as cm:
            null_space_basis(g)
        self.assertIn("row 2", str(cm.exception))


if __name__ == "__main__":
    unittest.main()
