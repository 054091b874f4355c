"""
Bit-packed vectors and matrices over GF(2).

Bits live in little-endian uint64 words: bit ``i`` of a vector is bit
``i % 64`` of word ``i // 64``. Storage past the logical length is always
zero, so word-wise equality is bit-wise equality. Both types are immutable;
every operation allocates a fresh result.

Text format (used by ``--dump-matrices``): first line ``rows cols``, then one
row per line as a 0/1 string with column 0 first.
"""

from __future__ import annotations

from typing import Iterable, List, NamedTuple, Sequence, Union

import numpy as np

from grandpolar.errors import ConstructionError, DimensionError

WORD_BITS = 64

Bits = Union[str, Iterable[int], np.ndarray]


def words_for(n: int) -> int:
    """Number of uint64 words holding ``n`` bits."""
    return (n + WORD_BITS - 1) // WORD_BITS


def pack_bits(bits: np.ndarray) -> np.ndarray:
    """Pack a 0/1 array along its last axis into uint64 words."""
    bits = np.asarray(bits, dtype=np.uint8) & 1
    n = bits.shape[-1]
    width = words_for(n) * WORD_BITS
    if width != n:
        pad = [(0, 0)] * (bits.ndim - 1) + [(0, width - n)]
        bits = np.pad(bits, pad)
    packed = np.packbits(bits, axis=-1, bitorder="little")
    return np.ascontiguousarray(packed).view("<u8").astype(np.uint64)


def unpack_words(words: np.ndarray, n: int) -> np.ndarray:
    """Inverse of :func:`pack_bits`; returns uint8 0/1 of length ``n``."""
    raw = np.ascontiguousarray(words, dtype="<u8").view(np.uint8)
    return np.unpackbits(raw, axis=-1, bitorder="little")[..., :n]


def _parse_bits(bits: Bits) -> np.ndarray:
    if isinstance(bits, str):
        text = bits.strip().replace("_", "").replace(" ", "")
        if any(ch not in "01" for ch in text):
            raise ValueError(f"not a 0/1 string: {bits!r}")
        return np.frombuffer(text.encode("ascii"), dtype=np.uint8) - ord("0")
    arr = np.asarray(list(bits) if not isinstance(bits, np.ndarray) else bits)
    if arr.ndim != 1:
        raise DimensionError(f"expected a 1-D bit sequence, got shape {arr.shape}")
    if arr.size and not np.isin(arr, (0, 1)).all():
        raise ValueError("bit sequence must contain only 0 and 1")
    return arr.astype(np.uint8)


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


class BitVector:
    """Fixed-length binary word."""

    __slots__ = ("_len", "_words")

    def __init__(self, length: int, words: np.ndarray) -> None:
        words = np.asarray(words, dtype=np.uint64).reshape(-1)
        if length < 0:
            raise DimensionError(f"negative length {length}")
        if words.size != words_for(length):
            raise DimensionError(
                f"{words.size} words cannot hold exactly {length} bits"
            )
        tail = length % WORD_BITS
        if tail and int(words[-1]) >> tail:
            raise ValueError("storage beyond the vector length must be zero")
        self._len = length
        self._words = _frozen(words.copy())

    # -- constructors -------------------------------------------------

    @classmethod
    def zeros(cls, length: int) -> "BitVector":
        return cls(length, np.zeros(words_for(length), dtype=np.uint64))

    @classmethod
    def ones(cls, length: int) -> "BitVector":
        return cls.from_bits(np.ones(length, dtype=np.uint8))

    @classmethod
    def from_bits(cls, bits: Bits) -> "BitVector":
        arr = _parse_bits(bits)
        return cls(arr.size, pack_bits(arr))

    @classmethod
    def from_indices(cls, length: int, indices: Iterable[int]) -> "BitVector":
        arr = np.zeros(length, dtype=np.uint8)
        idx = np.fromiter(indices, dtype=np.int64)
        if idx.size and (idx.min() < 0 or idx.max() >= length):
            raise DimensionError(f"flip index out of range for length {length}")
        arr[idx] = 1
        return cls(length, pack_bits(arr))

    @classmethod
    def from_hex(cls, text: str, length: int) -> "BitVector":
        """Big-endian hex; the most significant of ``length`` bits is bit 0."""
        value = int(text.strip().lower().removeprefix("0x") or "0", 16)
        if value >> length:
            raise DimensionError(f"hex value {text!r} does not fit in {length} bits")
        bits = [(value >> (length - 1 - i)) & 1 for i in range(length)]
        return cls.from_bits(np.array(bits, dtype=np.uint8))

    # -- accessors ----------------------------------------------------

    @property
    def words(self) -> np.ndarray:
        return self._words

    def __len__(self) -> int:
        return self._len

    def __getitem__(self, i: int) -> int:
        if not -self._len <= i < self._len:
            raise IndexError(i)
        i %= self._len
        return int(self._words[i // WORD_BITS] >> np.uint64(i % WORD_BITS)) & 1

    def to_array(self) -> np.ndarray:
        return unpack_words(self._words, self._len)

    def indices(self) -> List[int]:
        return np.flatnonzero(self.to_array()).tolist()

    def weight(self) -> int:
        return int(np.bitwise_count(self._words).sum())

    def is_zero(self) -> bool:
        return not self._words.any()

    def to_string(self) -> str:
        return "".join("1" if b else "0" for b in self.to_array())

    def to_hex(self) -> str:
        value = 0
        for b in self.to_array():
            value = (value << 1) | int(b)
        return f"{value:0{max(1, (self._len + 3) // 4)}x}"

    # -- algebra ------------------------------------------------------

    def __xor__(self, other: "BitVector") -> "BitVector":
        return xor(self, other)

    def __and__(self, other: "BitVector") -> "BitVector":
        _same_length(self, other)
        return BitVector(self._len, self._words & other._words)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BitVector):
            return NotImplemented
        return self._len == other._len and bool(np.array_equal(self._words, other._words))

    def __hash__(self) -> int:
        return hash((self._len, self._words.tobytes()))

    def __repr__(self) -> str:
        shown = self.to_string() if self._len <= 64 else self.to_hex()
        return f"BitVector({self._len}, {shown})"


def _same_length(a: BitVector, b: BitVector) -> None:
    if len(a) != len(b):
        raise DimensionError(f"length mismatch: {len(a)} vs {len(b)}")


def xor(a: BitVector, b: BitVector) -> BitVector:
    """Bitwise sum over GF(2)."""
    _same_length(a, b)
    return BitVector(len(a), a.words ^ b.words)


class BitMatrix:
    """Dense binary matrix stored row-major, one packed row per line."""

    __slots__ = ("_rows", "_cols", "_words")

    def __init__(self, rows: int, cols: int, words: np.ndarray) -> None:
        words = np.asarray(words, dtype=np.uint64).reshape(rows, words_for(cols))
        self._rows = rows
        self._cols = cols
        self._words = _frozen(words.copy())

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "BitMatrix":
        return cls(rows, cols, np.zeros((rows, words_for(cols)), dtype=np.uint64))

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls.from_array(np.eye(n, dtype=np.uint8))

    @classmethod
    def from_array(cls, arr: np.ndarray) -> "BitMatrix":
        arr = np.asarray(arr, dtype=np.uint8)
        if arr.ndim != 2:
            raise DimensionError(f"expected a 2-D array, got shape {arr.shape}")
        if arr.size and not np.isin(arr, (0, 1)).all():
            raise ValueError("matrix entries must be 0 or 1")
        return cls(arr.shape[0], arr.shape[1], pack_bits(arr))

    @classmethod
    def from_rows(cls, rows: Sequence[Bits | BitVector], cols: int | None = None) -> "BitMatrix":
        vecs = [r if isinstance(r, BitVector) else BitVector.from_bits(r) for r in rows]
        if not vecs:
            if cols is None:
                raise DimensionError("column count required for an empty matrix")
            return cls.zeros(0, cols)
        width = len(vecs[0])
        if cols is not None and cols != width:
            raise DimensionError(f"rows have {width} columns, expected {cols}")
        for i, v in enumerate(vecs):
            if len(v) != width:
                raise DimensionError(f"row {i} has length {len(v)}, expected {width}")
        return cls(len(vecs), width, np.stack([v.words for v in vecs]))

    @classmethod
    def from_text(cls, text: str) -> "BitMatrix":
        lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
        if not lines:
            raise ValueError("empty matrix text")
        try:
            rows, cols = (int(tok) for tok in lines[0].split())
        except ValueError as e:
            raise ValueError(f"bad matrix header {lines[0]!r}") from e
        body = lines[1:]
        if len(body) != rows:
            raise DimensionError(f"header says {rows} rows, found {len(body)}")
        if not body:
            return cls.zeros(0, cols)
        return cls.from_rows(body, cols=cols)

    # -- accessors ----------------------------------------------------

    @property
    def rows(self) -> int:
        return self._rows

    @property
    def cols(self) -> int:
        return self._cols

    @property
    def shape(self) -> tuple[int, int]:
        return (self._rows, self._cols)

    @property
    def words(self) -> np.ndarray:
        return self._words

    def row(self, i: int) -> BitVector:
        return BitVector(self._cols, self._words[i])

    def row_vectors(self) -> List[BitVector]:
        return [self.row(i) for i in range(self._rows)]

    def take_rows(self, indices: Sequence[int]) -> "BitMatrix":
        idx = np.asarray(list(indices), dtype=np.int64)
        return BitMatrix(idx.size, self._cols, self._words[idx])

    def to_array(self) -> np.ndarray:
        return unpack_words(self._words, self._cols)

    def is_zero(self) -> bool:
        return not self._words.any()

    def to_text(self) -> str:
        body = "".join(
            "".join("1" if b else "0" for b in row) + "\n" for row in self.to_array()
        )
        return f"{self._rows} {self._cols}\n{body}"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self._words, other._words))

    def __hash__(self) -> int:
        return hash((self.shape, self._words.tobytes()))

    def __repr__(self) -> str:
        return f"BitMatrix({self._rows}x{self._cols})"

    def __matmul__(self, other: "BitMatrix") -> "BitMatrix":
        return mat_mul(self, other)

    @property
    def T(self) -> "BitMatrix":
        return transpose(self)


class RowReduction(NamedTuple):
    matrix: BitMatrix
    pivots: List[int]


def transpose(m: BitMatrix) -> BitMatrix:
    return BitMatrix.from_array(m.to_array().T)


def mat_vec_mul(m: BitMatrix, v: BitVector) -> BitVector:
    """``m · vᵀ`` via word-wise AND and a parity fold per row."""
    if m.cols != len(v):
        raise DimensionError(f"matrix has {m.cols} columns, vector has {len(v)} bits")
    parity = np.bitwise_count(m.words & v.words).sum(axis=1, dtype=np.int64) & 1
    return BitVector.from_bits(parity.astype(np.uint8))


def mat_mul(a: BitMatrix, b: BitMatrix) -> BitMatrix:
    if a.cols != b.rows:
        raise DimensionError(f"cannot multiply {a.rows}x{a.cols} by {b.rows}x{b.cols}")
    prod = a.to_array().astype(np.int64) @ b.to_array().astype(np.int64)
    return BitMatrix.from_array((prod & 1).astype(np.uint8))


def row_reduce(m: BitMatrix) -> RowReduction:
    """Reduced row-echelon form over GF(2) and the pivot columns."""
    words = m.words.copy()
    pivots: List[int] = []
    row = 0
    for col in range(m.cols):
        if row == m.rows:
            break
        w, bit = divmod(col, WORD_BITS)
        column = (words[:, w] >> np.uint64(bit)) & np.uint64(1)
        below = np.flatnonzero(column[row:])
        if below.size == 0:
            continue
        pivot = row + int(below[0])
        if pivot != row:
            words[[row, pivot]] = words[[pivot, row]]
            column[[row, pivot]] = column[[pivot, row]]
        hits = column.astype(bool)
        hits[row] = False
        words[hits] ^= words[row]
        pivots.append(col)
        row += 1
    return RowReduction(BitMatrix(m.rows, m.cols, words), pivots)


def rank(m: BitMatrix) -> int:
    return len(row_reduce(m).pivots)


def _first_dependent_row(m: BitMatrix) -> int:
    for i in range(1, m.rows + 1):
        if rank(m.take_rows(range(i))) < i:
            return i - 1
    return -1


def null_space_basis(g: BitMatrix) -> BitMatrix:
    """Basis ``H`` of the dual of the row space of a full-rank ``g``.

    Parameterised by the free columns of the reduced form, so ``g`` need not
    be systematic.
    """
    reduced, pivots = row_reduce(g)
    if len(pivots) < g.rows:
        dep = _first_dependent_row(g)
        raise ConstructionError(
            f"generator is rank deficient (rank {len(pivots)} < {g.rows}); "
            f"row {dep} depends on the rows above it"
        )
    n = g.cols
    pivot_set = set(pivots)
    free = [c for c in range(n) if c not in pivot_set]
    basis = np.zeros((len(free), n), dtype=np.uint8)
    if free:
        r = reduced.to_array()[: len(pivots)]
        basis[np.arange(len(free)), free] = 1
        basis[:, pivots] = r[:, free].T
    return BitMatrix.from_array(basis) if free else BitMatrix.zeros(0, n)
