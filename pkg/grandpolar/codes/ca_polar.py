"""
CA-Polar codes as single linear codes.

The composite generator is ``G = G_CRC · M_Interleave · G_Polar`` and ``H`` is
any basis of its dual. ``Code`` also wraps arbitrary full-rank generators so
the decoders work with any binary linear block code.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from grandpolar.codes.crc import crc_degree, crc_generator_matrix
from grandpolar.codes.polar import (
    bhattacharyya_info_set,
    polar_generator,
    ts38212_info_set,
)
from grandpolar.codes.ts38212 import input_interleaver
from grandpolar.errors import ConstructionError, DimensionError
from grandpolar.gf2 import (
    BitMatrix,
    BitVector,
    mat_mul,
    mat_vec_mul,
    null_space_basis,
    rank,
    transpose,
)

logger = logging.getLogger(__name__)

InterleaveArg = Union[str, Sequence[int], None]
InfoSetArg = Union[str, Iterable[int]]


@dataclass(frozen=True)
class CodeSpec:
    """One CA-Polar code: ``interleave`` of ``None`` means identity."""

    n: int
    k: int
    crc_poly: int
    info_set: Tuple[int, ...]
    interleave: Optional[Tuple[int, ...]] = None
    name: str = ""

    def __post_init__(self) -> None:
        if self.n < 1 or self.n & (self.n - 1):
            raise ConstructionError(f"n must be a power of two, got {self.n}")
        if self.k < 1:
            raise ConstructionError(f"k must be positive, got {self.k}")
        r = crc_degree(self.crc_poly)
        width = self.k + r
        if width > self.n:
            raise ConstructionError(f"k + r = {width} exceeds n = {self.n}")
        if len(set(self.info_set)) != len(self.info_set) or len(self.info_set) != width:
            raise ConstructionError(
                f"information set must hold k + r = {width} distinct indices, got {len(set(self.info_set))}"
            )
        if any(not 0 <= i < self.n for i in self.info_set):
            raise ConstructionError(f"information set index outside 0..{self.n - 1}")
        if self.interleave is not None and sorted(self.interleave) != list(range(width)):
            raise ConstructionError(f"interleaver is not a permutation of 0..{width - 1}")

    @property
    def crc_bits(self) -> int:
        return crc_degree(self.crc_poly)

    @property
    def rate(self) -> float:
        return self.k / self.n

    @classmethod
    def make(
        cls,
        n: int,
        k: int,
        crc_poly: int,
        interleave: InterleaveArg = "identity",
        info_set: InfoSetArg = "ts38212",
        name: str = "",
    ) -> "CodeSpec":
        """Build a spec, resolving named interleaver and info-set presets."""
        width = k + crc_degree(crc_poly)
        return cls(
            n=n,
            k=k,
            crc_poly=crc_poly,
            info_set=tuple(resolve_info_set(info_set, n, width)),
            interleave=resolve_interleave(interleave, width),
            name=name,
        )


def resolve_interleave(interleave: InterleaveArg, width: int) -> Optional[Tuple[int, ...]]:
    if interleave is None:
        return None
    if isinstance(interleave, str):
        key = interleave.strip().lower()
        if key == "identity":
            return None
        if key == "ts38212":
            try:
                return tuple(input_interleaver(width))
            except ValueError as e:
                raise ConstructionError(str(e)) from e
        raise ConstructionError(f"unknown interleaver preset {interleave!r}")
    return tuple(int(i) for i in interleave)


def resolve_info_set(info_set: InfoSetArg, n: int, width: int) -> List[int]:
    if isinstance(info_set, str):
        key = info_set.strip().lower()
        if key == "ts38212":
            return ts38212_info_set(n, width)
        if key == "bhattacharyya":
            return bhattacharyya_info_set(n, width)
        raise ConstructionError(f"unknown information-set preset {info_set!r}")
    return sorted(int(i) for i in info_set)


def interleaver_matrix(perm: Sequence[int]) -> BitMatrix:
    """Permutation matrix with ``(v · M)[j] = v[perm[j]]``."""
    size = len(perm)
    m = np.zeros((size, size), dtype=np.uint8)
    m[np.asarray(perm, dtype=np.int64), np.arange(size)] = 1
    return BitMatrix.from_array(m)


@dataclass(frozen=True)
class Code:
    """A binary linear block code with generator ``G`` and parity checks ``H``."""

    G: BitMatrix
    H: BitMatrix
    spec: Optional[CodeSpec] = None
    h_columns: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.G.cols != self.H.cols:
            raise DimensionError(f"G has {self.G.cols} columns, H has {self.H.cols}")
        cols = transpose(self.H).words if self.H.rows else np.zeros((self.n, 0), dtype=np.uint64)
        cols.flags.writeable = False
        object.__setattr__(self, "h_columns", cols)

    @property
    def n(self) -> int:
        return self.G.cols

    @property
    def k(self) -> int:
        return self.G.rows

    @property
    def redundancy(self) -> int:
        return self.H.rows

    @property
    def name(self) -> str:
        if self.spec and self.spec.name:
            return self.spec.name
        return f"[{self.n},{self.k}]"

    @classmethod
    def from_generator(cls, g: BitMatrix, spec: Optional[CodeSpec] = None) -> "Code":
        """Derive ``H`` from a full-rank generator; raises on rank deficiency."""
        h = null_space_basis(g)
        return cls(G=g, H=h, spec=spec)

    def syndrome(self, y: BitVector) -> BitVector:
        if len(y) != self.n:
            raise DimensionError(f"received word has {len(y)} bits, code length is {self.n}")
        return mat_vec_mul(self.H, y)


def build_code(spec: CodeSpec) -> Code:
    """Assemble ``G_CRC · M_Interleave · G_Polar`` and its parity-check matrix."""
    width = spec.k + spec.crc_bits
    g = crc_generator_matrix(spec.k, spec.crc_poly)
    if spec.interleave is not None:
        g = mat_mul(g, interleaver_matrix(spec.interleave))
    g = mat_mul(g, polar_generator(spec.n, spec.info_set))
    if rank(g) < spec.k:
        raise ConstructionError(
            f"composite generator of {spec.name or 'code'} is rank deficient; "
            "check the frozen set and CRC choice"
        )
    code = Code.from_generator(g, spec=spec)
    logger.debug(
        "built %s: n=%d k=%d r=%d info rows=%d parity checks=%d",
        code.name, spec.n, spec.k, spec.crc_bits, width, code.redundancy,
    )
    return code


def encode(code: Code, x: BitVector) -> BitVector:
    """``x · G``: XOR of the generator rows selected by ``x``."""
    if len(x) != code.k:
        raise DimensionError(f"information word has {len(x)} bits, code dimension is {code.k}")
    picked = code.G.words[np.asarray(x.indices(), dtype=np.int64)]
    if picked.shape[0] == 0:
        return BitVector.zeros(code.n)
    return BitVector(code.n, np.bitwise_xor.reduce(picked, axis=0))


def is_codeword(code: Code, y: BitVector) -> bool:
    """Codebook membership: ``H · yᵀ == 0``."""
    return code.syndrome(y).is_zero()


def random_code(n: int, k: int, rng: np.random.Generator) -> Code:
    """Uniformly drawn full-rank ``k x n`` generator and its dual."""
    if not 0 < k <= n:
        raise ConstructionError(f"need 0 < k <= n, got n={n} k={k}")
    while True:
        g = BitMatrix.from_array(rng.integers(0, 2, size=(k, n), dtype=np.uint8))
        if rank(g) == k:
            return Code.from_generator(g)


def codebook(code: Code) -> List[BitVector]:
    """All ``2^k`` codewords, in order of the information word's integer value."""
    if code.k > 20:
        raise ValueError(f"refusing to enumerate 2^{code.k} codewords")
    g = code.G.to_array().astype(np.int64)
    words = []
    for value in range(1 << code.k):
        x = np.array([(value >> (code.k - 1 - i)) & 1 for i in range(code.k)], dtype=np.int64)
        words.append(BitVector.from_bits(((x @ g) & 1).astype(np.uint8)))
    return words
