"""
BPSK over AWGN with hard decisions and an optional one-bit reliability mask.

Bit 0 is sent as +1 and bit 1 as -1; the receiver adds ``sigma * N`` and takes
the sign. SNR here is ``-10 log10 sigma^2`` dB, which is not Eb/N0.

A bit is unreliable (mask bit 1) when its received amplitude lies in
``[-tau, tau]``. ``tau`` is set so the probability that some bit of the block
flips while marked reliable equals the target mask error rate ``merr``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional, Union

import numpy as np
from scipy.special import log_ndtr, ndtr, ndtri
from scipy.stats import binom

from grandpolar.errors import ChannelDomainError, DimensionError
from grandpolar.gf2 import BitVector

# Substream ids for rng_for; one per consumer so trials never share draws.
STREAM_CONDITIONAL_HARD = 1
STREAM_CONDITIONAL_SOFT = 2
STREAM_DIRECT = 3

SeedLike = Union[int, np.random.Generator]


@dataclass(frozen=True)
class ChannelModel:
    snr_db: float
    sigma: float
    n: int

    def __post_init__(self) -> None:
        if not self.sigma > 0 or not math.isfinite(self.sigma):
            raise ChannelDomainError(f"sigma must be positive and finite, got {self.sigma}")
        if self.n < 1:
            raise ChannelDomainError(f"block length must be positive, got {self.n}")

    @classmethod
    def from_snr(cls, snr_db: float, n: int) -> "ChannelModel":
        return cls(snr_db=float(snr_db), sigma=10.0 ** (-float(snr_db) / 20.0), n=n)

    @classmethod
    def from_sigma(cls, sigma: float, n: int) -> "ChannelModel":
        if not sigma > 0:
            raise ChannelDomainError(f"sigma must be positive, got {sigma}")
        return cls(snr_db=-20.0 * math.log10(sigma), sigma=float(sigma), n=n)


@dataclass(frozen=True)
class MaskSpec:
    """Reliability threshold and the per-bit probabilities it induces."""

    merr: float
    tau: float
    q: float
    p_u: float
    reliable_flip: float

    @property
    def low(self) -> float:
        return -self.tau

    @property
    def high(self) -> float:
        return self.tau


def flip_prob(ch: ChannelModel) -> float:
    """Hard-decision bit flip probability ``P(sigma N > 1)``."""
    return float(ndtr(-1.0 / ch.sigma))


def uncoded_bler(ch: ChannelModel) -> float:
    """Probability that at least one of ``n`` hard decisions is wrong."""
    return float(-np.expm1(ch.n * np.log1p(-flip_prob(ch))))


def mask_error_rate(ch: ChannelModel, tau: float) -> float:
    """``1 - Phi((1 + tau) / sigma)^n``, evaluated in log space."""
    return float(-np.expm1(ch.n * log_ndtr((1.0 + tau) / ch.sigma)))


def mask_threshold(ch: ChannelModel, merr: float) -> MaskSpec:
    """Threshold ``tau`` hitting the block-level mask error rate ``merr``."""
    if not 0.0 < merr < 1.0:
        raise ChannelDomainError(f"mask error rate must lie in (0, 1), got {merr}")
    # 1 - (1 - merr)^(1/n), and Phi^-1(1 - t) = -Phi^-1(t)
    t = -math.expm1(math.log1p(-merr) / ch.n)
    tau = ch.sigma * float(-ndtri(t)) - 1.0
    if tau < 0.0:
        if tau > -1e-12:
            tau = 0.0
        else:
            raise ChannelDomainError(
                f"mask error rate {merr:g} is unattainable at {ch.snr_db:g} dB "
                f"(hard decisions alone give {mask_error_rate(ch, 0.0):.3g}); use a smaller merr"
            )
    s = ch.sigma
    q = float(ndtr((tau - 1.0) / s) - ndtr((-1.0 - tau) / s))
    joint = float(ndtr(-1.0 / s) - ndtr((-1.0 - tau) / s))
    p_u = min(1.0, max(0.0, joint / q)) if q > 0.0 else 0.0
    return MaskSpec(merr=merr, tau=tau, q=max(0.0, q), p_u=p_u, reliable_flip=float(ndtr((-1.0 - tau) / s)))


def binomial_pmf(n: int, p: float, b: int) -> float:
    if not 0 <= b <= n:
        raise ValueError(f"need 0 <= b <= {n}, got b={b}")
    return float(np.exp(binom.logpmf(b, n, p)))


def binomial_pmfs(n: int, p: float) -> np.ndarray:
    """``P(B = b)`` for ``b = 0..n``."""
    return np.exp(binom.logpmf(np.arange(n + 1), n, p))


def binomial_tail(n: int, p: float, b: int) -> float:
    """``P(B > b)``."""
    return float(binom.sf(b, n, p))


def rng_for(seed: int, stream: int, *key: int) -> np.random.Generator:
    """Independent Philox substream, e.g. ``rng_for(seed, STREAM_DIRECT, trial)``."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(stream, *key))))


def _as_rng(seed: SeedLike) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))


def random_bits(k: int, seed: SeedLike) -> BitVector:
    return BitVector.from_bits(_as_rng(seed).integers(0, 2, size=k, dtype=np.uint8))


class Reception(NamedTuple):
    y: BitVector
    s: BitVector
    flips: BitVector


def sample_received(
    c: BitVector, ch: ChannelModel, mask: Optional[MaskSpec], seed: SeedLike
) -> Reception:
    """Transmit ``c`` once; ``s`` is all-zero when no mask is given."""
    if len(c) != ch.n:
        raise DimensionError(f"codeword has {len(c)} bits, channel block length is {ch.n}")
    rng = _as_rng(seed)
    bits = c.to_array()
    received = (1.0 - 2.0 * bits) + ch.sigma * rng.standard_normal(ch.n)
    hard = (received < 0).astype(np.uint8)
    y = BitVector.from_bits(hard)
    if mask is None:
        s = BitVector.zeros(ch.n)
    else:
        s = BitVector.from_bits((np.abs(received) <= mask.tau).astype(np.uint8))
    return Reception(y, s, BitVector.from_bits(hard ^ bits))


def sample_flip_positions(n: int, b: int, seed: SeedLike) -> BitVector:
    """Uniformly random weight-``b`` pattern of length ``n``."""
    if not 0 <= b <= n:
        raise ValueError(f"need 0 <= b <= {n}, got b={b}")
    return BitVector.from_indices(n, _as_rng(seed).choice(n, size=b, replace=False).tolist())
