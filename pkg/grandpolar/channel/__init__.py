"""BPSK/AWGN channel model, reliability masks and samplers."""

from .bpsk import (
    ChannelModel,
    MaskSpec,
    Reception,
    binomial_pmf,
    binomial_pmfs,
    binomial_tail,
    flip_prob,
    mask_error_rate,
    mask_threshold,
    random_bits,
    rng_for,
    sample_flip_positions,
    sample_received,
    uncoded_bler,
)

__all__ = [
    "ChannelModel",
    "MaskSpec",
    "Reception",
    "binomial_pmf",
    "binomial_pmfs",
    "binomial_tail",
    "flip_prob",
    "mask_error_rate",
    "mask_threshold",
    "random_bits",
    "rng_for",
    "sample_flip_positions",
    "sample_received",
    "uncoded_bler",
]
