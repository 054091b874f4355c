"""
CA-Polar codes

Builds G = G_CRC · M_Interleave · G_Polar and its parity-check matrix:
    - crc: systematic CRC generator matrices
    - polar: Kronecker transform, TS 38.212 and Bhattacharyya information sets
    - ts38212: standard tables (polar sequence, input interleaver, CRCs)
    - ca_polar: CodeSpec, Code, build_code, encode, is_codeword
    - config: key-value code configs and shipped presets
"""

from .ca_polar import (
    Code,
    CodeSpec,
    build_code,
    codebook,
    encode,
    interleaver_matrix,
    is_codeword,
    random_code,
)
from .config import list_presets, load_code_spec, spec_to_config_text
from .crc import crc_attach, crc_degree, crc_generator_matrix, crc_remainder
from .polar import bhattacharyya_info_set, kernel_power, polar_generator, ts38212_info_set

__all__ = [
    "Code",
    "CodeSpec",
    "bhattacharyya_info_set",
    "build_code",
    "codebook",
    "crc_attach",
    "crc_degree",
    "crc_generator_matrix",
    "crc_remainder",
    "encode",
    "interleaver_matrix",
    "is_codeword",
    "kernel_power",
    "list_presets",
    "load_code_spec",
    "polar_generator",
    "random_code",
    "spec_to_config_text",
    "ts38212_info_set",
]
