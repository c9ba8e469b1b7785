"""Strip-local Z-detector models with exact strip-wise decoding."""

from stripsym.decoders import (
    ExhaustiveDecoder,
    MonolithicDecoder,
    NoiseModel,
    StripwiseDecoder,
    decode_monolithic,
    decode_stripwise,
    ml_chain,
    ml_exhaustive,
)
from stripsym.families import ALL_FAMILIES, FamilyId, build
from stripsym.gf2 import BitMatrix, BitVector, mat_vec, permute, rank
from stripsym.kernels import BACKEND
from stripsym.model import (
    DetectorModel,
    EquivalenceViolation,
    NonLocalFaultError,
    block_decompose,
    check_one_form,
    check_strip_symmetric,
    strip_stats,
)
from stripsym.pauli import PauliString, SingleQubitClifford, commutes, conjugate, deform_and_check, weight

__version__ = "0.1.0"

__all__ = [
    "ALL_FAMILIES",
    "BACKEND",
    "BitMatrix",
    "BitVector",
    "DetectorModel",
    "EquivalenceViolation",
    "ExhaustiveDecoder",
    "FamilyId",
    "MonolithicDecoder",
    "NoiseModel",
    "NonLocalFaultError",
    "PauliString",
    "SingleQubitClifford",
    "StripwiseDecoder",
    "block_decompose",
    "build",
    "check_one_form",
    "check_strip_symmetric",
    "commutes",
    "conjugate",
    "decode_monolithic",
    "decode_stripwise",
    "deform_and_check",
    "mat_vec",
    "ml_chain",
    "ml_exhaustive",
    "permute",
    "rank",
    "strip_stats",
    "weight",
]
