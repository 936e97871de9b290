"""Generalized-Gaussian entropy models with dynamic likelihood intervals."""

from .codec import (
    LatentBatch,
    LatentRecord,
    ParamTable,
    RateReport,
    decode_stream,
    encode_stream,
    estimate_bits,
)
from .errors import ConfigError, DecodeError, DomainError, EncodeError, FormatError, GgecError
from .ggd_math import GgdParams, NumericError, ggd_cdf, ggd_pdf
from .interval_model import (
    Alphabet,
    CodingMode,
    IntervalSpec,
    QuantizedCdf,
    SymbolParams,
    build_cdf_table,
    delta_scale,
)

__version__ = "0.1.0"

__all__ = [
    "Alphabet",
    "CodingMode",
    "ConfigError",
    "DecodeError",
    "DomainError",
    "EncodeError",
    "FormatError",
    "GgdParams",
    "GgecError",
    "IntervalSpec",
    "LatentBatch",
    "LatentRecord",
    "NumericError",
    "ParamTable",
    "QuantizedCdf",
    "RateReport",
    "SymbolParams",
    "build_cdf_table",
    "decode_stream",
    "delta_scale",
    "encode_stream",
    "estimate_bits",
    "ggd_cdf",
    "ggd_pdf",
]
