"""Raptor codec: LDPC precoder, rateless inner code, joint BP decoder."""

from .backend import COMPILED, backend_name
from .decoder import DecodeResult, DecodeSession, RaptorCode, TannerGraph
from .lt import SymbolBlock, lt_degrees, lt_encode
from .precode import Precode, PrecodeError, PrecodeSpec, build_precoder

__all__ = [
    "COMPILED",
    "DecodeResult",
    "DecodeSession",
    "Precode",
    "PrecodeError",
    "PrecodeSpec",
    "RaptorCode",
    "SymbolBlock",
    "TannerGraph",
    "backend_name",
    "build_precoder",
    "lt_degrees",
    "lt_encode",
]
