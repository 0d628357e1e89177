"""Rateless reconciliation for the very low SNR regime.

Degree-distribution design via mean-LLR analysis and linear
programming, a Raptor codec with a compiled message-passing core, and
a reverse-reconciliation harness with secret-key-rate accounting.
"""

from .channel import ChannelParams, db_to_linear, linear_to_db, llr, transmit
from .codec.backend import COMPILED, backend_name
from .codec.decoder import DecodeResult, DecodeSession, RaptorCode
from .codec.precode import PrecodeSpec, build_precoder
from .degree import DegreeDistribution, DistributionError, EdgeDistribution
from .design import (DesignResult, DesignSpecGeneral, DesignSpecLowSnr,
                     efficiency_ceiling, optimize_general, optimize_low_snr)
from .exitchart import ExitTable, build_exit_table, capacity, f_d, phi
from .experiments import EfficiencySummary, measure_efficiency
from .qkd import (BlockSchedule, CvqkdParams, Transcript, equivalent_snr,
                  key_rate, key_rate_vs_distance, run_reconciliation)

__version__ = "0.1.0"

__all__ = [
    "COMPILED",
    "BlockSchedule",
    "ChannelParams",
    "CvqkdParams",
    "DecodeResult",
    "DecodeSession",
    "DegreeDistribution",
    "DesignResult",
    "DesignSpecGeneral",
    "DesignSpecLowSnr",
    "DistributionError",
    "EdgeDistribution",
    "EfficiencySummary",
    "ExitTable",
    "PrecodeSpec",
    "RaptorCode",
    "Transcript",
    "backend_name",
    "build_exit_table",
    "build_precoder",
    "capacity",
    "db_to_linear",
    "efficiency_ceiling",
    "equivalent_snr",
    "f_d",
    "key_rate",
    "key_rate_vs_distance",
    "linear_to_db",
    "llr",
    "measure_efficiency",
    "optimize_general",
    "optimize_low_snr",
    "phi",
    "run_reconciliation",
    "transmit",
]
