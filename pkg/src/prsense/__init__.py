"""5G positioning reference signal (PRS) radar sensing simulation.

The pipeline runs sequence generation, resource-grid mapping, point-target
echo, quotient matrix, then range/velocity estimation, with Cramer-Rao bounds
and the ambiguity function for reference.
"""
__version__ = "0.1.0"

from .bounds import (AmbiguitySurface, CrlbReport, ambiguity, crlb_positioning, crlb_radar,
                     fisher_oracle)
from .channel import QuotientMatrix, TargetScenario, apply_echo, quotient
from .estimators import (RangeEstimate, VelocityEstimate, estimate_range, estimate_velocity,
                         estimate_velocity_multiframe, frame_metrics, max_unambiguous_range,
                         max_unambiguous_velocity, range_resolution, velocity_resolution)
from .grid import PrsPattern, ResourceGrid, map_prs
from .harness import SweepResult, SweepSpec, run_sweep
from .numerology import NumerologyConfig, numerology_from_mu
from .sequences import PrsSequenceId, gold_bits, prs_symbols

__all__ = [
    "AmbiguitySurface", "CrlbReport", "NumerologyConfig", "PrsPattern", "PrsSequenceId",
    "QuotientMatrix", "RangeEstimate", "ResourceGrid", "SweepResult", "SweepSpec",
    "TargetScenario", "VelocityEstimate", "ambiguity", "apply_echo", "crlb_positioning",
    "crlb_radar", "estimate_range", "estimate_velocity", "estimate_velocity_multiframe",
    "fisher_oracle", "frame_metrics", "gold_bits", "map_prs", "max_unambiguous_range",
    "max_unambiguous_velocity", "numerology_from_mu", "prs_symbols", "quotient",
    "range_resolution", "run_sweep", "velocity_resolution",
]
