"""Symbolic computation with logarithmic D-modules on affine idealized log charts."""

from .chart import Chart, StratumComponent, logdim_subvariety, strata_components
from .charvar import ch_report, char_ideal, is_holonomic, log_dim_ch, restrict_to_stratum, split_by_support
from .comalg import CommIdeal, krull_dim
from .duality import ext_module, verdier_dual
from .frontend import parse_expression, parse_problem, emit_report
from .ncgb import ModulePresentation, PresComplex, complex_from_module, free_resolution
from .opalg import OpElement, transpose, twist
from .perverse import (check_ge0, check_le0, gabber_filtration, is_log_perverse, p_coherent,
                       perverse_truncate, sato_kashiwara)

__all__ = [
    "Chart", "StratumComponent", "logdim_subvariety", "strata_components",
    "ch_report", "char_ideal", "is_holonomic", "log_dim_ch", "restrict_to_stratum",
    "split_by_support", "CommIdeal", "krull_dim", "ext_module", "verdier_dual",
    "parse_expression", "parse_problem", "emit_report", "ModulePresentation", "PresComplex",
    "complex_from_module", "free_resolution", "OpElement", "transpose", "twist",
    "check_ge0", "check_le0", "gabber_filtration", "is_log_perverse", "p_coherent",
    "perverse_truncate", "sato_kashiwara",
]
