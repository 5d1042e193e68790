"""Memory-minimised piecewise-linear lookup tables for elementary functions."""

from .catalog import CATALOG, FunctionSpec, affine, get_function
from .errors import ArgumentError, DomainError, ExportError, PwlutError, RangeError
from .fixedpoint import FixedPointFormat
from .hwmodel import bram_count, bram_layout, export_descriptor, export_mem_init, latency_report, \
    load_descriptor
from .segmentation import Partition, SegmentPlan, SplitConfig, plan, split
from .spacing import footprint_reduction, uniform_spacing
from .stats import StudyConfig, mean_reduction_study, outperforms, t_test_two_sample
from .table import SegmentedTable, build_table, evaluate_fixed, evaluate_real

__version__ = "0.1.0"

__all__ = [
    "CATALOG", "FunctionSpec", "affine", "get_function",
    "ArgumentError", "DomainError", "ExportError", "PwlutError", "RangeError",
    "FixedPointFormat",
    "bram_count", "bram_layout", "export_descriptor", "export_mem_init", "latency_report",
    "load_descriptor",
    "Partition", "SegmentPlan", "SplitConfig", "plan", "split",
    "footprint_reduction", "uniform_spacing",
    "StudyConfig", "mean_reduction_study", "outperforms", "t_test_two_sample",
    "SegmentedTable", "build_table", "evaluate_fixed", "evaluate_real",
]
