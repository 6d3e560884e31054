"""Quasi-independence models, coordinate toric fiber products and rational MLE."""

__version__ = "0.1.0"

from .chordal import ml_degree_one_2way
from .cliques import build_poset
from .ctfp import SplitSpec, check_frequency_condition, check_swap_condition, factorize, find_ctfp, glue
from .facial import slices_necessary_condition
from .lawrence import lift_is_ctfp, modified_lawrence_lift
from .mle import birch_residual, ips_one_cycle, ips_run
from .model import IndexSet, MultipartitionMatrix, build_a_matrix, validate_multipartition
from .reparam import build_bar_matrix, linear_decomposition

__all__ = [
    "IndexSet",
    "MultipartitionMatrix",
    "SplitSpec",
    "birch_residual",
    "build_a_matrix",
    "build_bar_matrix",
    "build_poset",
    "check_frequency_condition",
    "check_swap_condition",
    "factorize",
    "find_ctfp",
    "glue",
    "ips_one_cycle",
    "ips_run",
    "lift_is_ctfp",
    "linear_decomposition",
    "ml_degree_one_2way",
    "modified_lawrence_lift",
    "slices_necessary_condition",
    "validate_multipartition",
]
