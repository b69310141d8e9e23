"""Finite-scale laboratory for graphons, Cayley graphons and their symmetries."""

from .core import (
    Graphon,
    GraphonError,
    Kernel,
    SignedKernel,
    WeightedGrid,
    constant_graphon,
    make_graphon,
    metric_graphon,
    metric_graphon_from_matrix,
    sample_graph,
)
from .densities import PatternGraph, hom_density_exact, hom_density_mc, parse_pattern, pattern

__all__ = [
    "Graphon",
    "GraphonError",
    "Kernel",
    "SignedKernel",
    "WeightedGrid",
    "constant_graphon",
    "make_graphon",
    "metric_graphon",
    "metric_graphon_from_matrix",
    "sample_graph",
    "PatternGraph",
    "hom_density_exact",
    "hom_density_mc",
    "parse_pattern",
    "pattern",
]
