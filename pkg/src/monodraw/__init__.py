"""Strongly monotone straight-line drawings and their verification."""

from .errors import (ClassificationError, ConvergenceError, InvariantError, MonodrawError, PrecisionError,
                     UsageError, ValidationError)
from .graph import Graph, PlaneEmbedding, classify, planar_embedding
from .outerplanar import draw_outerplanar
from .packing import (PrimalDualPacking, compute_packing, drawing_from_packing, pack_graph,
                      witness_from_packing)
from .tree import draw_tree
from .twotree import draw_two_tree
from .verify import (Drawing, WitnessReport, crossing_free, monotone, safety, strongly_monotone,
                     strongly_monotone_pair, tree_convexity)

__version__ = "0.1.0"

__all__ = [
    "ClassificationError", "ConvergenceError", "Drawing", "Graph", "InvariantError", "MonodrawError",
    "PlaneEmbedding", "PrecisionError", "PrimalDualPacking", "UsageError", "ValidationError", "WitnessReport",
    "classify", "compute_packing", "crossing_free", "draw_outerplanar", "draw_tree", "draw_two_tree",
    "drawing_from_packing", "monotone", "pack_graph", "planar_embedding", "safety", "strongly_monotone",
    "strongly_monotone_pair", "tree_convexity", "witness_from_packing",
]
