"""Maximum weight metric triangle packing: a deterministic approximation
algorithm with the oracles and certificates that check its bounds."""

from .core import (InstanceFormatError, Matching, MetricInstance, MetricViolationError,
                   OrientedCyclePacking, Report, StructuralError, Triangle,
                   TrianglePacking, check_metric, gen_euclidean, gen_graph_metric,
                   load_instance, packing_weight, save_instance, uniform_instance)
from .cyclepack import max_weight_cycle_packing, orient, split_to_short
from .classify import classify, parameters, type_split
from .matching import (WeightedGraph, max_weight_matching, max_weight_matching_of_size,
                       max_weight_perfect_matching)
from .pack1 import best_partial_packing, build_t1
from .pack2 import build_t2, sample_Z, verify_Z
from .pack3 import build_t3, build_triplet_graph, derandomize_X, sample_X
from .solver import Solution, solve
from .tradeoff import build_lp, instance_ledger, solve_lp

__all__ = [
    "InstanceFormatError", "Matching", "MetricInstance", "MetricViolationError",
    "OrientedCyclePacking", "Report", "StructuralError", "Triangle", "TrianglePacking",
    "check_metric", "gen_euclidean", "gen_graph_metric", "load_instance",
    "packing_weight", "save_instance", "uniform_instance",
    "max_weight_cycle_packing", "orient", "split_to_short",
    "classify", "parameters", "type_split",
    "WeightedGraph", "max_weight_matching", "max_weight_matching_of_size",
    "max_weight_perfect_matching",
    "best_partial_packing", "build_t1", "build_t2", "sample_Z", "verify_Z",
    "build_t3", "build_triplet_graph", "derandomize_X", "sample_X",
    "Solution", "solve", "build_lp", "instance_ledger", "solve_lp",
]
