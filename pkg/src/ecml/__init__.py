"""Counting and deciding graph problems written in counting modal logic,
by dynamic programming over tree decompositions."""
from .cutcount import DecisionResult, Decider, decide, mod2_object_count
from .decomposition import (
    NiceDecomposition,
    TreeDecomposition,
    greedy_decomposition,
    make_nice,
    validate_decomposition,
)
from .dp import count_solutions
from .dsl import ProblemSpec, parse_problem
from .graph import Graph, Instance, bind_instance, parse_graph
from .hardness import CnfFormula, generate
from .oracle import brute_force_count, brute_force_decide
from .problems import CATALOGUE, make_problem
from .upset import UPSet, upset_parse

__all__ = [
    "CATALOGUE", "CnfFormula", "DecisionResult", "Decider", "Graph", "Instance",
    "NiceDecomposition", "ProblemSpec", "TreeDecomposition", "UPSet", "bind_instance",
    "brute_force_count", "brute_force_decide", "count_solutions", "decide", "generate",
    "greedy_decomposition", "make_nice", "make_problem", "mod2_object_count",
    "parse_graph", "parse_problem", "upset_parse", "validate_decomposition",
]
