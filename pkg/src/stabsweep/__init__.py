"""Batched 1-D stabbing-max: plane sweep, sequential and parallel distribution
sweeping, and 2-way divide and conquer."""

from .config import AutoK, Fixed, RunConfig, default_M
from .core import (
    SENTINEL,
    Answers,
    Instance,
    ParseError,
    StabAnswer,
    make_objects,
    make_queries,
    make_segments,
    prepare,
    read_objects,
    read_results,
    write_objects,
    write_results,
)
from .generators import GenSpec, Kind, generate
from .metrics import Metrics, MetricsReport, TouchCounter, snapshot
from .oracle import stab_oracle
from .parsweep import par_dist_sweep
from .planesweep import plane_sweep
from .seqsweep import seq_dist_sweep
from .solvers import ALGORITHMS, solve, solve_prepared
from .twoway import two_way_sweep

__all__ = [
    "ALGORITHMS", "Answers", "AutoK", "Fixed", "GenSpec", "Instance", "Kind", "Metrics", "MetricsReport",
    "ParseError", "RunConfig", "SENTINEL", "StabAnswer", "TouchCounter", "default_M",
    "generate", "make_objects", "make_queries", "make_segments", "par_dist_sweep", "plane_sweep",
    "prepare", "read_objects", "read_results", "seq_dist_sweep", "snapshot", "solve",
    "solve_prepared", "stab_oracle", "two_way_sweep", "write_objects", "write_results",
]
__version__ = "0.1.0"
