"""Incremental discovery of contextual-skyline facts over streaming tables.

For each tuple appended to a table with categorical dimension attributes
and numeric measure attributes, the engines find every (constraint,
measure-subspace) pair under which the tuple enters the contextual
skyline, and rank those facts by prominence.
"""

from skyfact.dominance import (
    DominanceOutcome,
    MeasurePartition,
    dominated_in_subspace,
    dominates,
    partition_measures,
)
from skyfact.lattice import (
    Pattern,
    Subsumption,
    compute_frontier,
    enumerate_constraints,
    intersection_bottom,
    satisfies,
    subsumes,
)
from skyfact.schema import (
    Direction,
    DimensionInterner,
    Schema,
    SchemaError,
    TupleRecord,
    make_schema,
    normalize_measures,
)

__version__ = "0.1.0"

__all__ = [
    "Direction",
    "DimensionInterner",
    "DominanceOutcome",
    "MeasurePartition",
    "Pattern",
    "Schema",
    "SchemaError",
    "Subsumption",
    "TupleRecord",
    "compute_frontier",
    "dominated_in_subspace",
    "dominates",
    "enumerate_constraints",
    "intersection_bottom",
    "make_schema",
    "normalize_measures",
    "partition_measures",
    "satisfies",
    "subsumes",
    "__version__",
]
