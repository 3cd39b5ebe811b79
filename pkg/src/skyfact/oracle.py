"""From-scratch recomputation over the table buffer.

Backs the exhaustive engine, prominence scoring for engines that do not
materialize full skylines, and the invariant audits. Correctness by
construction is the point here, speed comes from the kernels.
"""

from __future__ import annotations

import numpy as np

from skyfact import kernels
from skyfact.lattice import (
    Pattern,
    bound_mask,
    enumerate_constraints,
    is_ancestor_or_equal,
)
from skyfact.schema import TupleRecord
from skyfact.table import TableBuffer

FactSet = set[tuple[Pattern, int]]


def facts_for_tuple(
    table: TableBuffer,
    rec: TupleRecord,
    d_hat: int,
    subspace_masks: list[int],
) -> FactSet:
    """Every (constraint, subspace) pair under which the new tuple enters
    the contextual skyline, by direct comparison against all prior rows."""
    patterns = enumerate_constraints(rec.dims, d_hat)
    cmasks = np.array([bound_mask(p) for p in patterns], dtype=np.int64)
    mmasks = np.array(subspace_masks, dtype=np.int64)
    t_dims = np.array(rec.dims, dtype=np.int32)
    t_meas = np.array(rec.measures, dtype=np.float64)
    matrix = kernels.facts_matrix(
        table.dims_np, table.meas_np, t_dims, t_meas, cmasks, mmasks
    )
    out: FactSet = set()
    for ci, pattern in enumerate(patterns):
        for mi, mask in enumerate(subspace_masks):
            if matrix[ci, mi]:
                out.add((pattern, mask))
    return out


def context_row_indices(table: TableBuffer, pattern: Pattern) -> np.ndarray:
    """Rows whose dimension codes satisfy the constraint pattern."""
    ref = np.array([v if v else 1 for v in pattern], dtype=np.int32)
    return kernels.context_rows(table.dims_np, ref, bound_mask(pattern))


def skyline_rows(table: TableBuffer, pattern: Pattern, mask: int) -> list[int]:
    rows = context_row_indices(table, pattern)
    if len(rows) == 0:
        return []
    flags = kernels.skyline_flags(np.ascontiguousarray(table.meas_np[rows]), mask)
    return [int(r) for r, f in zip(rows, flags) if f]


def skyline_ids(table: TableBuffer, pattern: Pattern, mask: int) -> set[int]:
    return {table.ids[r] for r in skyline_rows(table, pattern, mask)}


def skyline_size(table: TableBuffer, pattern: Pattern, mask: int) -> int:
    return len(skyline_rows(table, pattern, mask))


def context_size(table: TableBuffer, pattern: Pattern) -> int:
    return len(context_row_indices(table, pattern))


def skyline_constraints(
    table: TableBuffer, row: int, mask: int, d_hat: int
) -> list[Pattern]:
    """Constraints (bound count capped) whose contextual skyline contains
    the given row's tuple."""
    dims = table.dims_list[row]
    out = []
    for pattern in enumerate_constraints(dims, d_hat):
        if row in skyline_rows(table, pattern, mask):
            out.append(pattern)
    return out


def maximal_skyline_constraints(
    table: TableBuffer, row: int, mask: int, d_hat: int
) -> set[Pattern]:
    """Maximal elements of the row's skyline constraints under subsumption."""
    sky = skyline_constraints(table, row, mask, d_hat)
    sky_set = set(sky)
    out = set()
    for c in sky:
        covered = any(
            other != c and is_ancestor_or_equal(other, c) for other in sky_set
        )
        if not covered:
            out.add(c)
    return out
