"""Append-only table buffer shared by the engines.

Keeps dimension codes and normalized measures both as Python tuples (for
the per-bucket comparisons) and as contiguous numpy arrays (for the
kernels). Rows are stored in arrival order; row i holds the tuple with the
i-th smallest id.
"""

from __future__ import annotations

import numpy as np

from skyfact.schema import Schema, TupleRecord


class TableBuffer:
    def __init__(self, schema: Schema, capacity: int = 64) -> None:
        self.schema = schema
        self._dims = np.zeros((capacity, schema.n_dims), dtype=np.int32)
        self._meas = np.zeros((capacity, schema.n_measures), dtype=np.float64)
        self.count = 0
        self.ids: list[int] = []
        self.row_of: dict[int, int] = {}
        self.dims_list: list[tuple[int, ...]] = []
        self.meas_list: list[tuple[float, ...]] = []

    def __len__(self) -> int:
        return self.count

    def append(self, rec: TupleRecord) -> None:
        if self.ids and rec.id <= self.ids[-1]:
            raise ValueError(f"tuple ids must increase: {rec.id} after {self.ids[-1]}")
        if self.count == self._dims.shape[0]:
            self._dims = np.resize(self._dims, (self.count * 2, self.schema.n_dims))
            self._meas = np.resize(self._meas, (self.count * 2, self.schema.n_measures))
        self._dims[self.count] = rec.dims
        self._meas[self.count] = rec.measures
        self.row_of[rec.id] = self.count
        self.count += 1
        self.ids.append(rec.id)
        self.dims_list.append(rec.dims)
        self.meas_list.append(rec.measures)

    @property
    def dims_np(self) -> np.ndarray:
        return self._dims[: self.count]

    @property
    def meas_np(self) -> np.ndarray:
        return self._meas[: self.count]

    def record(self, row: int) -> TupleRecord:
        return TupleRecord(self.ids[row], self.dims_list[row], self.meas_list[row])
