"""Table schema, measure normalization, and dimension-value interning.

A table has categorical dimension attributes (on which equality constraints
are formed) and numeric measure attributes (on which dominance is compared).
Every measure carries a preferred direction; values are normalized once at
ingest so that all downstream comparisons are larger-is-better.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence


class SchemaError(ValueError):
    """Raised for schema violations: bad column sets, length mismatches."""


class Direction(Enum):
    LARGER_BETTER = "larger"
    SMALLER_BETTER = "smaller"


@dataclass(frozen=True)
class Schema:
    """Ordered dimension and measure attribute declarations.

    The dimension order is fixed for the schema's lifetime: constraint
    encodings and store keys depend on it.
    """

    dimension_names: tuple[str, ...]
    measure_names: tuple[str, ...]
    directions: tuple[Direction, ...]

    def __post_init__(self) -> None:
        if not self.dimension_names:
            raise SchemaError("at least one dimension attribute is required")
        if not self.measure_names:
            raise SchemaError("at least one measure attribute is required")
        if len(self.measure_names) != len(self.directions):
            raise SchemaError("one direction per measure attribute is required")
        all_names = self.dimension_names + self.measure_names
        if len(set(all_names)) != len(all_names):
            raise SchemaError(f"attribute names must be unique: {all_names}")

    @property
    def n_dims(self) -> int:
        return len(self.dimension_names)

    @property
    def n_measures(self) -> int:
        return len(self.measure_names)

    @property
    def full_measure_mask(self) -> int:
        return (1 << self.n_measures) - 1


def make_schema(
    dimensions: Sequence[str],
    measures: Sequence[tuple[str, Direction | str]],
) -> Schema:
    """Build a Schema from name lists; direction may be given as a string."""
    names = []
    dirs = []
    for name, direction in measures:
        if isinstance(direction, str):
            direction = Direction(direction)
        names.append(name)
        dirs.append(direction)
    return Schema(tuple(dimensions), tuple(names), tuple(dirs))


def normalize_measures(raw: Sequence[float], schema: Schema) -> tuple[float, ...]:
    """Orient raw measure values so that larger is always better.

    Values on smaller-is-better attributes are negated; the rest pass
    through unchanged.
    """
    if len(raw) != schema.n_measures:
        raise SchemaError(
            f"expected {schema.n_measures} measure values, got {len(raw)}"
        )
    return tuple(
        -float(v) if d is Direction.SMALLER_BETTER else float(v)
        for v, d in zip(raw, schema.directions)
    )


@dataclass(frozen=True)
class TupleRecord:
    """One ingested row: arrival id, interned dimension codes, normalized measures."""

    id: int
    dims: tuple[int, ...]
    measures: tuple[float, ...]


class DimensionInterner:
    """Per-attribute mapping of dimension values to dense integer codes.

    Code 0 is reserved for the constraint wildcard; real values are coded
    from 1 in first-seen order. Domains grow as new values arrive.
    """

    def __init__(self, schema: Schema) -> None:
        self.schema = schema
        self._codes: list[dict[str, int]] = [{} for _ in schema.dimension_names]
        self._values: list[list[str]] = [[] for _ in schema.dimension_names]

    def intern(self, values: Sequence[str]) -> tuple[int, ...]:
        if len(values) != self.schema.n_dims:
            raise SchemaError(
                f"expected {self.schema.n_dims} dimension values, got {len(values)}"
            )
        out = []
        for i, v in enumerate(values):
            table = self._codes[i]
            code = table.get(v)
            if code is None:
                code = len(table) + 1
                table[v] = code
                self._values[i].append(v)
            out.append(code)
        return tuple(out)

    def value_of(self, dim_index: int, code: int) -> str:
        if code <= 0:
            raise ValueError("code 0 is the wildcard; it has no value")
        return self._values[dim_index][code - 1]

    def code_of(self, dim_index: int, value: str) -> int:
        try:
            return self._codes[dim_index][value]
        except KeyError:
            raise KeyError(f"value {value!r} never seen on dimension {dim_index}") from None

    def domain_size(self, dim_index: int) -> int:
        return len(self._values[dim_index])
