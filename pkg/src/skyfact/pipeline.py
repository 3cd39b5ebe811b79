"""CSV ingestion pipeline: parse, normalize, discover, score, gate, emit.

Drives one engine over an arrival-ordered CSV stream. Per accepted row it
emits JSON fact records (deterministic field order, no timestamps) and a
metrics line; plot data summarizing prominent facts can be written at the
end of a run.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterator, TextIO

from skyfact.baselines import BaselineIdxEngine, BaselineSeqEngine, BruteForceEngine
from skyfact.dominance import subspace_names
from skyfact.engines import (
    BottomUpEngine,
    SBottomUpEngine,
    STopDownEngine,
    TopDownEngine,
    TupleMetrics,
)
from skyfact.lattice import enumerate_constraints
from skyfact.prominence import ScoredFact, prominent_facts, score_facts, top_k_facts
from skyfact.schema import (
    Direction,
    DimensionInterner,
    Schema,
    SchemaError,
    TupleRecord,
    make_schema,
    normalize_measures,
)
from skyfact.store import ContextCounter, FileStore, MemoryStore
from skyfact.table import TableBuffer

ENGINE_NAMES = (
    "brute",
    "baseline-seq",
    "baseline-idx",
    "bottom-up",
    "top-down",
    "s-bottom-up",
    "s-top-down",
)

_MISSING_TOKENS = {"", "null", "NULL", "NA", "N/A", "nan", "NaN", "None"}


class IngestError(ValueError):
    """A row or configuration the pipeline refuses to process."""


@dataclass
class RunConfig:
    schema: Schema
    engine: str = "s-top-down"
    d_hat: int | None = None
    m_hat: int | None = None
    tau: Fraction | None = None
    top_k: int | None = None
    store_root: str | None = None  # None selects the in-memory store
    audit_every: int | None = None
    lenient: bool = False
    plot_window: int = 1000

    def __post_init__(self) -> None:
        if self.engine not in ENGINE_NAMES:
            raise IngestError(f"unknown engine {self.engine!r}")
        if self.tau is not None and self.top_k is not None:
            raise IngestError("tau and top-k gating are mutually exclusive")
        n, s = self.schema.n_dims, self.schema.n_measures
        if self.d_hat is not None and not 0 <= self.d_hat <= n:
            raise IngestError(f"dhat must be in [0, {n}]")
        if self.m_hat is not None and not 1 <= self.m_hat <= s:
            raise IngestError(f"mhat must be in [1, {s}]")


def parse_tau(text: str) -> Fraction | None:
    if text.lower() == "off":
        return None
    try:
        if "/" in text:
            p, q = text.split("/", 1)
            return Fraction(int(p), int(q))
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise IngestError(f"bad tau value {text!r}: {exc}") from None


def load_schema(config: dict) -> Schema:
    try:
        dimensions = config["dimensions"]
        measures = [(m["name"], m["direction"]) for m in config["measures"]]
    except (KeyError, TypeError) as exc:
        raise IngestError(f"config missing schema fields: {exc}") from None
    try:
        return make_schema(dimensions, measures)
    except ValueError as exc:
        raise IngestError(str(exc)) from None


@dataclass
class TupleResult:
    tuple_id: int
    emitted: list[ScoredFact]
    all_scored: list[ScoredFact]
    metrics: TupleMetrics
    stored_count: int


class DiscoveryPipeline:
    def __init__(self, config: RunConfig) -> None:
        self.config = config
        schema = config.schema
        self.schema = schema
        self.interner = DimensionInterner(schema)
        self.table = TableBuffer(schema)
        self.counter = ContextCounter()
        self.d_hat = schema.n_dims if config.d_hat is None else config.d_hat
        self.store = None
        if config.engine in ("brute", "baseline-seq", "baseline-idx"):
            cls = {
                "brute": BruteForceEngine,
                "baseline-seq": BaselineSeqEngine,
                "baseline-idx": BaselineIdxEngine,
            }[config.engine]
            self.engine = cls(schema, self.table, config.d_hat, config.m_hat)
        else:
            if config.store_root is None:
                self.store = MemoryStore()
            else:
                self.store = FileStore(config.store_root, schema.n_measures)
            cls = {
                "bottom-up": BottomUpEngine,
                "top-down": TopDownEngine,
                "s-bottom-up": SBottomUpEngine,
                "s-top-down": STopDownEngine,
            }[config.engine]
            self.engine = cls(schema, self.table, self.store,
                              config.d_hat, config.m_hat)
        self._next_id = 1

    def process(self, dims: tuple[str, ...], raw_measures: tuple[float, ...]) -> TupleResult:
        """Run one arrival through the engine and score its facts."""
        rec = TupleRecord(
            self._next_id,
            self.interner.intern(dims),
            normalize_measures(raw_measures, self.schema),
        )
        self._next_id += 1
        result = self.engine.insert(rec)
        self.table.append(rec)
        self.counter.add(enumerate_constraints(rec.dims, self.d_hat))
        scored = score_facts(result.facts, self.counter, self.engine.skyline_size)
        if self.config.tau is not None:
            emitted = prominent_facts(scored, self.config.tau)
        elif self.config.top_k is not None:
            emitted = top_k_facts(scored, self.config.top_k)
        else:
            emitted = scored
        stored = self.store.stored_count() if self.store is not None else 0
        return TupleResult(rec.id, emitted, scored, result.metrics, stored)

    def fact_record(self, tuple_id: int, fact: ScoredFact) -> dict:
        constraint = {}
        for i, code in enumerate(fact.pattern):
            if code:
                constraint[self.schema.dimension_names[i]] = self.interner.value_of(
                    i, code
                )
        return {
            "tuple_id": tuple_id,
            "constraint": constraint,
            "subspace": subspace_names(fact.mask, self.schema.measure_names),
            "context_size": fact.context_size,
            "skyline_size": fact.skyline_size,
            "prominence": f"{fact.prominence.numerator}/{fact.prominence.denominator}",
        }

    def audit(self) -> None:
        self.engine.audit()


def _parse_row(
    row: dict[str, str], schema: Schema, row_number: int, lenient: bool
) -> tuple[tuple[str, ...], tuple[float, ...]] | None:
    dims = []
    for name in schema.dimension_names:
        value = row.get(name)
        if value is None or value in _MISSING_TOKENS:
            if lenient:
                return None
            raise IngestError(f"row {row_number}: missing dimension {name!r}")
        dims.append(value)
    measures = []
    for name in schema.measure_names:
        value = row.get(name)
        if value is None or value in _MISSING_TOKENS:
            if lenient:
                return None
            raise IngestError(f"row {row_number}: missing measure {name!r}")
        try:
            measures.append(float(value))
        except ValueError:
            if lenient:
                return None
            raise IngestError(
                f"row {row_number}: unparseable measure {name}={value!r}"
            ) from None
    return tuple(dims), tuple(measures)


def ingest(
    csv_path: str | Path,
    config: RunConfig,
    warn: TextIO | None = None,
) -> Iterator[tuple[DiscoveryPipeline, TupleResult]]:
    """Stream a CSV through a fresh pipeline, yielding per-tuple results.

    Rows arrive in file order. In strict mode a bad row aborts the run; in
    lenient mode it is skipped with a diagnostic on the warning stream.
    """
    pipeline = DiscoveryPipeline(config)
    with open(csv_path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is not None:
            missing = [
                c
                for c in config.schema.dimension_names + config.schema.measure_names
                if c not in reader.fieldnames
            ]
            if missing:
                raise IngestError(f"input is missing configured columns: {missing}")
        for row_number, row in enumerate(reader, start=2):
            parsed = _parse_row(row, config.schema, row_number, config.lenient)
            if parsed is None:
                if warn is not None:
                    warn.write(f"skipping row {row_number}: bad or missing values\n")
                continue
            dims, measures = parsed
            result = pipeline.process(dims, measures)
            if (
                config.audit_every
                and result.tuple_id % config.audit_every == 0
            ):
                pipeline.audit()
            yield pipeline, result


@dataclass
class PlotData:
    """Aggregates the prominent-fact distributions a run produces."""

    window: int
    d_hat: int
    m_hat: int
    last_id: int = 0
    per_tuple: dict[int, int] = field(default_factory=dict)
    by_bound: dict[int, int] = field(default_factory=dict)
    by_subspace: dict[int, int] = field(default_factory=dict)

    def add(self, result: TupleResult) -> None:
        self.last_id = max(self.last_id, result.tuple_id)
        self.per_tuple[result.tuple_id] = len(result.emitted)
        for fact in result.emitted:
            bound = sum(1 for v in fact.pattern if v)
            self.by_bound[bound] = self.by_bound.get(bound, 0) + 1
            size = fact.mask.bit_count()
            self.by_subspace[size] = self.by_subspace.get(size, 0) + 1

    def write(self, directory: str | Path) -> None:
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        with open(directory / "facts_per_window.csv", "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["window_start_id", "window_end_id", "prominent_facts"])
            start = 1
            while start <= self.last_id:
                end = min(start + self.window - 1, self.last_id)
                count = sum(
                    self.per_tuple.get(i, 0) for i in range(start, end + 1)
                )
                writer.writerow([start, end, count])
                start = end + 1
        with open(directory / "facts_by_bound_attrs.csv", "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["bound_attrs", "prominent_facts"])
            for k in range(self.d_hat + 1):
                writer.writerow([k, self.by_bound.get(k, 0)])
        with open(directory / "facts_by_subspace_size.csv", "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["subspace_size", "prominent_facts"])
            for k in range(1, self.m_hat + 1):
                writer.writerow([k, self.by_subspace.get(k, 0)])


def run(
    csv_path: str | Path,
    config: RunConfig,
    output: TextIO,
    metrics_out: TextIO | None = None,
    plots_dir: str | Path | None = None,
    warn: TextIO | None = None,
) -> int:
    """Execute a full run; returns the number of tuples processed."""
    m_hat = (
        config.schema.n_measures if config.m_hat is None else config.m_hat
    )
    d_hat = config.schema.n_dims if config.d_hat is None else config.d_hat
    plot = PlotData(config.plot_window, d_hat, m_hat)
    if metrics_out is not None:
        metrics_out.write("tuple_id,comparisons,traversed,elapsed_s,facts\n")
    processed = 0
    for pipeline, result in ingest(csv_path, config, warn=warn):
        processed += 1
        for fact in result.emitted:
            record = pipeline.fact_record(result.tuple_id, fact)
            output.write(json.dumps(record, separators=(",", ":")) + "\n")
        output.flush()
        if metrics_out is not None:
            m = result.metrics
            metrics_out.write(
                f"{result.tuple_id},{m.comparisons},{m.traversed},"
                f"{m.elapsed_s:.6f},{m.facts}\n"
            )
        plot.add(result)
    if plots_dir is not None:
        plot.write(plots_dir)
    return processed
