"""Shared fixtures: the two worked example tables, random stream
generation, and a deliberately naive reference oracle kept independent of
the package's kernel code paths."""

from __future__ import annotations

import random
from itertools import combinations

import pytest

from skyfact.pipeline import DiscoveryPipeline, RunConfig
from skyfact.schema import Direction, make_schema

# Three dimension attributes, two measures, larger better everywhere.
RUNNING_EXAMPLE_ROWS = [
    (("a1", "b2", "c2"), (10.0, 15.0)),
    (("a1", "b1", "c1"), (15.0, 10.0)),
    (("a2", "b1", "c2"), (17.0, 17.0)),
    (("a2", "b1", "c1"), (20.0, 20.0)),
    (("a1", "b1", "c1"), (11.0, 15.0)),
]

GAMELOG_HEADER = (
    "tuple_id,player,day,month,season,team,opp_team,points,assists,rebounds"
)
GAMELOG_ROWS = [
    "t1,Bogues,11,Feb.,1991-92,Hornets,Hawks,4,12,5",
    "t2,Seikaly,13,Feb.,1991-92,Heat,Hawks,24,5,15",
    "t3,Sherman,7,Dec.,1993-94,Celtics,Nets,13,13,5",
    "t4,Wesley,4,Feb.,1994-95,Celtics,Nets,2,5,2",
    "t5,Wesley,5,Feb.,1994-95,Celtics,Timberwolves,3,5,3",
    "t6,Strickland,3,Jan.,1995-96,Blazers,Celtics,27,18,8",
    "t7,Wesley,25,Feb.,1995-96,Celtics,Nets,12,13,5",
]

GAMELOG_DIMENSIONS = ["player", "month", "season", "team", "opp_team"]
GAMELOG_MEASURES = [
    {"name": "points", "direction": "larger"},
    {"name": "assists", "direction": "larger"},
    {"name": "rebounds", "direction": "larger"},
]


@pytest.fixture
def running_schema():
    return make_schema(
        ["d1", "d2", "d3"],
        [("m1", Direction.LARGER_BETTER), ("m2", Direction.LARGER_BETTER)],
    )


@pytest.fixture
def gamelog_schema():
    return make_schema(
        GAMELOG_DIMENSIONS,
        [(m["name"], m["direction"]) for m in GAMELOG_MEASURES],
    )


@pytest.fixture
def gamelog_csv(tmp_path):
    path = tmp_path / "gamelog.csv"
    path.write_text("\n".join([GAMELOG_HEADER, *GAMELOG_ROWS]) + "\n")
    return path


@pytest.fixture
def gamelog_config(tmp_path):
    import json

    path = tmp_path / "config.json"
    path.write_text(
        json.dumps({"dimensions": GAMELOG_DIMENSIONS, "measures": GAMELOG_MEASURES})
    )
    return path


def make_pipeline(schema, engine, **kwargs) -> DiscoveryPipeline:
    return DiscoveryPipeline(RunConfig(schema=schema, engine=engine, **kwargs))


def make_engine(name, schema, table, d_hat=None, m_hat=None):
    """Build a bare engine over a shared table (no pipeline, no scoring)."""
    from skyfact.baselines import (
        BaselineIdxEngine,
        BaselineSeqEngine,
        BruteForceEngine,
    )
    from skyfact.engines import (
        BottomUpEngine,
        SBottomUpEngine,
        STopDownEngine,
        TopDownEngine,
    )
    from skyfact.store import MemoryStore

    table_engines = {
        "brute": BruteForceEngine,
        "baseline-seq": BaselineSeqEngine,
        "baseline-idx": BaselineIdxEngine,
    }
    store_engines = {
        "bottom-up": BottomUpEngine,
        "top-down": TopDownEngine,
        "s-bottom-up": SBottomUpEngine,
        "s-top-down": STopDownEngine,
    }
    if name in table_engines:
        return table_engines[name](schema, table, d_hat, m_hat)
    return store_engines[name](schema, table, MemoryStore(), d_hat, m_hat)


def feed(pipeline: DiscoveryPipeline, rows):
    """Push (dims, measures) rows through a pipeline, returning results."""
    return [pipeline.process(dims, meas) for dims, meas in rows]


# --- independent reference oracle -----------------------------------------
# Kept free of skyfact internals on purpose: plain tuples, no kernels.

def ref_dominates(a, b, idxs) -> bool:
    ge = all(a[i] >= b[i] for i in idxs)
    gt = any(a[i] > b[i] for i in idxs)
    return ge and gt


def ref_facts(prior, new_dims, new_meas, d_hat, m_hat):
    """All (bound-dim index tuple, measure index tuple) fact pairs for the
    new row against the prior rows, by exhaustive enumeration."""
    n = len(new_dims)
    s = len(new_meas)
    out = set()
    for k in range(min(d_hat, n) + 1):
        for bound in combinations(range(n), k):
            ctx = [
                (d, m)
                for d, m in prior
                if all(d[i] == new_dims[i] for i in bound)
            ]
            for j in range(1, min(m_hat, s) + 1):
                for midx in combinations(range(s), j):
                    if not any(ref_dominates(m, new_meas, midx) for _, m in ctx):
                        out.add((bound, midx))
    return out


def as_ref_fact(pattern, mask):
    bound = tuple(i for i, v in enumerate(pattern) if v)
    midx = tuple(i for i in range(mask.bit_length()) if mask & (1 << i))
    return (bound, midx)


def random_stream(rng: random.Random, n_rows, n_dims, domain, n_meas, value_range):
    """Small random table with heavy ties in both dimensions and measures."""
    rows = []
    for _ in range(n_rows):
        dims = tuple(f"v{rng.randrange(domain)}" for _ in range(n_dims))
        meas = tuple(float(rng.randrange(value_range)) for _ in range(n_meas))
        rows.append((dims, meas))
    return rows


def stream_schema(n_dims, n_meas):
    return make_schema(
        [f"d{i}" for i in range(n_dims)],
        [(f"m{i}", Direction.LARGER_BETTER) for i in range(n_meas)],
    )


# --- acceptance criterion reporting ----------------------------------------

CRITERION_TITLES = {
    1: "mini-world fact count",
    2: "prominence values and threshold gating",
    3: "running-example golden store states",
    4: "comparison counters (top-down 7, shared top-down 4)",
    5: "oracle equivalence across all seven engines",
    6: "invariant audits at every step",
    7: "storage dominance (top-down <= bottom-up)",
    8: "frontier fixtures",
    9: "lattice counts and intersection bottom",
    10: "backend equivalence (file vs memory)",
}


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    reports = []
    for outcome in ("passed", "failed", "xfailed", "xpassed"):
        reports.extend(terminalreporter.stats.get(outcome, []))
    lines = {}
    for rep in reports:
        if "test_acceptance.py" not in str(rep.nodeid):
            continue
        name = rep.nodeid.split("::")[-1]
        if not name.startswith("test_criterion_"):
            continue
        number = int(name.split("_")[2])
        if rep.outcome == "passed" and not hasattr(rep, "wasxfail"):
            verdict = "PASS"
        elif hasattr(rep, "wasxfail"):
            verdict = "FAIL (expected; see test docstring and notes)"
        else:
            verdict = "FAIL"
        lines.setdefault(number, []).append((name, verdict))
    if not lines:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for number in sorted(lines):
        title = CRITERION_TITLES.get(number, "")
        for name, verdict in sorted(lines[number]):
            terminalreporter.write_line(
                f"criterion {number:2d} [{title}] {name}: {verdict}"
            )
