from __future__ import annotations

from fractions import Fraction

import pytest

from conftest import GAMELOG_ROWS, feed, make_pipeline
from skyfact.prominence import ScoredFact, prominent_facts, score_facts, top_k_facts
from skyfact.store import ContextCounter


def gamelog_rows():
    rows = []
    for line in GAMELOG_ROWS:
        parts = line.split(",")
        dims = (parts[1], parts[3], parts[4], parts[5], parts[6])
        meas = tuple(float(x) for x in parts[7:10])
        rows.append((dims, meas))
    return rows


@pytest.fixture
def gamelog_result(gamelog_schema):
    pipeline = make_pipeline(gamelog_schema, "s-top-down")
    *_, last = feed(pipeline, gamelog_rows())
    return pipeline, last


def find(pipeline, scored, constraint: dict[str, str], measures: set[str]):
    names = pipeline.schema.dimension_names
    mnames = pipeline.schema.measure_names
    mask = sum(1 << i for i, m in enumerate(mnames) if m in measures)
    want = {}
    for attr, value in constraint.items():
        i = names.index(attr)
        want[i] = pipeline.interner.code_of(i, value)
    pattern = tuple(want.get(i, 0) for i in range(len(names)))
    for f in scored:
        if f.pattern == pattern and f.mask == mask:
            return f
    raise AssertionError(f"fact {constraint}/{measures} not found")


def test_february_full_space_scores_five_halves(gamelog_result):
    pipeline, last = gamelog_result
    fact = find(pipeline, last.all_scored, {"month": "Feb."},
                {"points", "assists", "rebounds"})
    assert (fact.context_size, fact.skyline_size) == (5, 2)
    assert fact.prominence == Fraction(5, 2)


def test_celtics_nets_scores_three_halves(gamelog_result):
    pipeline, last = gamelog_result
    fact = find(pipeline, last.all_scored,
                {"team": "Celtics", "opp_team": "Nets"},
                {"assists", "rebounds"})
    assert (fact.context_size, fact.skyline_size) == (3, 2)
    assert fact.prominence == Fraction(3, 2)


def test_wesley_rebounds_scores_three(gamelog_result):
    pipeline, last = gamelog_result
    fact = find(pipeline, last.all_scored, {"player": "Wesley"}, {"rebounds"})
    assert fact.prominence == Fraction(3)


def test_singleton_context_scores_one(gamelog_result):
    pipeline, last = gamelog_result
    fact = find(pipeline, last.all_scored,
                {"player": "Wesley", "season": "1995-96"}, {"points"})
    assert (fact.context_size, fact.skyline_size) == (1, 1)


def test_scored_sorted_descending_with_key_ties(gamelog_result):
    _, last = gamelog_result
    scored = last.all_scored
    for a, b in zip(scored, scored[1:]):
        assert a.prominence > b.prominence or (
            a.prominence == b.prominence and a.sort_key() <= b.sort_key()
        )


def test_equal_ratios_fall_in_one_group():
    # 5/2 and 10/4 are the same prominence: exact rationals, no floats.
    facts = [
        ScoredFact((1, 0), 0b1, 10, 4),
        ScoredFact((0, 1), 0b1, 5, 2),
        ScoredFact((0, 0), 0b1, 3, 2),
    ]
    ordered = sorted(facts, key=lambda f: (-f.prominence, f.sort_key()))
    group = prominent_facts(ordered, Fraction(2))
    assert {f.prominence for f in group} == {Fraction(5, 2)}
    assert len(group) == 2


def test_threshold_gates_max_group():
    facts = [ScoredFact((0,), 0b1, 4, 1), ScoredFact((1,), 0b1, 4, 2)]
    assert prominent_facts(facts, Fraction(4)) == [facts[0]]
    assert prominent_facts(facts, Fraction(5)) == []
    assert prominent_facts([], Fraction(1)) == []


def test_raising_tau_never_adds_facts(gamelog_result):
    _, last = gamelog_result
    previous = None
    for tau in (1, 2, 3, 4, 5, 6):
        got = {
            (f.pattern, f.mask)
            for f in prominent_facts(last.all_scored, Fraction(tau))
        }
        if previous is not None:
            assert got.issubset(previous)
        previous = got


def test_returned_facts_share_single_value(gamelog_result):
    _, last = gamelog_result
    group = prominent_facts(last.all_scored, Fraction(1))
    assert len({f.prominence for f in group}) == 1


def test_top_k_mode(gamelog_result):
    _, last = gamelog_result
    top3 = top_k_facts(last.all_scored, 3)
    assert len(top3) == 3
    assert top3 == last.all_scored[:3]
    assert top_k_facts(last.all_scored, 0) == []


def test_score_facts_validates_counts():
    counter = ContextCounter()
    counter.add([(0,)])
    with pytest.raises(ValueError):
        score_facts([((0,), 0b1)], counter, lambda p, m: 2)  # ctx 1 < sky 2


def test_scoring_matches_from_scratch_scan(gamelog_result):
    # Independent recomputation of both sizes for every scored fact.
    pipeline, last = gamelog_result
    rows = gamelog_rows()
    for fact in last.all_scored:
        ctx = [
            (d, m)
            for d, m in rows
            if all(
                pipeline.interner.code_of(i, d[i]) == c
                for i, c in enumerate(fact.pattern)
                if c
            )
        ]
        midx = [i for i in range(3) if fact.mask & (1 << i)]

        def dominated(a, b):
            return all(b[i] >= a[i] for i in midx) and any(
                b[i] > a[i] for i in midx
            )

        sky = [1 for _, m in ctx if not any(dominated(m, o) for _, o in ctx)]
        assert fact.context_size == len(ctx)
        assert fact.skyline_size == len(sky)
