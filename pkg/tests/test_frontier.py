from __future__ import annotations

import pytest

from skyfact.lattice import PartitionError, compute_frontier

# Shorthand over three dimensions with value code 1 everywhere:
# a1 binds slot 0, b1 slot 1, c1 slot 2.
TOP = (0, 0, 0)
A1 = (1, 0, 0)
B1 = (0, 1, 0)
C1 = (0, 0, 1)
A1B1 = (1, 1, 0)
A1C1 = (1, 0, 1)
B1C1 = (0, 1, 1)
A1B1C1 = (1, 1, 1)


def test_fixture_one():
    l1 = {TOP, A1, C1}
    l2 = {B1, A1B1, B1C1, A1C1, A1B1C1}
    assert compute_frontier(l1, l2) == {B1, A1C1}


def test_fixture_two():
    # The node between the two excluded singles has flipped sides; the
    # boundary it marks stays the same.
    l1 = {TOP, A1, C1, A1C1}
    l2 = {B1, A1B1, B1C1, A1B1C1}
    assert compute_frontier(l1, l2) == {B1, A1C1}


def test_fixture_three():
    l1 = {TOP, A1, B1}
    l2 = {C1, A1B1, A1C1, B1C1, A1B1C1}
    assert compute_frontier(l1, l2) == {C1, A1B1}


def test_fixture_four():
    l1 = {TOP, A1, B1, A1C1}
    l2 = {C1, A1B1, B1C1, A1B1C1}
    assert compute_frontier(l1, l2) == {C1, A1B1}


def test_overlap_rejected():
    with pytest.raises(PartitionError):
        compute_frontier({TOP, B1}, {B1, A1B1})


def test_all_in_skyline():
    everything = {TOP, A1, B1, C1, A1B1, A1C1, B1C1, A1B1C1}
    assert compute_frontier(set(), everything) == {TOP}


def test_none_in_skyline():
    everything = {TOP, A1, B1, C1, A1B1, A1C1, B1C1, A1B1C1}
    assert compute_frontier(everything, set()) == set()
