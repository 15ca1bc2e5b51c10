from __future__ import annotations

import random

from hypothesis import given, settings, strategies as st

from openmorse.snf import canonical_factors, smith_normal_form, sparse_invariant_factors

from oracles import det, invariant_factors, rank_over_q

matrices = st.integers(1, 5).flatmap(lambda m: st.integers(1, 5).flatmap(
    lambda n: st.lists(st.lists(st.integers(-6, 6), min_size=n, max_size=n), min_size=m, max_size=m)))


def to_columns(M):
    cols = {}
    for i, row in enumerate(M):
        for j, x in enumerate(row):
            if x:
                cols.setdefault(j, {})[i] = x
    return cols


def test_examples():
    assert smith_normal_form([[2, 0], [0, 3]]).factors == [1, 6]
    z = smith_normal_form([[0, 0], [0, 0]])
    assert z.rank == 0 and z.factors == []
    assert smith_normal_form([[1, 0, 0], [0, 1, 0], [0, 0, 1]]).factors == [1, 1, 1]
    assert sparse_invariant_factors(to_columns([[2, 0], [0, 3]])) == [1, 6]


def test_canonical_factors():
    assert canonical_factors([4, 6]) == [2, 12]
    assert canonical_factors([0, 3, 1]) == [1, 3]


def check(M):
    s = smith_normal_form(M)
    expected = invariant_factors(M)
    assert s.factors == expected
    assert s.verify(M)
    assert abs(det(s.U)) == 1 and abs(det(s.V)) == 1
    D = s.D
    assert all(D[i][j] == 0 for i in range(len(D)) for j in range(len(D[0])) if i != j)
    assert sparse_invariant_factors(to_columns(M)) == expected
    assert s.rank == rank_over_q(M)


def test_hundred_seeded_matrices():
    rng = random.Random(2024)
    for _ in range(100):
        m, n = rng.randint(1, 5), rng.randint(1, 5)
        check([[rng.randint(-9, 9) for _ in range(n)] for _ in range(m)])


@settings(max_examples=150, deadline=None)
@given(matrices)
def test_against_determinantal_divisors(M):
    check(M)


def test_large_entries_stay_exact():
    M = [[10**30, 3], [7, 10**25 + 1]]
    check(M)
