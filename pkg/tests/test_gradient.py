from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st

from openmorse.complex import build_complex, build_pair
from openmorse.errors import CyclicField, DimensionMismatch, NotMorse, PresetConflict
from openmorse.generate import random_matching
from openmorse.gradient import (
    MorseFunction, VectorField, as_gradient, check_function, closed_vpaths, critical_cells, critical_counts,
    enumerate_vpaths, function_from_gradient, gradient_from_function, is_acyclic, path_counts,
    path_weights, validate_field, validate_function,
)

from oracles import has_closed_path_naive
from strategies import any_matching, gradients, pairs, small_complexes


def test_validate_field_examples(pathological):
    assert validate_field(pathological.field) == []
    K = pathological.pair.K
    reused = validate_field(VectorField.of([((1,), (0, 1)), ((1,), (1, 2))], K))
    assert [v.kind for v in reused] == ["cell-reused"] and reused[0].cells == ((1,),)
    skip = validate_field(VectorField.of([((1,), (0, 1, 2))], K))
    assert [v.kind for v in skip] == ["non-facet"]
    outside = validate_field(VectorField.of([((0,), (0, 1))], K))
    assert "outside-domain" in [v.kind for v in outside]


def test_acyclicity_examples(pathological):
    assert is_acyclic(pathological.field)
    loop = build_complex([[0, 1], [1, 2], [0, 2]])
    V = VectorField.of([((0,), (0, 1)), ((1,), (1, 2)), ((2,), (0, 2))], loop)
    assert not is_acyclic(V)
    assert len(closed_vpaths(V)) == 1
    with pytest.raises(CyclicField):
        as_gradient(V)
    assert is_acyclic(VectorField.of([], loop))


def test_critical_cells_examples(running, pathological):
    crit = critical_cells(running.field)
    assert crit == {1: [running.cell(7, 8), running.cell(17, 18)], 2: [running.cell(7, 8, 16)]}
    assert critical_counts(running.field) == [0, 2, 1]
    assert critical_cells(pathological.field) == {}
    X = build_complex([[0, 1, 2]])
    assert sum(map(len, critical_cells(VectorField.of([], X)).values())) == 7


def test_two_paths_from_sigma(running):
    V = running.field
    sigma, e1, e2 = running.cell(7, 8, 16), running.cell(7, 8), running.cell(17, 18)
    to_e1 = enumerate_vpaths(V, sigma, e1)
    to_e2 = enumerate_vpaths(V, sigma, e2)
    assert len(to_e1) == 2 and len(to_e2) == 2
    # both pairs of paths cancel: the boundary of sigma is zero
    assert sorted(p.index() for p in to_e1) == [-1, 1]
    assert sorted(p.index() for p in to_e2) == [-1, 1]
    # the paths to e2 split at tau = {9,17,18}
    tau = running.cell(9, 17, 18)
    assert all(tau in p.cells for p in to_e2)
    assert path_counts(V, sigma) == {e1: 2, e2: 2}
    assert path_weights(V, sigma) == {}


def test_direct_path_and_dimension_check():
    X = build_complex([[0, 1, 2]])
    V = VectorField.of([], X)
    assert len(enumerate_vpaths(V, (0, 1, 2), (0, 1))) == 1
    assert enumerate_vpaths(V, (0, 1), (2,)) == []
    with pytest.raises(DimensionMismatch):
        enumerate_vpaths(V, (0, 1, 2), (0,))


def test_function_examples(pathological, running):
    f = function_from_gradient(pathological.field)
    v = f.values
    assert v[(1,)] > v[(0, 1)] and v[(1, 2)] > v[(0, 1, 2)]
    assert gradient_from_function(f).pairs == pathological.field.pairs
    # presets at the critical cells and tau reproduce a valid extension
    V = running.field
    presets = {running.cell(17, 18): 0, running.cell(9, 17, 18): 23, running.cell(7, 8): 29, running.cell(7, 8, 16): 52}
    g = function_from_gradient(V, presets)
    assert all(g.values[c] == x for c, x in presets.items())
    assert g.is_injective()
    assert gradient_from_function(g).pairs == V.pairs
    # the bundled function is itself a valid extension of all its values
    h = function_from_gradient(V, running.function.values)
    assert h.values == running.function.values


def test_preset_conflict():
    X = build_complex([[0, 1]])
    V = VectorField.of([], X)
    with pytest.raises(PresetConflict):
        function_from_gradient(V, {(0, 1): 1, (0,): 2})


def test_validate_function(running):
    X = build_complex([[0, 1, 2], [2, 3]])
    f = MorseFunction({c: len(c) - 1 for c in X.cells}, X)
    report, V = validate_function(f)
    assert report == [] and len(V) == 0
    report, V = validate_function(running.function)
    assert V.pairs == running.field.pairs


def test_not_morse_on_open_triangle():
    p = build_pair([[0, 1, 2]], [[0]])
    vals = {(0, 1): 5, (1,): 6, (1, 2): 6.5, (0, 1, 2): 6.2, (2,): 7, (0, 2): 8}
    f = MorseFunction(vals, p.K)
    report = check_function(f)
    kinds = {(v.kind, v.cells[0]) for v in report}
    assert ("exclusivity", (1, 2)) in kinds
    assert ("condition-2", (0, 1, 2)) in kinds
    with pytest.raises(NotMorse):
        validate_function(f)


@settings(max_examples=120, deadline=None)
@given(st.data())
def test_acyclicity_agrees_with_path_search(data):
    X = data.draw(small_complexes(max_vertex=3, max_size=3, max_gens=2))
    if len(X) > 12:
        return
    V = data.draw(any_matching(X))
    fast = is_acyclic(V)
    assert fast == (not closed_vpaths(V))
    assert fast == (not has_closed_path_naive(V.pairs, X.cells))


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_round_trip_function_gradient(data):
    p = data.draw(pairs())
    V = data.draw(gradients(p.K))
    f = function_from_gradient(V)
    assert f.is_injective()
    assert check_function(f) == []
    assert gradient_from_function(f).pairs == V.pairs


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_path_counts_match_enumeration(data):
    p = data.draw(pairs())
    V = data.draw(gradients(p.K))
    crit = critical_cells(V)
    for d, cells in crit.items():
        for tau in cells:
            counts = path_counts(V, tau)
            weights = path_weights(V, tau)
            for sigma in crit.get(d - 1, []):
                paths = enumerate_vpaths(V, tau, sigma)
                assert counts.get(sigma, 0) == len(paths)
                assert weights.get(sigma, 0) == sum(q.index() for q in paths)


@settings(max_examples=40, deadline=None)
@given(small_complexes())
def test_critical_vertices_are_local_minima(X):
    V = random_matching(random.Random(len(X)), X)
    f = function_from_gradient(V)
    for (v,) in [c for c in critical_cells(V).get(0, [])]:
        assert all(f.values[(v,)] < f.values[e] for e in X.cofacets((v,)))


def test_identity_function_has_no_pairs():
    X = build_complex([[0, 1, 2, 3]])
    values = {c: i for i, c in enumerate(X.ordered)}
    f = MorseFunction(values, X)
    assert len(gradient_from_function(f)) == 0
    assert sum(map(len, critical_cells(gradient_from_function(f)).values())) == len(X)
