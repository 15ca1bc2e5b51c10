"""Hypothesis strategies shared by the property tests."""
from __future__ import annotations

import random

from hypothesis import strategies as st

from openmorse.complex import build_complex, build_pair, cell_key
from openmorse.generate import random_matching
from openmorse.gradient import VectorField


@st.composite
def small_complexes(draw, max_vertex=5, max_size=3, max_gens=3):
    gens = draw(st.lists(st.lists(st.integers(0, max_vertex), min_size=1, max_size=max_size, unique=True),
                         min_size=1, max_size=max_gens))
    return build_complex(gens)


@st.composite
def pairs(draw, max_vertex=6, max_size=4, max_gens=4):
    X = draw(small_complexes(max_vertex, max_size, max_gens))
    picks = draw(st.lists(st.sampled_from(sorted(X.cells, key=cell_key)), max_size=3))
    return build_pair([list(c) for c in X.maximal_cells()], [list(c) for c in picks])


@st.composite
def any_matching(draw, domain):
    """An arbitrary matching (possibly cyclic) on the facet relation of `domain`."""
    cand = [(f, c) for c in domain.ordered for f in domain.facets(c)]
    order = draw(st.permutations(cand)) if cand else []
    keep = draw(st.lists(st.booleans(), min_size=len(order), max_size=len(order)))
    used = set()
    out = []
    for (a, b), k in zip(order, keep):
        if k and a not in used and b not in used:
            used.update((a, b))
            out.append((a, b))
    return VectorField.of(out, domain)


@st.composite
def gradients(draw, domain):
    seed = draw(st.integers(0, 2**32 - 1))
    return random_matching(random.Random(seed), domain)
