"""Barycentric subdivision as the order complex of the face poset.

A chain cell is a tuple of base simplices ordered by inclusion, so
(s1, s2, ..., sm) with s1 < s2 < ... < sm.  Listing chains bottom-up is a
consistent global vertex order (dimension strictly increases), so chain
cells are sorted tuples in the sense of `complex` and every generic routine
applies unchanged.  The barycenter v_s of a base simplex s is the chain (s,).
"""
from __future__ import annotations

from functools import cached_property
from itertools import combinations
from typing import Iterable

from .complex import Cell, CellSet, ComplexPair, Simplex, SimplicialComplex, cell_key

ChainCell = tuple


def carrier(c: ChainCell) -> Simplex:
    """The top element of the chain."""
    return c[-1]


def barycenter(s: Simplex) -> ChainCell:
    return (s,)


def chains_ending_at(s: Simplex, memo: dict) -> list[ChainCell]:
    if s in memo:
        return memo[s]
    out = [(s,)]
    for r in range(1, len(s)):
        for f in combinations(s, r):
            out.extend(c + (s,) for c in chains_ending_at(f, memo))
    memo[s] = out
    return out


class SdComplex(SimplicialComplex):
    """Subcomplex of sd(X); cells are chains of simplices of `base.X`."""

    def __init__(self, cells: Iterable[ChainCell], base: ComplexPair | None = None, check: bool = False):
        super().__init__(cells, check=check)
        self.base = base

    def carrier(self, c: ChainCell) -> Simplex:
        return c[-1]

    @cached_property
    def by_carrier(self) -> dict[Simplex, tuple[ChainCell, ...]]:
        out: dict = {}
        for c in self.ordered:
            out.setdefault(c[-1], []).append(c)
        return {k: tuple(v) for k, v in out.items()}

    def subset(self, cells: Iterable[ChainCell]) -> "SdComplex":
        return SdComplex(cells, self.base)


def barycentric_subdivision(X: SimplicialComplex | ComplexPair) -> SdComplex:
    if isinstance(X, ComplexPair):
        pair, X = X, X.X
    else:
        pair = None
    memo: dict = {}
    cells = []
    for s in X.ordered:
        cells.extend(chains_ending_at(s, memo))
    return SdComplex(cells, pair)


def order_complex(pair: ComplexPair, sd: SdComplex | None = None) -> SdComplex:
    """S_K: the chains all of whose elements lie in K."""
    K = pair.K
    if sd is None:
        sd = barycentric_subdivision(pair)
    return SdComplex((c for c in sd.cells if all(s in K for s in c)), pair)


def sd_of(sub: CellSet, sd: SdComplex) -> SdComplex:
    """Chains whose elements all lie in `sub` (a subcomplex of the base)."""
    return SdComplex((c for c in sd.cells if c[-1] in sub), sd.base)


def in_sd_T(c: ChainCell, T: CellSet) -> bool:
    # T is face-closed, so the whole chain lies in T iff its top does
    return c[-1] in T


def chain_label(c: Cell) -> str:
    if c and isinstance(c[0], tuple):
        return "(" + "<".join("{" + ",".join(map(str, s)) + "}" for s in c) + ")"
    return "{" + ",".join(map(str, c)) + "}"


def chain_sort(cells: Iterable[ChainCell]) -> list[ChainCell]:
    return sorted(cells, key=cell_key)
