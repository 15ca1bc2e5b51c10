"""Finite simplicial complexes, pairs (X, T) and open complexes K = X \\ T.

A cell is a tuple of vertices sorted under one global order.  For an
ordinary complex the vertices are ints; for the barycentric subdivision
they are simplices of the base complex listed along the chain.  Everything
here (facets, orientation signs, Hasse diagrams) works for both because it
only ever drops an entry from a sorted tuple.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Any, Hashable, Iterable, Iterator

from .errors import DuplicateVertex, EmptyGenerator, NotInK, NotSubcomplex

Simplex = tuple
Cell = tuple


def simplex(vertices: Iterable[int]) -> Simplex:
    """Validate and canonicalize a vertex list."""
    vs = list(vertices)
    if not vs:
        raise EmptyGenerator("empty generator")
    for v in vs:
        if isinstance(v, bool) or not isinstance(v, int) or v < 0:
            raise ValueError(f"vertex ids must be non-negative integers, got {v!r}")
    s = tuple(sorted(vs))
    if len(set(s)) != len(s):
        raise DuplicateVertex(f"duplicate vertex in {vs}")
    return s


def dim(cell: Cell) -> int:
    return len(cell) - 1


def _vertex_key(v: Any):
    if isinstance(v, tuple):
        return (len(v), v)
    return v


def cell_key(cell: Cell):
    """Deterministic ordering: by dimension, then vertex sequence."""
    return (len(cell), tuple(_vertex_key(v) for v in cell))


def sort_cells(cells: Iterable[Cell]) -> list[Cell]:
    return sorted(cells, key=cell_key)


def facets(cell: Cell) -> list[Cell]:
    if len(cell) < 2:
        return []
    return [cell[:i] + cell[i + 1:] for i in range(len(cell))]


def signed_facets(cell: Cell) -> list[tuple[int, Cell]]:
    """Facets with their incidence numbers under sorted-vertex orientation."""
    if len(cell) < 2:
        return []
    return [(-1 if i % 2 else 1, cell[:i] + cell[i + 1:]) for i in range(len(cell))]


def incidence(coface: Cell, face: Cell) -> int:
    """<d coface, face>: sign of face in the boundary of coface (0 if not a facet)."""
    if len(coface) != len(face) + 1:
        return 0
    for i in range(len(coface)):
        if coface[:i] + coface[i + 1:] == face:
            return -1 if i % 2 else 1
    return 0


def all_faces(cell: Cell) -> Iterator[Cell]:
    """Every nonempty face, the cell itself included."""
    for r in range(1, len(cell) + 1):
        yield from combinations(cell, r)


class CellSet:
    """A finite set of cells with facet/coface lookups restricted to the set."""

    def __init__(self, cells: Iterable[Cell]):
        self._cells = frozenset(cells)

    @property
    def cells(self) -> frozenset:
        return self._cells

    def __contains__(self, c: Hashable) -> bool:
        return c in self._cells

    def __len__(self) -> int:
        return len(self._cells)

    def __iter__(self) -> Iterator[Cell]:
        return iter(self.ordered)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, CellSet) and self._cells == other._cells

    def __hash__(self) -> int:
        return hash(self._cells)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({len(self._cells)} cells, f={self.f_vector})"

    @cached_property
    def ordered(self) -> tuple[Cell, ...]:
        return tuple(sort_cells(self._cells))

    @cached_property
    def by_dim(self) -> dict[int, tuple[Cell, ...]]:
        out: dict[int, list] = defaultdict(list)
        for c in self.ordered:
            out[len(c) - 1].append(c)
        return {d: tuple(v) for d, v in sorted(out.items())}

    @property
    def dim(self) -> int:
        return max(self.by_dim, default=-1)

    @property
    def f_vector(self) -> tuple[int, ...]:
        return tuple(len(self.by_dim.get(d, ())) for d in range(self.dim + 1))

    def euler_characteristic(self) -> int:
        return sum((-1) ** d * n for d, n in enumerate(self.f_vector))

    def facets(self, c: Cell) -> list[Cell]:
        return [f for f in facets(c) if f in self._cells]

    @cached_property
    def _cofacets(self) -> dict[Cell, tuple[Cell, ...]]:
        out: dict[Cell, list] = defaultdict(list)
        for c in self.ordered:
            for f in facets(c):
                if f in self._cells:
                    out[f].append(c)
        return {k: tuple(v) for k, v in out.items()}

    def cofacets(self, c: Cell) -> tuple[Cell, ...]:
        return self._cofacets.get(c, ())


class SimplicialComplex(CellSet):
    """A face-closed cell set."""

    def __init__(self, cells: Iterable[Cell], check: bool = True):
        super().__init__(cells)
        if check:
            for c in self._cells:
                for f in facets(c):
                    if f not in self._cells:
                        raise ValueError(f"not face-closed: {f} missing below {c}")

    @cached_property
    def vertices(self) -> tuple:
        return tuple(c[0] for c in self.by_dim.get(0, ()))

    @property
    def vertex_count(self) -> int:
        return len(self.by_dim.get(0, ()))

    def maximal_cells(self) -> list[Cell]:
        return [c for c in self.ordered if not self.cofacets(c)]

    def is_subcomplex_of(self, other: CellSet) -> bool:
        return self._cells <= other.cells


def build_complex(generators: Iterable[Iterable[int]]) -> SimplicialComplex:
    """Face closure of a list of vertex lists."""
    cells: set = set()
    for g in generators:
        s = simplex(g)
        if s in cells:
            continue
        cells.update(all_faces(s))
    return SimplicialComplex(cells, check=False)


class OpenCellSet(CellSet):
    """K = X \\ T; generally not closed under faces."""

    def __init__(self, cells: Iterable[Cell], pair: "ComplexPair | None" = None):
        super().__init__(cells)
        self.pair = pair


@dataclass(frozen=True, eq=False)
class ComplexPair:
    X: SimplicialComplex
    T: SimplicialComplex

    def __post_init__(self):
        missing = self.T.cells - self.X.cells
        if missing:
            raise NotSubcomplex(f"cells of T not in X: {sort_cells(missing)[:5]}")

    @cached_property
    def K(self) -> OpenCellSet:
        return OpenCellSet(self.X.cells - self.T.cells, self)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ComplexPair) and self.X == other.X and self.T == other.T

    def __hash__(self) -> int:
        return hash((self.X, self.T))


def build_pair(X_gens: Iterable[Iterable[int]], T_gens: Iterable[Iterable[int]] = ()) -> ComplexPair:
    X = build_complex(X_gens)
    T = build_complex(T_gens)
    return ComplexPair(X, T)


def open_cells(pair: ComplexPair) -> OpenCellSet:
    return pair.K


def height(sigma: Cell, K: CellSet) -> int:
    """Max length of a chain of K-cells ending at sigma, minus one.

    Faces of sigma that contain a K-cell are themselves in K, so a longest
    chain can always be refined to unit codimension steps and the height
    equals dim(sigma) minus the smallest dimension of a face of sigma in K.
    """
    if sigma not in K:
        raise NotInK(f"{sigma} is not a cell of K")
    best = len(sigma)
    for f in all_faces(sigma):
        if len(f) < best and f in K:
            best = len(f)
    return len(sigma) - best


@dataclass(frozen=True)
class HasseDiagram:
    """Covering relation of a cell set.

    `edges` holds (coface, face) pairs; edges listed in `reversed` point
    from face to coface instead (the gradient modification).
    """

    nodes: tuple
    edges: tuple
    reversed: frozenset = field(default_factory=frozenset)

    def with_reversals(self, pairs: Iterable[tuple[Cell, Cell]]) -> "HasseDiagram":
        rev = frozenset((a, b) for a, b in pairs)
        return HasseDiagram(self.nodes, self.edges, rev)

    def directed_edges(self) -> Iterator[tuple[Cell, Cell]]:
        for b, a in self.edges:
            if (a, b) in self.reversed:
                yield (a, b)
            else:
                yield (b, a)

    def successors(self) -> dict[Cell, list[Cell]]:
        out: dict[Cell, list] = {n: [] for n in self.nodes}
        for s, t in self.directed_edges():
            out[s].append(t)
        return out

    def topological_order(self) -> list[Cell] | None:
        """Sources first; None when the digraph has a cycle."""
        succ = self.successors()
        indeg = {n: 0 for n in self.nodes}
        for ts in succ.values():
            for t in ts:
                indeg[t] += 1
        stack = [n for n in reversed(self.nodes) if indeg[n] == 0]
        order = []
        while stack:
            n = stack.pop()
            order.append(n)
            for t in succ[n]:
                indeg[t] -= 1
                if indeg[t] == 0:
                    stack.append(t)
        return order if len(order) == len(self.nodes) else None

    def is_acyclic(self) -> bool:
        return self.topological_order() is not None


def hasse_diagram(cells: CellSet) -> HasseDiagram:
    edges = []
    for c in cells.ordered:
        for f in facets(c):
            if f in cells:
                edges.append((c, f))
    return HasseDiagram(cells.ordered, tuple(edges))
