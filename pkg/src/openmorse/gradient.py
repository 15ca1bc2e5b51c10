"""Discrete vector fields, V-paths, critical cells and discrete Morse functions."""
from __future__ import annotations

import heapq
from collections import defaultdict
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping

from .complex import Cell, CellSet, HasseDiagram, cell_key, facets, hasse_diagram, incidence
from .errors import CyclicField, DimensionMismatch, MalformedField, NotMorse, PresetConflict


@dataclass(frozen=True)
class Violation:
    kind: str
    cells: tuple
    detail: str = ""

    def as_dict(self) -> dict:
        return {"kind": self.kind, "cells": [list(map(list, c)) if c and isinstance(c[0], tuple) else list(c) for c in self.cells], "detail": self.detail}


@dataclass(frozen=True, eq=False)
class VectorField:
    """A set of (face, coface) pairs living on a cell set."""

    pairs: frozenset
    domain: CellSet

    @classmethod
    def of(cls, pairs: Iterable[tuple[Cell, Cell]], domain: CellSet) -> "VectorField":
        return cls(frozenset((tuple(a), tuple(b)) for a, b in pairs), domain)

    @cached_property
    def up(self) -> dict[Cell, Cell]:
        return {a: b for a, b in self.pairs}

    @cached_property
    def down(self) -> dict[Cell, Cell]:
        return {b: a for a, b in self.pairs}

    def partner(self, c: Cell) -> Cell | None:
        return self.up.get(c) or self.down.get(c)

    def is_critical(self, c: Cell) -> bool:
        return c not in self.up and c not in self.down

    @cached_property
    def ordered_pairs(self) -> tuple:
        return tuple(sorted(self.pairs, key=lambda p: (cell_key(p[0]), cell_key(p[1]))))

    def __len__(self) -> int:
        return len(self.pairs)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, VectorField) and self.pairs == other.pairs and self.domain == other.domain

    def __hash__(self) -> int:
        return hash(self.pairs)


class GradientField(VectorField):
    """A vector field whose acyclicity has been verified."""

    certified = True


def validate_field(V: VectorField) -> list[Violation]:
    out: list[Violation] = []
    seen: dict[Cell, tuple] = {}
    for a, b in V.ordered_pairs:
        for c in (a, b):
            if c not in V.domain:
                out.append(Violation("outside-domain", (c,), f"{c} is not in the domain"))
        if len(b) != len(a) + 1 or not set(a) <= set(b):
            out.append(Violation("non-facet", (a, b), f"{a} is not a facet of {b}"))
        for c in (a, b):
            if c in seen:
                out.append(Violation("cell-reused", (c,), f"{c} appears in {seen[c]} and {(a, b)}"))
            else:
                seen[c] = (a, b)
    return out


def modified_hasse(V: VectorField) -> HasseDiagram:
    return hasse_diagram(V.domain).with_reversals(V.pairs)


def is_acyclic(V: VectorField) -> bool:
    """True iff the Hasse diagram with V's pairs reversed has no directed cycle."""
    return modified_hasse(V).is_acyclic()


def closed_vpaths(V: VectorField) -> list[tuple[Cell, ...]]:
    """Brute-force search for nontrivial closed V-paths.

    Walks alpha_0 < beta_0 > alpha_1 < ... from every paired tail and records
    each simple cycle once (rotated to start at its least tail).
    """
    D = V.domain
    found = set()
    for start in sorted(V.up, key=cell_key):
        stack = [(start, (start,), frozenset([start]))]
        while stack:
            alpha, path, seen = stack.pop()
            beta = V.up.get(alpha)
            if beta is None:
                continue
            for nxt in facets(beta):
                if nxt == alpha or nxt not in D:
                    continue
                if nxt == start:
                    cyc = path
                    found.add(cyc)
                elif nxt not in seen and nxt in V.up and cell_key(nxt) > cell_key(start):
                    stack.append((nxt, path + (nxt,), seen | {nxt}))
    return sorted(found, key=lambda p: [cell_key(c) for c in p])


def as_gradient(V: VectorField) -> GradientField:
    bad = validate_field(V)
    if bad:
        raise MalformedField("; ".join(v.detail for v in bad[:5]))
    if not is_acyclic(V):
        raise CyclicField("vector field has a closed V-path")
    return GradientField(V.pairs, V.domain)


def critical_cells(V: VectorField) -> dict[int, list[Cell]]:
    out: dict[int, list] = defaultdict(list)
    for c in V.domain.ordered:
        if V.is_critical(c):
            out[len(c) - 1].append(c)
    return dict(out)


def critical_counts(V: VectorField) -> list[int]:
    crit = critical_cells(V)
    top = max(V.domain.dim, max(crit, default=-1))
    return [len(crit.get(d, ())) for d in range(top + 1)]


@dataclass(frozen=True)
class VPath:
    """alpha_0 < beta_0 > alpha_1 < ... > alpha_r, entered from `source`."""

    source: Cell
    cells: tuple

    @property
    def target(self) -> Cell:
        return self.cells[-1]

    def index(self) -> int:
        """Signed weight used by the Morse boundary."""
        sign = incidence(self.source, self.cells[0])
        for i in range(0, len(self.cells) - 1, 2):
            a, b, a2 = self.cells[i], self.cells[i + 1], self.cells[i + 2]
            sign *= -incidence(b, a) * incidence(b, a2)
        return sign


def enumerate_vpaths(V: VectorField, source: Cell, target: Cell) -> list[VPath]:
    """Every gradient path from a facet of `source` to `target`, by exhaustive DFS."""
    if len(source) != len(target) + 1:
        raise DimensionMismatch(f"dim {source} must be dim {target} + 1")
    D = V.domain
    out: list[VPath] = []

    def walk(path: tuple):
        alpha = path[-1]
        if alpha == target:
            out.append(VPath(source, path))
            return
        beta = V.up.get(alpha)
        if beta is None:
            return
        for nxt in facets(beta):
            if nxt != alpha and nxt in D:
                walk(path + (beta, nxt))

    for a0 in facets(source):
        if a0 in D:
            walk((a0,))
    return out


def _flow(V: VectorField, source: Cell, weighted: bool) -> dict[Cell, int]:
    """Sum of path weights (or path counts) from facets of source to each critical cell."""
    D = V.domain
    start = {}
    for a in facets(source):
        if a in D:
            start[a] = incidence(source, a) if weighted else 1
    # topological order of the reachable part of the level graph
    succ: dict[Cell, list[tuple[Cell, int]]] = {}
    order: list[Cell] = []
    state: dict[Cell, int] = {}
    for root in start:
        if root in state:
            continue
        stack = [(root, 0)]
        state[root] = 1
        while stack:
            node, i = stack.pop()
            if node not in succ:
                beta = V.up.get(node)
                nb = []
                if beta is not None:
                    s0 = incidence(beta, node)
                    for nxt in facets(beta):
                        if nxt != node and nxt in D:
                            nb.append((nxt, -s0 * incidence(beta, nxt) if weighted else 1))
                succ[node] = nb
            nb = succ[node]
            if i < len(nb):
                stack.append((node, i + 1))
                nxt = nb[i][0]
                if nxt not in state:
                    state[nxt] = 1
                    stack.append((nxt, 0))
                elif state[nxt] == 1:
                    raise CyclicField("closed V-path reached while computing boundary")
            else:
                state[node] = 2
                order.append(node)
    acc = defaultdict(int, start)
    result: dict[Cell, int] = defaultdict(int)
    for node in reversed(order):
        c = acc[node]
        if not c:
            continue
        if V.is_critical(node):
            result[node] += c
        for nxt, w in succ[node]:
            acc[nxt] += c * w
    return {k: v for k, v in result.items() if v}


def path_weights(V: VectorField, source: Cell) -> dict[Cell, int]:
    """Signed sums over gradient paths from source to each critical cell one dimension down."""
    return _flow(V, source, True)


def path_counts(V: VectorField, source: Cell) -> dict[Cell, int]:
    return _flow(V, source, False)


@dataclass(frozen=True, eq=False)
class MorseFunction:
    values: Mapping
    domain: CellSet

    def __call__(self, c: Cell) -> float:
        return self.values[c]

    def restrict(self, cells: CellSet) -> "MorseFunction":
        return MorseFunction({c: self.values[c] for c in cells.cells}, cells)

    def is_injective(self) -> bool:
        return len(set(self.values.values())) == len(self.values)


def gradient_from_function(f: MorseFunction) -> VectorField:
    """Pairs alpha < beta whenever f(alpha) >= f(beta)."""
    D = f.domain
    pairs = []
    for b in D.ordered:
        for a in D.facets(b):
            if f.values[a] >= f.values[b]:
                pairs.append((a, b))
    return VectorField.of(pairs, D)


def check_function(f: MorseFunction) -> list[Violation]:
    """Both counting conditions, plus exclusivity, at every cell."""
    D = f.domain
    out: list[Violation] = []
    for c in D.ordered:
        if c not in f.values:
            out.append(Violation("undefined", (c,), f"no value at {c}"))
    if out:
        return out
    v = f.values
    for c in D.ordered:
        up = [b for b in D.cofacets(c) if v[b] <= v[c]]
        down = [a for a in D.facets(c) if v[a] >= v[c]]
        if len(up) > 1:
            out.append(Violation("condition-1", (c,), f"{c} has {len(up)} cofaces with value <= its own"))
        if len(down) > 1:
            out.append(Violation("condition-2", (c,), f"{c} has {len(down)} facets with value >= its own"))
        if up and down:
            out.append(Violation("exclusivity", (c,), f"{c} is both raised by a coface and lowered by a facet"))
    return out


def validate_function(f: MorseFunction) -> tuple[list[Violation], GradientField]:
    report = check_function(f)
    if report:
        first = report[0]
        raise NotMorse(first.cells[0], first.kind, first.detail)
    V = gradient_from_function(f)
    return report, as_gradient(V)


def extend_on_dag(nodes: list, succ: Mapping, presets: Mapping, key=None) -> dict:
    """Injective values strictly decreasing along every edge n -> succ[n].

    Preset nodes keep their values.  Nodes are placed bottom-up (a node is
    placed once all its successors are); free nodes go as early as possible,
    presets only when no free node is ready.  Free nodes are then spread
    evenly between the preset values around them.
    """
    key = key or (lambda n: n)
    preds: dict = {n: [] for n in nodes}
    pending = {}
    for n in nodes:
        ss = succ.get(n, ())
        pending[n] = len(ss)
        for s in ss:
            preds[s].append(n)
    # consistency: every preset must exceed every preset below it
    order_check = []
    ready = [n for n in nodes if pending[n] == 0]
    cnt = dict(pending)
    while ready:
        n = ready.pop()
        order_check.append(n)
        for p in preds[n]:
            cnt[p] -= 1
            if cnt[p] == 0:
                ready.append(p)
    if len(order_check) != len(nodes):
        raise CyclicField("modified Hasse diagram has a cycle")
    below: dict = {}
    for n in order_check:
        m = None
        for s in succ.get(n, ()):
            for cand in (presets.get(s), below[s]):
                if cand is not None and (m is None or cand > m):
                    m = cand
        below[n] = m
        if n in presets and m is not None and m >= presets[n]:
            raise PresetConflict(f"preset {presets[n]} at {n} does not exceed preset {m} below it")

    free_heap: list = []
    preset_heap: list = []
    for n in nodes:
        if pending[n] == 0:
            heapq.heappush(preset_heap if n in presets else free_heap,
                           (presets[n], key(n), n) if n in presets else (key(n), n))
    placed: list = []
    while free_heap or preset_heap:
        if free_heap:
            n = heapq.heappop(free_heap)[-1]
        else:
            n = heapq.heappop(preset_heap)[-1]
        placed.append(n)
        for p in preds[n]:
            pending[p] -= 1
            if pending[p] == 0:
                if p in presets:
                    heapq.heappush(preset_heap, (presets[p], key(p), p))
                else:
                    heapq.heappush(free_heap, (key(p), p))
    values: dict = {}
    anchors = [i for i, n in enumerate(placed) if n in presets]
    if not anchors:
        return {n: float(i) for i, n in enumerate(placed)}
    first, last = anchors[0], anchors[-1]
    for i in range(first):
        values[placed[i]] = presets[placed[first]] - (first - i)
    for i in range(last + 1, len(placed)):
        values[placed[i]] = presets[placed[last]] + (i - last)
    for lo, hi in zip(anchors, anchors[1:]):
        a, b = presets[placed[lo]], presets[placed[hi]]
        if not a < b:
            raise PresetConflict(f"presets {a} and {b} cannot be ordered")
        span = hi - lo
        for j in range(lo + 1, hi):
            values[placed[j]] = a + (b - a) * (j - lo) / span
    for i in anchors:
        values[placed[i]] = presets[placed[i]]
    return values


def function_from_gradient(V: VectorField, presets: Mapping | None = None) -> MorseFunction:
    """An injective discrete Morse function whose gradient is V."""
    presets = dict(presets or {})
    for c in presets:
        if c not in V.domain:
            raise PresetConflict(f"preset cell {c} not in the domain")
    H = modified_hasse(V)
    succ = H.successors()
    values = extend_on_dag(list(H.nodes), succ, presets, key=cell_key)
    return MorseFunction(values, V.domain)
