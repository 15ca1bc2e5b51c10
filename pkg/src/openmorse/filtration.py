"""Level subcomplexes S_K(a), sd(X)(a), the open set K(a), the retraction
check K(a) -> S_K(a), and the sublevel structure scan on S_K."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from .complex import Cell, CellSet, SimplicialComplex, cell_key, facets, height
from .errors import NonElementaryStep, StuckCell
from .gradient import MorseFunction, VectorField, critical_cells
from .homology import betti_of
from .subdivision import SdComplex


def entry_values(F: MorseFunction, cells: CellSet) -> dict:
    """For each cell, the least threshold a at which it lies in the level subcomplex."""
    entry = {}
    for c in sorted(cells.cells, key=cell_key, reverse=True):
        m = F.values[c]
        for u in cells.cofacets(c):
            if entry[u] < m:
                m = entry[u]
        entry[c] = m
    return entry


def level_subcomplex(F: MorseFunction, a: float) -> SimplicialComplex:
    """Union of the closed cells with value <= a."""
    entry = entry_values(F, F.domain)
    return SimplicialComplex((c for c, e in entry.items() if e <= a), check=False)


def midpoints(values) -> list[float]:
    vs = sorted(set(values))
    if not vs:
        return [0.0]
    out = [vs[0] - 1]
    out += [(x + y) / 2 for x, y in zip(vs, vs[1:])]
    out.append(vs[-1] + 1)
    return out


@dataclass(frozen=True)
class LevelSet:
    threshold: float
    s_k: frozenset
    sd_x: frozenset
    k_a: frozenset

    def extra(self) -> frozenset:
        return self.k_a - self.s_k


class Levels:
    """Precomputed entry values so that every threshold is a cheap filter."""

    def __init__(self, F: MorseFunction, sd: SdComplex, s_k: SdComplex, T: CellSet):
        self.F = F
        self.sd = sd
        self.s_k = s_k
        self.T = T
        self.entry_sd = entry_values(F, sd)
        self.entry_sk = entry_values(F.restrict(s_k), s_k)

    @cached_property
    def open_cells(self) -> list:
        return [c for c in self.sd.ordered if c[-1] not in self.T]

    def level(self, a: float) -> LevelSet:
        sdx = frozenset(c for c, e in self.entry_sd.items() if e <= a)
        sk = frozenset(c for c, e in self.entry_sk.items() if e <= a)
        ka = frozenset(c for c in self.open_cells if self.entry_sd[c] <= a)
        return LevelSet(a, sk, sdx, ka)

    def thresholds(self) -> list[float]:
        return midpoints(self.F.values.values())


def open_level(F: MorseFunction, sd: SdComplex, s_k: SdComplex, T: CellSet, a: float) -> LevelSet:
    return Levels(F, sd, s_k, T).level(a)


@dataclass
class RetractionResult:
    threshold: float
    success: bool
    steps: list = field(default_factory=list)   # ("open", cell) or ("collapse", face, coface)
    stuck: Cell | None = None


def retract_check(level: LevelSet, F: MorseFunction, V: VectorField, sd: SdComplex,
                  raise_on_stuck: bool = False) -> RetractionResult:
    """Remove K(a) \\ S_K(a) from K(a) by decreasing dimension.

    A cell with value <= a must have a chain element in T and no remaining
    cofaces (an open cell pushed off through its missing face).  A cell with
    value > a is only there as a face; it must be the free face of its
    V'_X partner, which has value <= a and was already removed.
    """
    a = level.threshold
    remaining = set(level.k_a)
    extra = sorted(level.extra(), key=cell_key, reverse=True)
    steps: list = []
    for c in extra:
        if any(u in remaining for u in sd.cofacets(c)):
            ok = False
        elif F.values[c] <= a:
            ok = True
            steps.append(("open", c))
        else:
            u = V.up.get(c)
            ok = u is not None and F.values[u] <= a and u in level.k_a and u not in remaining
            if ok:
                steps.append(("collapse", c, u))
        if not ok:
            if raise_on_stuck:
                raise StuckCell(c, a)
            return RetractionResult(a, False, steps, c)
        remaining.discard(c)
    if remaining != set(level.s_k):
        bad = min(remaining ^ set(level.s_k), key=cell_key)
        if raise_on_stuck:
            raise StuckCell(bad, a)
        return RetractionResult(a, False, steps, bad)
    return RetractionResult(a, True, steps)


def retraction_sweep(levels: Levels, V: VectorField) -> list[RetractionResult]:
    return [retract_check(levels.level(a), levels.F, V, levels.sd) for a in levels.thresholds()]


def _pad(v, n):
    return tuple(v) + (0,) * (n - len(v))


def _delta(before, after):
    n = max(len(before), len(after))
    b, c = _pad(before, n), _pad(after, n)
    return tuple(y - x for x, y in zip(b, c))


def elementary(delta: tuple, dim: int) -> bool:
    nz = [(i, d) for i, d in enumerate(delta) if d]
    return nz == [(dim, 1)] or (dim > 0 and nz == [(dim - 1, -1)])


@dataclass
class FiltrationReport:
    critical_values: list
    events: list
    attach_counts: list
    critical_counts: list
    height_counts: list = field(default_factory=list)
    thresholds: list = field(default_factory=list)   # (a, betti of S_K(a))
    final_betti: tuple = ()

    @property
    def passed(self) -> bool:
        ok = self.attach_counts == self.critical_counts
        ok &= all(e["elementary"] for e in self.events if e["kind"] == "attach")
        ok &= all(e["constant"] and e["collapses"] for e in self.events if e["kind"] == "interval")
        ok &= all(h <= c for h, c in zip(self.height_counts, _pad(self.critical_counts, len(self.height_counts))))
        return ok

    def as_dict(self, name=str) -> dict:
        def ev(e):
            d = dict(e)
            if "cell" in d:
                d["cell"] = name(d["cell"])
            for k in ("betti_before", "betti_after", "delta", "betti"):
                if k in d:
                    d[k] = list(d[k])
            return d
        return {
            "critical_values": self.critical_values,
            "events": [ev(e) for e in self.events],
            "attach_counts": self.attach_counts,
            "critical_counts": self.critical_counts,
            "critical_by_height": self.height_counts,
            "thresholds": [[a, list(b)] for a, b in self.thresholds],
            "final_betti": list(self.final_betti),
            "passed": self.passed,
        }


def _collapses_back(S: set, pairs: list, F: MorseFunction) -> bool:
    """Undo the interval's expansions in decreasing value, checking each is an elementary collapse."""
    cur = set(S)
    cof: dict = {}
    for c in cur:
        for f in facets(c):
            cof.setdefault(f, set()).add(c)
    for w, y in sorted(pairs, key=lambda p: F.values[p[1]], reverse=True):
        if cof.get(y, set()) & cur:
            return False
        if (cof.get(w, set()) & cur) != {y}:
            return False
        cur.discard(y)
        cur.discard(w)
    return True


def structure_scan(F: MorseFunction, W: VectorField, V_K: VectorField | None = None,
                   every_threshold: bool = False, strict: bool = True) -> FiltrationReport:
    """Walk S_K(a) upward through the values of F (F on S_K with gradient W)."""
    S_cells = F.domain
    order = sorted(S_cells.cells, key=lambda c: (F.values[c], cell_key(c)))
    S: set = set()
    events: list = []
    crit_values: list = []
    pending: list = []
    start_betti: tuple = ()
    start_value = None
    attach: dict = {}

    def current_betti():
        return betti_of(CellSet(S)) if S else ()

    def close_interval(end_value):
        b = current_betti()
        const = _pad(b, 4) == _pad(start_betti, 4)
        coll = _collapses_back(S, pending, F)
        events.append({"kind": "interval", "from": start_value, "to": end_value, "pairs": len(pending),
                       "betti": _pad(b, max(len(b), 1)), "constant": const, "collapses": coll})
        if strict and not (const and coll):
            raise NonElementaryStep(f"homology changes between critical values {start_value} and {end_value}")

    for x in order:
        if x in S:
            continue
        missing = [f for f in facets(x) if f not in S]
        if W.is_critical(x):
            if missing and strict:
                raise NonElementaryStep(f"critical cell {x} attached before its boundary")
            v = F.values[x]
            close_interval(v)
            before = current_betti()
            S.add(x)
            after = current_betti()
            d = _delta(before, after)
            ok = elementary(d, len(x) - 1) and not missing
            events.append({"kind": "attach", "value": v, "dim": len(x) - 1, "cell": x,
                           "betti_before": before, "betti_after": after, "delta": d, "elementary": ok})
            if strict and not ok:
                raise NonElementaryStep(f"attaching {x} changed homology by {d}")
            attach[len(x) - 1] = attach.get(len(x) - 1, 0) + 1
            crit_values.append(v)
            pending = []
            start_betti, start_value = after, v
        elif x in W.down:
            w = W.down[x]
            if missing != [w] or any(f not in S for f in facets(w)):
                if strict:
                    raise NonElementaryStep(f"pair {w} < {x} is not an elementary expansion")
            S.update((w, x))
            pending.append((w, x))
        else:
            raise NonElementaryStep(f"{x} enters before its partner {W.up.get(x)}")
    close_interval(None)
    crit = critical_cells(W)
    top = max(list(crit) + list(attach) + [-1])
    crit_counts = [len(crit.get(d, ())) for d in range(top + 1)]
    attach_counts = [attach.get(d, 0) for d in range(top + 1)]
    heights: list = []
    if V_K is not None:
        hc: dict = {}
        for cs in critical_cells(V_K).values():
            for s in cs:
                h = height(s, V_K.domain)
                hc[h] = hc.get(h, 0) + 1
        heights = [hc.get(d, 0) for d in range(max(hc, default=-1) + 1)]
    thresholds = []
    if every_threshold:
        ent = entry_values(F, S_cells)
        for a in midpoints(F.values.values()):
            sub = CellSet(c for c, e in ent.items() if e <= a)
            thresholds.append((a, betti_of(sub) if len(sub) else ()))
    return FiltrationReport(crit_values, events, attach_counts, crit_counts, heights, thresholds,
                            betti_of(S_cells) if len(S_cells) else ())
