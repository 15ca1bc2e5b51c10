"""The gradient V'_X induced on sd(X) by a gradient V_K on K, its restriction W to S_K,
and the extension of f to a discrete Morse function F on sd(X).

sd(X) is partitioned into regions by carrier: one region per critical cell
of V_X (chains with that top element) and one per pair (alpha, beta) of V_X
(chains topped by alpha or beta).  Each region gets its own acyclic
matching, found by a bottom-up collapse search seeded with mandated pairs;
the union over regions is checked to be acyclic on all of sd(X).

Chain-cell names used below, for a pair alpha^k < beta^(k+1) with v the
vertex of beta not in alpha and alpha' another facet of beta:
    a = (alpha,)   b = (beta,)   z = (alpha',)
    ab = (alpha, beta)   bz = (alpha', beta)
    bv = ((v,), beta)   bzv = ((v,), alpha', beta)
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable

from .complex import Cell, ComplexPair, Simplex, cell_key, facets, height
from .errors import CyclicField, GlobalCycle, InfeasibleConstraint
from .gradient import (
    GradientField,
    MorseFunction,
    VectorField,
    as_gradient,
    critical_cells,
    function_from_gradient,
    is_acyclic,
)
from .subdivision import SdComplex, barycentric_subdivision, order_complex

SEARCH_BUDGET = 20000


def extend_to_pair(V_K: VectorField, pair: ComplexPair) -> GradientField:
    """The same pairs viewed on X; every cell of T is critical."""
    V = VectorField(V_K.pairs, pair.X)
    return as_gradient(V)


@dataclass(frozen=True)
class LocalMatching:
    region: tuple              # (sigma,) for a critical cell, (alpha, beta) for a pair
    pairs: tuple
    critical: tuple = ()
    exit_cell: tuple | None = None   # W-critical cell carried by a K-critical sigma
    exit_face: tuple | None = None   # alpha' when the steepest-exit pairs were used
    mandated: tuple = ()


def solve_local(cells: Iterable[Cell], mandated: Iterable[tuple[Cell, Cell]], critical: Iterable[Cell],
                priority: Callable[[Cell, Cell], tuple], budget: int = SEARCH_BUDGET) -> list | None:
    """Acyclic matching of `cells` leaving exactly `critical` unmatched and containing `mandated`.

    Cells are removed bottom-up: a critical cell once all its facets are gone,
    a pair (x, y) once x has no facets left and x is y's only remaining facet.
    Such removal orders are exactly the acyclic matchings, so depth-first
    search over the choices (best priority first) is complete.
    """
    L = set(cells)
    mandated = list(mandated)
    critical = set(critical)
    reserved = set(critical)
    mate = {}
    for x, y in mandated:
        if x in reserved or y in reserved or x not in L or y not in L:
            return None
        reserved.update((x, y))
        mate[x] = y
    down = {c: [f for f in facets(c) if f in L] for c in L}
    up: dict = {c: [] for c in L}
    for c in L:
        for f in down[c]:
            up[f].append(c)
    ordered = sorted(L, key=cell_key)
    counter = [0]

    def solve(remaining: frozenset, rem: dict, chosen: list):
        counter[0] += 1
        if counter[0] > budget:
            return None
        remaining = set(remaining)
        rem = dict(rem)
        chosen = list(chosen)

        def drop(c):
            remaining.discard(c)
            for u in up[c]:
                rem[u] -= 1

        progress = True
        while progress:
            progress = False
            for x, y in mandated:
                if x in remaining and rem[x] == 0 and rem[y] == 1:
                    drop(x)
                    drop(y)
                    chosen.append((x, y))
                    progress = True
            for c in critical:
                if c in remaining and rem[c] == 0:
                    drop(c)
                    progress = True
        if not remaining:
            return chosen
        cands = []
        for x in ordered:
            if x not in remaining or x in reserved or rem[x]:
                continue
            opts = [y for y in up[x] if y in remaining and y not in reserved]
            if not opts:
                return None  # x has no facets left to pair with and no free coface
            for y in opts:
                if rem[y] == 1:
                    cands.append((priority(x, y), x, y))
        cands.sort()
        for _, x, y in cands:
            r2 = dict(rem)
            rs = set(remaining)
            rs.discard(x)
            rs.discard(y)
            for c in (x, y):
                for u in up[c]:
                    r2[u] -= 1
            out = solve(frozenset(rs), r2, chosen + [(x, y)])
            if out is not None:
                return out
            if counter[0] > budget:
                return None
        return None

    rem0 = {c: len(down[c]) for c in L}
    return solve(frozenset(L), rem0, [])


class _Context:
    def __init__(self, pair: ComplexPair, V_K: VectorField, f: MorseFunction, sd: SdComplex, s_k: SdComplex):
        self.pair = pair
        self.K = pair.K
        self.V = V_K
        self.f = f.values
        self.sd = sd
        self.in_sk = s_k.cells

    def exit_rank(self, e: Simplex) -> int:
        if e not in self.K:
            return 3
        if e in self.V.up:
            return 0
        if self.V.is_critical(e):
            return 1
        return 2

    def priority(self, x: Cell, y: Cell) -> tuple:
        ix, iy = x in self.in_sk, y in self.in_sk
        group = 0 if ix and iy else (1 if not ix and not iy else 2)
        (e,) = set(y) - set(x)
        return (group, self.exit_rank(e), self.f[e], cell_key(x), cell_key(y))


def _regular(ctx: _Context, alpha: Simplex, beta: Simplex) -> LocalMatching:
    L = ctx.sd.by_carrier[alpha] + ctx.sd.by_carrier[beta]
    a, b, ab = (alpha,), (beta,), (alpha, beta)
    (v,) = set(beta) - set(alpha)
    vv = (v,)
    mandated = [(a, ab)]
    exit_face = None
    if len(alpha) == 1:
        mandated.append((b, (vv, beta)))
    else:
        others = [s for s in facets(beta) if s != alpha and s in ctx.K]
        tails = [s for s in others if s in ctx.V.up]
        pool = tails or [s for s in others if ctx.V.is_critical(s)]
        if pool:
            exit_face = min(pool, key=lambda s: (ctx.f[s], cell_key(s)))
            mandated.append((b, (exit_face, beta)))
            mandated.append(((vv, beta), (vv, exit_face, beta)))
        else:
            mandated.append((b, (vv, beta)))
    pairs = solve_local(L, mandated, (), ctx.priority)
    if pairs is None:
        raise InfeasibleConstraint(f"no acyclic matching for pair {alpha} < {beta}")
    return LocalMatching((alpha, beta), tuple(pairs), (), None, exit_face, tuple(mandated))


def _maximal_chains(L: Iterable[Cell], k: int) -> list[Cell]:
    return sorted((c for c in L if len(c) == k + 1), key=cell_key)


def _critical(ctx: _Context, sigma: Simplex) -> LocalMatching:
    L = ctx.sd.by_carrier[sigma]
    k = len(sigma) - 1
    top = _maximal_chains(L, k)
    if k == 0:
        exit_cell = (sigma,) if sigma in ctx.K else None
        return LocalMatching((sigma,), (), ((sigma,),), exit_cell)
    if sigma not in ctx.K:
        for s in top:
            pairs = solve_local(L, (), (s,), ctx.priority)
            if pairs is not None:
                return LocalMatching((sigma,), tuple(pairs), (s,))
        raise InfeasibleConstraint(f"no acyclic matching inside {sigma}")
    i = height(sigma, ctx.K)
    if i == k:
        for s in top:
            if s not in ctx.in_sk:
                continue
            pairs = solve_local(L, (), (s,), ctx.priority)
            if pairs is not None:
                return LocalMatching((sigma,), tuple(pairs), (s,), s)
        raise InfeasibleConstraint(f"no acyclic matching inside {sigma}")
    # i < k: the W-critical cell is an i-face tau in S_K, matched upward out of S_K
    taus = [c for c in L if len(c) == i + 1 and c in ctx.in_sk]
    # shallowest exit first: compare values of the chain below sigma from the top down
    taus.sort(key=lambda c: (tuple(-ctx.f[e] for e in reversed(c[:-1])), cell_key(c)))
    for tau in taus:
        st = set(tau)
        for s in top:
            if not st <= set(s):
                continue
            rhos = [c for c in L if len(c) == i + 2 and st <= set(c) and c != s]
            rhos.sort(key=lambda c: (not set(c) <= set(s), cell_key(c)))
            for rho in rhos:
                pairs = solve_local(L, [(tau, rho)], (s,), ctx.priority)
                if pairs is not None:
                    return LocalMatching((sigma,), tuple(pairs), (s,), tau, None, ((tau, rho),))
    raise InfeasibleConstraint(f"no admissible critical placement inside {sigma}")


@dataclass(frozen=True, eq=False)
class InducedGradient:
    field: GradientField          # V'_X on sd(X)
    pair: ComplexPair
    V_K: VectorField
    V_X: GradientField
    f: MorseFunction              # injective DMF on X with gradient V_X
    sd: SdComplex
    s_k: SdComplex
    locals: dict                  # region -> LocalMatching
    designated: dict              # V_X-critical sigma -> sigma'
    exit_cells: dict              # V_K-critical sigma -> W-critical cell carried by sigma
    region_of: dict = field(default_factory=dict)  # sd cell -> region

    def critical(self) -> list[Cell]:
        return [c for cs in critical_cells(self.field).values() for c in cs]


def prepare_function(V_X: GradientField, f: MorseFunction | None) -> MorseFunction:
    """A full injective DMF on X with gradient V_X, keeping given values as presets."""
    presets = dict(f.values) if f is not None else {}
    g = function_from_gradient(V_X, presets)
    return g


def induce(V_K: VectorField, pair: ComplexPair, f: MorseFunction | None = None,
           sd: SdComplex | None = None) -> InducedGradient:
    V_X = extend_to_pair(V_K, pair)
    F = prepare_function(V_X, f)
    sd = sd or barycentric_subdivision(pair)
    s_k = order_complex(pair, sd)
    ctx = _Context(pair, V_K, F, sd, s_k)
    locals_: dict = {}
    designated: dict = {}
    exits: dict = {}
    prov: dict = {}
    pairs: list = []
    for s in pair.X.ordered:
        if V_X.is_critical(s):
            lm = _critical(ctx, s)
            designated[s] = lm.critical[0]
            if lm.exit_cell is not None:
                exits[s] = lm.exit_cell
        elif s in V_X.up:
            lm = _regular(ctx, s, V_X.up[s])
        else:
            continue
        locals_[lm.region] = lm
        pairs.extend(lm.pairs)
        for r in lm.region:
            for c in sd.by_carrier[r]:
                prov[c] = lm.region
    V = VectorField.of(pairs, sd)
    if not is_acyclic(V):
        raise GlobalCycle("union of local matchings has a closed path")
    return InducedGradient(GradientField(V.pairs, sd), pair, V_K, V_X, F, sd, s_k,
                           locals_, designated, exits, prov)


@dataclass(frozen=True, eq=False)
class RestrictedGradient:
    field: GradientField
    tags: dict     # W-critical cell -> "inherited" | "orphaned"

    def counts(self) -> list[int]:
        crit = critical_cells(self.field)
        top = max(crit, default=-1)
        return [len(crit.get(d, ())) for d in range(top + 1)]


def restrict(ind: InducedGradient) -> RestrictedGradient:
    S = ind.s_k
    pairs = [(a, b) for a, b in ind.field.pairs if a in S and b in S]
    W = VectorField.of(pairs, S)
    if not is_acyclic(W):
        raise CyclicField("restriction has a closed path")
    tags = {}
    for cs in critical_cells(W).values():
        for c in cs:
            tags[c] = "inherited" if ind.field.is_critical(c) else "orphaned"
    return RestrictedGradient(GradientField(W.pairs, S), tags)


def function_presets(ind: InducedGradient) -> dict:
    f = ind.f.values
    presets = {}
    for a, b in ind.V_K.pairs:
        presets[(a,)] = f[a]
        presets[(b,)] = f[b]
    for s, c in ind.exit_cells.items():
        presets[c] = f[s]
    return presets


def extend_function(ind: InducedGradient) -> MorseFunction:
    """F on sd(X) with gradient V'_X, agreeing with f at the preset cells."""
    return function_from_gradient(ind.field, function_presets(ind))


def correspondence(ind: InducedGradient) -> dict:
    """V_X-critical sigma -> the V'_X-critical cell it carries."""
    crit = {c: None for c in ind.critical()}
    out = {}
    for s in ind.V_X.domain.ordered:
        if ind.V_X.is_critical(s):
            out[s] = [c for c in ind.sd.by_carrier[s] if c in crit]
    return out


def lifted_path(ind: InducedGradient, alpha: Simplex) -> list[Cell]:
    """a -> b -> a' in the 1-skeleton: the vertex/edge path started by a V_K pair."""
    beta = ind.V_K.up[alpha]
    lm = ind.locals[(alpha, beta)]
    path = [(alpha,), (alpha, beta), (beta,)]
    if lm.exit_face is not None:
        path += [(lm.exit_face, beta), (lm.exit_face,)]
    return path
