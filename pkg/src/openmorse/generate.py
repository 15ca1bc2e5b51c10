"""Seeded random pairs (X, T) and random acyclic matchings on K."""
from __future__ import annotations

import random
from dataclasses import dataclass

from .complex import CellSet, ComplexPair, build_complex, build_pair, facets
from .gradient import GradientField


def random_pair(rng: random.Random, vmax: int = 8, dim: int = 3, max_generators: int = 8,
                closed: bool = False) -> ComplexPair:
    n = rng.randint(2, max(2, vmax))
    verts = list(range(n))
    gens = []
    for _ in range(rng.randint(1, max_generators)):
        size = rng.randint(1, min(dim + 1, n))
        gens.append(sorted(rng.sample(verts, size)))
    # keep vertex ids dense
    used = sorted({v for g in gens for v in g})
    relabel = {v: i for i, v in enumerate(used)}
    gens = [[relabel[v] for v in g] for g in gens]
    X = build_complex(gens)
    if closed or rng.random() < 0.2:
        return ComplexPair(X, build_complex([]))
    cells = list(X.ordered)
    t_gens = []
    for _ in range(rng.randint(1, 3)):
        c = rng.choice(cells)
        # bias toward small T cells so K keeps some structure
        while len(c) > 1 and rng.random() < 0.6:
            c = rng.choice(facets(c))
        t_gens.append(list(c))
    return build_pair(gens, t_gens)


def creates_cycle(up: dict, domain: CellSet, a, b) -> bool:
    """Would adding the pair a < b close a V-path?  Follow V-paths out of b looking for a."""
    stack = [(b, a)]
    seen = {b}
    while stack:
        beta, tail = stack.pop()
        for x in facets(beta):
            if x == tail or x not in domain:
                continue
            if x == a:
                return True
            nxt = up.get(x)
            if nxt is not None and nxt not in seen:
                seen.add(nxt)
                stack.append((nxt, x))
    return False


def random_matching(rng: random.Random, domain: CellSet) -> GradientField:
    """Greedy matching over a random order of facet pairs, skipping any pair that would close a path."""
    cand = [(f, c) for c in domain.ordered for f in domain.facets(c)]
    rng.shuffle(cand)
    up: dict = {}
    down: dict = {}
    for a, b in cand:
        if a in up or a in down or b in up or b in down:
            continue
        if creates_cycle(up, domain, a, b):
            continue
        up[a] = b
        down[b] = a
    return GradientField(frozenset(up.items()), domain)


@dataclass(frozen=True)
class Instance:
    seed: int
    pair: ComplexPair
    field: GradientField


def instance(seed: int, vmax: int = 8, dim: int = 3, closed: bool = False) -> Instance:
    rng = random.Random(seed)
    pair = random_pair(rng, vmax, dim, closed=closed)
    return Instance(seed, pair, random_matching(rng, pair.K))


def suite(n: int = 200, start: int = 0, vmax: int = 8, dim: int = 3, closed: bool = False) -> list[Instance]:
    return [instance(s, vmax, dim, closed) for s in range(start, start + n)]


# Minimal 6-vertex triangulation of the real projective plane (H_1 = Z/2).
RP2 = [[0, 1, 2], [0, 2, 3], [0, 3, 4], [0, 4, 5], [0, 1, 5],
       [1, 2, 4], [2, 3, 5], [1, 3, 4], [2, 4, 5], [1, 3, 5]]


def rp2_instances(seeds=range(5)) -> list[Instance]:
    """Projective plane with a few choices of T, for torsion coverage."""
    out = []
    t_choices = [[], [[0]], [[0, 1]], [[0, 1, 2]], [[0, 1], [3, 4]]]
    for s in seeds:
        rng = random.Random(10_000 + s)
        pair = build_pair(RP2, t_choices[s % len(t_choices)])
        out.append(Instance(10_000 + s, pair, random_matching(rng, pair.K)))
    return out
