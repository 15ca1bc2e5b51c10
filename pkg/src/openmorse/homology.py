"""Integral chain complexes, homology, the Morse complex and the BM comparison."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .complex import CellSet, ComplexPair, SimplicialComplex, signed_facets
from .errors import NotAComplex
from .gradient import VectorField, critical_cells, path_counts, path_weights
from .snf import sparse_invariant_factors, sparse_rank_mod2

Z = "Z"
Z2 = "Z2"


@dataclass(frozen=True)
class ChainComplexZ:
    """bases[i] orders the i-chains; boundaries[i] maps C_i -> C_{i-1} column-wise.

    boundaries[i][j] is a dict {row index: entry} for the j-th basis cell.
    """

    bases: dict
    boundaries: dict
    ring: str = Z

    @property
    def top(self) -> int:
        return max((d for d, b in self.bases.items() if b), default=-1)

    def rank(self, i: int) -> int:
        return len(self.bases.get(i, ()))

    def dense(self, i: int) -> list[list[int]]:
        rows, cols = self.rank(i - 1), self.rank(i)
        M = [[0] * cols for _ in range(rows)]
        for j, col in self.boundaries.get(i, {}).items():
            for r, x in col.items():
                M[r][j] = x
        return M

    def check_square_zero(self) -> bool:
        mod = 2 if self.ring == Z2 else None
        for i in range(1, self.top + 1):
            outer = self.boundaries.get(i, {})
            inner = self.boundaries.get(i - 1, {})
            for col in outer.values():
                acc: dict[int, int] = {}
                for k, a in col.items():
                    for r, b in inner.get(k, {}).items():
                        acc[r] = acc.get(r, 0) + a * b
                if any((v % mod if mod else v) for v in acc.values()):
                    return False
        return True


@dataclass(frozen=True)
class HomologyResult:
    betti: tuple
    torsion: tuple = ()

    def as_dict(self) -> dict:
        return {"betti": list(self.betti), "torsion": [list(t) for t in self.torsion]}

    def trimmed(self, n: int) -> "HomologyResult":
        b = list(self.betti)[:n] + [0] * max(0, n - len(self.betti))
        t = [list(x) for x in self.torsion][:n] + [[] for _ in range(max(0, n - len(self.torsion)))]
        return HomologyResult(tuple(b), tuple(tuple(x) for x in t))

    def euler_characteristic(self) -> int:
        return sum((-1) ** i * b for i, b in enumerate(self.betti))


def chain_complex(cells: CellSet, ring: str = Z) -> ChainComplexZ:
    """Simplicial boundary on a cell set; faces outside the set are dropped.

    On a closed complex this is the usual chain complex, on K = X \\ T it is
    the relative complex C(X)/C(T).
    """
    bases = {d: tuple(cs) for d, cs in cells.by_dim.items()}
    index = {d: {c: i for i, c in enumerate(cs)} for d, cs in bases.items()}
    bnd: dict[int, dict[int, dict[int, int]]] = {}
    for d, cs in bases.items():
        if d == 0:
            continue
        low = index.get(d - 1, {})
        cols: dict[int, dict[int, int]] = {}
        for j, c in enumerate(cs):
            col = {}
            for s, f in signed_facets(c):
                r = low.get(f)
                if r is not None:
                    col[r] = s % 2 if ring == Z2 else s
            col = {r: x for r, x in col.items() if x}
            if col:
                cols[j] = col
        bnd[d] = cols
    return ChainComplexZ(bases, bnd, ring)


def simplicial_complex_chain(X: SimplicialComplex, ring: str = Z) -> ChainComplexZ:
    return chain_complex(X, ring)


def relative_chain(pair: ComplexPair, ring: str = Z) -> ChainComplexZ:
    return chain_complex(pair.K, ring)


def homology(C: ChainComplexZ, check: bool = True) -> HomologyResult:
    if check and not C.check_square_zero():
        raise NotAComplex("boundary does not square to zero")
    top = C.top
    if top < 0:
        return HomologyResult((), ())
    ranks = {}
    factors = {}
    for i in range(1, top + 2):
        cols = C.boundaries.get(i, {})
        if C.ring == Z2:
            ranks[i] = sparse_rank_mod2(cols)
            factors[i] = []
        else:
            fs = sparse_invariant_factors(cols)
            ranks[i] = len(fs)
            factors[i] = fs
    betti = []
    torsion = []
    for i in range(top + 1):
        betti.append(C.rank(i) - ranks.get(i, 0) - ranks.get(i + 1, 0))
        torsion.append(tuple(x for x in factors.get(i + 1, []) if x > 1))
    return HomologyResult(tuple(betti), tuple(torsion))


@dataclass(frozen=True)
class MorseComplex:
    chain: ChainComplexZ
    field: VectorField

    @property
    def ring(self) -> str:
        return self.chain.ring


def morse_complex(V: VectorField, ring: str = Z) -> MorseComplex:
    """Critical cells as basis, boundary = signed sums (or counts mod 2) over gradient paths."""
    crit = critical_cells(V)
    bases = {d: tuple(cs) for d, cs in sorted(crit.items())}
    index = {d: {c: i for i, c in enumerate(cs)} for d, cs in bases.items()}
    bnd = {}
    for d, cs in bases.items():
        if d == 0:
            continue
        low = index.get(d - 1, {})
        cols = {}
        for j, c in enumerate(cs):
            w = path_counts(V, c) if ring == Z2 else path_weights(V, c)
            col = {}
            for tgt, x in w.items():
                if len(tgt) == len(c) - 1 and tgt in low:
                    x = x % 2 if ring == Z2 else x
                    if x:
                        col[low[tgt]] = x
            if col:
                cols[j] = col
        bnd[d] = cols
    C = ChainComplexZ(bases, bnd, ring)
    if not C.check_square_zero():
        raise NotAComplex("Morse boundary does not square to zero")
    return MorseComplex(C, V)


@dataclass
class BMReport:
    critical_counts: list
    morse: HomologyResult
    relative: HomologyResult
    equal: bool
    inequalities: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.equal and all(ok for _, _, ok in self.inequalities)

    def as_dict(self) -> dict:
        return {
            "critical_counts": self.critical_counts,
            "morse_homology": self.morse.as_dict(),
            "bm_homology": self.relative.as_dict(),
            "isomorphic": self.equal,
            "weak_inequalities": [{"rank": r, "critical": c, "holds": ok} for r, c, ok in self.inequalities],
            "passed": self.passed,
        }


def bm_report(pair: ComplexPair, V_K: VectorField) -> BMReport:
    """Compare H(M(K)) with H(X, T) and check rank H_i <= c_i."""
    n = max(pair.X.dim + 1, 1)
    M = homology(morse_complex(V_K).chain).trimmed(n)
    R = homology(relative_chain(pair)).trimmed(n)
    crit = critical_cells(V_K)
    counts = [len(crit.get(d, ())) for d in range(n)]
    ineq = [(R.betti[i], counts[i], R.betti[i] <= counts[i]) for i in range(n)]
    return BMReport(counts, M, R, M == R, ineq)


def betti_of(cells: CellSet, ring: str = Z) -> tuple:
    return homology(chain_complex(cells, ring), check=False).betti


def euler_check(counts: Iterable[int], cells: CellSet) -> bool:
    return sum((-1) ** i * c for i, c in enumerate(counts)) == cells.euler_characteristic()
