"""Smith normal form over the integers, dense (with transforms) and sparse."""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd

Matrix = list[list[int]]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(A: Matrix, B: Matrix) -> Matrix:
    if not A:
        return []
    m = len(B[0]) if B else 0
    return [[sum(A[i][k] * B[k][j] for k in range(len(B))) for j in range(m)] for i in range(len(A))]


def canonical_factors(diag: list[int]) -> list[int]:
    """Rearrange nonzero diagonal entries into a divisibility chain d1 | d2 | ..."""
    d = sorted(abs(x) for x in diag if x)
    n = len(d)
    for i in range(n):
        for j in range(i + 1, n):
            g = gcd(d[i], d[j])
            l = d[i] * d[j] // g
            d[i], d[j] = g, l
    return d


@dataclass(frozen=True)
class SmithForm:
    factors: list[int]       # nonzero invariant factors, d1 | d2 | ...
    rank: int
    U: Matrix
    V: Matrix
    D: Matrix

    def verify(self, M: Matrix) -> bool:
        return matmul(matmul(self.U, M), self.V) == self.D


def smith_normal_form(M: Matrix) -> SmithForm:
    """U M V = D with U, V unimodular and D diagonal in divisibility order."""
    m = len(M)
    n = len(M[0]) if m else 0
    A = [list(r) for r in M]
    U = identity(m)
    V = identity(n)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, q):  # row dst += q * row src
        A[dst] = [x + q * y for x, y in zip(A[dst], A[src])]
        U[dst] = [x + q * y for x, y in zip(U[dst], U[src])]

    def add_col(src, dst, q):
        for row in A:
            row[dst] += q * row[src]
        for row in V:
            row[dst] += q * row[src]

    t = 0
    while t < min(m, n):
        nz = [(abs(A[i][j]), i, j) for i in range(t, m) for j in range(t, n) if A[i][j]]
        if not nz:
            break
        _, i, j = min(nz)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            done = True
            for i in range(t + 1, m):
                if A[i][t]:
                    q = A[i][t] // A[t][t]
                    add_row(t, i, -q)
                    if A[i][t]:
                        swap_rows(t, i)
                        done = False
            for j in range(t + 1, n):
                if A[t][j]:
                    q = A[t][j] // A[t][t]
                    add_col(t, j, -q)
                    if A[t][j]:
                        swap_cols(t, j)
                        done = False
            if not done:
                continue
            # the pivot must divide the rest of the block
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if A[i][j] % A[t][t]), None)
            if bad is None:
                break
            add_row(bad[0], t, 1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    factors = [A[i][i] for i in range(min(m, n)) if A[i][i]]
    return SmithForm(factors, len(factors), U, V, A)


def sparse_invariant_factors(columns: dict[int, dict[int, int]]) -> list[int]:
    """Nonzero invariant factors of a sparse integer matrix given column-wise.

    Unit pivots are eliminated first which keeps boundary matrices sparse;
    remaining entries go through gcd reduction.
    """
    cols = {c: dict(v) for c, v in columns.items() if v}
    rows: dict[int, dict[int, int]] = {}
    for c, col in cols.items():
        for r, x in col.items():
            rows.setdefault(r, {})[c] = x
    diag: list[int] = []

    def set_entry(r, c, x):
        if x:
            cols.setdefault(c, {})[r] = x
            rows.setdefault(r, {})[c] = x
        else:
            cols.get(c, {}).pop(r, None)
            rows.get(r, {}).pop(c, None)
            if c in cols and not cols[c]:
                del cols[c]
            if r in rows and not rows[r]:
                del rows[r]

    def row_op(src, dst, q):  # row dst -= q * row src
        for c, x in list(rows[src].items()):
            set_entry(dst, c, rows.get(dst, {}).get(c, 0) - q * x)

    def col_op(src, dst, q):
        for r, x in list(cols[src].items()):
            set_entry(r, dst, cols.get(dst, {}).get(r, 0) - q * x)

    def remove(r, c):
        for cc in list(rows.get(r, {})):
            set_entry(r, cc, 0)
        for rr in list(cols.get(c, {})):
            set_entry(rr, c, 0)

    while cols:
        # first column holding a unit entry; pick its sparsest row (less fill-in)
        best = None
        for c, col in cols.items():
            units = [r for r, x in col.items() if x == 1 or x == -1]
            if units:
                best = (min(units, key=lambda r: (len(rows[r]), r)), c)
                break
        if best is None:
            r, c = min(((r, c) for c in cols for r in cols[c]), key=lambda rc: (abs(cols[rc[1]][rc[0]]), rc))
        else:
            r, c = best
        while True:
            p = cols[c][r]
            changed = False
            for rr in [x for x in cols[c] if x != r]:
                q = cols[c][rr] // p
                row_op(r, rr, q)
                if cols.get(c, {}).get(rr):
                    r, changed = rr, True
                    break
            if changed:
                continue
            for cc in [x for x in rows[r] if x != c]:
                q = rows[r][cc] // p
                col_op(c, cc, q)
                if rows.get(r, {}).get(cc):
                    c, changed = cc, True
                    break
            if not changed:
                break
        diag.append(abs(cols[c][r]))
        remove(r, c)
    return canonical_factors(diag)


def sparse_rank_mod2(columns: dict[int, dict[int, int]]) -> int:
    """Rank over Z/2 using integer bitsets."""
    pivots: dict[int, int] = {}
    rank = 0
    for col in columns.values():
        v = 0
        for r, x in col.items():
            if x % 2:
                v |= 1 << r
        while v:
            top = v.bit_length() - 1
            if top in pivots:
                v ^= pivots[top]
            else:
                pivots[top] = v
                rank += 1
                break
    return rank
