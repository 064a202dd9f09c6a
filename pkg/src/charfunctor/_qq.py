"""Small exact linear algebra over the rationals.

Everything here works on lists of ``int`` or ``Fraction`` and returns
``Fraction`` entries. Matrices are lists of rows.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Row = Sequence[int | Fraction]


def rref(rows: Sequence[Row]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form and the list of pivot columns."""
    a = [[Fraction(x) for x in r] for r in rows]
    if not a:
        return [], []
    ncols = len(a[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    return a[:r], pivots


def rank(rows: Sequence[Row]) -> int:
    return len(rref(rows)[1])


def independent_rows(rows: Sequence[Row]) -> list[int]:
    """Indices of the greedy (first-come) maximal independent subset of rows."""
    chosen: list[int] = []
    basis: list[Row] = []
    for i, r in enumerate(rows):
        if rank(basis + [r]) > len(basis):
            basis.append(r)
            chosen.append(i)
    return chosen


def nullspace(rows: Sequence[Row], ncols: int) -> list[list[Fraction]]:
    """Basis of {x : rows . x = 0} in Q^ncols."""
    red, pivots = rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for row, pc in zip(red, pivots):
            x[pc] = -row[f]
        basis.append(x)
    return basis


def solve_left(a: Sequence[Row], b: Sequence[Row]) -> list[list[Fraction]] | None:
    """Solve ``a @ x = b`` for square invertible ``a``; ``None`` if singular."""
    n = len(a)
    aug = [list(ra) + list(rb) for ra, rb in zip(a, b)]
    red, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        return None
    return [row[n:] for row in red[:n]]


def coordinates(basis: Sequence[Row], v: Row) -> list[Fraction] | None:
    """Coefficients c with sum c_i basis_i = v, or ``None`` if v is outside the span."""
    k = len(basis)
    if k == 0:
        return [] if all(x == 0 for x in v) else None
    # columns of the system are basis vectors
    cols = [[basis[i][j] for i in range(k)] + [v[j]] for j in range(len(v))]
    red, pivots = rref(cols)
    if k in pivots:
        return None
    c = [Fraction(0)] * k
    for row, pc in zip(red, pivots):
        c[pc] = row[k]
    return c


def feasible(ineqs: Sequence[Row], eqs: Sequence[Row] = ()) -> bool:
    """Decide whether ``{x : g . x >= 0 for g in ineqs, e[:-1] . x = e[-1]}`` is
    nonempty, by Fourier-Motzkin elimination.

    Inequalities are homogeneous rows of length d; equations carry their
    right-hand side as the last entry (length d + 1). Sizes are tiny in
    practice (d at most the ambient dimension), so the doubly exponential
    worst case of the elimination is irrelevant.
    """
    # normalise everything to affine rows  a . x + c >= 0
    rows = [[Fraction(x) for x in g] + [Fraction(0)] for g in ineqs]
    equalities = [[Fraction(x) for x in e[:-1]] + [-Fraction(e[-1])] for e in eqs]
    d = len(rows[0]) - 1 if rows else (len(equalities[0]) - 1 if equalities else 0)
    # substitute equalities first
    for k in range(len(equalities)):
        e = equalities[k]
        piv = next((j for j in range(d) if e[j] != 0), None)
        if piv is None:
            if e[d] != 0:
                return False
            continue
        def sub(r: list[Fraction]) -> list[Fraction]:
            f = r[piv] / e[piv]
            return [x - f * y for x, y in zip(r, e)]
        rows = [sub(r) for r in rows]
        equalities = [sub(r) for r in equalities]
    for j in range(d):
        pos = [r for r in rows if r[j] > 0]
        neg = [r for r in rows if r[j] < 0]
        rest = [r for r in rows if r[j] == 0]
        for p in pos:
            for q in neg:
                a, b = p[j], -q[j]
                rest.append([b * x + a * y for x, y in zip(p, q)])
        rows = _dedupe(rest)
    return all(r[d] >= 0 for r in rows)


def _dedupe(rows: list[list[Fraction]]) -> list[list[Fraction]]:
    seen = set()
    out = []
    for r in rows:
        scale = next((abs(x) for x in r if x != 0), None)
        if scale is None:
            continue
        key = tuple(x / scale for x in r)
        if key not in seen:
            seen.add(key)
            out.append(list(key))
    return out
