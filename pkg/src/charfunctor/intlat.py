"""Exact integer lattices: echelon forms, saturation, Smith invariants.

Lattices are integer *row* spans inside Z^m. A unimodular map ``psi`` acts on
a row vector by ``v -> v @ psi.T`` (equivalently ``psi`` acting on column
vectors), and that convention is used everywhere in the package.

All arithmetic uses Python integers, so there is no overflow.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence

INFINITE = math.inf

IntVector = tuple[int, ...]


class LatticeError(ValueError):
    """Structural problem with integer vectors (wrong length, bad matrix)."""


class ContainmentError(LatticeError):
    """A generator set is not contained in the lattice it was measured against."""


class NotSaturatedError(LatticeError):
    pass


def _as_vector(v: Iterable[int], m: int | None = None) -> IntVector:
    out = tuple(v)
    for x in out:
        if isinstance(x, bool) or not isinstance(x, int):
            raise LatticeError(f"non-integer entry {x!r}")
    if m is not None and len(out) != m:
        raise LatticeError(f"vector {out} has length {len(out)}, expected {m}")
    return out


@dataclass(frozen=True)
class GeneratorSet:
    """A raw spanning set of integer row vectors in Z^m (possibly empty)."""

    m: int
    rows: tuple[IntVector, ...] = ()

    def __post_init__(self) -> None:
        if self.m < 0:
            raise LatticeError("ambient rank must be non-negative")
        object.__setattr__(self, "rows", tuple(_as_vector(r, self.m) for r in self.rows))

    @classmethod
    def of(cls, rows: Sequence[Sequence[int]], m: int | None = None) -> GeneratorSet:
        if m is None:
            if not rows:
                raise LatticeError("cannot infer the ambient rank of an empty generator set")
            m = len(rows[0])
        return cls(m, tuple(tuple(r) for r in rows))


# --------------------------------------------------------------------------
# echelon / Smith machinery


def _hnf(rows: Sequence[Sequence[int]], m: int) -> list[list[int]]:
    """Row-style Hermite normal form: positive pivots, entries above a pivot in [0, pivot)."""
    a = [list(r) for r in rows]
    p = 0
    for col in range(m):
        if p == len(a):
            break
        while True:
            nz = [i for i in range(p, len(a)) if a[i][col] != 0]
            if not nz:
                break
            i0 = min(nz, key=lambda i: abs(a[i][col]))
            a[p], a[i0] = a[i0], a[p]
            clean = True
            for i in range(p + 1, len(a)):
                if a[i][col] != 0:
                    q = a[i][col] // a[p][col]
                    a[i] = [x - q * y for x, y in zip(a[i], a[p])]
                    if a[i][col] != 0:
                        clean = False
            if clean:
                break
        if a[p][col] == 0:
            continue
        if a[p][col] < 0:
            a[p] = [-x for x in a[p]]
        piv = a[p][col]
        for i in range(p):
            q = a[i][col] // piv
            if q:
                a[i] = [x - q * y for x, y in zip(a[i], a[p])]
        p += 1
    return a[:p]


def _pivot_cols(basis: Sequence[Sequence[int]]) -> list[int]:
    return [next(j for j, x in enumerate(r) if x != 0) for r in basis]


def _smith_diagonal(rows: Sequence[Sequence[int]]) -> list[int]:
    """Nonzero invariant factors d_1 | d_2 | ... of the matrix with the given rows."""
    a = [list(r) for r in rows if any(r)]
    if not a:
        return []
    nr, nc = len(a), len(a[0])
    diag: list[int] = []
    t = 0
    while t < min(nr, nc):
        entries = [(abs(a[i][j]), i, j) for i in range(t, nr) for j in range(t, nc) if a[i][j]]
        if not entries:
            break
        _, i0, j0 = min(entries)
        a[t], a[i0] = a[i0], a[t]
        for r in a:
            r[t], r[j0] = r[j0], r[t]
        while True:
            done = True
            piv = a[t][t]
            for i in range(t + 1, nr):
                if a[i][t]:
                    q = a[i][t] // piv
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                    if a[i][t]:
                        done = False
            for j in range(t + 1, nc):
                if a[t][j]:
                    q = a[t][j] // piv
                    for r in a:
                        r[j] -= q * r[t]
                    if a[t][j]:
                        done = False
            if done:
                # divisibility against the remaining block
                bad = next(
                    ((i, j) for i in range(t + 1, nr) for j in range(t + 1, nc) if a[i][j] % piv),
                    None,
                )
                if bad is None:
                    break
                a[t] = [x + y for x, y in zip(a[t], a[bad[0]])]
                done = False
            if not done:
                entries = [(abs(a[i][j]), i, j) for i in range(t, nr) for j in range(t, nc) if a[i][j]]
                _, i0, j0 = min(entries)
                a[t], a[i0] = a[i0], a[t]
                for r in a:
                    r[t], r[j0] = r[j0], r[t]
        diag.append(abs(a[t][t]))
        t += 1
    return diag


def _integer_kernel(rows: Sequence[Sequence[int]], m: int) -> list[list[int]]:
    """Z-basis of {x in Z^m : r . x = 0 for every row r}."""
    rows = [list(r) for r in rows]
    k = len(rows)
    if k == 0:
        return [[int(i == j) for j in range(m)] for i in range(m)]
    # [rows^T | I], row-reduce the left block; zero left rows carry the kernel
    aug = [[rows[i][j] for i in range(k)] + [int(j == c) for c in range(m)] for j in range(m)]
    p = 0
    for col in range(k):
        while True:
            nz = [i for i in range(p, m) if aug[i][col] != 0]
            if not nz:
                break
            i0 = min(nz, key=lambda i: abs(aug[i][col]))
            aug[p], aug[i0] = aug[i0], aug[p]
            clean = True
            for i in range(p + 1, m):
                if aug[i][col]:
                    q = aug[i][col] // aug[p][col]
                    aug[i] = [x - q * y for x, y in zip(aug[i], aug[p])]
                    if aug[i][col]:
                        clean = False
            if clean:
                break
        if p < m and aug[p][col] != 0:
            p += 1
    return [r[k:] for r in aug[p:]]


def _det(matrix: Sequence[Sequence[int]]) -> int:
    """Bareiss fraction-free determinant."""
    a = [list(r) for r in matrix]
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


# --------------------------------------------------------------------------
# public operations


def canonicalize(g: GeneratorSet) -> tuple[tuple[IntVector, ...], int]:
    """Unique echelon basis of the row span of ``g`` and its rank."""
    basis = tuple(tuple(r) for r in _hnf(g.rows, g.m))
    return basis, len(basis)


def smith_invariants(g: GeneratorSet) -> tuple[int, ...]:
    """Invariant factors of the matrix with rows ``g``, zeros omitted."""
    return tuple(_smith_diagonal(g.rows))


def saturate(g: GeneratorSet) -> tuple[SaturatedLattice, int]:
    """Smallest saturated lattice containing ``span(g)``, with the index of the span in it."""
    basis, r = canonicalize(g)
    if r == 0:
        return SaturatedLattice.zero(g.m), 1
    sat_rows = _integer_kernel(_integer_kernel(basis, g.m), g.m)
    lat = SaturatedLattice(g.m, tuple(tuple(x) for x in _hnf(sat_rows, g.m)))
    index = reduce(lambda x, y: x * y, _smith_diagonal(basis), 1)
    return lat, index


def quotient_order(g: GeneratorSet, ambient: SaturatedLattice) -> int | float:
    """Order of ``ambient / span(g)``; ``INFINITE`` when the span has smaller rank."""
    if g.m != ambient.m:
        raise LatticeError(f"ambient rank mismatch: {g.m} vs {ambient.m}")
    coords = []
    for v in g.rows:
        c = ambient.coordinates(v)
        if c is None:
            raise ContainmentError(f"{v} is not in the ambient lattice")
        coords.append(c)
    inv = _smith_diagonal(coords) if coords else []
    if len(inv) < ambient.rank:
        return INFINITE
    return reduce(lambda x, y: x * y, inv, 1)


def contains(a: SaturatedLattice, b: SaturatedLattice) -> bool:
    """True iff ``b`` is a sublattice of ``a``."""
    if a.m != b.m:
        raise LatticeError(f"ambient rank mismatch: {a.m} vs {b.m}")
    return all(a.coordinates(v) is not None for v in b.basis)


def apply_unimodular(psi: UnimodularMap, lat: SaturatedLattice) -> SaturatedLattice:
    if psi.m != lat.m:
        raise LatticeError(f"map of rank {psi.m} applied to lattice in Z^{lat.m}")
    return SaturatedLattice(lat.m, canonicalize(GeneratorSet(lat.m, tuple(psi.apply(v) for v in lat.basis)))[0])


def is_primitive(v: Sequence[int]) -> bool:
    return math.gcd(*v) == 1 if v else False


# --------------------------------------------------------------------------
# value types


@dataclass(frozen=True)
class SaturatedLattice:
    """A saturated sublattice of Z^m, stored by its canonical echelon basis.

    Direct construction requires the basis to already be canonical and
    saturated; use :meth:`from_rows` or :func:`saturate` otherwise.
    """

    m: int
    basis: tuple[IntVector, ...] = ()

    def __post_init__(self) -> None:
        basis = tuple(_as_vector(r, self.m) for r in self.basis)
        object.__setattr__(self, "basis", basis)
        canon = tuple(tuple(r) for r in _hnf(basis, self.m))
        if canon != basis:
            raise LatticeError(f"basis {basis} is not in canonical echelon form")
        if any(d != 1 for d in _smith_diagonal(basis)):
            raise NotSaturatedError(f"span of {basis} is not saturated")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], m: int) -> SaturatedLattice:
        """Canonicalize ``rows``; raises :class:`NotSaturatedError` if the span is not saturated."""
        basis, _ = canonicalize(GeneratorSet(m, tuple(tuple(r) for r in rows)))
        return cls(m, basis)

    @classmethod
    def zero(cls, m: int) -> SaturatedLattice:
        return cls(m, ())

    @classmethod
    def full(cls, m: int) -> SaturatedLattice:
        return cls(m, tuple(tuple(int(i == j) for j in range(m)) for i in range(m)))

    @property
    def rank(self) -> int:
        return len(self.basis)

    def coordinates(self, v: Sequence[int]) -> IntVector | None:
        """Integer coefficients of ``v`` in the canonical basis, or ``None`` if ``v`` is not in the lattice."""
        v = list(_as_vector(v, self.m))
        coeffs = []
        for row, pc in zip(self.basis, _pivot_cols(self.basis)):
            if any(v[j] for j in range(pc)):
                return None
            q, r = divmod(v[pc], row[pc])
            if r:
                return None
            coeffs.append(q)
            if q:
                v = [x - q * y for x, y in zip(v, row)]
        if any(v):
            return None
        return tuple(coeffs)

    def __contains__(self, v: object) -> bool:
        return self.coordinates(v) is not None  # type: ignore[arg-type]

    def __str__(self) -> str:
        if not self.basis:
            return "0"
        return "<" + ", ".join("(" + ",".join(map(str, r)) + ")" for r in self.basis) + ">"


@dataclass(frozen=True)
class UnimodularMap:
    """An element of GL(m, Z) acting by ``v -> v @ matrix.T``."""

    matrix: tuple[IntVector, ...]

    def __post_init__(self) -> None:
        mat = tuple(_as_vector(r) for r in self.matrix)
        object.__setattr__(self, "matrix", mat)
        if any(len(r) != len(mat) for r in mat):
            raise LatticeError("unimodular map must be a square matrix")
        if abs(_det(mat)) != 1:
            raise LatticeError(f"matrix {mat} has determinant {_det(mat)}, not +-1")

    @classmethod
    def identity(cls, m: int) -> UnimodularMap:
        return cls(tuple(tuple(int(i == j) for j in range(m)) for i in range(m)))

    @classmethod
    def elementary(cls, m: int, i: int, j: int, c: int) -> UnimodularMap:
        """Identity plus ``c`` at position (i, j), i != j."""
        if i == j:
            raise LatticeError("elementary transvection needs i != j")
        return cls(tuple(tuple(int(r == s) + (c if (r, s) == (i, j) else 0) for s in range(m)) for r in range(m)))

    @property
    def m(self) -> int:
        return len(self.matrix)

    @property
    def det(self) -> int:
        return _det(self.matrix)

    def is_identity(self) -> bool:
        return self == UnimodularMap.identity(self.m)

    def apply(self, v: Sequence[int]) -> IntVector:
        return tuple(sum(a * b for a, b in zip(row, v)) for row in self.matrix)

    def compose(self, other: UnimodularMap) -> UnimodularMap:
        """``self`` after ``other``: the matrix product ``self @ other``."""
        cols = list(zip(*other.matrix))
        return UnimodularMap(tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in cols) for row in self.matrix))

    def inverse(self) -> UnimodularMap:
        m = self.m
        ident = [[int(i == j) for j in range(m)] for i in range(m)]
        aug = [list(r) + e for r, e in zip(self.matrix, ident)]
        # Gauss-Jordan over Q; the result is integral because det = +-1
        for c in range(m):
            p = next(i for i in range(c, m) if aug[i][c] != 0)
            aug[c], aug[p] = aug[p], aug[c]
            piv = Fraction(aug[c][c])
            aug[c] = [Fraction(x) / piv for x in aug[c]]
            for i in range(m):
                if i != c and aug[i][c]:
                    f = aug[i][c]
                    aug[i] = [x - f * y for x, y in zip(aug[i], aug[c])]
        return UnimodularMap(tuple(tuple(int(x) for x in r[m:]) for r in aug))


def random_unimodular(m: int, rng: random.Random, max_steps: int = 10, coeff: int = 2) -> UnimodularMap:
    """Product of at most ``max_steps`` random elementary matrices (transvections,
    swaps and sign flips)."""
    psi = UnimodularMap.identity(m)
    if m == 0:
        return psi
    for _ in range(rng.randint(0, max_steps)):
        kind = rng.random()
        if m == 1 or kind < 0.15:
            i = rng.randrange(m)
            e = UnimodularMap(tuple(tuple((-1 if r == i else 1) * int(r == s) for s in range(m)) for r in range(m)))
        elif kind < 0.3:
            i, j = rng.sample(range(m), 2)
            perm = list(range(m))
            perm[i], perm[j] = j, i
            e = UnimodularMap(tuple(tuple(int(perm[r] == s) for s in range(m)) for r in range(m)))
        else:
            i, j = rng.sample(range(m), 2)
            c = rng.choice([x for x in range(-coeff, coeff + 1) if x])
            e = UnimodularMap.elementary(m, i, j, c)
        psi = e.compose(psi)
    return psi
