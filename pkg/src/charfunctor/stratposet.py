"""Finite stratified posets: the face category of a compact stratified space.

An element is a stratum with an integer dimension; ``a <= b`` means that
``a`` lies in the closure of ``b``. Relations may be given as covering pairs
or any comparable pairs; the transitive closure is computed on construction.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Callable, Hashable, Iterable, Iterator, Mapping

from .reports import Report, Violation


class PosetError(ValueError):
    pass


class UnknownStratumError(PosetError, KeyError):
    def __str__(self) -> str:
        return f"unknown stratum {self.args[0]!r}"


@dataclass(frozen=True, order=True)
class Stratum:
    id: str
    dim: int


class StratPoset:
    """Immutable finite poset of strata.

    ``relations`` are pairs ``(a, b)`` meaning ``a`` is in the closure of ``b``.
    A relation set with cycles is accepted here so that :func:`validate_poset`
    can report it.
    """

    __slots__ = ("_dims", "_above", "_below", "_upc", "_downc", "_hash")

    def __init__(self, strata: Mapping[str, int] | Iterable[Stratum | tuple[str, int]],
                 relations: Iterable[tuple[str, str]] = ()) -> None:
        dims: dict[str, int] = {}
        items = strata.items() if isinstance(strata, Mapping) else strata
        for item in items:
            sid, dim = (item.id, item.dim) if isinstance(item, Stratum) else item
            if not isinstance(sid, str):
                raise PosetError(f"stratum id must be a string, got {sid!r}")
            if isinstance(dim, bool) or not isinstance(dim, int) or dim < 0:
                raise PosetError(f"stratum {sid!r}: dimension must be a non-negative integer")
            if sid in dims:
                raise PosetError(f"duplicate stratum id {sid!r}")
            dims[sid] = dim
        succ: dict[str, set[str]] = {s: set() for s in dims}
        for a, b in relations:
            for x in (a, b):
                if x not in dims:
                    raise UnknownStratumError(x)
            if a != b:
                succ[a].add(b)
        above: dict[str, frozenset[str]] = {}
        for s in dims:
            seen: set[str] = set()
            stack = list(succ[s])
            while stack:
                x = stack.pop()
                if x not in seen:
                    seen.add(x)
                    stack.extend(succ[x])
            seen.discard(s)
            above[s] = frozenset(seen)
        below: dict[str, set[str]] = {s: set() for s in dims}
        for s, ups in above.items():
            for t in ups:
                below[t].add(s)
        self._dims = dims
        self._above = above
        self._below = {s: frozenset(v) for s, v in below.items()}
        self._upc = {s: tuple(sorted(t for t in ups if not any(t in above[u] for u in ups)))
                     for s, ups in above.items()}
        downc: dict[str, list[str]] = {s: [] for s in dims}
        for s, ups in self._upc.items():
            for t in ups:
                downc[t].append(s)
        self._downc = {s: tuple(sorted(v)) for s, v in downc.items()}
        self._hash: int | None = None

    # -- basic queries -------------------------------------------------

    def __len__(self) -> int:
        return len(self._dims)

    def __contains__(self, sid: object) -> bool:
        return sid in self._dims

    def __iter__(self) -> Iterator[str]:
        return iter(self.ids)

    @property
    def ids(self) -> list[str]:
        """Stratum ids sorted by (dim, id)."""
        return sorted(self._dims, key=lambda s: (self._dims[s], s))

    @property
    def dims(self) -> dict[str, int]:
        return dict(self._dims)

    def strata(self) -> list[Stratum]:
        return [Stratum(s, self._dims[s]) for s in self.ids]

    def dim(self, sid: str) -> int:
        try:
            return self._dims[sid]
        except KeyError:
            raise UnknownStratumError(sid) from None

    def _check(self, sid: str) -> None:
        if sid not in self._dims:
            raise UnknownStratumError(sid)

    def above(self, sid: str) -> frozenset[str]:
        """Strata strictly above ``sid``."""
        self._check(sid)
        return self._above[sid]

    def below(self, sid: str) -> frozenset[str]:
        self._check(sid)
        return self._below[sid]

    def lt(self, a: str, b: str) -> bool:
        return b in self._above[a]

    def le(self, a: str, b: str) -> bool:
        return a == b or b in self._above[a]

    def upper_covers(self, sid: str) -> list[str]:
        self._check(sid)
        return list(self._upc[sid])

    def lower_covers(self, sid: str) -> list[str]:
        self._check(sid)
        return list(self._downc[sid])

    def covers(self) -> list[tuple[str, str]]:
        return [(a, b) for a in self.ids for b in self.upper_covers(a)]

    def relation(self) -> frozenset[tuple[str, str]]:
        """Full reflexive-transitive closure as a set of pairs."""
        return frozenset({(s, s) for s in self._dims} | {(a, b) for a, ups in self._above.items() for b in ups})

    @property
    def max_dim(self) -> int:
        return max(self._dims.values(), default=0)

    @property
    def min_dim(self) -> int:
        return min(self._dims.values(), default=0)

    @property
    def l(self) -> int:  # noqa: E743
        """Lowest stratum dimension."""
        return self.min_dim

    @property
    def n(self) -> int:
        """Length: top dimension minus lowest dimension."""
        return self.max_dim - self.min_dim

    def codim(self, sid: str) -> int:
        return self.max_dim - self.dim(sid)

    def maximal(self) -> list[str]:
        return [s for s in self.ids if not self._above[s]]

    def top_strata(self) -> list[str]:
        top = self.max_dim
        return [s for s in self.ids if self._dims[s] == top]

    # -- derived posets -------------------------------------------------

    def restrict(self, keep: Iterable[str], shift: int = 0) -> StratPoset:
        keep = set(keep)
        for s in keep:
            self._check(s)
        return StratPoset(
            {s: self._dims[s] - shift for s in keep},
            [(a, b) for a in keep for b in self._above[a] if b in keep],
        )

    def relabel(self, mapping: Mapping[str, str]) -> StratPoset:
        if sorted(mapping) != sorted(self._dims) or len(set(mapping.values())) != len(mapping):
            raise PosetError("relabeling must be a bijection on the stratum ids")
        return StratPoset(
            {mapping[s]: d for s, d in self._dims.items()},
            [(mapping[a], mapping[b]) for a, ups in self._above.items() for b in ups],
        )

    def opposite(self, dims: Mapping[str, int] | None = None) -> StratPoset:
        """Order-reversed poset; ``dims`` replaces the dimensions (defaults to max_dim - dim)."""
        new_dims = dict(dims) if dims is not None else {s: self.max_dim - d for s, d in self._dims.items()}
        return StratPoset(new_dims, [(b, a) for a, ups in self._above.items() for b in ups])

    def profile(self, sid: str) -> tuple:
        """Isomorphism-invariant local profile used to prune searches."""
        ups, downs = self._above[sid], self._below[sid]
        return (
            self._dims[sid],
            len(self.upper_covers(sid)),
            len(self.lower_covers(sid)),
            tuple(sorted(Counter(self._dims[t] for t in ups).items())),
            tuple(sorted(Counter(self._dims[t] for t in downs).items())),
        )

    # -- comparison -----------------------------------------------------

    def _key(self) -> tuple:
        return (tuple(sorted(self._dims.items())), tuple(sorted((a, tuple(sorted(b))) for a, b in self._above.items())))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, StratPoset):
            return NotImplemented
        return self._dims == other._dims and self._above == other._above

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._key())
        return self._hash

    def __repr__(self) -> str:
        return f"StratPoset({len(self)} strata, dims {self.min_dim}..{self.max_dim})"


@dataclass(frozen=True, order=True)
class PosetIso:
    """A bijection between stratum ids, stored as sorted ``(source, target)`` pairs."""

    pairs: tuple[tuple[str, str], ...]

    @classmethod
    def from_mapping(cls, mapping: Mapping[str, str]) -> PosetIso:
        return cls(tuple(sorted(mapping.items())))

    @classmethod
    def identity(cls, p: StratPoset) -> PosetIso:
        return cls(tuple((s, s) for s in sorted(p.ids)))

    @property
    def mapping(self) -> dict[str, str]:
        return dict(self.pairs)

    def __call__(self, sid: str) -> str:
        return self.mapping[sid]

    def inverse(self) -> PosetIso:
        return PosetIso(tuple(sorted((b, a) for a, b in self.pairs)))

    def compose(self, first: PosetIso) -> PosetIso:
        """``self`` after ``first``."""
        mine = self.mapping
        return PosetIso(tuple(sorted((a, mine[b]) for a, b in first.pairs)))


def is_order_isomorphism(p: StratPoset, q: StratPoset, mapping: Mapping[str, str]) -> bool:
    """Check a candidate bijection independently of how it was found."""
    if sorted(mapping) != sorted(p.ids) or sorted(mapping.values()) != sorted(q.ids):
        return False
    for a in p.ids:
        if p.dim(a) != q.dim(mapping[a]):
            return False
        for b in p.ids:
            if p.lt(a, b) != q.lt(mapping[a], mapping[b]):
                return False
    return True


def validate_poset(p: StratPoset) -> Report:
    """Check the partial-order, dimension and density conditions; never raises."""
    out: list[Violation] = []
    ids = p.ids
    for a in ids:
        if a in p._above[a]:
            out.append(Violation("not-antisymmetric", f"stratum {a} lies strictly above itself", (a,)))
    for a in ids:
        for b in sorted(p._above[a]):
            if a in p._above[b] and a < b:
                out.append(Violation("not-antisymmetric", f"{a} <= {b} and {b} <= {a}", (a, b)))
            if p.dim(a) >= p.dim(b):
                out.append(Violation(
                    "dims-not-increasing", f"dims not strictly increasing: {a} (dim {p.dim(a)}) < {b} (dim {p.dim(b)})",
                    (a, b), expected=f"< {p.dim(b)}", found=p.dim(a)))
    top = p.max_dim
    for s in p.maximal():
        if p.dim(s) != top:
            out.append(Violation(
                "maximal-not-top", f"maximal stratum {s} has dim {p.dim(s)} below the top dimension {top}",
                (s,), expected=top, found=p.dim(s)))
    for s in p.top_strata():
        if p._above[s]:
            out.append(Violation("top-not-maximal", f"top-dimensional stratum {s} is not maximal", (s,)))
    tops = set(p.top_strata())
    for s in ids:
        if s not in tops and not (p._above[s] & tops):
            out.append(Violation("not-dense", f"stratum {s} is not in the closure of any top stratum", (s,)))
    return Report(tuple(out))


def upper_set(p: StratPoset, s: str) -> StratPoset:
    """Strata strictly above ``s``, with dimensions lowered by ``dim(s) + 1``."""
    ups = p.above(s)
    return p.restrict(ups, shift=p.dim(s) + 1)


def enumerate_isos(
    p: StratPoset,
    q: StratPoset,
    *,
    key_p: Callable[[str], Hashable] | None = None,
    key_q: Callable[[str], Hashable] | None = None,
    prune: bool = True,
) -> Iterator[PosetIso]:
    """Yield every dimension-preserving order isomorphism ``p -> q`` exactly once.

    Sources are assigned in sorted-id order and targets tried in sorted-id
    order, so the output is lexicographic in the sorted ``(source, target)``
    pairs. With ``prune`` the candidate lists are cut by local profiles and
    optional caller keys (which must be isomorphism-invariant); forward
    checking of the relation against already-assigned strata always runs.
    """
    if len(p) != len(q) or sorted(p.dims.values()) != sorted(q.dims.values()):
        return
    order = sorted(p.ids)
    targets = sorted(q.ids)

    def sig_p(s: str) -> tuple:
        base = p.profile(s) if prune else (p.dim(s),)
        return base + ((key_p(s),) if prune and key_p else ())

    def sig_q(t: str) -> tuple:
        base = q.profile(t) if prune else (q.dim(t),)
        return base + ((key_q(t),) if prune and key_q else ())

    sq = {t: sig_q(t) for t in targets}
    domains = {s: [t for t in targets if sq[t] == sp] for s in order for sp in [sig_p(s)]}
    if any(not d for d in domains.values()):
        return

    def search(k: int, doms: dict[str, list[str]], assigned: dict[str, str]) -> Iterator[PosetIso]:
        if k == len(order):
            yield PosetIso.from_mapping(assigned)
            return
        x = order[k]
        rest = order[k + 1:]
        for y in doms[x]:
            new = {}
            for z in rest:
                zl, zg = p.lt(z, x), p.lt(x, z)
                cand = [w for w in doms[z] if w != y and q.lt(w, y) == zl and q.lt(y, w) == zg]
                if not cand:
                    break
                new[z] = cand
            else:
                assigned[x] = y
                yield from search(k + 1, new, assigned)
                del assigned[x]

    yield from search(0, domains, {})
