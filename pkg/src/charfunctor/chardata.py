"""Characteristic data (Q, lambda, c) on a finite stratified poset.

``lambda`` assigns to every stratum a saturated sublattice of Z^m (the
weight lattice of its isotropy subtorus). Valid data has
``rank lambda(S) == codim S``, is order-reversing, vanishes on top strata,
and satisfies ``m >= n``.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Mapping

from .intlat import (
    GeneratorSet,
    IntVector,
    LatticeError,
    SaturatedLattice,
    UnimodularMap,
    apply_unimodular,
    contains,
    saturate,
)
from .reports import Report, Violation
from .stratposet import StratPoset, UnknownStratumError, upper_set, validate_poset


class CharDataError(ValueError):
    pass


class InvalidCharDataError(CharDataError):
    """Raised by operations that require valid data; carries the failing report."""

    def __init__(self, report: Report) -> None:
        super().__init__(str(report))
        self.report = report


@dataclass(frozen=True)
class ChernClass:
    """Either the zero class or user-supplied coordinates (b x m) in a declared basis."""

    tag: str | None = None
    coords: tuple[IntVector, ...] | None = None

    def __post_init__(self) -> None:
        if self.coords is not None:
            object.__setattr__(self, "coords", tuple(tuple(r) for r in self.coords))

    @property
    def is_opaque(self) -> bool:
        return self.coords is not None

    @property
    def is_zero(self) -> bool:
        return self.coords is None or all(x == 0 for r in self.coords for x in r)

    def __str__(self) -> str:
        if self.coords is None:
            return "zero"
        return f"opaque({self.tag or ''}: {[list(r) for r in self.coords]})"


ZERO_CHERN = ChernClass()


@dataclass(frozen=True)
class CharData:
    m: int
    poset: StratPoset
    lattices: Mapping[str, SaturatedLattice]
    chern: ChernClass = ZERO_CHERN
    defects: Mapping[str, int] = field(default_factory=dict)
    top_strata_he_asserted: bool = False
    skeleton: bool = False

    def __post_init__(self) -> None:
        lat = dict(self.lattices)
        object.__setattr__(self, "lattices", lat)
        object.__setattr__(self, "defects", {s: d for s, d in self.defects.items() if d != 1})
        if set(lat) != set(self.poset.dims):
            missing = sorted(set(self.poset.dims) - set(lat))
            extra = sorted(set(lat) - set(self.poset.dims))
            raise CharDataError(f"lattice assignment does not match strata (missing {missing}, extra {extra})")
        for s, L in lat.items():
            if L.m != self.m:
                raise CharDataError(f"stratum {s}: lattice lives in Z^{L.m}, expected Z^{self.m}")
        for s, d in self.defects.items():
            if s not in lat:
                raise CharDataError(f"defect recorded for unknown stratum {s!r}")
            if d < 1:
                raise CharDataError(f"stratum {s}: defect index must be positive")
        if self.chern.coords is not None and any(len(r) != self.m for r in self.chern.coords):
            raise CharDataError(f"Chern class coordinates must have {self.m} columns")

    def lattice(self, sid: str) -> SaturatedLattice:
        try:
            return self.lattices[sid]
        except KeyError:
            raise UnknownStratumError(sid) from None

    def defect(self, sid: str) -> int:
        return self.defects.get(sid, 1)

    @property
    def l(self) -> int:  # noqa: E743
        return self.poset.l

    @property
    def n(self) -> int:
        return self.poset.n

    def facet_strata(self) -> list[str]:
        """Codimension-one strata, sorted by (dim, id)."""
        return [s for s in self.poset.ids if self.poset.codim(s) == 1]


def validate(d: CharData) -> Report:
    """All poset conditions plus rank = codim, monotonicity, m >= n and zero top lattices."""
    poset_report = validate_poset(d.poset)
    out = list(poset_report.violations)
    p = d.poset
    if p.n > d.m:
        out.append(Violation("m-less-than-n", f"ambient rank m={d.m} is smaller than the length n={p.n}",
                             expected=f">= {p.n}", found=d.m))
    for s in p.ids:
        r, c = d.lattices[s].rank, p.codim(s)
        if r != c:
            out.append(Violation("rank-not-codim", f"stratum {s}: rank {r} != codim {c}", (s,), expected=c, found=r))
    for a in p.ids:
        for b in p.upper_covers(a):
            if not contains(d.lattices[a], d.lattices[b]):
                out.append(Violation(
                    "not-monotone", f"{a} < {b} but lambda({b}) = {d.lattices[b]} is not inside lambda({a}) = {d.lattices[a]}",
                    (a, b)))
    warnings = []
    if d.skeleton:
        warnings.append("skeleton restriction: rank = codim is not expected to hold")
    return Report(tuple(out), tuple(warnings))


def require_valid(d: CharData) -> None:
    rep = validate(d)
    if not rep.ok:
        raise InvalidCharDataError(rep)


def restrict_to_skeleton(d: CharData, i: int) -> CharData:
    """Data on the strata of dimension <= l + i, flagged as a skeleton when i < n."""
    if not 0 <= i <= d.n:
        raise CharDataError(f"skeleton index {i} outside 0..{d.n}")
    if i == d.n:
        return d
    keep = [s for s in d.poset.ids if d.poset.dim(s) <= d.l + i]
    return CharData(
        m=d.m,
        poset=d.poset.restrict(keep),
        lattices={s: d.lattices[s] for s in keep},
        chern=d.chern,
        defects={s: v for s, v in d.defects.items() if s in keep},
        top_strata_he_asserted=d.top_strata_he_asserted,
        skeleton=True,
    )


def empty_data() -> CharData:
    return CharData(0, StratPoset({}), {})


def link_data(d: CharData, s: str) -> CharData:
    """Characteristic data on the link of stratum ``s``.

    The poset is the upper set of ``s``; the ambient lattice is ``lambda(s)``
    with its canonical basis, in which each ``lambda(t)`` for ``t > s`` is
    re-expressed. A maximal ``s`` has empty link.
    """
    p = d.poset
    ups = p.above(s)
    if not ups:
        return empty_data()
    ambient = d.lattices[s]
    r = ambient.rank
    lattices = {}
    for t in ups:
        coords = []
        for v in d.lattices[t].basis:
            c = ambient.coordinates(v)
            if c is None:
                raise CharDataError(f"lambda({t}) is not contained in lambda({s}); data is not monotone")
            coords.append(c)
        lattices[t] = SaturatedLattice.from_rows(coords, r)
    return CharData(m=r, poset=upper_set(p, s), lattices=lattices)


@dataclass(frozen=True)
class InspectReport:
    l: int  # noqa: E741
    n: int
    m: int
    total_dim: int
    skeleton_dims: tuple[int, ...]
    strata_per_level: tuple[int, ...]
    fixed_components: tuple[str, ...]
    free_part_dim: int
    defects: Mapping[str, int]
    top_strata_he_asserted: bool

    def to_json(self) -> dict:
        return {
            "l": self.l,
            "n": self.n,
            "m": self.m,
            "total_dim": self.total_dim,
            "skeleton_dims": list(self.skeleton_dims),
            "strata_per_level": list(self.strata_per_level),
            "fixed_components": list(self.fixed_components),
            "free_part_dim": self.free_part_dim,
            "defects": dict(sorted(self.defects.items())),
            "top_strata_he_asserted": self.top_strata_he_asserted,
        }


def inspect(d: CharData) -> InspectReport:
    """Dimension bookkeeping of the canonical model over the data."""
    require_valid(d)
    l, n, m = d.l, d.n, d.m
    p = d.poset
    return InspectReport(
        l=l,
        n=n,
        m=m,
        total_dim=l + m + n,
        skeleton_dims=tuple(l + 2 * i + (m - n) for i in range(n + 1)),
        strata_per_level=tuple(sum(1 for s in p.ids if p.dim(s) == l + i) for i in range(n + 1)),
        fixed_components=tuple(s for s in p.ids if d.lattices[s].rank == m),
        free_part_dim=l + m + n,
        defects=dict(d.defects),
        top_strata_he_asserted=d.top_strata_he_asserted,
    )


def transform(d: CharData, psi: UnimodularMap, relabel: Mapping[str, str] | None = None) -> CharData:
    """Push the data forward along ``psi`` and rename strata by ``relabel``.

    The Chern class is carried unchanged: the zero class is invariant and
    opaque coordinates need a user-supplied pullback, which this function
    does not attempt.
    """
    if psi.m != d.m:
        raise LatticeError(f"map of rank {psi.m} applied to data with m={d.m}")
    ren = dict(relabel) if relabel is not None else {s: s for s in d.poset.dims}
    poset = d.poset.relabel(ren)
    return replace(
        d,
        poset=poset,
        lattices={ren[s]: apply_unimodular(psi, L) for s, L in d.lattices.items()},
        defects={ren[s]: v for s, v in d.defects.items()},
    )


def from_generators(
    m: int,
    poset: StratPoset,
    generators: Mapping[str, GeneratorSet | list],
    **kwargs,
) -> CharData:
    """Build data from raw generating sets, saturating each one and recording defects."""
    lattices, defects = {}, {}
    for s, g in generators.items():
        if not isinstance(g, GeneratorSet):
            g = GeneratorSet(m, tuple(tuple(r) for r in g))
        lattices[s], defects[s] = saturate(g)
    return CharData(m=m, poset=poset, lattices=lattices, defects=defects, **kwargs)
