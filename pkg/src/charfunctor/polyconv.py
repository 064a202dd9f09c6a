"""Polytope face posets from vertex-facet incidence, and characteristic
functions on facets turned into characteristic data.

On a non-simple polytope, ``lambda(face)`` is taken to be the saturated span
of the labels of the facets containing the face. When that span has the
wrong rank the conversion fails loudly instead of inventing a lattice.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from .chardata import CharData, InvalidCharDataError, validate
from .intlat import GeneratorSet, IntVector, is_primitive, saturate
from .stratposet import StratPoset


class PolytopeError(ValueError):
    pass


@dataclass(frozen=True)
class PolytopeIncidence:
    n: int
    facet_count: int
    vertices: tuple[tuple[str, frozenset[int]], ...]
    labels: tuple[IntVector, ...] | None = None
    m: int | None = None

    def __post_init__(self) -> None:
        verts = tuple((str(v), frozenset(fs)) for v, fs in self.vertices)
        object.__setattr__(self, "vertices", verts)
        ids = [v for v, _ in verts]
        if len(set(ids)) != len(ids):
            raise PolytopeError("duplicate vertex ids")
        if not verts:
            raise PolytopeError("polytope has no vertices")
        for v, fs in verts:
            bad = [i for i in fs if not 0 <= i < self.facet_count]
            if bad:
                raise PolytopeError(f"vertex {v}: unknown facet indices {bad}")
            if len(fs) < self.n:
                raise PolytopeError(f"vertex {v} lies on {len(fs)} facets, fewer than n={self.n}")
        if self.labels is not None:
            labels = tuple(tuple(r) for r in self.labels)
            object.__setattr__(self, "labels", labels)
            if len(labels) != self.facet_count:
                raise PolytopeError(f"{len(labels)} labels for {self.facet_count} facets")
            m = self.m if self.m is not None else (len(labels[0]) if labels else self.n)
            object.__setattr__(self, "m", m)
            for i, r in enumerate(labels):
                if len(r) != m:
                    raise PolytopeError(f"label {i} has length {len(r)}, expected m={m}")

    @classmethod
    def build(cls, n: int, incidence: dict[str, Sequence[int]], labels: Sequence[Sequence[int]] | None = None,
              facet_count: int | None = None) -> PolytopeIncidence:
        fc = facet_count if facet_count is not None else 1 + max(i for fs in incidence.values() for i in fs)
        return cls(n, fc, tuple((v, frozenset(fs)) for v, fs in incidence.items()),
                   None if labels is None else tuple(tuple(r) for r in labels))

    def with_labels(self, labels: Sequence[Sequence[int]], m: int | None = None) -> PolytopeIncidence:
        return PolytopeIncidence(self.n, self.facet_count, self.vertices, tuple(tuple(r) for r in labels), m)


@dataclass(frozen=True)
class Face:
    id: str
    facets: frozenset[int]
    vertices: frozenset[str]
    dim: int


def face_id(facets: frozenset[int]) -> str:
    return "F[" + ",".join(str(i) for i in sorted(facets)) + "]"


def faces(p: PolytopeIncidence) -> list[Face]:
    """Faces as intersections of facet vertex sets plus the whole polytope, graded by longest chain."""
    all_v = frozenset(v for v, _ in p.vertices)
    inc = dict(p.vertices)
    facet_sets = [frozenset(v for v, fs in p.vertices if i in fs) for i in range(p.facet_count)]
    if any(not s for s in facet_sets):
        raise PolytopeError("a facet contains no vertex")
    vsets: set[frozenset[str]] = {all_v}
    frontier = {s for s in facet_sets}
    while frontier:
        vsets |= frontier
        frontier = {a & b for a in frontier for b in facet_sets if a & b} - vsets
    for v in all_v:
        if frozenset({v}) not in vsets:
            raise PolytopeError(f"vertex {v} is not cut out by its facets")
    ordered = sorted(vsets, key=len)
    height: dict[frozenset[str], int] = {}
    for s in ordered:
        below = [height[t] for t in height if t < s]
        height[s] = 1 + max(below) if below else 0
    if height[all_v] != p.n:
        raise PolytopeError(f"face lattice has height {height[all_v]}, expected n={p.n}")
    out = []
    for s in ordered:
        fs = frozenset.intersection(*(inc[v] for v in s)) if s != all_v else frozenset()
        out.append(Face(face_id(fs), fs, s, height[s]))
    ids = [f.id for f in out]
    if len(set(ids)) != len(ids):
        raise PolytopeError("two faces have the same facet set; incidence is not polytopal")
    for f in out:
        for g in out:
            if g.vertices < f.vertices and not any(g.vertices < h.vertices < f.vertices for h in out):
                if f.dim != g.dim + 1:
                    raise PolytopeError(f"face lattice is not graded at {g.id} < {f.id}")
    return sorted(out, key=lambda f: (f.dim, f.id))


def build_face_poset(p: PolytopeIncidence) -> StratPoset:
    fl = faces(p)
    return StratPoset(
        {f.id: f.dim for f in fl},
        [(g.id, f.id) for f in fl for g in fl if g.vertices < f.vertices],
    )


def is_simple(p: PolytopeIncidence) -> bool:
    return all(len(fs) == p.n for _, fs in p.vertices)


def charfunction_to_chardata(p: PolytopeIncidence, *, check: bool = True) -> CharData:
    """lambda(face) = saturation of the labels of the facets containing the face.

    With ``check`` the result is validated and :class:`InvalidCharDataError`
    is raised on failure; its report names each face whose rank differs from
    its codimension.
    """
    if p.labels is None:
        raise PolytopeError("polytope carries no facet labels")
    m = p.m
    assert m is not None
    if m < p.n:
        raise PolytopeError(f"labels live in Z^{m}, need m >= n = {p.n}")
    for i, r in enumerate(p.labels):
        if not is_primitive(r):
            raise PolytopeError(f"label {i} = {r} is not primitive")
    fl = faces(p)
    lattices, defects = {}, {}
    for f in fl:
        lat, idx = saturate(GeneratorSet(m, tuple(p.labels[i] for i in sorted(f.facets))))
        lattices[f.id] = lat
        defects[f.id] = idx
    d = CharData(
        m=m,
        poset=build_face_poset(p),
        lattices=lattices,
        defects=defects,
        top_strata_he_asserted=True,
    )
    if check:
        rep = validate(d)
        if not rep.ok:
            raise InvalidCharDataError(rep)
    return d


# --------------------------------------------------------------------------
# standard polytopes


def simplex_product(dims: Sequence[int]) -> PolytopeIncidence:
    """Product of simplices of the given dimensions; vertex ids like ``v0.2.1``.

    Facet ``offset(f) + j`` of the product is (facet j of factor f) x rest.
    """
    offsets = list(itertools.accumulate([0] + [a + 1 for a in dims]))
    verts = []
    for combo in itertools.product(*(range(a + 1) for a in dims)):
        fs = frozenset(offsets[f] + j for f, a in enumerate(dims) for j in range(a + 1) if j != combo[f])
        verts.append(("v" + ".".join(map(str, combo)), fs))
    return PolytopeIncidence(sum(dims), offsets[-1], tuple(verts))


def cube(n: int) -> PolytopeIncidence:
    return simplex_product([1] * n)


def square_pyramid() -> PolytopeIncidence:
    """Apex A over the base BCDE; facets 0 base, 1 front ABC, 2 back ADE, 3 right ACD, 4 left AEB."""
    return PolytopeIncidence.build(3, {
        "A": [1, 2, 3, 4],
        "B": [0, 1, 4],
        "C": [0, 1, 3],
        "D": [0, 2, 3],
        "E": [0, 2, 4],
    })
