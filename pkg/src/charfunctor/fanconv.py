"""Complete rational fans -> characteristic data on the filtered ball.

Each cone ``sigma`` gives a stratum ``sigma^`` of dimension ``n - dim sigma``;
``sigma^`` lies in the closure of ``tau^`` iff ``tau`` is a face of
``sigma``, and ``lambda(sigma^)`` is the saturated span of the rays of
``sigma``. Only the stratification poset is built, never the geometric
subdivision of the ball.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from . import _qq
from .chardata import CharData
from .intlat import GeneratorSet, IntVector, is_primitive, saturate
from .reports import Report, Violation
from .stratposet import StratPoset

Cone = frozenset[int]


class FanError(ValueError):
    def __init__(self, message: str, report: Report | None = None) -> None:
        super().__init__(message)
        self.report = report


def cone_id(c: Iterable[int]) -> str:
    return "c[" + ",".join(str(i) for i in sorted(c)) + "]"


def _cone_faces(rays: Sequence[IntVector], idx: Cone) -> set[Cone]:
    """All faces of the cone generated by ``rays[i]``, i in ``idx``, as ray-index sets."""
    members = sorted(idx)
    vecs = [rays[i] for i in members]
    d = _qq.rank(vecs)
    if d == len(members):
        return {frozenset(c) for k in range(len(members) + 1) for c in itertools.combinations(members, k)}
    basis = [vecs[i] for i in _qq.independent_rows(vecs)]
    coords = [_qq.coordinates(basis, v) for v in vecs]
    facets: set[Cone] = set()
    for comb in itertools.combinations(range(len(members)), d - 1):
        sub = [coords[i] for i in comb]
        if _qq.rank(sub) != d - 1:
            continue
        h = _qq.nullspace(sub, d)[0]
        vals = [sum(a * b for a, b in zip(h, c)) for c in coords]
        if all(v >= 0 for v in vals) or all(v <= 0 for v in vals):
            facets.add(frozenset(members[i] for i, v in enumerate(vals) if v == 0))
    faces: set[Cone] = {frozenset(members)}
    frontier = set(facets)
    while frontier:
        faces |= frontier
        frontier = {a & b for a in faces for b in facets} - faces
    return faces


@dataclass(frozen=True)
class Fan:
    """Primitive rays in Z^n and cones as ray-index sets, closed under taking faces."""

    n: int
    rays: tuple[IntVector, ...]
    cones: frozenset[Cone]

    def __post_init__(self) -> None:
        rays = tuple(tuple(r) for r in self.rays)
        object.__setattr__(self, "rays", rays)
        object.__setattr__(self, "cones", frozenset(frozenset(c) for c in self.cones))
        for i, r in enumerate(rays):
            if len(r) != self.n:
                raise FanError(f"ray {i} has length {len(r)}, expected {self.n}")
        for c in self.cones:
            bad = [i for i in c if not 0 <= i < len(rays)]
            if bad:
                raise FanError(f"cone {sorted(c)} refers to unknown ray indices {bad}")

    @classmethod
    def from_max_cones(cls, n: int, rays: Sequence[Sequence[int]], max_cones: Iterable[Iterable[int]]) -> Fan:
        rays_t = tuple(tuple(r) for r in rays)
        tmp = cls(n, rays_t, frozenset(frozenset(c) for c in max_cones))
        cones: set[Cone] = {frozenset()}
        for c in tmp.cones:
            cones |= _cone_faces(rays_t, c)
        return cls(n, rays_t, frozenset(cones))

    def max_cones(self) -> list[Cone]:
        return sorted((c for c in self.cones if not any(c < o for o in self.cones)), key=lambda c: sorted(c))

    def dim(self, c: Cone) -> int:
        return _qq.rank([self.rays[i] for i in c])

    def is_simplicial(self) -> bool:
        return all(self.dim(c) == len(c) for c in self.cones)

    def face_poset(self) -> StratPoset:
        """Cones ordered by inclusion, graded by cone dimension."""
        cones = sorted(self.cones, key=lambda c: (len(c), sorted(c)))
        return StratPoset(
            {cone_id(c): self.dim(c) for c in cones},
            [(cone_id(a), cone_id(b)) for a in cones for b in cones if a < b],
        )


def _is_pointed(vecs: Sequence[IntVector], n: int) -> bool:
    if not vecs:
        return True
    k = len(vecs)
    ineqs = [[int(i == j) for j in range(k)] for i in range(k)]
    eqs = [[1] * k + [1]] + [[v[j] for v in vecs] + [0] for j in range(n)]
    return not _qq.feasible(ineqs, eqs)


def _bad_intersection(rays: Sequence[IntVector], s: Cone, t: Cone) -> bool:
    """For simplicial cones: does their intersection exceed the cone on common rays?"""
    a, c, b = sorted(s - t), sorted(s & t), sorted(t - s)
    cols = a + c + b
    vecs = [rays[i] for i in cols]
    if _qq.rank(vecs) == len(cols):
        return False
    n = len(vecs[0])
    system = [[v[j] for v in vecs] for j in range(n)]
    kernel = _qq.nullspace(system, len(cols))
    na = len(a)
    nb = len(b)
    pos = range(na)
    neg = range(na + len(c), na + len(c) + nb)
    ineqs = [[k[i] for k in kernel] for i in pos] + [[-k[i] for k in kernel] for i in neg]
    total = [sum((k[i] for i in pos), Fraction(0)) - sum((k[i] for i in neg), Fraction(0)) for k in kernel]
    if not ineqs:
        return False
    return _qq.feasible(ineqs, [total + [1]])


def validate_fan(f: Fan, require_complete: bool = True) -> Report:
    out: list[Violation] = []
    warnings: list[str] = []
    for i, r in enumerate(f.rays):
        if not is_primitive(r):
            out.append(Violation("ray-not-primitive", f"ray {i} = {r} is not primitive", (str(i),)))
    if len(set(f.rays)) != len(f.rays):
        out.append(Violation("duplicate-ray", "rays are not pairwise distinct"))
    if frozenset() not in f.cones:
        out.append(Violation("no-zero-cone", "the zero cone is missing"))
    for c in sorted(f.cones, key=sorted):
        missing = sorted((face for face in _cone_faces(f.rays, c) if face not in f.cones), key=sorted)
        if missing:
            out.append(Violation("not-face-closed", f"faces of cone {sorted(c)} missing: {[sorted(x) for x in missing]}",
                                 (cone_id(c),)))
        if not _is_pointed([f.rays[i] for i in c], f.n):
            out.append(Violation("not-pointed", f"cone {sorted(c)} contains a line", (cone_id(c),)))
    if out:
        return Report(tuple(out), tuple(warnings))
    simplicial = f.is_simplicial()
    maxc = f.max_cones()
    if simplicial:
        for s, t in itertools.combinations(maxc, 2):
            if _bad_intersection(f.rays, s, t):
                out.append(Violation("bad-intersection",
                                     f"cones {sorted(s)} and {sorted(t)} do not meet in a common face",
                                     (cone_id(s), cone_id(t))))
    else:
        warnings.append("non-simplicial fan: pairwise intersection check skipped")
    if require_complete:
        if not simplicial:
            warnings.append("non-simplicial fan: completeness assumed, not checked")
        else:
            for c in maxc:
                if len(c) != f.n:
                    out.append(Violation("maximal-cone-low-dim", f"maximal cone {sorted(c)} has dimension {len(c)} < {f.n}",
                                         (cone_id(c),), expected=f.n, found=len(c)))
            top = [c for c in maxc if len(c) == f.n]
            for w in sorted((c for c in f.cones if len(c) == f.n - 1), key=sorted):
                k = sum(1 for c in top if w <= c)
                if k != 2:
                    out.append(Violation("wall-condition", f"wall {sorted(w)} lies in {k} maximal cone(s), expected 2",
                                         (cone_id(w),), expected=2, found=k))
            if top:
                seen = {top[0]}
                stack = [top[0]]
                while stack:
                    c = stack.pop()
                    for o in top:
                        if o not in seen and len(c & o) == f.n - 1:
                            seen.add(o)
                            stack.append(o)
                if len(seen) != len(top):
                    out.append(Violation("dual-graph-disconnected", "the dual graph of maximal cones is disconnected"))
            elif f.n > 0:
                out.append(Violation("maximal-cone-low-dim", "fan has no full-dimensional cone"))
    return Report(tuple(out), tuple(warnings))


def fan_to_chardata(f: Fan) -> CharData:
    """Characteristic data of the ball filtered by spherical duals of the cones."""
    rep = validate_fan(f, require_complete=True)
    if not rep.ok:
        raise FanError("fan is not a valid complete fan:\n" + str(rep), rep)
    cones = sorted(f.cones, key=lambda c: (len(c), sorted(c)))
    dims = {cone_id(c): f.n - f.dim(c) for c in cones}
    relations = [(cone_id(s), cone_id(t)) for s in cones for t in cones if t < s]
    lattices, defects = {}, {}
    for c in cones:
        lat, idx = saturate(GeneratorSet(f.n, tuple(f.rays[i] for i in sorted(c))))
        lattices[cone_id(c)] = lat
        defects[cone_id(c)] = idx
    return CharData(
        m=f.n,
        poset=StratPoset(dims, relations),
        lattices=lattices,
        defects=defects,
        top_strata_he_asserted=True,
    )
