"""The nine acceptance criteria, each timed against its limit.

Every test appends one PASS/FAIL line to the terminal summary and also
prints it, so ``pytest -s tests/test_acceptance.py`` shows them inline.
"""
import random
import time
from contextlib import contextmanager

import oracles
from acceptance_log import LINES
from builders import V1, cp1xcp1_fan, cp2_fan, pyramid, random_chardata, random_generators, random_transform, sphere_circle, triangle, triangle_data
from charfunctor import (
    GeneratorSet,
    SaturatedLattice,
    Status,
    canonicalize,
    charfunction_to_chardata,
    cube,
    decide,
    enumerate_isos,
    fan_to_chardata,
    fingerprint,
    inspect,
    link_data,
    quotient_order,
    saturate,
    smith_invariants,
    square_pyramid,
    validate,
    verify_witness,
)
from charfunctor.polyconv import build_face_poset

Z2 = SaturatedLattice.full(2)


@contextmanager
def criterion(num, title, limit):
    t0 = time.perf_counter()
    status, note = "PASS", ""
    try:
        yield
        elapsed = time.perf_counter() - t0
        assert elapsed < limit, f"took {elapsed:.2f}s, limit {limit}s"
    except Exception as e:
        status, note = "FAIL", " :: " + (str(e).strip().splitlines() or [type(e).__name__])[0]
        raise
    finally:
        elapsed = time.perf_counter() - t0
        line = f"[{status}] criterion {num}: {title} ({elapsed:.2f}s, limit {limit}s){note}"
        LINES.append(line)
        print(line)


def span(*rows):
    return SaturatedLattice.from_rows(list(rows), len(rows[0]))


def test_1_triangle_example():
    with criterion(1, "labelled triangle, k in -3..3", 1.0):
        failures = []
        for k in range(-3, 4):
            rep = validate(charfunction_to_chardata(triangle(k), check=False))
            if not rep.ok:
                failures.append(f"k={k}: {rep.violations[0].message}")
                continue
            lk = link_data(triangle_data(k), V1)
            ends = {lk.lattices[s] for s in lk.poset.ids if lk.poset.dim(s) == 0}
            if lk.m != 2 or len(lk.poset) != 3 or ends != {span((1, 0)), span((1, k))}:
                failures.append(f"k={k}: link endpoints {sorted(map(str, ends))}")
            if k and quotient_order(GeneratorSet(2, ((1, 0), (1, k))), Z2) != abs(k):
                failures.append(f"k={k}: quotient order")
        assert not failures, "; ".join(failures)


# isotropy table of the pyramid, edges named by their endpoint vertices
PYRAMID_TABLE = {
    ("B", "C"): [(0, 0, 1), (0, 1, 0)],
    ("C", "D"): [(0, 0, 1), (1, "k", "a")],
    ("D", "E"): [(0, 0, 1), (0, 1, "b")],
    ("E", "B"): [(0, 0, 1), (1, 0, 0)],
    ("A", "B"): [(0, 1, 0), (1, 0, 0)],
    ("A", "C"): [(0, 1, 0), (1, "k", "a")],
    ("A", "D"): [(0, 1, "b"), (1, "k", "a")],
    ("A", "E"): [(0, 1, "b"), (1, 0, 0)],
}


def edge_face_id(inc, u, v):
    return "F[" + ",".join(map(str, sorted(inc[u] & inc[v]))) + "]"


def test_2_pyramid_table():
    a, b, k = 1, 0, 0
    with criterion(2, "pyramid isotropy table and inspect, (a,b,k)=(1,0,0)", 1.0):
        d = charfunction_to_chardata(pyramid(a, b, k))
        inc = dict(square_pyramid().vertices)
        val = {"a": a, "b": b, "k": k}
        for (u, v), gens in PYRAMID_TABLE.items():
            rows = [tuple(val.get(x, x) for x in g) for g in gens]
            sid = edge_face_id(inc, u, v)
            assert d.poset.dim(sid) == 1, sid
            assert d.lattices[sid] == saturate(GeneratorSet(3, tuple(rows)))[0], f"edge {u}{v}"
        apex = "F[" + ",".join(map(str, sorted(inc["A"]))) + "]"
        assert d.lattices[apex] == SaturatedLattice.full(3)
        r = inspect(d)
        assert (r.l, r.n, r.m, r.total_dim) == (0, 3, 3, 6)
        assert r.skeleton_dims == (0, 2, 4, 6)
        assert len(r.fixed_components) == 5


def test_3_degenerate_pyramid():
    with criterion(3, "degenerate pyramid fails at the apex", 1.0):
        rep = validate(charfunction_to_chardata(pyramid(0, 0, 0), check=False))
        assert not rep.ok
        assert [(v.code, v.where, v.found, v.expected) for v in rep.violations] == [
            ("rank-not-codim", ("F[1,2,3,4]",), 2, 3)]


def test_4_two_stratum_example():
    with criterion(4, "two-stratum data over the disc, m=1", 1.0):
        d = sphere_circle()
        assert validate(d).ok
        r = inspect(d)
        assert (r.l, r.n, r.total_dim, r.skeleton_dims, len(r.fixed_components)) == (1, 1, 3, (1, 3), 1)


def test_5_transform_completeness():
    with criterion(5, "50 random transforms decided ISOMORPHIC with verified witness", 10.0):
        rng = random.Random(50)
        for i in range(50):
            d = random_chardata(rng, (2, 3, 4)[i % 3])
            assert oracles.rank([d.lattices[s].basis[0] for s in d.facet_strata()]) == d.m
            d2, _, _ = random_transform(d, rng)
            v = decide(d, d2, "weak")
            assert v.status is Status.ISOMORPHIC, f"sample {i}: {v.detail}"
            assert verify_witness(d, d2, v.witness), f"sample {i}: witness rejected"


def test_6_negative_decision():
    with criterion(6, "triangle k=2 vs k=3 NOT_ISOMORPHIC, pruned and unpruned agree", 1.0):
        a, b = triangle_data(2), triangle_data(3)
        assert fingerprint(a) != fingerprint(b)
        pruned, full = decide(a, b), decide(a, b, prune=False)
        assert pruned.status is Status.NOT_ISOMORPHIC
        assert full.status is Status.NOT_ISOMORPHIC
        assert pruned.detail == "fingerprint mismatch at dim-0 strata"


def anti_isomorphic(d, f):
    p = d.poset
    return p.opposite({s: f.n - p.dim(s) for s in p.ids}) == f.face_poset()


def test_7_fan_pipeline():
    with criterion(7, "fan pipeline on CP2 and CP1xCP1", 1.0):
        for f in (cp2_fan(), cp1xcp1_fan()):
            d = fan_to_chardata(f)
            assert validate(d).ok
            assert anti_isomorphic(d, f)
        sq = build_face_poset(cube(2))
        assert next(iter(enumerate_isos(fan_to_chardata(cp1xcp1_fan()).poset, sq)), None) is not None


def test_8_kernel_oracles():
    with criterion(8, "canonicalize/saturate/smith vs brute-force oracles on 500 sets", 30.0):
        rng = random.Random(8)
        for i in range(500):
            g = random_generators(rng)
            rows = list(g.rows)
            basis, r = canonicalize(g)
            assert r == len(basis) == oracles.rank(rows), i
            assert oracles.is_canonical_echelon(basis), i
            # generators lie in span(basis) by enumeration and by exact solve; equal covolume closes it
            assert all(oracles.in_bounded_span(basis, v, 10) for v in rows), i
            assert all(oracles.in_integer_span(list(basis), v) for v in rows), i
            assert all(oracles.in_integer_span(list(basis), p) for p in oracles.bounded_combinations(rows[:3], 1)), i
            assert oracles.minors_gcd(rows, r) == oracles.minors_gcd(list(basis), r), i
            lat, idx = saturate(g)
            assert lat.rank == r and all(oracles.in_rational_span(rows, v) for v in lat.basis), i
            assert oracles.minors_gcd(list(lat.basis), r) == 1, i
            assert idx == (oracles.minors_gcd(rows, r) if r else 1), i
            probe = tuple(rng.randint(-5, 5) for _ in range(g.m))
            assert (lat.coordinates(probe) is not None) == oracles.in_rational_span(rows, probe), i
            assert smith_invariants(g) == oracles.smith(rows), i


def test_9_structural_properties():
    with criterion(9, "links, fingerprints, skeleta and transforms on 100 random data", 30.0):
        rng = random.Random(9)
        for i in range(100):
            d = random_chardata(rng)
            for s in d.poset.ids:
                lk = link_data(d, s)
                assert not lk.poset or validate(lk).ok, f"sample {i}: link at {s}"
            d2, _, _ = random_transform(d, rng)
            assert validate(d2).ok, f"sample {i}: transform"
            assert fingerprint(d) == fingerprint(d2), f"sample {i}: fingerprint"
            r = inspect(d)
            assert r.skeleton_dims == tuple(d.l + 2 * j + (d.m - d.n) for j in range(d.n + 1)), f"sample {i}"
