import random

import pytest

from builders import E1, E2, E3, P, TRIANGLE, V1, random_chardata
from charfunctor import PosetIso, StratPoset, cube, enumerate_isos, upper_set, validate_poset
from charfunctor.polyconv import build_face_poset
from charfunctor.stratposet import PosetError, UnknownStratumError, is_order_isomorphism


@pytest.fixture
def tri():
    return build_face_poset(TRIANGLE)


def test_triangle_poset_valid(tri):
    assert validate_poset(tri).ok
    assert (tri.l, tri.n, len(tri)) == (0, 2, 7)


def test_triangle_from_covers_only():
    p = StratPoset(
        {"v1": 0, "v2": 0, "v3": 0, "e1": 1, "e2": 1, "e3": 1, "P": 2},
        [("v2", "e1"), ("v3", "e1"), ("v1", "e2"), ("v3", "e2"), ("v1", "e3"), ("v2", "e3"),
         ("e1", "P"), ("e2", "P"), ("e3", "P")],
    )
    assert validate_poset(p).ok
    assert p.lt("v1", "P")
    assert p.relation() >= {("v1", "P"), ("v1", "v1")}


def test_single_point_valid():
    assert validate_poset(StratPoset({"x": 0})).ok


def test_dims_not_increasing():
    rep = validate_poset(StratPoset({"a": 2, "b": 1}, [("a", "b")]))
    assert "dims-not-increasing" in rep.codes()
    assert "dims not strictly increasing" in str(rep)
    assert rep.violations[0].where == ("a", "b")


def test_cycle_reported_not_raised():
    rep = validate_poset(StratPoset({"a": 1, "b": 1}, [("a", "b"), ("b", "a")]))
    assert "not-antisymmetric" in rep.codes()


def test_density_conditions():
    rep = validate_poset(StratPoset({"a": 0, "b": 2, "c": 1}, [("a", "b")]))
    assert "maximal-not-top" in rep.codes()
    assert "not-dense" in rep.codes()


def test_unknown_ids():
    with pytest.raises(UnknownStratumError):
        StratPoset({"a": 0}, [("a", "zz")])
    with pytest.raises(UnknownStratumError):
        upper_set(StratPoset({"a": 0}), "zz")
    with pytest.raises(PosetError):
        StratPoset([("a", 0), ("a", 1)])


def test_upper_set_examples(tri):
    seg = upper_set(tri, V1)
    assert seg.dims == {E2: 0, E3: 0, P: 1}
    assert seg.lt(E2, P) and seg.lt(E3, P)
    assert upper_set(tri, E1).dims == {P: 0}
    assert len(upper_set(tri, P)) == 0


def test_upper_set_properties():
    rng = random.Random(3)
    for _ in range(20):
        p = random_chardata(rng).poset
        for s in p.ids:
            u = upper_set(p, s)
            assert s not in u
            assert validate_poset(u).ok
            if u:
                assert u.max_dim == p.max_dim - p.dim(s) - 1


def test_triangle_automorphisms(tri):
    isos = list(enumerate_isos(tri, tri))
    assert len(isos) == 6
    maps = {tuple(sorted(f.mapping.items())) for f in isos}
    assert len(maps) == 6
    assert PosetIso.identity(tri) in isos
    for f in isos:
        for g in isos:
            assert f.compose(g) in isos
        assert is_order_isomorphism(tri, tri, f.mapping)


def test_enumeration_is_lexicographic(tri):
    isos = list(enumerate_isos(tri, tri))
    keys = [[f.mapping[s] for s in sorted(tri.ids)] for f in isos]
    assert keys == sorted(keys)
    assert isos == list(enumerate_isos(tri, tri))


def test_pruning_preserves_output():
    sq = build_face_poset(cube(2))
    c3 = build_face_poset(cube(3))
    assert len(list(enumerate_isos(sq, sq))) == 8
    assert list(enumerate_isos(c3, c3)) == list(enumerate_isos(c3, c3, prune=False))
    assert len(list(enumerate_isos(c3, c3))) == 48


def test_no_isos(tri):
    assert list(enumerate_isos(tri, build_face_poset(cube(2)))) == []


def test_point_identity():
    p = StratPoset({"x": 0})
    assert [f.mapping for f in enumerate_isos(p, p)] == [{"x": "x"}]


def test_relabel_and_opposite(tri):
    ren = {s: s.lower() + "'" for s in tri.ids}
    q = tri.relabel(ren)
    assert is_order_isomorphism(tri, q, ren)
    op = tri.opposite()
    assert op.dim(P) == 0 and op.lt(P, V1)
    assert op.opposite() == tri
    with pytest.raises(PosetError):
        tri.relabel({s: "same" for s in tri.ids})


def test_poset_iso_helpers(tri):
    f = next(iter(enumerate_isos(tri, tri)))
    assert f.compose(f.inverse()) == PosetIso.identity(tri)
    assert f(P) == P
