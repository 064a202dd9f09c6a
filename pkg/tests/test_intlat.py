import random

import pytest
from hypothesis import given, strategies as st

import oracles
from charfunctor import (
    INFINITE,
    ContainmentError,
    GeneratorSet,
    LatticeError,
    NotSaturatedError,
    SaturatedLattice,
    UnimodularMap,
    apply_unimodular,
    canonicalize,
    contains,
    quotient_order,
    random_unimodular,
    saturate,
    smith_invariants,
)


def G(*rows, m=None):
    return GeneratorSet.of(list(rows), m)


def span(*rows, m=None):
    return SaturatedLattice.from_rows(list(rows), m if m is not None else len(rows[0]))


@st.composite
def generator_sets(draw, max_m=4, lo=-5, hi=5):
    m = draw(st.integers(1, max_m))
    k = draw(st.integers(0, m + 1))
    rows = draw(st.lists(st.tuples(*[st.integers(lo, hi)] * m), min_size=k, max_size=k))
    return GeneratorSet(m, tuple(rows))


@st.composite
def unimodular(draw, m):
    seed = draw(st.integers(0, 2**32))
    return random_unimodular(m, random.Random(seed), max_steps=10)


# -- examples ----------------------------------------------------------


def test_canonicalize_examples():
    assert canonicalize(G((1, 0), (1, 2))) == (((1, 0), (0, 2)), 2)
    assert canonicalize(GeneratorSet(3, ())) == ((), 0)
    assert canonicalize(G((2, 4))) == (((2, 4),), 1)


def test_canonicalize_example_against_box_enumeration():
    basis, _ = canonicalize(G((1, 0), (1, 2)))
    box = lambda pts: {p for p in pts if all(abs(x) <= 3 for x in p)}  # noqa: E731
    a = box(oracles.bounded_combinations([(1, 0), (1, 2)], 4))
    b = box(oracles.bounded_combinations(list(basis), 4))
    assert a == b


def test_saturate_examples():
    assert saturate(G((1, 0), (1, 2))) == (SaturatedLattice.full(2), 2)
    for k in range(-4, 5):
        lat, idx = saturate(G((1, k)))
        assert lat == span((1, k)) and idx == 1
    assert saturate(G((0, 1, 0), (1, 0, 1), (1, 0, 0))) == (SaturatedLattice.full(3), 1)
    assert saturate(GeneratorSet(2, ()))[0] == SaturatedLattice.zero(2)


def test_smith_examples():
    assert smith_invariants(G((1, 0), (1, 5))) == (1, 5)
    assert smith_invariants(G(*[tuple(int(i == j) for j in range(4)) for i in range(4)])) == (1, 1, 1, 1)
    assert smith_invariants(G((2, 0), (0, 2))) == (2, 2)
    assert smith_invariants(G((0, 0), (0, 0))) == ()


def test_quotient_order_examples():
    z2 = SaturatedLattice.full(2)
    for k in range(-5, 6):
        expected = abs(k) if k else INFINITE
        assert quotient_order(G((1, 0), (1, k)), z2) == expected
    assert quotient_order(G((1, 0), (0, 1)), z2) == 1
    assert quotient_order(G((1, 0)), z2) == INFINITE
    assert quotient_order(G((2, 2)), span((1, 1))) == 2


def test_quotient_order_containment_error():
    with pytest.raises(ContainmentError):
        quotient_order(G((0, 1)), span((1, 0)))


def test_contains_examples():
    assert contains(SaturatedLattice.full(2), span((1, 7)))
    assert not contains(span((1, 0)), span((0, 1)))
    assert contains(SaturatedLattice.full(2), SaturatedLattice.full(2))
    assert contains(span((1, 0)), SaturatedLattice.zero(2))


def test_apply_unimodular_examples():
    lat = span((1, 3))
    assert apply_unimodular(UnimodularMap.identity(2), lat) == lat
    swap = UnimodularMap(((0, 1), (1, 0)))
    assert apply_unimodular(swap, span((1, 0))) == span((0, 1))


def test_row_vector_convention():
    # v -> v @ psi.T: (1,0) goes to the first column of psi, (0,1) to the second
    psi = UnimodularMap(((1, 1), (0, 1)))
    assert psi.apply((1, 0)) == (1, 0)
    assert psi.apply((0, 1)) == (1, 1)
    assert apply_unimodular(psi, span((1, 0))) == span((1, 0))
    assert apply_unimodular(psi, span((0, 1))) == span((1, 1))


def test_structural_errors():
    with pytest.raises(LatticeError):
        GeneratorSet(2, ((1, 0, 0),))
    with pytest.raises(LatticeError):
        canonicalize(GeneratorSet(2, ((1, 2), (3,))))
    with pytest.raises(LatticeError):
        SaturatedLattice(2, ((0, 1), (1, 0)))
    with pytest.raises(NotSaturatedError):
        SaturatedLattice(2, ((2, 0),))
    with pytest.raises(NotSaturatedError):
        SaturatedLattice.from_rows([(1, 0), (0, 2)], 2)
    with pytest.raises(LatticeError):
        UnimodularMap(((2, 0), (0, 1)))
    with pytest.raises(LatticeError):
        contains(SaturatedLattice.full(2), SaturatedLattice.full(3))
    with pytest.raises(LatticeError):
        apply_unimodular(UnimodularMap.identity(3), SaturatedLattice.full(2))
    with pytest.raises(LatticeError):
        GeneratorSet(2, ((1.0, 2),))


def test_big_integers():
    big = 10**40 + 7
    lat, idx = saturate(G((big, 0), (0, big)))
    assert lat == SaturatedLattice.full(2) and idx == big * big
    assert smith_invariants(G((big, 0), (0, 2 * big))) == (big, 2 * big)
    psi = UnimodularMap(((1, big), (0, 1)))
    assert apply_unimodular(psi.inverse(), apply_unimodular(psi, span((3, 5)))) == span((3, 5))


def test_lattice_helpers():
    lat = span((1, 0, 2), (0, 1, 1))
    assert lat.coordinates((2, 3, 7)) == (2, 3)
    assert lat.coordinates((1, 1, 1)) is None
    assert (0, 0, 0) in lat
    assert str(lat) == "<(1,0,2), (0,1,1)>"
    assert str(SaturatedLattice.zero(2)) == "0"


def test_unimodular_helpers():
    e = UnimodularMap.elementary(3, 0, 2, 5)
    assert e.apply((0, 0, 1)) == (5, 0, 1)
    assert e.compose(e.inverse()).is_identity()
    assert e.det == 1
    with pytest.raises(LatticeError):
        UnimodularMap.elementary(3, 1, 1, 2)


# -- oracle agreement --------------------------------------------------


@given(generator_sets())
def test_canonicalize_matches_oracle(g):
    basis, r = canonicalize(g)
    assert r == len(basis) == oracles.rank(g.rows)
    assert oracles.is_canonical_echelon(basis)
    assert oracles.same_lattice(list(g.rows), list(basis))
    for p in oracles.bounded_combinations(list(g.rows[:3]), 1):
        assert oracles.in_integer_span(list(basis), p)


@given(generator_sets())
def test_smith_matches_determinantal_divisors(g):
    assert smith_invariants(g) == oracles.smith(g.rows)


@given(generator_sets())
def test_saturate_matches_oracle(g):
    lat, idx = saturate(g)
    r = oracles.rank(g.rows)
    assert lat.rank == r
    assert all(lat.coordinates(v) is not None for v in g.rows)
    assert all(oracles.in_rational_span(g.rows, v) for v in lat.basis)
    assert oracles.minors_gcd(list(lat.basis), r) == 1
    assert idx == (oracles.minors_gcd(list(g.rows), r) if r else 1)


# -- properties --------------------------------------------------------


@given(generator_sets(), st.integers(0, 2**32))
def test_canonicalize_is_basis_independent(g, seed):
    rng = random.Random(seed)
    k = len(g.rows)
    if k == 0:
        return
    u = random_unimodular(k, rng)
    rows2 = tuple(tuple(sum(u.matrix[i][t] * g.rows[t][j] for t in range(k)) for j in range(g.m)) for i in range(k))
    basis, _ = canonicalize(g)
    assert canonicalize(GeneratorSet(g.m, rows2)) == canonicalize(g)
    assert canonicalize(GeneratorSet(g.m, basis)) == canonicalize(g)
    assert canonicalize(GeneratorSet(g.m, tuple(reversed(g.rows)) + ((0,) * g.m,)))[0] == basis


@given(generator_sets())
def test_saturate_properties(g):
    lat, idx = saturate(g)
    assert saturate(GeneratorSet(g.m, lat.basis)) == (lat, 1)
    coords = [lat.coordinates(v) for v in g.rows]
    assert all(c is not None for c in coords)
    if lat.rank:
        assert idx == oracles.product(smith_invariants(GeneratorSet(lat.rank, tuple(coords))))
    assert (idx == 1) == (smith_invariants(g) == (1,) * len(smith_invariants(g)))


@given(generator_sets(), generator_sets())
def test_mutual_containment_is_equality(g1, g2):
    if g1.m != g2.m:
        return
    a, b = saturate(g1)[0], saturate(g2)[0]
    assert (contains(a, b) and contains(b, a)) == (a.basis == b.basis)
    if contains(a, b) and a.rank == b.rank:
        assert a == b


@given(st.data())
def test_unimodular_round_trip(data):
    g = data.draw(generator_sets())
    psi = data.draw(unimodular(g.m))
    lat = saturate(g)[0]
    img = apply_unimodular(psi, lat)
    assert img.rank == lat.rank
    assert apply_unimodular(psi.inverse(), img) == lat
    assert abs(psi.det) == 1


@given(st.data())
def test_unimodular_image_matches_pointwise(data):
    g = data.draw(generator_sets(max_m=3))
    psi = data.draw(unimodular(g.m))
    lat = saturate(g)[0]
    img = apply_unimodular(psi, lat)
    for v in lat.basis:
        assert img.coordinates(psi.apply(v)) is not None
