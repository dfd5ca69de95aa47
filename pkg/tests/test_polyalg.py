from fractions import Fraction
from itertools import product
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ckforms.polyalg import (
    Echelon,
    Polynomial,
    elementary_symmetric,
    format_linear_combination,
    in_span,
    kernel_basis,
    modular_rank,
    monomials_of_degree,
    rank,
    substitute_linear,
    to_graded_vector,
)
from ckforms.restriction import TorusMap


def x(n, i):
    return Polynomial.variable(n, i)


def brute_monomials(n, d):
    return {m for m in product(range(d + 1), repeat=n) if sum(m) == d}


def test_monomials_small_cases():
    assert monomials_of_degree(1, 3) == ((3,),)
    assert monomials_of_degree(2, 0) == ((0, 0),)
    assert len(monomials_of_degree(3, 2)) == 6
    assert set(monomials_of_degree(3, 2)) == brute_monomials(3, 2)


def test_monomials_counts_match_binomial():
    for n in range(1, 7):
        for d in range(13):
            assert len(monomials_of_degree(n, d)) == comb(n + d - 1, d)


def test_monomial_order_is_fixed_and_strict():
    ms = monomials_of_degree(3, 3)
    assert ms[0] == (3, 0, 0) and ms[-1] == (0, 0, 3)
    assert list(ms) == sorted(ms, reverse=True)
    assert len(set(ms)) == len(ms)


def test_elementary_symmetric_definitions():
    assert elementary_symmetric(2, 1) == x(2, 0) + x(2, 1)
    assert elementary_symmetric(2, 2) == x(2, 0) * x(2, 1)
    e42 = elementary_symmetric(4, 2)
    assert len(e42) == 6
    assert e42.evaluate([1, 1, 1, 1]) == 6
    for n in range(1, 6):
        for i in range(1, n + 1):
            p = elementary_symmetric(n, i)
            assert p.is_homogeneous(i) and len(p) == comb(n, i)
            assert set(p.terms.values()) == {1}


@pytest.mark.parametrize("i", [0, 3, -1])
def test_elementary_symmetric_rejects_out_of_range(i):
    with pytest.raises(ValueError):
        elementary_symmetric(2, i)


def test_substitute_examples():
    y = TorusMap(((1,), (0,)), 1)
    assert substitute_linear(x(2, 0) * x(2, 1), y).is_zero()
    ident = TorusMap.identity(2)
    assert substitute_linear(x(2, 0) + x(2, 1), ident) == x(2, 0) + x(2, 1)
    neg = TorusMap(((-1,),), 1)
    assert substitute_linear(x(1, 0) ** 2, neg) == x(1, 0) ** 2


def test_substitute_dimension_mismatch():
    with pytest.raises(ValueError):
        substitute_linear(x(3, 0), TorusMap.identity(2))


def test_to_graded_vector():
    assert to_graded_vector(Polynomial.zero(2), 3).is_zero()
    v = to_graded_vector(x(2, 0) * x(2, 1), 2)
    assert v.coords == (0, 1, 0)
    e2 = elementary_symmetric(3, 2)
    assert sorted(to_graded_vector(e2, 2).coords) == [0, 0, 0, 1, 1, 1]
    with pytest.raises(ValueError):
        to_graded_vector(x(2, 0) + x(2, 0) * x(2, 1), 2)
    with pytest.raises(ValueError):
        to_graded_vector(x(2, 0), 2)


def test_graded_vector_dimension():
    v = to_graded_vector(x(3, 1) ** 2, 2)
    assert v.dimension == comb(4, 2) == len(v.coords)
    assert v.to_polynomial() == x(3, 1) ** 2


def test_kernel_basis_examples():
    v = {0: 1, 2: 3}
    w = {1: 1}
    assert kernel_basis([v, v]) == [(1, -1)]
    assert kernel_basis([v, w]) == []
    assert kernel_basis([]) == []
    three = [{0: 1}, {1: 1}, {0: 2, 1: -5}]
    basis = kernel_basis(three)
    assert len(basis) == 3 - rank(three) == 1


def test_kernel_basis_rescaled_inputs():
    vecs = [{0: Fraction(1, 2)}, {0: 3}, {1: 1}, {0: 1, 1: 1}]
    basis = kernel_basis(vecs)
    assert len(basis) == 2
    for c in basis:
        total = {}
        for ci, v in zip(c, vecs):
            for k, a in v.items():
                total[k] = total.get(k, 0) + ci * a
        assert all(t == 0 for t in total.values())
    # reduced echelon: leading ones at positions no other element touches
    leads = [next(i for i, a in enumerate(c) if a) for c in basis]
    assert all(basis[j][leads[j]] == 1 for j in range(len(basis)))
    for j, lead in enumerate(leads):
        assert all(basis[k][lead] == 0 for k in range(len(basis)) if k != j)


def test_in_span_examples():
    assert in_span({}, [{0: 1}])
    assert not in_span({0: 1}, [])
    # Euler class of SO(4) is not a multiple of p1 in degree 2
    p1 = to_graded_vector(x(2, 0) ** 2 + x(2, 1) ** 2, 2)
    e = to_graded_vector(x(2, 0) * x(2, 1), 2)
    assert not in_span(e, [p1])
    assert in_span(to_graded_vector((x(2, 0) ** 2 + x(2, 1) ** 2) * 3, 2), [p1])


def test_in_span_rejects_mixed_pieces():
    a = to_graded_vector(x(2, 0), 1)
    b = to_graded_vector(x(2, 0) ** 2, 2)
    with pytest.raises(ValueError):
        in_span(a, [b])


def test_echelon_relation_tracking():
    ech = Echelon(track=True)
    # primitive integer vectors, so the relation applies to them as given
    vecs = {0: {0: 1, 2: 3}, 1: {1: 1}, 2: {0: 4, 1: -1, 2: 12}}
    assert ech.insert(vecs[0], label=0) is None
    assert ech.insert(vecs[1], label=1) is None
    rel = ech.insert(vecs[2], label=2)
    assert rel is not None and rel[2] != 0
    total = {}
    for lab, c in rel.items():
        for k, a in vecs[lab].items():
            total[k] = total.get(k, 0) + c * a
    assert all(t == 0 for t in total.values())


def test_modular_rank():
    assert modular_rank([[1, 2], [2, 4]]) == 1
    assert modular_rank([[1, 0], [0, 1], [1, 1]]) == 2
    assert modular_rank([]) == 0


def test_polynomial_validation_and_formatting():
    with pytest.raises(TypeError):
        Polynomial.constant(1, 0.5)
    p = Polynomial(2, {(1, 0): Fraction(1, 2), (0, 1): 0})
    assert len(p) == 1
    assert p.to_string(["a", "b"]) == "1/2*a"
    assert format_linear_combination([("a", 1), ("b", -2), ("c", Fraction(1, 2))]) == "a - 2*b + 1/2*c"
    assert Polynomial.zero(2).degree() == -1


# -- properties ---------------------------------------------------------------

coeff = st.one_of(st.integers(-5, 5), st.fractions(min_value=-5, max_value=5, max_denominator=4))


@st.composite
def polys(draw, n=2, max_deg=3):
    terms = draw(
        st.dictionaries(
            st.tuples(*[st.integers(0, max_deg)] * n).filter(lambda m: sum(m) <= max_deg),
            coeff,
            max_size=5,
        )
    )
    return Polynomial(n, terms)


@st.composite
def homogeneous(draw, n=2):
    d = draw(st.integers(0, 3))
    monos = monomials_of_degree(n, d)
    cs = draw(st.lists(coeff, min_size=len(monos), max_size=len(monos)))
    return Polynomial(n, dict(zip(monos, cs))), d


maps = st.lists(st.tuples(st.integers(-2, 2), st.integers(-2, 2), st.integers(-2, 2)), min_size=2, max_size=2)


@settings(max_examples=60, deadline=None)
@given(polys(), polys(), maps)
def test_substitution_is_ring_homomorphism(p, q, rows):
    m = [list(r) for r in rows]
    assert substitute_linear(p * q, m) == substitute_linear(p, m) * substitute_linear(q, m)
    assert substitute_linear(p + q, m) == substitute_linear(p, m) + substitute_linear(q, m)


@settings(max_examples=60, deadline=None)
@given(homogeneous(), homogeneous(), maps)
def test_homogeneity_is_preserved(pa, qb, rows):
    (p, a), (q, b) = pa, qb
    prod = p * q
    assert prod.is_zero() or prod.is_homogeneous(a + b)
    s = substitute_linear(p, [list(r) for r in rows])
    assert s.is_zero() or s.is_homogeneous(a)
    if a == b:
        total = p + q
        assert total.is_zero() or total.is_homogeneous(a)


@settings(max_examples=60, deadline=None)
@given(polys(), polys(), st.tuples(coeff, coeff))
def test_evaluation_commutes_with_arithmetic(p, q, point):
    assert (p + q).evaluate(point) == p.evaluate(point) + q.evaluate(point)
    assert (p * q).evaluate(point) == p.evaluate(point) * q.evaluate(point)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(st.integers(-3, 3), min_size=4, max_size=4), max_size=6))
def test_kernel_basis_annihilates(rows):
    vecs = [{i: c for i, c in enumerate(r) if c} for r in rows]
    basis = kernel_basis(vecs)
    assert len(basis) + rank(vecs) == len(vecs)
    for c in basis:
        for k in range(4):
            assert sum(ci * v.get(k, 0) for ci, v in zip(c, vecs)) == 0
