from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from formalcx.formal_series import (
    FormalMap, Series, all_exponents, compose, frac_matmul, frac_matrix_inverse,
    invert_diffeo, invert_matrix_series, mat_identity, matmul, normalize_gamma, substitute,
)

T = sympy.symbols("t1:4")


def to_sympy(s):
    return sympy.Add(*[sympy.Rational(c.numerator, c.denominator)
                       * sympy.Mul(*[T[i] ** e for i, e in enumerate(exps)])
                       for (exps, _), c in s.terms.items()])


def truncated(expr, dim, order):
    poly = sympy.Poly(sympy.expand(expr), *T[:dim])
    return {m: c for m, c in poly.terms() if sum(m) <= order and c != 0}


def from_sympy_terms(terms, dim, order):
    return Series(dim, order, {(m, ()): Fraction(int(c.p), int(c.q)) for m, c in terms.items()})


coeffs = st.integers(-3, 3)


@st.composite
def series(draw, dim=2, order=3, constant=True):
    terms = {}
    for e in all_exponents(dim, order):
        if not constant and sum(e) == 0:
            continue
        c = draw(coeffs)
        if c:
            terms[(e, ())] = c
    return Series(dim, order, terms)


@given(series(), series(), series())
def test_ring_axioms(a, b, c):
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c


@given(series(), series())
def test_product_matches_sympy(a, b):
    want = truncated(to_sympy(a) * to_sympy(b), 2, 3)
    assert a * b == from_sympy_terms(want, 2, 3)


@given(series(), series())
def test_leibniz(a, b):
    for i in (1, 2):
        assert (a * b).partial(i) == a.partial(i) * b.truncate(2) + a.truncate(2) * b.partial(i)


def test_gamma_anticommute():
    g1, g2 = Series.gamma(1, 2, 3), Series.gamma(2, 2, 3)
    assert g2 * g1 == -(g1 * g2)
    assert (g1 * g1).is_zero()
    assert normalize_gamma((2, 1)) == (-1, (1, 2))
    assert normalize_gamma((1, 1))[0] == 0


def test_partial_lowers_order():
    s = Series.t(1, 2, 3, power=3)
    d = s.partial(1)
    assert d.order == 2
    assert d.coeff((2, 0)) == 3
    with pytest.raises(ValueError):
        s.partial(3)


def test_validation():
    with pytest.raises(ValueError):
        Series(2, 1, {((1,), ()): 1})
    with pytest.raises(ValueError):
        Series(2, 1, {((0, 0), (2, 1)): 1})
    with pytest.raises(ValueError):
        FormalMap(1, 2, [Series.const(1, 1, 2)])
    with pytest.raises(ValueError):
        Series.t(1, 1, 2).with_order(3)


def test_substitute_examples():
    f = FormalMap(1, 3, [Series(1, 3, {((1,), ()): 1, ((2,), ()): 1})])
    got = substitute(Series.t(1, 1, 3, power=2), f)
    assert got.terms == {((2,), ()): 1, ((3,), ()): 2}


@st.composite
def maps(draw, dim=2, order=3, invertible=False):
    comps = []
    for b in range(dim):
        terms = {}
        for e in all_exponents(dim, order):
            if sum(e) == 0:
                continue
            if invertible and sum(e) == 1:
                c = int(e[b] == 1)
            else:
                c = draw(coeffs)
            if c:
                terms[(e, ())] = c
        comps.append(Series(dim, order, terms))
    return FormalMap(dim, order, comps)


@settings(max_examples=30, deadline=None)
@given(maps(), maps())
def test_compose_matches_sympy(f, g):
    h = compose(f, g)
    subs = {T[i]: to_sympy(c) for i, c in enumerate(g.components)}
    for b in range(2):
        want = truncated(to_sympy(f.components[b]).subs(subs, simultaneous=True), 2, 3)
        assert h.components[b] == from_sympy_terms(want, 2, 3)


@settings(max_examples=25, deadline=None)
@given(maps(), maps(), maps())
def test_compose_associative(f, g, h):
    assert compose(compose(f, g), h) == compose(f, compose(g, h))


@settings(max_examples=25, deadline=None)
@given(maps(invertible=True))
def test_inverse_diffeo(f):
    g = invert_diffeo(f)
    ident = FormalMap.identity(2, 3)
    assert compose(f, g) == ident
    assert compose(g, f) == ident


def test_inverse_known_value():
    f = FormalMap(1, 3, [Series(1, 3, {((1,), ()): 1, ((2,), ()): 1})])
    g = invert_diffeo(f)
    assert g.components[0].terms == {((1,), ()): 1, ((2,), ()): -1, ((3,), ()): 2}


def test_inverse_with_nontrivial_linear_part():
    f = FormalMap(2, 3, [Series(2, 3, {((1, 0), ()): 2, ((0, 2), ()): 1}),
                         Series(2, 3, {((1, 0), ()): 1, ((0, 1), ()): 1})])
    assert compose(f, invert_diffeo(f)) == FormalMap.identity(2, 3)


def test_frac_matrix_inverse():
    m = [[2, 1], [1, 1]]
    inv = frac_matrix_inverse(m)
    assert frac_matmul(m, inv) == [[1, 0], [0, 1]]
    with pytest.raises(ValueError):
        frac_matrix_inverse([[1, 1], [1, 1]])


@settings(max_examples=25, deadline=None)
@given(series(), series(), series(), series())
def test_matrix_series_inverse(a, b, c, d):
    m = [[a + 2, b], [c, d + 1]]
    m = [[x.truncate(3) for x in row] for row in m]
    if (m[0][0].constant_term() * m[1][1].constant_term()
            - m[0][1].constant_term() * m[1][0].constant_term()) == 0:
        return
    assert matmul(m, invert_matrix_series(m)) == mat_identity(2, 2, 3)
