import json

import pytest
import sympy
from hypothesis import given, strategies as st

from strangedual.polyalg import (ParseError, PolyError, SparsePoly, UnknownVariableError, binomial_expand,
                                 dumps, newton_polygon_at_infinity, parse_poly, substitute, to_text,
                                 top_faces_split)

from conftest import XYZ, P

coefs = st.fractions(min_value=-5, max_value=5, max_denominator=4)
exps = st.tuples(*(st.integers(0, 3) for _ in XYZ))
polys = st.dictionaries(exps, coefs, max_size=5).map(lambda t: SparsePoly(XYZ, t))

x, y, z = (SparsePoly.var(XYZ, v) for v in XYZ)


def to_sympy(p):
    sx = sympy.symbols(XYZ)
    return sympy.expand(sum(sympy.Rational(c) * sympy.Mul(*(s ** e for s, e in zip(sx, k))) for k, c in p.items()))



def test_parse_examples():
    assert len(P("x^2+y^3+z^18")) == 3
    f = P("x^3+x*y^6+z^2-2*x^2*y^3")
    assert f == x ** 3 + x * y ** 6 + z ** 2 - 2 * x ** 2 * y ** 3
    assert P("x - x").is_zero() and P("x - x").terms == {}
    assert P("x + 2*x") == P("3*x")


@pytest.mark.parametrize("text, err", [("x^-1", ParseError), ("x+*y", ParseError),
                                       ("x+w", UnknownVariableError), ("1/0*x", ParseError)])
def test_parse_errors(text, err):
    with pytest.raises(err):
        P(text)


def test_parse_error_carries_position():
    with pytest.raises(ParseError, match="position 2"):
        P("x+*y")


@given(polys)
def test_print_parse_round_trip(p):
    assert parse_poly(to_text(p), XYZ) == p


@given(polys)
def test_json_round_trip(p):
    assert SparsePoly.from_json(json.loads(dumps(p))) == p


@given(polys, polys, polys)
def test_ring_laws(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert a + b - b == a


@given(polys, polys)
def test_product_matches_sympy(a, b):
    assert to_sympy(a * b) == sympy.expand(to_sympy(a) * to_sympy(b))


@given(polys, polys, polys)
def test_substitute_is_homomorphism(p, q, r):
    assert substitute(p * q, "x", r) == substitute(p, "x", r) * substitute(q, "x", r)
    assert substitute(p + q, "y", r) == substitute(p, "y", r) + substitute(q, "y", r)


@given(polys)
def test_identity_substitution(p):
    assert substitute(p, "x", x) == p


def test_substitute_examples():
    cusp = z ** 2 + x * (x - y ** 3) ** 2 - x * y * z
    assert substitute(cusp, "x", x + y ** 3) == P("x^3+x^2*y^3+z^2-y^4*z-x*y*z")
    assert substitute(y ** 2, "y", y + x ** 3) == P("y^2+2*x^3*y+x^6")
    with pytest.raises(UnknownVariableError):
        substitute(x, "w", y)


@pytest.mark.parametrize("k", range(6))
def test_binomial_expand_matches_power(k):
    assert binomial_expand(x, y ** 3, k) == (x + y ** 3) ** k


def test_newton_polygon_examples():
    simplex = newton_polygon_at_infinity(P("x+y+z")).faces_avoiding_origin()
    assert [(f.covector, f.degree) for f in simplex] == [((1, 1, 1), 1)]
    h = P("x^3+x^2*y^3+z^2-y^4*z")
    faces = newton_polygon_at_infinity(h).faces_avoiding_origin()
    assert sorted((f.covector, f.degree) for f in faces) == [((5, 2, 8), 16), ((6, 2, 9), 18)]
    seg = newton_polygon_at_infinity(P("x^2"))
    assert seg.dimension == 1 and [f.points for f in seg.faces_avoiding_origin()] == [((2, 0, 0),)]


@given(st.lists(exps, min_size=4, max_size=6, unique=True))
def test_newton_polygon_facets_are_supporting(points):
    p = SparsePoly(XYZ, {e: 1 for e in points if any(e)})
    if p.is_zero():
        return
    npoly = newton_polygon_at_infinity(p)
    if npoly.dimension < 3:
        return
    for f in npoly.facets:
        assert sympy.igcd(*f.covector) == 1
        for q in npoly.points:
            value = sum(u * v for u, v in zip(f.covector, q))
            assert value == f.degree if q in f.points else value < f.degree


def test_top_faces_split_examples():
    h1, h2 = top_faces_split(P("x^3+x^2*y^3+z^2-y^4*z"))
    assert h1 == P("-y^4*z+z^2+x^2*y^3") and h2 == P("z^2+x^3+x^2*y^3")
    h1, h2 = top_faces_split(P("-x^4*z+y^2+x^3*z^2+y*z^2"))
    assert h1 == P("-x^4*z+y^2+x^3*z^2") and h2 == P("y^2+y*z^2+x^3*z^2")
    with pytest.raises(PolyError):
        top_faces_split(P("x+y+z"))
