from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from strangedual.families import FamilyDescriptor, build_virtual
from strangedual.grading import ExponentMatrix, WeightSystem, canonical_weights, reduce_weights
from strangedual.series import (EPSILON, CyclotomicProduct, SeriesError, calibrate_epsilon, milnor_orlik,
                                orbit_polynomial, poincare_series, saito_dual, verify_zeta_theorem,
                                zeta_infinity)
from strangedual.verification import bimodal_families

from conftest import P

products = st.dictionaries(st.integers(1, 12), st.integers(-3, 3), max_size=5).map(CyclotomicProduct)
divisor_products = st.dictionaries(st.sampled_from([1, 2, 3, 4, 6, 12]), st.integers(-3, 3),
                                   max_size=4).map(CyclotomicProduct)

# isolated quasihomogeneous polynomials: Fermat, chain, loop and mixed shapes
QUASIHOMOGENEOUS = [
    "x^2+y^3+z^7", "x^2+y^3+z^5", "x^3+y^3+z^3", "x^2+y^4+z^5", "x^3*y+y^4+z^2",
    "x^2*y+y^3*z+z^4", "x^2*y+y^2*z+z^2*x", "x^3*y+y^2*z+z^3*x", "x^5+y^2*z+z^3",
    "x^4+x*y^3+z^2", "x^2*y+y^5+z^3", "x^3*z+y^2+z^4", "x^2+y^2*z+z^6",
]


def qh_weights(text):
    return reduce_weights(canonical_weights(ExponentMatrix.of(P(text).support())))[0]


@given(products, products, products)
def test_group_laws(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a
    assert a * CyclotomicProduct.one() == a
    assert a * a.inverse() == CyclotomicProduct.one()
    assert (a * b).degree == a.degree + b.degree


@given(products)
def test_json_and_series_consistency(a):
    assert CyclotomicProduct.from_json(a.to_json()) == a
    b = CyclotomicProduct.factor(2)
    prod = [sum(x * y for x, y in zip(a.series(10)[: i + 1], reversed(b.series(10)[: i + 1]))) for i in range(10)]
    assert (a * b).series(10) == prod


@given(divisor_products)
def test_saito_dual_is_involution(z):
    assert saito_dual(saito_dual(z, 12), 12) == z


def test_saito_dual_examples():
    assert saito_dual(CyclotomicProduct.factor(7), 7) == CyclotomicProduct({1: -1})
    assert saito_dual(CyclotomicProduct({2: 1, 3: -1}), 6) == CyclotomicProduct({3: -1, 2: 1})
    with pytest.raises(SeriesError):
        saito_dual(CyclotomicProduct.factor(4), 6)


def test_poincare_examples():
    assert poincare_series(WeightSystem((10, 6, 9, 8), (16, 18))) == CyclotomicProduct(
        {16: 1, 18: 1, 10: -1, 6: -1, 9: -1, 8: -1})
    assert poincare_series(WeightSystem((1,), (1,))) == CyclotomicProduct.one()
    # conic x*y = w^2 in weights (1,1): (1+t)/(1-t) = 1 + 2t + 2t^2 + ...
    assert poincare_series(WeightSystem((1, 1), (2,))).series(8) == [1] + [2] * 7


def test_orbit_polynomial_examples():
    assert orbit_polynomial((2, 3, 10)) == CyclotomicProduct({2: 1, 3: 1, 10: 1, 1: -1})
    assert orbit_polynomial((1, 1, 1)) == CyclotomicProduct({1: 2})
    assert orbit_polynomial((2, 6, 6)) == CyclotomicProduct({2: 1, 6: 2, 1: -1})


def test_milnor_orlik_examples():
    # x^2 + y^2 in two variables: monodromy is the identity on the rank-one Milnor lattice
    assert milnor_orlik(WeightSystem((1, 1), (2,))) == CyclotomicProduct({1: 1})
    assert milnor_orlik(WeightSystem((21, 14, 6), (42,))).degree == 12
    assert milnor_orlik(WeightSystem((1, 1, 1), (1,))) == CyclotomicProduct.one()
    with pytest.raises(SeriesError):
        milnor_orlik(WeightSystem((2, 2), (4,)))


@pytest.mark.parametrize("text", QUASIHOMOGENEOUS)
def test_zeta_at_infinity_matches_milnor_orlik(text):
    W = qh_weights(text)
    mu = 1
    for w in W.weights:
        mu *= Fraction(W.degrees[0], w) - 1
    z = zeta_infinity(P(text), reduced=True)
    assert z == milnor_orlik(W)
    assert z.degree == mu


def test_calibration_is_unique_and_frozen():
    samples = [(P(t), qh_weights(t)) for t in QUASIHOMOGENEOUS]
    assert calibrate_epsilon(samples) == EPSILON


def test_zeta_example_j3():
    fam = FamilyDescriptor("IIA", (2, 3, 18))
    z = zeta_infinity(build_virtual(fam), reduced=True)
    assert z == CyclotomicProduct({2: 1, 3: 1, 16: 1, 18: 1, 1: -1, 6: -1, 8: -1, 9: -1})
    assert z.degree == 15
    assert z.to_text() == "(1-t^2)(1-t^3)(1-t^16)(1-t^18)/((1-t)(1-t^6)(1-t^8)(1-t^9))"


def test_zeta_theorem_on_bimodal_rows(fx):
    mu = {r["name"]: r["mu"] for r in fx.rows("T12")}
    for name, fam in bimodal_families(fx).items():
        rep = verify_zeta_theorem(fam)
        assert rep.passed, name
        assert rep.zeta.degree == mu[name]


def test_zeta_theorem_on_extended_member():
    assert verify_zeta_theorem(FamilyDescriptor("IIB", (6, 2, 8))).passed
