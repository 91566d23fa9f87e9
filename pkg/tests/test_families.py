from itertools import permutations

import pytest
from hypothesis import given, strategies as st

from strangedual.families import (FamilyDescriptor, FamilyError, NotVirtualError, build_dual_pair,
                                  build_special_F, build_virtual, classify_invertible, classify_polynomial,
                                  enumerate_by_gorenstein, exponent_matrix, family_grid, gorenstein_of,
                                  invertible_polynomial, split_virtual, virtual_condition, virtual_grid,
                                  virtual_weight_systems)
from strangedual.grading import WeightSystem
from strangedual.polyalg import parse_poly

from conftest import P

XYZW = ("X", "Y", "Z", "W")
F = FamilyDescriptor


def Q(text):
    return parse_poly(text, XYZW)


def test_descriptor_parsing():
    assert F.parse("IIA(2,3,18)") == F.parse("IIA 2 3 18") == F("IIA", (2, 3, 18))
    assert F.parse("IIB♯(4,2,6)").type_tag == "IIB#"
    assert F.from_json(F("IV2", (5, 10, 20)).to_json()) == F("IV2", (5, 10, 20))
    with pytest.raises(FamilyError):
        F.parse("IIA(2,3)")


def test_classify_examples():
    assert classify_polynomial(P("x^3+x*y^6+z^2")) == F("IIA", (2, 3, 18))
    assert classify_polynomial(P("x^2+y^2+z^3")) == F("I", (2, 2, 3))
    assert classify_polynomial(P("y^3+y*x^6+z^2")) == F("IIA", (2, 3, 18))
    with pytest.raises(FamilyError, match="grading index is 1"):
        classify_polynomial(P("x^2+y^3+z^5"))


def _shape(E):
    return min(tuple(sorted(tuple(r[i] for i in perm) for r in E.rows)) for perm in permutations(range(3)))


def test_classify_inverts_construction_on_grid():
    for fam in family_grid(24):
        got = classify_invertible(exponent_matrix(fam))
        assert _shape(exponent_matrix(got)) == _shape(exponent_matrix(fam))
        if virtual_condition(fam):
            assert got == F(fam.base_type, fam.params)


@given(st.permutations([0, 1, 2]))
def test_classify_is_permutation_invariant(perm):
    for fam in (F("IIA", (2, 3, 18)), F("IV", (3, 6, 18)), F("III", (2, 2, 4)), F("IIB", (6, 2, 4))):
        rows = [tuple(r[i] for i in perm) for r in exponent_matrix(fam).rows]
        f = P("+".join("*".join(f"{v}^{e}" for v, e in zip("xyz", r) if e) for r in rows))
        assert classify_polynomial(f) == fam


def test_special_F_examples():
    assert build_special_F(F("IIA", (2, 3, 18))) == P("x^3+x*y^6+z^2-2*x^2*y^3")
    assert build_special_F(F("IIB#", (4, 2, 6))) == P("-x^2*z^3+y^2+y*z^3-x^2*y")
    assert build_special_F(F("I", (2, 2, 2))) == P("x^2+y^2+z^2-2*x*y")
    with pytest.raises(FamilyError):
        build_special_F(F("IIA", (2, 3, 17)))


def test_dual_pair_examples():
    p = build_dual_pair(F("IIA", (2, 3, 18)))
    assert (p.f1, p.f2) == (Q("X*Y-W^2"), Q("X*W+Y^3+Z^2"))
    assert p.weights == WeightSystem((10, 6, 9, 8), (16, 18))
    p = build_dual_pair(F("IIB", (6, 2, 4)))
    assert (p.f1, p.f2) == (Q("X*Y-W^2"), Q("X^3+Y*Z+Z^2"))
    assert p.weights == WeightSystem((4, 6, 6, 5), (10, 12))
    p = build_dual_pair(F("IIB#", (4, 2, 6)))
    assert (p.f1, p.f2) == (Q("X*Y-Z*W"), Q("X^2+Y*W+Z^3"))


def test_dual_pair_is_homogeneous_on_grid():
    for fam in family_grid(30):
        p = build_dual_pair(fam)
        w = p.weights.weights
        assert p.f1.is_weighted_homogeneous(w) == p.weights.degrees[0]
        assert p.f2.is_weighted_homogeneous(w) == p.weights.degrees[1]


def test_virtual_examples():
    assert build_virtual(F("IIA", (2, 3, 18))) == P("-y^4*z+z^2+x^3+x^2*y^3")
    assert build_virtual(F("IIB#", (4, 2, 6))) == P("-x^3*z+y^2+y*z^3+x^2*y")
    with pytest.raises(NotVirtualError):
        build_virtual(F("I", (2, 2, 6)))


def test_virtual_weight_examples():
    assert virtual_weight_systems(F("IIA", (2, 3, 18))) == (WeightSystem((5, 2, 8), (16,)),
                                                             WeightSystem((6, 2, 9), (18,)))
    # W1 differs from the closed form instantiated naively; (2,5,2;10) is what h1 actually carries
    assert virtual_weight_systems(F("IIB", (6, 2, 4))) == (WeightSystem((2, 5, 2), (10,)),
                                                            WeightSystem((2, 6, 3), (12,)))


def test_degree_coincidence_on_grid():
    for fam in virtual_grid(40):
        try:
            W1, W2 = virtual_weight_systems(fam)
        except Exception:
            assert fam.type_tag in ("IIB", "IIB#") and fam.params[:2] == (2, 2)
            continue
        assert len(build_virtual(fam)) == 4
        assert (W1.degrees[0], W2.degrees[0]) == build_dual_pair(fam).weights.degrees


def test_split_faces_are_homogeneous():
    for fam in virtual_grid(30):
        if fam.params[:2] == (2, 2) and fam.type_tag in ("IIB", "IIB#"):
            continue
        h1, h2 = split_virtual(fam)
        W1, W2 = virtual_weight_systems(fam)
        assert h1.is_weighted_homogeneous(W1.weights) == W1.degrees[0]
        assert h2.is_weighted_homogeneous(W2.weights) == W2.degrees[0]


def test_enumerate_examples():
    a1 = enumerate_by_gorenstein(1, 24)
    assert len(a1) == 11
    assert {F("IIA", (2, 3, 18)), F("III", (2, 2, 4)), F("IV2#", (5, 10, 20))} <= set(a1)
    assert enumerate_by_gorenstein(1, 40) == a1
    assert enumerate_by_gorenstein(0, 60) == []
    neg = enumerate_by_gorenstein(-1, 12)
    assert all(gorenstein_of(f) < 0 for f in neg)
    assert {f.type_tag for f in neg} == {"IIB", "IIB#"}


def test_virtual_condition_matches_grid():
    grid = family_grid(20)
    assert [f for f in grid if virtual_condition(f)] == list(virtual_grid(20))
    assert not virtual_condition(F("I", (2, 2, 4)))


def test_invertible_polynomial_has_three_terms():
    for fam in family_grid(12):
        assert len(invertible_polynomial(fam)) == 3
