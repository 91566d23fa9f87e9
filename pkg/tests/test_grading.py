import pytest
import sympy
from hypothesis import given, strategies as st
from sympy.matrices.normalforms import smith_normal_form as sympy_snf
from sympy.polys.domains import ZZ

from strangedual import linalg
from strangedual.families import extended_matrix, exponent_matrix, family_grid
from strangedual.grading import (ExponentMatrix, GradingError, WeightSystem, canonical_weights,
                                 dual_sl_subgroup_order, gorenstein_parameter, grading_index, grading_index_snf,
                                 kernel_primitive, reduce_weights, symmetry_group, transpose)

IIA = ExponentMatrix.of([(3, 0, 0), (1, 6, 0), (0, 0, 2)])
FERMAT2 = ExponentMatrix.of([(2, 0, 0), (0, 2, 0), (0, 0, 2)])

small = st.lists(st.lists(st.integers(-6, 6), min_size=3, max_size=3), min_size=3, max_size=3)
exponent_rows = st.lists(st.lists(st.integers(0, 7), min_size=3, max_size=3), min_size=3, max_size=3)


def test_canonical_weights_examples():
    assert canonical_weights(IIA) == WeightSystem((12, 4, 18), (36,))
    assert canonical_weights(FERMAT2) == WeightSystem((4, 4, 4), (8,))
    assert canonical_weights(ExponentMatrix.of([(2, 0, 0), (0, 3, 0), (0, 0, 7)])) == WeightSystem((21, 14, 6), (42,))
    with pytest.raises(GradingError):
        canonical_weights(ExponentMatrix.of([(1, 1, 0), (2, 2, 0), (0, 0, 1)]))


def test_reduce_and_gorenstein_examples():
    assert reduce_weights(WeightSystem((12, 4, 18), (36,))) == (WeightSystem((6, 2, 9), (18,)), 2)
    assert reduce_weights(WeightSystem((1, 1, 1), (3,))) == (WeightSystem((1, 1, 1), (3,)), 1)
    assert reduce_weights(WeightSystem((4, 4, 4), (8,))) == (WeightSystem((1, 1, 1), (2,)), 4)
    assert gorenstein_parameter(WeightSystem((6, 2, 9), (18,))) == 1
    assert gorenstein_parameter(WeightSystem((1, 1, 1), (3,))) == 0
    with pytest.raises(GradingError):
        gorenstein_parameter(WeightSystem((1, 1), (2,)))


def test_transpose_examples():
    assert transpose(IIA).rows == ((3, 1, 0), (0, 6, 0), (0, 0, 2))
    assert transpose(transpose(IIA)) == IIA
    assert transpose(FERMAT2) == FERMAT2


def test_snf_examples():
    assert linalg.smith_normal_form([[1, 0], [0, 1]])[1] == [[1, 0], [0, 1]]
    assert linalg.smith_normal_form([[2, 0], [0, 6]])[1] == [[2, 0], [0, 6]]
    assert linalg.smith_normal_form([[2, 4], [6, 8]])[1] == [[2, 0], [0, 4]]


@given(small)
def test_snf_against_sympy(M):
    U, D, V = linalg.smith_normal_form(M)
    assert linalg.matmul(linalg.matmul(U, M), V) == D
    assert abs(linalg.det(U)) == 1 and abs(linalg.det(V)) == 1
    diag = [D[i][i] for i in range(3)]
    assert all(D[i][j] == 0 for i in range(3) for j in range(3) if i != j)
    nz = [d for d in diag if d]
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    oracle = sympy_snf(sympy.Matrix(M), domain=ZZ)
    assert sorted(abs(d) for d in diag) == sorted(abs(int(oracle[i, i])) for i in range(3))


def test_symmetry_group_examples():
    assert symmetry_group(FERMAT2).invariant_factors == (2, 2, 2)
    assert symmetry_group(IIA).order == 36
    assert linalg.invariant_factors([[2, 1], [0, 3]]) == [1, 6]


def test_grading_index_examples():
    assert grading_index(IIA) == 2
    assert grading_index(FERMAT2) == 4
    assert grading_index(ExponentMatrix.of([(2, 0, 0), (0, 3, 0), (0, 0, 5)])) == 1


@given(exponent_rows)
def test_grading_index_is_cf(rows):
    E = ExponentMatrix.of(rows)
    if E.det() == 0:
        return
    try:
        W = canonical_weights(E)
    except GradingError:
        return
    assert symmetry_group(E).order == abs(E.det())
    assert grading_index(E) == grading_index_snf(E) == reduce_weights(W)[1]


def test_grid_group_laws_small():
    for fam in family_grid(20):
        E = exponent_matrix(fam)
        W = canonical_weights(E)
        assert all(sum(e * w for e, w in zip(r, W.weights)) == W.degrees[0] for r in E.rows)
        assert symmetry_group(E).order == abs(E.det())
        assert grading_index(E) == reduce_weights(W)[1] == 2


def test_dual_sl_subgroup_has_order_cf():
    for fam in family_grid(12):
        E = exponent_matrix(fam)
        assert dual_sl_subgroup_order(E) == 2


def test_kernel_primitive_examples():
    assert kernel_primitive(ExponentMatrix.of([(3, 0, 0), (1, 6, 0), (0, 0, 2), (2, 3, 0)])) == (1, 1, 0, -2)
    assert kernel_primitive(ExponentMatrix.of([(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1)])) == (1, 1, 1, -1)
    with pytest.raises(GradingError):
        kernel_primitive(ExponentMatrix.of([(1, 0, 0), (2, 0, 0), (0, 1, 0), (0, 2, 0)]))


def test_kernel_vectors_on_grid():
    for fam in family_grid(30):
        if fam.type_tag in ("IV1", "IV2", "IV2#"):
            continue
        E4, _ = extended_matrix(fam)
        expected = (1, 1, -1, -1) if fam.is_sharp or fam.pair_type == "IV#" else (1, 1, 0, -2)
        assert kernel_primitive(E4) == expected
