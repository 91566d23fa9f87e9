"""Exponent matrices, weight systems and the finite symmetry groups they carry."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import gcd, lcm
from typing import List, Sequence, Tuple

from . import linalg
from .linalg import smith_normal_form  # re-exported

__all__ = [
    "ExponentMatrix",
    "WeightSystem",
    "FiniteAbelianGroup",
    "GradingError",
    "canonical_weights",
    "reduce_weights",
    "gorenstein_parameter",
    "transpose",
    "smith_normal_form",
    "symmetry_group",
    "grading_index",
    "grading_index_snf",
    "dual_sl_subgroup_order",
    "kernel_primitive",
]

# Largest |G| for which group elements are enumerated one by one.
ENUMERATION_LIMIT = 10**6


class GradingError(ValueError):
    pass


@dataclass(frozen=True)
class ExponentMatrix:
    """Rows are monomials, columns are variables."""

    rows: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(int(e) for e in r) for r in self.rows)
        object.__setattr__(self, "rows", rows)
        if not rows or len({len(r) for r in rows}) != 1:
            raise GradingError("exponent matrix must be rectangular and nonempty")
        if any(e < 0 for r in rows for e in r):
            raise GradingError("exponents must be non-negative")

    @classmethod
    def of(cls, rows) -> "ExponentMatrix":
        return cls(tuple(tuple(r) for r in rows))

    @property
    def shape(self) -> Tuple[int, int]:
        return len(self.rows), len(self.rows[0])

    def as_list(self) -> List[List[int]]:
        return [list(r) for r in self.rows]

    def det(self) -> int:
        if self.shape[0] != self.shape[1]:
            raise GradingError(f"determinant of non-square {self.shape} matrix")
        return linalg.det(self.as_list())

    def to_json(self) -> list:
        return self.as_list()


@dataclass(frozen=True)
class WeightSystem:
    weights: Tuple[int, ...]
    degrees: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(int(w) for w in self.weights))
        object.__setattr__(self, "degrees", tuple(int(d) for d in self.degrees))
        if any(w <= 0 for w in self.weights):
            raise GradingError(f"weights must be positive: {self.weights}")
        if not 1 <= len(self.degrees) <= 2:
            raise GradingError("a weight system carries one or two degrees")

    @property
    def gcd(self) -> int:
        return linalg.gcd_list(self.weights + self.degrees)

    @property
    def is_reduced(self) -> bool:
        return self.gcd == 1

    def exponents(self) -> Tuple[Fraction, ...]:
        """The rational weights q_i = w_i / d (hypersurface case)."""
        d = self.degrees[0]
        return tuple(Fraction(w, d) for w in self.weights)

    def __str__(self):
        return "(" + ",".join(map(str, self.weights)) + ";" + ",".join(map(str, self.degrees)) + ")"

    def to_json(self) -> dict:
        data = {"weights": list(self.weights), "degrees": list(self.degrees), "cf": self.gcd}
        if len(self.weights) == 3 and len(self.degrees) == 1:
            red, _ = reduce_weights(self)
            data["gorenstein"] = gorenstein_parameter(red)
        return data


@dataclass(frozen=True)
class FiniteAbelianGroup:
    invariant_factors: Tuple[int, ...]

    def __post_init__(self):
        f = tuple(int(d) for d in self.invariant_factors)
        if any(d < 2 for d in f):
            raise GradingError(f"invariant factors must be >= 2: {f}")
        if any(f[i + 1] % f[i] for i in range(len(f) - 1)):
            raise GradingError(f"invariant factors must form a divisibility chain: {f}")
        object.__setattr__(self, "invariant_factors", f)

    @property
    def order(self) -> int:
        out = 1
        for d in self.invariant_factors:
            out *= d
        return out

    def to_json(self) -> dict:
        return {"invariant_factors": list(self.invariant_factors), "order": self.order}


def _square(E: ExponentMatrix) -> List[List[int]]:
    m, n = E.shape
    if m != n:
        raise GradingError(f"expected a square exponent matrix, got {m}x{n}")
    if E.det() == 0:
        raise GradingError("exponent matrix is singular")
    return E.as_list()


def _adjugate_row_sums(M: List[List[int]]) -> List[int]:
    """adj(M) (1, ..., 1) by integer cofactors."""
    n = len(M)
    if n == 1:
        return [1]
    out = []
    for i in range(n):
        total = 0
        for j in range(n):
            # adj[i][j] = (-1)^(i+j) * det(M without row j and column i)
            minor = [[M[r][c] for c in range(n) if c != i] for r in range(n) if r != j]
            total += (-1) ** (i + j) * linalg.det(minor)
        out.append(total)
    return out


def canonical_weights(E: ExponentMatrix) -> WeightSystem:
    """Solve E w = d (1, ..., 1) with d = |det E|."""
    M = E.as_list()
    if E.shape[0] != E.shape[1]:
        raise GradingError(f"expected a square exponent matrix, got {E.shape[0]}x{E.shape[1]}")
    det = E.det()
    if det == 0:
        raise GradingError("exponent matrix is singular")
    sign = 1 if det > 0 else -1
    weights = tuple(sign * x for x in _adjugate_row_sums(M))
    if any(x <= 0 for x in weights):
        raise GradingError(f"no positive integral weights for {E.rows}: {weights}")
    d = abs(det)
    assert linalg.matvec(M, weights) == [d] * len(M)
    return WeightSystem(weights, (d,))


def reduce_weights(W: WeightSystem) -> Tuple[WeightSystem, int]:
    c = W.gcd
    return WeightSystem(tuple(w // c for w in W.weights), tuple(d // c for d in W.degrees)), c


def gorenstein_parameter(W: WeightSystem) -> int:
    if len(W.weights) != 3 or len(W.degrees) != 1:
        raise GradingError("Gorenstein parameter needs a 3-variable hypersurface weight system")
    return W.degrees[0] - sum(W.weights)


def transpose(E: ExponentMatrix) -> ExponentMatrix:
    return ExponentMatrix.of(linalg.transpose(E.as_list()))


def symmetry_group(E: ExponentMatrix) -> FiniteAbelianGroup:
    """G_f, computed as Z^n / E Z^n through its Smith normal form."""
    M = _square(E)
    return FiniteAbelianGroup(tuple(d for d in linalg.invariant_factors(M) if d > 1))


def _order_in_cokernel(M: List[List[int]], v: Sequence[int]) -> int:
    U, D, _ = smith_normal_form(M)
    coords = linalg.matvec(U, v)
    order = 1
    for i, c in enumerate(coords):
        d = D[i][i]
        order = lcm(order, d // gcd(d, c))
    return order


def grading_index(E: ExponentMatrix) -> int:
    """Index [G_f : G_0] of the subgroup generated by the exponential grading operator.

    An element of G_f is exp(2 pi i theta) with E theta integral.  The
    grading operator has theta = w / d with E w = d (1, ..., 1), so its order
    is d / gcd(w, d) and the index is gcd(w, d) = c_f.
    """
    return canonical_weights(E).gcd


def grading_index_snf(E: ExponentMatrix) -> int:
    """Same index computed in Z^n / E Z^n through the Smith normal form."""
    M = _square(E)
    order_g0 = _order_in_cokernel(M, [1] * len(M))
    return abs(E.det()) // order_g0


def dual_sl_subgroup_order(E: ExponentMatrix) -> int:
    """Order of SL_n(Z) ∩ G_{f~} for the transpose f~, by enumeration.

    Elements of G_{f~} are exp(2 pi i theta) with E^T theta integral; the
    determinant character is trivial iff sum(theta) is an integer.
    """
    M = _square(E)
    Mt = linalg.transpose(M)
    U, D, _ = smith_normal_form(Mt)
    n = len(M)
    diag = [D[i][i] for i in range(n)]
    total = 1
    for d in diag:
        total *= d
    if total > ENUMERATION_LIMIT:
        raise GradingError(f"group of order {total} too large to enumerate")
    Uinv = linalg.inverse(U)
    Mt_inv = linalg.inverse(Mt)
    count = 0
    for k in product(*(range(d) for d in diag)):
        a = linalg.matvec(Uinv, k)
        theta = linalg.matvec(Mt_inv, a)
        if sum(theta).denominator == 1:
            count += 1
    return count


def kernel_primitive(E: ExponentMatrix) -> Tuple[int, ...]:
    """Primitive generator of ker E^T for a rank-3 4x3 matrix, first nonzero entry positive."""
    Et = linalg.transpose(E.as_list())
    basis = linalg.nullspace(Et)
    if len(basis) != 1:
        raise GradingError(f"kernel of E^T has dimension {len(basis)}, expected 1")
    v = basis[0]
    first = next(x for x in v if x)
    if first < 0:
        v = [-x for x in v]
    return tuple(v)
