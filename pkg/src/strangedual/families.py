"""Invertible polynomials with [G_f : G_0] = 2 and their two dual partners.

A :class:`FamilyDescriptor` names one row of the classification together with
its integer parameters.  From it we build the exponent matrix of f, the
four-monomial special polynomial **f**, the pair (f~1, f~2) cutting out the
dual complete intersection, and (for virtual types) the polynomial **h**.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple

from . import linalg
from .grading import (
    ExponentMatrix,
    GradingError,
    WeightSystem,
    canonical_weights,
    gorenstein_parameter,
    grading_index,
    kernel_primitive,
    reduce_weights,
)
from .polyalg import SparsePoly, newton_polygon_at_infinity, substitute, top_faces_split

XYZ = ("x", "y", "z")
XYZW = ("X", "Y", "Z", "W")

BASE_TYPES = ("I", "IIA", "IIB", "III", "IV")
PAIR_TYPES = ("I", "IIA", "IIB", "IIB#", "III", "IV", "IV#")
VIRTUAL_TYPES = ("IIA", "IIB", "IIB#", "III", "IV1", "IV2", "IV2#")
ALL_TAGS = ("I", "IIA", "IIB", "IIB#", "III", "IV", "IV1", "IV2", "IV2#")

DEFAULT_BOUND = 60


class FamilyError(ValueError):
    pass


class NotVirtualError(FamilyError):
    pass


def normalize_tag(tag: str) -> str:
    t = tag.strip().replace("♯", "#").replace("_", "").replace("sharp", "#")
    if t not in ALL_TAGS:
        raise FamilyError(f"unknown family type {tag!r}")
    return t


@dataclass(frozen=True, order=True)
class FamilyDescriptor:
    """A classification type with parameters (p1, p2, p3), or (p1, q2, q3) for type III."""

    type_tag: str
    params: Tuple[int, int, int]

    def __post_init__(self):
        object.__setattr__(self, "type_tag", normalize_tag(self.type_tag))
        ps = tuple(int(p) for p in self.params)
        if len(ps) != 3:
            raise FamilyError("three parameters expected")
        object.__setattr__(self, "params", ps)

    @property
    def base_type(self) -> str:
        """Type of the underlying invertible polynomial f."""
        return {"IIB#": "IIB", "IV1": "IV", "IV2": "IV", "IV2#": "IV"}.get(self.type_tag, self.type_tag)

    @property
    def pair_type(self) -> str:
        """Row of the 4x3 matrix classification this descriptor uses."""
        return {"IV1": "IV", "IV2": "IV", "IV2#": "IV#"}.get(self.type_tag, self.type_tag)

    @property
    def is_sharp(self) -> bool:
        return self.type_tag.endswith("#")

    def label(self) -> str:
        return f"{self.type_tag}({','.join(map(str, self.params))})"

    def __str__(self):
        return self.label()

    def to_json(self) -> dict:
        return {"type": self.type_tag, "params": list(self.params)}

    @classmethod
    def from_json(cls, data) -> "FamilyDescriptor":
        return cls(data["type"], tuple(data["params"]))

    @classmethod
    def parse(cls, text: str) -> "FamilyDescriptor":
        """Accepts ``IIA(2,3,18)``, ``IIA 2 3 18`` or ``IIA:2,3,18``."""
        t = text.replace("(", " ").replace(")", " ").replace(",", " ").replace(":", " ").split()
        if len(t) != 4:
            raise FamilyError(f"cannot parse family descriptor {text!r}")
        try:
            return cls(t[0], tuple(int(v) for v in t[1:]))
        except ValueError:
            raise FamilyError(f"cannot parse family descriptor {text!r}") from None


def _q(a, b) -> Fraction:
    return Fraction(a, b)


def _int(value: Fraction, what: str) -> int:
    if Fraction(value).denominator != 1:
        raise FamilyError(f"{what} = {value} is not an integer")
    return int(value)


# --------------------------------------------------------------------------
# parameter constraints

def check_invertible_constraints(fam: FamilyDescriptor) -> None:
    """Raise FamilyError unless the parameters satisfy the type's parity/divisibility rules."""
    p1, p2, p3 = fam.params
    if min(fam.params) < 1:
        raise FamilyError(f"{fam}: parameters must be positive")
    t = fam.base_type
    if t == "I":
        if p1 % 2 or p2 % 2 or p3 < 2:
            raise FamilyError(f"{fam}: type I needs p1, p2 even and p3 >= 2")
    elif t == "IIA":
        if p2 % 2 == 0 or p2 < 3 or p3 % p2 or (p3 // p2) % 2 or p1 < 2:
            raise FamilyError(f"{fam}: type IIA needs p2 odd, p3/p2 even")
    elif t == "IIB":
        if p1 % 2 or p2 % 2 or p3 % p2:
            raise FamilyError(f"{fam}: type IIB needs p1, p2 even, p2 | p3")
        if p3 == p2:
            raise FamilyError(f"{fam}: monomial y*z is a mass term (p3/p2 = 1)")
    elif t == "III":
        if p2 % 2 or p3 % 2 or p1 < 2:
            raise FamilyError(f"{fam}: type III needs q2, q3 even")
    elif t == "IV":
        if p1 % 2 == 0 or p1 < 3 or p2 % p1 or (p2 // p1) % 2 or p3 % p2:
            raise FamilyError(f"{fam}: type IV needs p1 odd, p2/p1 even, p2 | p3")
        if p3 == p2:
            raise FamilyError(f"{fam}: monomial y*z is a mass term (p3/p2 = 1)")
    tag = fam.type_tag
    if tag in ("IIB#",) and p2 != 2:
        raise FamilyError(f"{fam}: IIB# needs p2 = 2")
    if tag in ("IV2", "IV2#") and p2 != 2 * p1:
        raise FamilyError(f"{fam}: {tag} needs p2/p1 = 2")
    if tag == "IV1" and p1 != 3:
        raise FamilyError(f"{fam}: IV1 needs p1 = 3")


def exponent_matrix(fam: FamilyDescriptor) -> ExponentMatrix:
    """3x3 exponent matrix of f, rows in the order the monomials are listed."""
    check_invertible_constraints(fam)
    p1, p2, p3 = fam.params
    t = fam.base_type
    if t == "I":
        rows = [(p1, 0, 0), (0, p2, 0), (0, 0, p3)]
    elif t == "IIA":
        rows = [(p2, 0, 0), (1, p3 // p2, 0), (0, 0, p1)]
    elif t == "IIB":
        rows = [(p1, 0, 0), (0, p2, 0), (0, 1, p3 // p2)]
    elif t == "III":
        rows = [(p2 + 1, 1, 0), (1, p3 + 1, 0), (0, 0, p1)]
    else:
        rows = [(p1, 0, 0), (1, p2 // p1, 0), (0, 1, p3 // p2)]
    return ExponentMatrix.of(rows)


def invertible_polynomial(fam: FamilyDescriptor) -> SparsePoly:
    return _poly_from_rows(exponent_matrix(fam).rows, [1, 1, 1])


def _poly_from_rows(rows, coeffs, variables=XYZ) -> SparsePoly:
    return SparsePoly(variables, {tuple(r): c for r, c in zip(rows, coeffs)})


# --------------------------------------------------------------------------
# the 4x3 extension and the special polynomial

def extended_matrix(fam: FamilyDescriptor) -> Tuple[ExponentMatrix, Tuple[int, ...]]:
    """4x3 matrix of the four-monomial polynomial F together with the special coefficients."""
    E = exponent_matrix(fam)
    p1, p2, p3 = fam.params
    t = fam.pair_type
    if t == "I":
        extra = (_int(_q(p1, 2), "p1/2"), _int(_q(p2, 2), "p2/2"), 0)
    elif t == "IIA":
        extra = (_int(_q(p2 + 1, 2), "(p2+1)/2"), _int(_q(p3, 2 * p2), "p3/(2p2)"), 0)
    elif t == "IIB":
        extra = (_int(_q(p1, 2), "p1/2"), _int(_q(p2, 2), "p2/2"), 0)
    elif t == "III":
        extra = (p2 // 2 + 1, p3 // 2 + 1, 0)
    elif t == "IV":
        extra = (_int(_q(p1 + 1, 2), "(p1+1)/2"), _int(_q(p2, 2 * p1), "p2/(2p1)"), 0)
    elif t == "IIB#":
        rows = [(p1 // 2, 0, p3 // 2), (0, 2, 0), (0, 1, p3 // 2), (p1 // 2, 1, 0)]
        return ExponentMatrix.of(rows), (-1, 1, 1, -1)
    else:  # IV#
        a = p3 // p2
        rows = [((p1 - 1) // 2, 0, a), (1, 2, 0), (0, 1, a), ((p1 + 1) // 2, 1, 0)]
        return ExponentMatrix.of(rows), (-1, 1, 1, -1)
    return ExponentMatrix.of(list(E.rows) + [extra]), (1, 1, 1, -2)


def build_special_F(fam: FamilyDescriptor) -> SparsePoly:
    """The four-monomial polynomial **f** with a non-isolated singularity."""
    E, coeffs = extended_matrix(fam)
    return _poly_from_rows(E.rows, coeffs)


# --------------------------------------------------------------------------
# the dual pair

@dataclass(frozen=True)
class DualPair:
    """The pair (f1, f2) with weights normalized so that deg f2 is the reduced degree of f."""

    f1: SparsePoly
    f2: SparsePoly
    weights: WeightSystem

    @property
    def reduced_weights(self) -> WeightSystem:
        return reduce_weights(self.weights)[0]

    def to_json(self) -> dict:
        return {"f1": str(self.f1), "f2": str(self.f2), "weights": self.weights.to_json()}


# generators of the degree-0 subring, as exponent vectors in (x, y, z, w)
_INVARIANTS = {
    (1, 1, 0, -2): [(2, 0, 0, 1), (0, 2, 0, 1), (0, 0, 1, 0), (1, 1, 0, 1)],
    (1, 1, -1, -1): [(1, 0, 0, 1), (0, 1, 1, 0), (1, 0, 1, 0), (0, 1, 0, 1)],
}
# generator whose exponent is minimized when the rewriting is not unique
_FREE_GENERATOR = {(1, 1, 0, -2): 3, (1, 1, -1, -1): 2}


@lru_cache(maxsize=None)
def _invariant_solver(kernel: Tuple[int, ...]):
    """Three independent coordinate equations for the non-free generators, with
    their integer adjugate and determinant."""
    G = linalg.transpose(_INVARIANTS[kernel])  # column i = generator i
    free = _FREE_GENERATOR[kernel]
    others = [i for i in range(4) if i != free]
    for rows in ((0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)):
        A = [[G[r][c] for c in others] for r in rows]
        d = linalg.det(A)
        if d:
            adj = [[(-1) ** (i + j) * linalg.det([[A[r][c] for c in range(3) if c != i]
                                                    for r in range(3) if r != j])
                    for j in range(3)] for i in range(3)]
            return G, free, others, rows, adj, d
    raise AssertionError(f"generators of {kernel} are dependent")


def rewrite_in_invariants(exps: Sequence[int], kernel: Tuple[int, ...]) -> Tuple[int, ...]:
    """Write x^a y^b z^c w^e as a monomial in the invariant coordinates X, Y, Z, W."""
    G, free, others, rows, adj, d = _invariant_solver(kernel)
    exps = list(exps)
    for t in range(max(exps) + 1):
        rhs = [exps[r] - t * G[r][free] for r in rows]
        sol = []
        for i in range(3):
            num = sum(adj[i][j] * rhs[j] for j in range(3))
            if num % d or num * d < 0:
                break
            sol.append(num // d)
        else:
            out = [0] * 4
            for c, v in zip(others, sol):
                out[c] = v
            out[free] = t
            if linalg.matvec(G, out) == exps:
                return tuple(out)
    raise FamilyError(f"monomial {tuple(exps)} is not in the invariant subring for kernel {kernel}")


def weights_from_homogeneity(polys: Sequence[SparsePoly]) -> WeightSystem:
    """Reduced weights making each polynomial weighted homogeneous, via the integer kernel."""
    n = polys[0].nvars()
    k = len(polys)
    eqs = []
    for j, p in enumerate(polys):
        sup = p.support()
        for e in sup:
            row = list(e) + [0] * k
            row[n + j] = -1
            eqs.append(row)
    basis = linalg.nullspace(eqs)
    if len(basis) != 1:
        raise FamilyError(f"homogeneity constraints leave a {len(basis)}-dimensional solution space")
    v = basis[0]
    if v[0] < 0:
        v = [-c for c in v]
    if any(c <= 0 for c in v):
        raise FamilyError(f"no positive weight system: {v}")
    return WeightSystem(tuple(v[:n]), tuple(v[n:]))


def transposed_polynomial(fam: FamilyDescriptor) -> SparsePoly:
    """f~ in (x, y, z, w): one monomial per column of the 4x3 matrix."""
    E, _ = extended_matrix(fam)
    cols = linalg.transpose(E.as_list())
    return SparsePoly(("x", "y", "z", "w"), {tuple(c): 1 for c in cols})


@lru_cache(maxsize=None)
def build_dual_pair(fam: FamilyDescriptor) -> DualPair:
    E, _ = extended_matrix(fam)
    kernel = kernel_primitive(E)
    if kernel not in _INVARIANTS:
        raise FamilyError(f"{fam}: unexpected kernel vector {kernel}")
    ft = transposed_polynomial(fam)
    f2 = SparsePoly(XYZW, {rewrite_in_invariants(e, kernel): c for e, c in ft.items()})
    if kernel == (1, 1, 0, -2):
        f1 = SparsePoly(XYZW, {(1, 1, 0, 0): 1, (0, 0, 0, 2): -1})
    else:
        f1 = SparsePoly(XYZW, {(1, 1, 0, 0): 1, (0, 0, 1, 1): -1})
    W = weights_from_homogeneity([f1, f2])
    d_f = reduced_weights_of_f(fam).degrees[0]
    if d_f % W.degrees[1]:
        raise FamilyError(f"{fam}: pair degree {W.degrees[1]} does not divide {d_f}")
    s = d_f // W.degrees[1]
    return DualPair(f1, f2, WeightSystem(tuple(s * w for w in W.weights), tuple(s * d for d in W.degrees)))


# --------------------------------------------------------------------------
# virtual singularities

# type -> (variable to shift, other variable, exponent as a function of params)
_COORDINATE_CHANGES = {
    "I": ("y", "x", lambda p1, p2, p3: _q(p1, 2)),
    "IIA": ("x", "y", lambda p1, p2, p3: _q(p3, 6)),
    "IIA-2": ("y", "x", lambda p1, p2, p3: _q(p2 - 1, 2)),
    "IIB-1": ("x", "y", lambda p1, p2, p3: _q(p2, 2)),
    "IIB": ("y", "x", lambda p1, p2, p3: _q(p1, 2)),
    "IIB#": ("y", "x", lambda p1, p2, p3: _q(p1, 2)),
    "III": ("x", "y", lambda p1, p2, p3: _q(p3, 2)),
    "IV1": ("x", "y", lambda p1, p2, p3: _q(p2, 6)),
    "IV2": ("y", "x", lambda p1, p2, p3: _q(p1 - 1, 2)),
    "IV2#": ("y", "x", lambda p1, p2, p3: _q(p1 - 1, 2)),
}


# Condition rows per **f**, in table order: (row, condition, yields four monomials).
# A row is applicable when its condition holds; when two rows apply to the same
# **f**, the later one determines the coordinate change.
_CONDITION_ROWS = {
    "I": [("I", lambda p1, p2, p3: p2 == 2, False)],
    "IIA": [
        ("IIA", lambda p1, p2, p3: p2 == 3, True),
        ("IIA-2", lambda p1, p2, p3: p3 == 2 * p2, False),
    ],
    "IIB": [
        ("IIB-1", lambda p1, p2, p3: p1 == 2, False),
        ("IIB", lambda p1, p2, p3: p2 == 2, True),
    ],
    "IIB#": [("IIB#", lambda p1, p2, p3: p2 == 2, True)],
    "III": [("III", lambda p1, p2, p3: p2 == 2, True)],
    "IV": [
        ("IV1", lambda p1, p2, p3: p1 == 3, True),
        ("IV2", lambda p1, p2, p3: p2 == 2 * p1, True),
    ],
    "IV#": [("IV2#", lambda p1, p2, p3: p2 == 2 * p1, True)],
}


def applicable_rows(fam: FamilyDescriptor) -> List[str]:
    """Condition rows whose condition holds for the parameters, in table order."""
    rows = _CONDITION_ROWS[fam.pair_type]
    return [name for name, cond, _ in rows if cond(*fam.params)]


def governing_row(fam: FamilyDescriptor) -> Optional[str]:
    """The last applicable condition row, which fixes the coordinate change."""
    rows = applicable_rows(fam)
    return rows[-1] if rows else None


def virtual_condition(fam: FamilyDescriptor) -> bool:
    """Whether the descriptor names a virtual singularity (four-monomial **h**)."""
    if fam.type_tag not in VIRTUAL_TYPES:
        return False
    return governing_row(fam) == fam.type_tag


def square_completions(F: SparsePoly) -> List[Tuple[str, str, int]]:
    """All ways of writing **f** = u + v (s - t^e)^2 with monomials u, v, as (s, t, e).

    The coordinate change is then s -> s + t^e.
    """
    V = F.variables
    found = []
    for s, t in (("x", "y"), ("y", "x")):
        si, ti = V.index(s), V.index(t)
        for ex, c in F.items():
            if ex[si] < 2 or c != 1:
                continue
            vexp = list(ex)
            vexp[si] -= 2
            for ex2, c2 in F.items():
                if c2 != 1 or ex2 == ex:
                    continue
                diff = [a - b for a, b in zip(ex2, vexp)]
                if any(diff[i] for i in range(3) if i != ti) or diff[ti] <= 0 or diff[ti] % 2:
                    continue
                e = diff[ti] // 2
                v = SparsePoly.monomial(V, vexp)
                sq = (SparsePoly.var(V, s) - SparsePoly.var(V, t) ** e) ** 2
                u = F - v * sq
                if len(u) == 1 and (s, t, e) not in found:
                    found.append((s, t, e))
    return found


def coordinate_change(fam: FamilyDescriptor, row: Optional[str] = None) -> Tuple[str, str, int]:
    """(shifted variable, other variable, exponent e) of the change s -> s + t^e."""
    key = row or fam.type_tag
    if key not in _COORDINATE_CHANGES:
        raise NotVirtualError(f"{fam}: no coordinate change for row {key}")
    s, t, ef = _COORDINATE_CHANGES[key]
    e = _int(ef(*fam.params), f"coordinate change exponent for {fam}")
    if not fam.is_sharp:
        if (s, t, e) not in square_completions(build_special_F(fam)):
            raise FamilyError(f"{fam}: **f** does not have the square-completion shape for {s} -> {s}+{t}^{e}")
    return s, t, e


def transform_cusp(fam: FamilyDescriptor, row: Optional[str] = None) -> SparsePoly:
    """Apply the coordinate change to **f** - xyz and drop the -xyz term again."""
    F = build_special_F(fam)
    V = F.variables
    xyz = SparsePoly.monomial(V, (1, 1, 1))
    s, t, e = coordinate_change(fam, row)
    shifted = SparsePoly.var(V, s) + SparsePoly.var(V, t) ** e
    return substitute(F - xyz, s, shifted) + xyz


@lru_cache(maxsize=None)
def build_virtual(fam: FamilyDescriptor) -> SparsePoly:
    """The four-monomial polynomial **h** of a virtual singularity."""
    if not virtual_condition(fam):
        raise NotVirtualError(f"{fam} is not a virtual family (its h has fewer than four monomials)")
    check_family(fam)
    h = transform_cusp(fam)
    if len(h) != 4:
        raise NotVirtualError(f"{fam}: h has {len(h)} monomials")
    return h


def reduced_weights_of_f(fam: FamilyDescriptor) -> WeightSystem:
    return reduce_weights(canonical_weights(exponent_matrix(fam)))[0]


@lru_cache(maxsize=None)
def split_virtual(fam: FamilyDescriptor) -> Tuple[SparsePoly, SparsePoly]:
    h = build_virtual(fam)
    return top_faces_split(h, reduced_weights_of_f(fam).weights)


def face_weights(h: SparsePoly) -> WeightSystem:
    """Canonical weights of a 3-monomial face polynomial (E w = |det E| 1)."""
    if len(h) != 3:
        raise FamilyError(f"{h} is not a 3-monomial polynomial")
    return canonical_weights(ExponentMatrix.of(h.support()))


def virtual_weight_systems(fam: FamilyDescriptor) -> Tuple[WeightSystem, WeightSystem]:
    h1, h2 = split_virtual(fam)
    return face_weights(h1), face_weights(h2)


# --------------------------------------------------------------------------
# validity, classification, enumeration

def check_family(fam: FamilyDescriptor) -> None:
    """Raise FamilyError unless fam is a valid member of its type with [G_f:G_0] = 2."""
    err = _family_error(fam)
    if err is not None:
        raise err[0](err[1])


@lru_cache(maxsize=None)
def _family_error(fam: FamilyDescriptor):
    try:
        check_invertible_constraints(fam)
        E = exponent_matrix(fam)
        idx = grading_index(E)
        if idx != 2:
            raise FamilyError(f"{fam}: grading index is {idx}, not 2")
        extended_matrix(fam)
    except (FamilyError, GradingError) as exc:
        return type(exc), str(exc)
    return None


def is_valid(fam: FamilyDescriptor) -> bool:
    try:
        check_family(fam)
    except (FamilyError, GradingError):
        return False
    return True


def _shape_of(rows) -> Optional[Tuple[str, Tuple[int, int, int], Tuple[int, int, int]]]:
    """Recognise an exponent matrix (up to permutations) as one of the classified shapes.

    Returns (type, params, variable permutation) where the permutation maps the
    normalized variable index to the input's variable index.  Types I and III
    match in two parameter orders; the one with an applicable transformation
    row wins, then the smaller parameters.
    """
    from itertools import permutations

    found = []
    for perm in permutations(range(3)):
        for rperm in permutations(range(3)):
            R = [[rows[rperm[i]][perm[j]] for j in range(3)] for i in range(3)]
            (a, b, c), (d, e, f), (g, h, k) = R
            # Fermat
            if b == c == d == f == g == h == 0:
                cand = ("I", (a, e, k))
            elif b == c == f == g == h == 0 and d == 1:
                cand = ("IIA", (k, a, a * e))
            elif b == c == d == g == 0 and h == 1:
                cand = ("IIB", (a, e, e * k))
            elif b == 1 and d == 1 and c == f == g == h == 0:
                cand = ("III", (k, a - 1, e - 1))
            elif b == c == f == g == 0 and d == 1 and h == 1:
                cand = ("IV", (a, a * e, a * e * k))
            else:
                continue
            fam = FamilyDescriptor(cand[0], cand[1])
            try:
                check_invertible_constraints(fam)
            except FamilyError:
                continue
            found.append((not applicable_rows(fam), cand[1], cand[0], perm))
    if not found:
        return None
    _, params, tag, perm = min(found)
    return tag, params, perm


def classify_invertible(E: ExponentMatrix) -> FamilyDescriptor:
    """Identify a 3x3 exponent matrix with one of the five types (index 2 required)."""
    if E.shape != (3, 3):
        raise FamilyError("classification needs a 3x3 exponent matrix")
    if E.det() == 0:
        raise FamilyError("exponent matrix is singular")
    idx = grading_index(E)
    if idx != 2:
        raise FamilyError(f"grading index is {idx}, not 2")
    shape = _shape_of(E.as_list())
    if shape is None:
        raise FamilyError(f"no matching type for exponent matrix {E.rows}")
    fam = FamilyDescriptor(shape[0], shape[1])
    check_family(fam)
    return fam


def classify_polynomial(f: SparsePoly) -> FamilyDescriptor:
    if f.nvars() != 3 or len(f) != 3:
        raise FamilyError("an invertible polynomial in three variables has exactly three monomials")
    return classify_invertible(ExponentMatrix.of(f.support()))


def _candidate_params(tag: str, bound: int):
    """Parameter triples passing the cheap parity and divisibility filters for ``tag``."""
    r = range(1, bound + 1)
    base = FamilyDescriptor(tag, (1, 1, 1)).base_type
    for p1, p2, p3 in product(r, r, r):
        if base == "I" and (p1 % 2 or p2 % 2):
            continue
        if base == "IIA" and (p2 % 2 == 0 or p3 % (2 * p2)):
            continue
        if base == "IIB" and (p1 % 2 or p2 % 2 or p3 % p2):
            continue
        if base == "III" and (p2 % 2 or p3 % 2):
            continue
        if base == "IV" and (p1 % 2 == 0 or p2 % (2 * p1) or p3 % p2):
            continue
        yield FamilyDescriptor(tag, (p1, p2, p3))


@lru_cache(maxsize=None)
def family_grid(bound: int = DEFAULT_BOUND, tags: Tuple[str, ...] = ALL_TAGS) -> Tuple[FamilyDescriptor, ...]:
    """Every valid descriptor with all parameters <= bound, in canonical order.

    Virtual tags (IV1, IV2, IV2#) only include members satisfying their
    defining condition; IIA, IIB, IIB#, III are included whether virtual or not.
    """
    out = []
    for tag in tags:
        for fam in _candidate_params(tag, bound):
            if tag in ("IV1", "IV2", "IV2#") and not virtual_condition(fam):
                continue
            if is_valid(fam):
                out.append(fam)
    return tuple(sorted(out, key=_canonical_key))


def virtual_grid(bound: int = DEFAULT_BOUND) -> Tuple[FamilyDescriptor, ...]:
    return tuple(f for f in family_grid(bound) if virtual_condition(f))


def _canonical_key(fam: FamilyDescriptor):
    return (ALL_TAGS.index(fam.type_tag), fam.params)


def gorenstein_of(fam: FamilyDescriptor) -> int:
    return gorenstein_parameter(reduced_weights_of_f(fam))


def enumerate_by_gorenstein(a: int, bound: int = DEFAULT_BOUND) -> List[FamilyDescriptor]:
    """Virtual families with parameters <= bound whose f has Gorenstein parameter a (a < 0: all negative)."""
    out = []
    for fam in virtual_grid(bound):
        g = gorenstein_of(fam)
        if (a < 0 and g < 0) or g == a:
            out.append(fam)
    return out
