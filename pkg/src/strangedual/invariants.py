"""Dolgachev and Gabrielov numbers on both sides of the duality.

Dolgachev numbers are computed from the orbit structure of the C*-action:
for every coordinate stratum (the points whose nonzero coordinates are exactly
a given subset) with non-trivial generic isotropy, the equations restricted to
the stratum are rewritten on the quotient torus and the orbits are counted
exactly.  Gabrielov numbers are evaluated from their closed forms.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

from . import linalg
from .families import (
    FamilyDescriptor,
    FamilyError,
    build_dual_pair,
    check_family,
    split_virtual,
    virtual_condition,
    virtual_weight_systems,
)
from .grading import GradingError, WeightSystem, reduce_weights
from .polyalg import PolyError, SparsePoly


class OrbitError(ValueError):
    pass


class UnsupportedStratum(OrbitError):
    """The restricted system is neither binomial nor reducible to one variable."""


@dataclass(frozen=True)
class OrbitRecord:
    stratum: Tuple[str, ...]
    description: str
    isotropy_order: int
    count: int
    principal: bool
    singular: int = 0  # how many of the `count` orbits lie in the singular locus
    note: str = ""

    def to_json(self) -> dict:
        return {
            "stratum": list(self.stratum),
            "description": self.description,
            "isotropy_order": self.isotropy_order,
            "count": self.count,
            "principal": self.principal,
            "singular": self.singular,
            "note": self.note,
        }


# --------------------------------------------------------------------------
# univariate polynomials over Q, coefficient lists lowest degree first

def _trim(p: List[Fraction]) -> List[Fraction]:
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_mod(a: List[Fraction], b: List[Fraction]) -> List[Fraction]:
    a = list(a)
    while len(a) >= len(b) and a:
        q = a[-1] / b[-1]
        shift = len(a) - len(b)
        for i, c in enumerate(b):
            a[shift + i] -= q * c
        _trim(a)
    return a


def poly_gcd(a: Sequence, b: Sequence) -> List[Fraction]:
    a = _trim([Fraction(x) for x in a])
    b = _trim([Fraction(x) for x in b])
    while b:
        a, b = b, _poly_mod(a, b)
    if not a:
        return []
    return [c / a[-1] for c in a]


def _derivative(p: Sequence[Fraction]) -> List[Fraction]:
    return _trim([i * p[i] for i in range(1, len(p))])


def distinct_root_count(p: Sequence) -> int:
    """Number of distinct complex roots of a nonzero polynomial (lowest degree first)."""
    p = _trim([Fraction(x) for x in p])
    if not p:
        raise OrbitError("zero polynomial has infinitely many roots")
    g = poly_gcd(p, _derivative(p))
    return (len(p) - 1) - (len(g) - 1)


def _common_root_poly(polys: Sequence[Sequence]) -> List[Fraction]:
    g: List[Fraction] = []
    for p in polys:
        g = poly_gcd(g, p) if g else _trim([Fraction(x) for x in p])
    return g


# --------------------------------------------------------------------------
# the quotient torus of a stratum

class _QuotientTorus:
    """Coordinates on (C*)^S / C* through a lattice basis of ker(w_S)."""

    def __init__(self, weights: Sequence[int]):
        self.weights = list(weights)
        U, D, V, Vinv = linalg.smith_normal_form_with_inverse([self.weights])
        self.V = V
        self.Vinv = Vinv
        self.dim = len(self.weights) - 1
        self.isotropy = D[0][0]

    def coords(self, diff: Sequence[int]) -> Tuple[int, ...]:
        y = linalg.matvec(self.Vinv, diff)
        if y[0] != 0:
            raise OrbitError(f"exponent difference {tuple(diff)} is not weight-neutral")
        return tuple(int(v) for v in y[1:])

    def laurent(self, terms: Sequence[Tuple[Tuple[int, ...], Fraction]]) -> Dict[Tuple[int, ...], Fraction]:
        """Dehomogenize: divide by the first monomial and express the quotients in torus coordinates."""
        base = terms[0][0]
        out: Dict[Tuple[int, ...], Fraction] = {}
        for a, c in terms:
            k = self.coords([x - y for x, y in zip(a, base)])
            out[k] = out.get(k, Fraction(0)) + c
        return {k: c for k, c in out.items() if c != 0}


def _univariate(laurent: Dict[Tuple[int, ...], Fraction]) -> List[Fraction]:
    lo = min(k[0] for k in laurent)
    hi = max(k[0] for k in laurent)
    p = [Fraction(0)] * (hi - lo + 1)
    for k, c in laurent.items():
        p[k[0] - lo] += c
    return p


def _restricted_terms(p: SparsePoly, S: Sequence[int]) -> List[Tuple[Tuple[int, ...], Fraction]]:
    keep = set(S)
    out = []
    for e, c in p.items():
        if all(e[i] == 0 for i in range(len(e)) if i not in keep):
            out.append((tuple(e[i] for i in S), c))
    return out


@dataclass
class StratumSolution:
    """Orbits of the C*-action on V ∩ (C*)^S."""

    isotropy: int
    count: Optional[int]  # None: a positive-dimensional family of orbits
    singular: int = 0
    polys: List[List[Fraction]] = field(default_factory=list)
    torus: Optional[_QuotientTorus] = None


def _binomial_count(rows: List[Tuple[int, ...]], consts: List[Fraction], dim: int):
    """Solve u^{b_i} = c_i on a torus of dimension dim.

    Returns (rank, solution count or None, invariant factors, c', V) so that
    in coordinates t = u^{V^{-1}} the system reads t_i^{d_i} = c'_i.
    """
    U, D, V = linalg.smith_normal_form([list(r) for r in rows])
    k = len(rows)
    diag = [D[i][i] for i in range(min(k, dim))]
    r = sum(1 for d in diag if d)
    cprime = []
    for i in range(k):
        val = Fraction(1)
        for j in range(k):
            if U[i][j]:
                val *= Fraction(consts[j]) ** U[i][j]
        cprime.append(val)
    if any(cprime[i] != 1 for i in range(r, k)):
        return r, 0, diag[:r], cprime, V
    if r < dim:
        return r, None, diag[:r], cprime, V
    n = 1
    for d in diag[:r]:
        n *= d
    return r, n, diag[:r], cprime, V


def solve_stratum(equations: Sequence[SparsePoly], weights: Sequence[int], S: Sequence[int],
                  singular_test: Optional[Sequence[SparsePoly]] = None) -> Optional[StratumSolution]:
    """Count C*-orbits of {equations = 0} inside the coordinate stratum S.

    Returns None if the stratum meets the variety nowhere.  When
    `singular_test` (the partial derivatives) is given, also counts how many
    of the orbits lie in their common zero set.
    """
    wS = [weights[i] for i in S]
    torus = _QuotientTorus(wS)
    restricted = [_restricted_terms(p, S) for p in equations]
    restricted = [t for t in restricted if t]
    if any(len(t) == 1 for t in restricted):
        return None
    if torus.dim == 0:
        # a coordinate axis: restricted equations are monomials or zero
        return StratumSolution(torus.isotropy, 1, _axis_singular(singular_test, S), torus=torus)
    laurents = [torus.laurent(t) for t in restricted]
    if any(len(l) == 1 for l in laurents):
        return None
    if not laurents:
        return StratumSolution(torus.isotropy, None, torus=torus)
    binom = [l for l in laurents if len(l) == 2]
    other = [l for l in laurents if len(l) > 2]
    if torus.dim == 1:
        polys = [_univariate(l) for l in laurents]
        g = _common_root_poly(polys)
        if len(g) <= 1:
            return None
        count = distinct_root_count(g)
        sing = _singular_univariate(singular_test, S, torus, g)
        return StratumSolution(torus.isotropy, count, sing, polys=[g], torus=torus)
    rows, consts = [], []
    for l in binom:
        (k0, c0), (k1, c1) = sorted(l.items())
        rows.append(tuple(a - b for a, b in zip(k1, k0)))
        consts.append(-c0 / c1)
    r, count, diag, cprime, V = _binomial_count(rows, consts, torus.dim)
    if count == 0:
        return None
    if not other:
        if singular_test is not None and count is not None:
            raise UnsupportedStratum("singular-locus test on a binomial stratum of dimension > 1")
        return StratumSolution(torus.isotropy, count, torus=torus)
    if r != torus.dim - 1:
        raise UnsupportedStratum(f"binomial part of rank {r} on a {torus.dim}-dimensional torus")
    # residual equations in the one free coordinate t_r
    polys = []
    for l in other:
        res: Dict[int, Fraction] = {}
        for k, c in l.items():
            e = linalg.matvec(linalg.transpose(V), k)
            val = Fraction(c)
            for i in range(r):
                if e[i] % diag[i]:
                    raise UnsupportedStratum("residual equation depends on a root of a binomial")
                val *= cprime[i] ** (e[i] // diag[i])
            res[e[r]] = res.get(e[r], Fraction(0)) + val
        res = {k: c for k, c in res.items() if c != 0}
        if len(res) <= 1:
            return None
        polys.append(_univariate({(k,): c for k, c in res.items()}))
    g = _common_root_poly(polys)
    if len(g) <= 1:
        return None
    mult = 1
    for d in diag:
        mult *= d
    if singular_test is not None:
        raise UnsupportedStratum("singular-locus test on a mixed stratum")
    return StratumSolution(torus.isotropy, mult * distinct_root_count(g), torus=torus)


def _axis_singular(partials, S) -> int:
    if partials is None:
        return 0
    return int(all(not _restricted_terms(p, S) for p in partials))


def _singular_univariate(partials, S, torus: _QuotientTorus, g: List[Fraction]) -> int:
    if partials is None:
        return 0
    common = g
    for p in partials:
        terms = _restricted_terms(p, S)
        if not terms:
            continue
        lap = torus.laurent(terms)
        if len(lap) == 1:
            return 0
        common = poly_gcd(common, _univariate(lap))
        if len(common) <= 1:
            return 0
    return distinct_root_count(common)


# --------------------------------------------------------------------------
# hypersurface side

def _describe(equations, S, variables) -> str:
    names = [variables[i] for i in S]
    others = [v for i, v in enumerate(variables) if i not in S]
    parts = [f"{v}=0" for v in others]
    for p in equations:
        terms = _restricted_terms(p, S)
        if terms:
            sub = SparsePoly(variables, {tuple(_embed(a, S, len(variables))): c for a, c in terms})
            parts.append(f"{sub}=0")
    return ", ".join(parts) if parts else "open torus in " + ",".join(names)


def _embed(a, S, n):
    out = [0] * n
    for i, j in enumerate(S):
        out[j] = a[i]
    return out


def hyperplane_components(h: SparsePoly) -> List[int]:
    """Indices k with x_k dividing h, i.e. {x_k = 0} contained in V(h)."""
    n = h.nvars()
    return [k for k in range(n) if all(e[k] >= 1 for e in h.support())]


def _effective(W: WeightSystem) -> WeightSystem:
    """Weights of the effective action; isotropy is measured modulo the global kernel."""
    return reduce_weights(W)[0]


def exceptional_orbits_surface(h: SparsePoly, W: WeightSystem, strict: bool = True) -> List[OrbitRecord]:
    """Exceptional C*-orbits on {h = 0} in C^3 with principal ones marked.

    Case (A), V contains a coordinate hyperplane: orbits inside that hyperplane
    are not principal.  Case (B): orbits in the singular locus are not
    principal.  With strict=True anything other than two principal orbits
    raises OrbitError.
    """
    if h.nvars() != 3:
        raise OrbitError("surface orbit analysis needs three variables")
    if h.is_weighted_homogeneous(W.weights) is None:
        raise OrbitError(f"{h} is not weighted homogeneous for {W}")
    W = _effective(W)
    V = h.variables
    planes = hyperplane_components(h)
    partials = [h.diff(v) for v in V]
    records = []
    for size in (1, 2, 3):
        for S in combinations(range(3), size):
            g = linalg.gcd_list(W.weights[i] for i in S)
            if g == 1:
                continue
            sol = solve_stratum([h], W.weights, S, singular_test=None if planes else partials)
            if sol is None:
                continue
            desc = _describe([h], S, V)
            names = tuple(V[i] for i in S)
            if sol.count is None:
                records.append(OrbitRecord(names, desc, g, 0, False, note="positive-dimensional family"))
                continue
            if planes and any(k not in S for k in planes):
                records.append(OrbitRecord(names, desc, g, sol.count, False, note="inside a hyperplane component"))
                continue
            if sol.singular:
                records.append(OrbitRecord(names, desc, g, sol.singular, False, sol.singular, note="singular locus"))
            if sol.count - sol.singular:
                records.append(OrbitRecord(names, desc, g, sol.count - sol.singular, True))
    if strict:
        n = sum(r.count for r in records if r.principal)
        if n != 2:
            raise OrbitError(f"{n} principal orbits on {{{h} = 0}} (expected 2)")
        if any(r.note == "positive-dimensional family" for r in records):
            raise OrbitError(f"positive-dimensional family of exceptional orbits on {{{h} = 0}}")
    return records


def principal_orders(records: Sequence[OrbitRecord]) -> Tuple[int, ...]:
    out = []
    for r in records:
        if r.principal:
            out.extend([r.isotropy_order] * r.count)
    return tuple(sorted(out))


@dataclass(frozen=True)
class DolgachevVirtual:
    face1: Tuple[int, int]
    face2: Tuple[int, int]

    def as_tuple(self):
        return self.face1 + self.face2

    def __str__(self):
        return f"{self.face1[0]},{self.face1[1]};{self.face2[0]},{self.face2[1]}"


@lru_cache(maxsize=None)
def dolgachev_virtual(fam: FamilyDescriptor) -> DolgachevVirtual:
    h1, h2 = split_virtual(fam)
    W1, W2 = virtual_weight_systems(fam)
    a = principal_orders(exceptional_orbits_surface(h1, W1))
    b = principal_orders(exceptional_orbits_surface(h2, W2))
    return DolgachevVirtual(a, b)


# --------------------------------------------------------------------------
# complete intersection side

def exceptional_orbits_icis(f1: SparsePoly, f2: SparsePoly, W: WeightSystem) -> List[OrbitRecord]:
    V = f1.variables
    for p, d in ((f1, W.degrees[0]), (f2, W.degrees[1])):
        if p.is_weighted_homogeneous(W.weights) != d:
            raise OrbitError(f"{p} is not homogeneous of degree {d} for {W}")
    W = _effective(W)
    records = []
    for size in (1, 2, 3):
        for S in combinations(range(4), size):
            g = linalg.gcd_list(W.weights[i] for i in S)
            if g == 1:
                continue
            sol = solve_stratum([f1, f2], W.weights, S)
            if sol is None:
                continue
            names = tuple(V[i] for i in S)
            desc = _describe([f1, f2], S, V)
            if sol.count is None:
                raise OrbitError(f"positive-dimensional family of exceptional orbits on stratum {names}")
            records.append(OrbitRecord(names, desc, g, sol.count, True))
    return records


@lru_cache(maxsize=None)
def dolgachev_icis(fam: FamilyDescriptor) -> Tuple[int, int, int]:
    """Isotropy orders of the exceptional orbits of the dual complete intersection, sorted.

    Fewer than three exceptional orbits are padded with 1 (trivial isotropy).
    """
    pair = build_dual_pair(fam)
    orders = principal_orders(exceptional_orbits_icis(pair.f1, pair.f2, pair.weights))
    if len(orders) > 3:
        raise OrbitError(f"{fam}: {len(orders)} exceptional orbits on the complete intersection")
    return tuple(sorted((1,) * (3 - len(orders)) + orders))


# --------------------------------------------------------------------------
# closed forms

def _Q(a, b=1):
    return Fraction(a, b)


def _ints(values, fam) -> Tuple[int, ...]:
    out = []
    for v in values:
        v = Fraction(v)
        if v.denominator != 1 or v < 1:
            raise FamilyError(f"{fam}: closed form gives {v}")
        out.append(int(v))
    return tuple(out)


def gabrielov_virtual(fam: FamilyDescriptor) -> Tuple[int, int, int]:
    """Exponents (g1, g2, g3) of the cusp x^g1 + y^g2 + z^g3 - xyz for **h**."""
    if not virtual_condition(fam):
        raise FamilyError(f"{fam} is not virtual")
    p1, p2, p3 = (Fraction(p) for p in fam.params)
    t = fam.type_tag
    if t == "IIA":
        v = (p1, 3, (p3 / 3 - 1) * p1)
    elif t == "IIB":
        v = (p1, 2, (p3 / 2 - 1) * p1)
    elif t == "IIB#":
        v = (p3 / 2 * (p1 / 2 - 1) + p1 / 2, 2, p1 / 2 * (p3 / 2 - 1) + p3 / 2)
    elif t == "III":
        v = (p1, 2 * p1, p3 * p1)
    elif t == "IV1":
        v = (3, 3 * (p3 / p2 - 1), p3 / 3 - p3 / p2 + 1)
    elif t == "IV2":
        v = (p1, (p3 / p2 - 1) * p1, p3 / p1 - p3 / p2 + 1)
    else:  # IV2#
        v = ((p1 - 1) / 2 * (p3 / p2 + 1), p3 / p2 + 1, (p1 + 1) / 2 * (p3 / p2 - 1) + 1)
    return _ints(v, fam)


def gabrielov_icis(fam: FamilyDescriptor) -> Tuple[int, int, int, int]:
    """Exponents (g1, g2; g3, g4) of the cusp XY - Z^g1 - W^g2, X^g3 + Y^g4 - ZW."""
    check_family(fam)
    p1, p2, p3 = (Fraction(p) for p in fam.params)
    t = fam.pair_type
    if t == "I":
        v = (2, 2 * p3 - 2, p1 / 2, p2 / 2)
    elif t == "IIA":
        v = (2, 2 * p1 - 2, p1 * (p2 - 1) / 2, p3 / (2 * p2))
    elif t == "IIB":
        v = (2, 2 * p3 / p2 - 2, p1 / 2, p1 * (p2 - 1) / 2)
    elif t == "IIB#":
        v = (p3 / 2, p1 / 2, p3 / 2, p1 / 2)
    elif t == "III":
        v = (2, 2 * p1 - 2, p1, p3 / 2 * p1)
    elif t == "IV":
        v = (2, 2 * p3 / p2 - 2, p3 / p2 * (p1 - 1) / 2, (p2 - p1 + 1) / 2)
    else:  # IV#
        v = (p3 / p2, (p1 + 1) / 2, p3 / p2, p3 / p2 * (p1 - 1) / 2)
    return _ints(v, fam)


def dolgachev_virtual_closed(fam: FamilyDescriptor) -> Tuple[int, int, int, int]:
    """Closed-form Dolgachev numbers (a1, a2; a3, a4) of **h** by type."""
    if not virtual_condition(fam):
        raise FamilyError(f"{fam} is not virtual")
    p1, p2, p3 = (Fraction(p) for p in fam.params)
    t = fam.type_tag
    if t == "IIA":
        v = (2, 2 * p1 - 2, p1, p3 / 6)
    elif t == "IIB":
        v = (2, 2 * p3 / p2 - 2, p1 / 2, p1 / 2)
    elif t == "IIB#":
        v = (p3 / 2, p1 / 2, p3 / 2, p1 / 2)
    elif t == "III":
        v = (2, 2 * p1 - 2, p1, p3 / 2 * p1)
    elif t == "IV1":
        v = (2, 2 * p3 / p2 - 2, p3 / p2, (p2 - 2) / 2)
    elif t == "IV2":
        v = (2, 2 * p3 / p2 - 2, p3 / p2 * (p1 - 1) / 2, (p1 + 1) / 2)
    else:  # IV2#
        v = (p3 / p2, (p1 + 1) / 2, p3 / p2, p3 / p2 * (p1 - 1) / 2)
    return _ints(v, fam)


def dolgachev_icis_closed(fam: FamilyDescriptor) -> Tuple[int, int, int]:
    """Closed-form Dolgachev numbers of the dual pair by type."""
    check_family(fam)
    p1, p2, p3 = (Fraction(p) for p in fam.params)
    t = fam.pair_type
    if t == "I":
        v = (p1, p2, p3)
    elif t in ("IIA", "IIB"):
        v = (p1, p2, (p3 / p2 - 1) * p1)
    elif t == "IIB#":
        v = (p3 / 2 * (p1 / 2 - 1) + p1 / 2, 2, p1 / 2 * (p3 / 2 - 1) + p3 / 2)
    elif t == "III":
        v = (p1, p1 * p2, p1 * p3)
    elif t == "IV":
        v = (p1, (p3 / p2 - 1) * p1, p3 / p1 - p3 / p2 + 1)
    else:  # IV#
        v = ((p1 - 1) / 2 * (p3 / p2 + 1), p3 / p2 + 1, (p1 + 1) / 2 * (p3 / p2 - 1) + 1)
    return _ints(v, fam)


# --------------------------------------------------------------------------
# duality check

def grouped_equal(a: Sequence[int], b: Sequence[int]) -> bool:
    """Compare (a1,a2;a3,a4) with (b1,b2;b3,b4) as pairs of pairs, each up to order."""
    pa = sorted([tuple(sorted(a[:2])), tuple(sorted(a[2:]))])
    pb = sorted([tuple(sorted(b[:2])), tuple(sorted(b[2:]))])
    return pa == pb


@dataclass
class DualityReport:
    family: FamilyDescriptor
    dol_virtual: Tuple[int, ...]
    gab_virtual: Tuple[int, ...]
    dol_icis: Tuple[int, ...]
    gab_icis: Tuple[int, ...]
    duality_pass: bool
    error: str = ""
    closed_form_pass: Optional[bool] = None
    premises: Dict[str, bool] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "family": self.family.to_json(),
            "dol_virtual": list(self.dol_virtual),
            "gab_virtual": list(self.gab_virtual),
            "dol_icis": list(self.dol_icis),
            "gab_icis": list(self.gab_icis),
            "duality_pass": self.duality_pass,
            "closed_form_pass": self.closed_form_pass,
            "premises": dict(self.premises),
            "error": self.error,
        }


def duality_premises(fam: FamilyDescriptor) -> Dict[str, bool]:
    """Structural claims the duality statement takes for granted, checked one by one.

    two_faces: the Newton polygon at infinity of **h** has two faces avoiding 0.
    faces_reduced: the canonical weights of h1 and h2 are reduced.
    two_principal_orbits: each of {h1 = 0}, {h2 = 0} has exactly two principal orbits.
    three_isotropic_points: the dual quotient curve has exactly three exceptional orbits.
    """
    out = {"two_faces": False, "faces_reduced": False, "two_principal_orbits": False,
           "three_isotropic_points": False}
    try:
        h1, h2 = split_virtual(fam)
    except (PolyError, FamilyError):
        return out
    out["two_faces"] = True
    try:
        W1, W2 = virtual_weight_systems(fam)
        out["faces_reduced"] = W1.is_reduced and W2.is_reduced
        counts = [len(principal_orders(exceptional_orbits_surface(h, W, strict=False)))
                  for h, W in ((h1, W1), (h2, W2))]
        out["two_principal_orbits"] = counts == [2, 2]
    except (OrbitError, FamilyError, GradingError):
        pass
    try:
        pair = build_dual_pair(fam)
        n = len(principal_orders(exceptional_orbits_icis(pair.f1, pair.f2, pair.weights)))
        out["three_isotropic_points"] = n == 3
    except (OrbitError, FamilyError):
        pass
    return out


def verify_strange_duality(fam: FamilyDescriptor, premises: bool = False) -> DualityReport:
    """Gab(h) = Dol(f~1, f~2) as multisets and Gab(f~1, f~2) = Dol(h) as grouped pairs.

    Dolgachev numbers come from the orbit computations, Gabrielov numbers
    from the closed forms.  The report also records whether the closed forms
    alone satisfy the duality and, on request, the premise checks.
    """
    prem = duality_premises(fam) if premises else {}
    try:
        gv = gabrielov_virtual(fam)
        gi = gabrielov_icis(fam)
        closed = Counter(gv) == Counter(dolgachev_icis_closed(fam)) and grouped_equal(gi, dolgachev_virtual_closed(fam))
    except FamilyError as exc:
        return DualityReport(fam, (), (), (), (), False, str(exc), None, prem)
    try:
        dv = dolgachev_virtual(fam).as_tuple()
        di = dolgachev_icis(fam)
    except (OrbitError, FamilyError, PolyError) as exc:
        return DualityReport(fam, (), gv, (), gi, False, str(exc), closed, prem)
    ok = Counter(gv) == Counter(di) and grouped_equal(gi, dv)
    return DualityReport(fam, dv, gv, di, gi, ok, "", closed, prem)
