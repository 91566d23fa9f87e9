"""Sparse multivariate polynomials with rational coefficients.

A polynomial is an immutable map from exponent tuples to nonzero exact
rational coefficients (``int`` when integral, else ``Fraction``) over a
fixed, ordered list of variable names.
The zero polynomial is the empty map.

Text format::

    poly   := ['-'] term (('+'|'-') term)*
    term   := coef | [coef '*'] factor ('*' factor)*
    factor := var ['^' uint]
    coef   := uint ['/' uint]

Terms print in graded lexicographic order (total degree first, ties broken
lexicographically along the variable list), so output is deterministic.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb, gcd
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from . import linalg

ALLOWED_VARIABLES = ("x", "y", "z", "w", "X", "Y", "Z", "W")

Exponent = Tuple[int, ...]


class PolyError(ValueError):
    pass


class ParseError(PolyError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class UnknownVariableError(PolyError):
    pass


class SparsePoly:
    __slots__ = ("variables", "_terms", "_hash")

    def __init__(self, variables: Sequence[str], terms: Optional[Mapping[Exponent, object]] = None):
        self.variables: Tuple[str, ...] = tuple(variables)
        n = len(self.variables)
        clean: Dict[Exponent, Fraction] = {}
        for exps, c in (terms or {}).items():
            exps = tuple(map(int, exps))
            if len(exps) != n:
                raise PolyError(f"exponent vector {exps} does not match {n} variables")
            if min(exps, default=0) < 0:
                raise PolyError(f"negative exponent in {exps}")
            if type(c) is not int:
                c = Fraction(c)
                if c.denominator == 1:
                    c = c.numerator
            if c:
                clean[exps] = clean.get(exps, 0) + c
                if not clean[exps]:
                    del clean[exps]
        self._terms = clean
        self._hash = None

    # construction helpers
    @classmethod
    def zero(cls, variables: Sequence[str]) -> "SparsePoly":
        return cls(variables)

    @classmethod
    def constant(cls, variables: Sequence[str], c) -> "SparsePoly":
        return cls(variables, {(0,) * len(variables): c})

    @classmethod
    def monomial(cls, variables: Sequence[str], exps: Sequence[int], c=1) -> "SparsePoly":
        return cls(variables, {tuple(exps): c})

    @classmethod
    def var(cls, variables: Sequence[str], name: str) -> "SparsePoly":
        i = _index(variables, name)
        exps = [0] * len(variables)
        exps[i] = 1
        return cls(variables, {tuple(exps): 1})

    @property
    def terms(self) -> Dict[Exponent, Fraction]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def support(self) -> List[Exponent]:
        return sorted(self._terms, key=_grlex_key)

    def coefficient(self, exps: Sequence[int]) -> Fraction:
        return self._terms.get(tuple(exps), 0)

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self) -> int:
        return len(self._terms)

    def nvars(self) -> int:
        return len(self.variables)

    # ring operations
    def _check(self, other: "SparsePoly"):
        if self.variables != other.variables:
            raise PolyError(f"variable mismatch: {self.variables} vs {other.variables}")

    def _coerce(self, other) -> "SparsePoly":
        if isinstance(other, SparsePoly):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return SparsePoly.constant(self.variables, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = out.get(e, 0) + c
        return SparsePoly(self.variables, out)

    __radd__ = __add__

    def __neg__(self):
        return SparsePoly(self.variables, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: Dict[Exponent, Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return SparsePoly(self.variables, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise PolyError("negative power")
        result = SparsePoly.constant(self.variables, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, SparsePoly):
            return self.variables == other.variables and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self == SparsePoly.constant(self.variables, other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.variables, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self):
        return f"SparsePoly({self.variables!r}, {to_text(self)!r})"

    def __str__(self):
        return to_text(self)

    # calculus and restriction
    def diff(self, name: str) -> "SparsePoly":
        i = _index(self.variables, name)
        out = {}
        for e, c in self._terms.items():
            if e[i]:
                e2 = list(e)
                e2[i] -= 1
                out[tuple(e2)] = c * e[i]
        return SparsePoly(self.variables, out)

    def restrict(self, nonzero: Iterable[int]) -> "SparsePoly":
        """Set every variable whose index is not in ``nonzero`` to zero."""
        keep = set(nonzero)
        return SparsePoly(
            self.variables,
            {e: c for e, c in self._terms.items() if all(e[i] == 0 for i in range(len(e)) if i not in keep)},
        )

    def rename(self, variables: Sequence[str]) -> "SparsePoly":
        if len(variables) != len(self.variables):
            raise PolyError("rename must keep the number of variables")
        return SparsePoly(variables, self._terms)

    def is_weighted_homogeneous(self, weights: Sequence[int]) -> Optional[int]:
        """Return the weighted degree if homogeneous for ``weights``, else None."""
        degs = {sum(w * e for w, e in zip(weights, ex)) for ex in self._terms}
        return degs.pop() if len(degs) == 1 else None

    def to_json(self) -> dict:
        return {
            "variables": list(self.variables),
            "terms": [
                {"exps": list(e), "num": self._terms[e].numerator, "den": self._terms[e].denominator}
                for e in self.support()
            ],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "SparsePoly":
        return cls(data["variables"], {tuple(t["exps"]): Fraction(t["num"], t["den"]) for t in data["terms"]})


def _index(variables: Sequence[str], name: str) -> int:
    try:
        return list(variables).index(name)
    except ValueError:
        raise UnknownVariableError(f"unknown variable {name!r}; ring has {list(variables)}") from None


def _grlex_key(exps: Exponent):
    return (-sum(exps), tuple(-e for e in exps))


# --------------------------------------------------------------------------
# text format

def to_text(p: SparsePoly) -> str:
    if p.is_zero():
        return "0"
    out = []
    for i, e in enumerate(p.support()):
        c = p.coefficient(e)
        sign = "-" if c < 0 else "+"
        a = abs(c)
        factors = []
        for v, k in zip(p.variables, e):
            if k == 1:
                factors.append(v)
            elif k > 1:
                factors.append(f"{v}^{k}")
        if a != 1 or not factors:
            factors.insert(0, str(a))
        body = "*".join(factors)
        if i == 0:
            out.append(body if sign == "+" else "-" + body)
        else:
            out.append(f"{sign}{body}")
    return "".join(out)


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_]\w*)|(\S))")


def _tokenize(text: str):
    pos = 0
    tokens = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            break
        if m.group(1) is not None:
            tokens.append(("int", int(m.group(1)), m.start(1)))
        elif m.group(2) is not None:
            tokens.append(("name", m.group(2), m.start(2)))
        elif m.group(3) is not None:
            tokens.append(("op", m.group(3), m.start(3)))
        pos = m.end()
    tokens.append(("end", None, len(text)))
    return tokens


def parse_poly(text: str, variables: Sequence[str]) -> SparsePoly:
    """Parse ``text`` into a polynomial over ``variables``."""
    variables = tuple(variables)
    for v in variables:
        if v not in ALLOWED_VARIABLES:
            raise PolyError(f"variable {v!r} not in {ALLOWED_VARIABLES}")
    toks = _tokenize(text)
    k = 0

    def peek():
        return toks[k]

    def take():
        nonlocal k
        t = toks[k]
        k += 1
        return t

    def expect_op(sym):
        t = take()
        if t[0] != "op" or t[1] != sym:
            raise ParseError(f"expected {sym!r}", t[2])

    def parse_factor(exps):
        kind, val, pos = take()
        if kind != "name":
            raise ParseError("expected a variable", pos)
        if val not in ALLOWED_VARIABLES:
            raise ParseError(f"invalid variable name {val!r}", pos)
        if val not in variables:
            raise UnknownVariableError(f"unknown variable {val!r} at position {pos}")
        power = 1
        if peek()[0] == "op" and peek()[1] == "^":
            take()
            kind, val2, pos2 = take()
            if kind == "op" and val2 == "-":
                raise ParseError("negative exponent", pos2)
            if kind != "int":
                raise ParseError("expected a non-negative integer exponent", pos2)
            power = val2
        exps[variables.index(val)] += power

    def parse_term():
        coef = 1
        exps = [0] * len(variables)
        kind, val, pos = peek()
        if kind == "int":
            take()
            coef = Fraction(val)
            if peek()[0] == "op" and peek()[1] == "/":
                take()
                kind2, den, pos2 = take()
                if kind2 != "int":
                    raise ParseError("expected denominator", pos2)
                if den == 0:
                    raise ParseError("zero denominator", pos2)
                coef /= den
            if not (peek()[0] == "op" and peek()[1] == "*"):
                return coef, exps
            take()
        parse_factor(exps)
        while peek()[0] == "op" and peek()[1] == "*":
            take()
            parse_factor(exps)
        return coef, exps

    terms: Dict[Exponent, Fraction] = {}
    sign = 1
    if peek()[0] == "op" and peek()[1] in "+-":
        sign = -1 if take()[1] == "-" else 1
    while True:
        coef, exps = parse_term()
        e = tuple(exps)
        terms[e] = terms.get(e, 0) + sign * coef
        kind, val, pos = peek()
        if kind == "end":
            break
        if kind == "op" and val in "+-":
            take()
            sign = -1 if val == "-" else 1
            continue
        raise ParseError(f"unexpected {val!r}", pos)
    return SparsePoly(variables, terms)


def dumps(p: SparsePoly) -> str:
    return json.dumps(p.to_json(), sort_keys=True)


# --------------------------------------------------------------------------
# substitution

def substitute(p: SparsePoly, var: str, replacement: SparsePoly) -> SparsePoly:
    """Replace ``var`` by ``replacement`` and expand exactly."""
    i = _index(p.variables, var)
    p._check(replacement)
    powers: Dict[int, SparsePoly] = {}
    out = SparsePoly.zero(p.variables)
    for e, c in p.items():
        k = e[i]
        if k not in powers:
            powers[k] = replacement ** k
        rest = list(e)
        rest[i] = 0
        out = out + SparsePoly.monomial(p.variables, rest, c) * powers[k]
    return out


def binomial_expand(base: SparsePoly, shift: SparsePoly, k: int) -> SparsePoly:
    """(base + shift)^k via the binomial theorem; used as a cross-check of substitute."""
    out = SparsePoly.zero(base.variables)
    for j in range(k + 1):
        out = out + comb(k, j) * base ** (k - j) * shift ** j
    return out


# --------------------------------------------------------------------------
# Newton polygon at infinity

@dataclass(frozen=True)
class Face:
    covector: Tuple[int, ...]
    degree: int
    points: Tuple[Exponent, ...]

    @property
    def contains_origin(self) -> bool:
        return any(all(c == 0 for c in p) for p in self.points)


@dataclass(frozen=True)
class NewtonPolygonAtInfinity:
    points: Tuple[Exponent, ...]
    dimension: int
    facets: Tuple[Face, ...] = field(default_factory=tuple)

    def faces_avoiding_origin(self) -> List[Face]:
        return [f for f in self.facets if not f.contains_origin]

    def contains(self, q: Sequence[int]) -> bool:
        """Membership test; only meaningful for full-dimensional polytopes."""
        return all(sum(u * x for u, x in zip(f.covector, q)) <= f.degree for f in self.facets)


def _hyperplane_normal(vectors: Sequence[Sequence[int]]) -> List[int]:
    """Integer normal of k-1 vectors in Z^k (generalized cross product)."""
    k = len(vectors[0])
    normal = []
    for j in range(k):
        minor = [[v[c] for c in range(k) if c != j] for v in vectors]
        normal.append((-1) ** j * linalg.det(minor))
    return normal


def full_dimensional_facets(points: Sequence[Sequence[int]]) -> List[Face]:
    """Facets of conv(points) in Z^k, assuming the hull has dimension k.

    Brute force over k-subsets; fine for the handful of points used here.
    Each facet carries its primitive outward covector u and degree m with
    <u, p> <= m for all points and equality exactly on the facet.
    """
    pts = [tuple(p) for p in dict.fromkeys(tuple(p) for p in points)]
    k = len(pts[0])
    if k == 1:
        lo, hi = min(p[0] for p in pts), max(p[0] for p in pts)
        return [Face((1,), hi, ((hi,),)), Face((-1,), -lo, ((lo,),))]
    found = {}
    for subset in combinations(pts, k):
        base = subset[0]
        diffs = [[a - b for a, b in zip(p, base)] for p in subset[1:]]
        u = _hyperplane_normal(diffs)
        if not any(u):
            continue
        u = linalg.primitive(u)
        m = sum(a * b for a, b in zip(u, base))
        vals = [sum(a * b for a, b in zip(u, p)) for p in pts]
        if all(v <= m for v in vals):
            pass
        elif all(v >= m for v in vals):
            u = [-a for a in u]
            m = -m
        else:
            continue
        key = (tuple(u), m)
        if key not in found:
            on = tuple(sorted((p for p in pts if sum(a * b for a, b in zip(u, p)) == m), key=_grlex_key))
            found[key] = Face(tuple(u), m, on)
    return sorted(found.values(), key=lambda f: (f.covector, f.degree))


def newton_polygon_at_infinity(p: SparsePoly) -> NewtonPolygonAtInfinity:
    """Convex hull of the support of ``p`` together with the origin."""
    if p.is_zero():
        raise PolyError("Newton polygon of the zero polynomial is undefined")
    n = p.nvars()
    origin = (0,) * n
    pts = tuple(sorted(set(p.support()) | {origin}, key=_grlex_key))
    nonzero = [q for q in pts if q != origin]
    dim = linalg.rank(nonzero) if nonzero else 0
    if dim == 0:
        return NewtonPolygonAtInfinity(pts, 0, (Face((0,) * n, 0, (origin,)),))
    if dim == n:
        return NewtonPolygonAtInfinity(pts, n, tuple(full_dimensional_facets(pts)))
    # lower-dimensional: work in lattice coordinates of the linear span
    basis = linalg.saturated_row_basis(nonzero)
    gram = linalg.matmul(basis, linalg.transpose(basis))
    coords = {}
    for q in pts:
        rhs = linalg.matvec(basis, q)
        c = linalg.solve(gram, rhs)
        coords[q] = tuple(int(x) for x in c)
    local = full_dimensional_facets(list(coords.values()))
    back = {v: q for q, v in coords.items()}
    ginv = linalg.inverse(gram)
    faces = []
    for f in local:
        # covector lifted into the span, then made primitive integral
        coeff = linalg.matvec(ginv, f.covector)
        lifted = [sum(coeff[i] * basis[i][j] for i in range(dim)) for j in range(n)]
        den = 1
        for x in lifted:
            den = den * x.denominator // gcd(den, x.denominator)
        u = linalg.primitive([int(x * den) for x in lifted])
        q0 = back[f.points[0]]
        m = sum(a * b for a, b in zip(u, q0))
        faces.append(Face(tuple(u), m, tuple(sorted((back[v] for v in f.points), key=_grlex_key))))
    return NewtonPolygonAtInfinity(pts, dim, tuple(sorted(faces, key=lambda f: (f.covector, f.degree))))


def top_faces_split(h: SparsePoly, reference_weights: Optional[Sequence[int]] = None) -> Tuple[SparsePoly, SparsePoly]:
    """Split ``h`` into the sums over the two top faces avoiding the origin.

    The second returned polynomial is the one whose face covector matches
    ``reference_weights`` (up to scaling) when given; otherwise faces are
    ordered by covector.
    """
    P = newton_polygon_at_infinity(h)
    n = h.nvars()
    top = [f for f in P.faces_avoiding_origin() if P.dimension == n]
    if len(top) != 2:
        raise PolyError(f"expected two top-dimensional faces avoiding the origin, found {len(top)}")
    parts = []
    for f in top:
        on = set(f.points)
        parts.append((f, SparsePoly(h.variables, {e: c for e, c in h.items() if e in on})))
    if reference_weights is not None:
        ref = linalg.primitive(list(reference_weights))
        matches = [i for i, (f, _) in enumerate(parts) if list(f.covector) == ref]
        if len(matches) != 1:
            raise PolyError(f"no face of h has covector proportional to {list(reference_weights)}")
        if matches[0] == 0:
            parts.reverse()
    return parts[0][1], parts[1][1]
