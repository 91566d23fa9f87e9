"""Cyclotomic products: Poincaré series, orbit polynomials, Saito duals and zeta functions.

A :class:`CyclotomicProduct` stores ``{m: alpha_m}`` for the rational function
``prod_m (1 - t^m)^alpha_m``.  All identities are checked in this factored
form; power series are only expanded for bounded sanity checks.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import gcd
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from . import linalg
from .grading import WeightSystem
from .polyalg import Face, PolyError, SparsePoly, full_dimensional_facets

__all__ = [
    "SeriesError",
    "CyclotomicProduct",
    "poincare_series",
    "orbit_polynomial",
    "saito_dual",
    "lambda_product",
    "milnor_orlik",
    "zeta_infinity",
    "zeta_contributions",
    "EPSILON",
    "calibrate_epsilon",
    "face_degeneracy",
    "ZetaReport",
    "verify_zeta_theorem",
]


class SeriesError(ValueError):
    pass


@dataclass(frozen=True)
class CyclotomicProduct:
    exponents: Tuple[Tuple[int, int], ...] = ()

    def __init__(self, exponents: Optional[Mapping[int, int]] = None):
        clean: Dict[int, int] = {}
        for m, a in dict(exponents or {}).items():
            m, a = int(m), int(a)
            if m < 1:
                raise SeriesError(f"factor index must be positive, got {m}")
            if a:
                clean[m] = clean.get(m, 0) + a
        object.__setattr__(self, "exponents", tuple(sorted((m, a) for m, a in clean.items() if a)))

    @classmethod
    def one(cls) -> "CyclotomicProduct":
        return cls({})

    @classmethod
    def factor(cls, m: int, a: int = 1) -> "CyclotomicProduct":
        return cls({m: a})

    def as_dict(self) -> Dict[int, int]:
        return dict(self.exponents)

    def __mul__(self, other: "CyclotomicProduct") -> "CyclotomicProduct":
        out = Counter(self.as_dict())
        for m, a in other.exponents:
            out[m] += a
        return CyclotomicProduct(out)

    def inverse(self) -> "CyclotomicProduct":
        return CyclotomicProduct({m: -a for m, a in self.exponents})

    def __truediv__(self, other: "CyclotomicProduct") -> "CyclotomicProduct":
        return self * other.inverse()

    def __pow__(self, k: int) -> "CyclotomicProduct":
        return CyclotomicProduct({m: a * k for m, a in self.exponents})

    @property
    def degree(self) -> int:
        """Degree of the rational function: sum of m * alpha_m."""
        return sum(m * a for m, a in self.exponents)

    def reduced(self) -> "CyclotomicProduct":
        """Division by (1 - t)."""
        return self / CyclotomicProduct.factor(1)

    def series(self, precision: int) -> List[int]:
        """First ``precision`` power-series coefficients (sanity checks only)."""
        coeffs = [0] * precision
        coeffs[0] = 1
        for m, a in self.exponents:
            for _ in range(abs(a)):
                if a > 0:  # multiply by (1 - t^m)
                    for i in range(precision - 1, m - 1, -1):
                        coeffs[i] -= coeffs[i - m]
                else:  # divide by (1 - t^m)
                    for i in range(m, precision):
                        coeffs[i] += coeffs[i - m]
        return coeffs

    def to_text(self) -> str:
        def fac(m, a):
            base = "(1-t)" if m == 1 else f"(1-t^{m})"
            return base if a == 1 else f"{base}^{a}"

        num = [fac(m, a) for m, a in self.exponents if a > 0]
        den = [fac(m, -a) for m, a in self.exponents if a < 0]
        top = "".join(num) or "1"
        if not den:
            return top
        bottom = den[0] if len(den) == 1 else "(" + "".join(den) + ")"
        return f"{top}/{bottom}"

    def __str__(self):
        return self.to_text()

    def to_json(self) -> dict:
        return {"factors": {str(m): a for m, a in self.exponents}}

    @classmethod
    def from_json(cls, data: Mapping) -> "CyclotomicProduct":
        return cls({int(m): int(a) for m, a in data["factors"].items()})


def poincare_series(W: WeightSystem) -> CyclotomicProduct:
    """prod_j (1 - t^{d_j}) / prod_i (1 - t^{w_i})."""
    out = Counter()
    for d in W.degrees:
        out[d] += 1
    for w in W.weights:
        out[w] -= 1
    return CyclotomicProduct(out)


def orbit_polynomial(dol: Sequence[int]) -> CyclotomicProduct:
    """prod_k (1 - t^{alpha_k}) / (1 - t) for Dolgachev numbers alpha."""
    if any(int(a) < 1 for a in dol):
        raise SeriesError(f"Dolgachev numbers must be positive: {tuple(dol)}")
    out = Counter(int(a) for a in dol)
    out[1] -= 1
    return CyclotomicProduct(out)


def saito_dual(z: CyclotomicProduct, d: int) -> CyclotomicProduct:
    """The exponent map m -> -alpha_{d/m}."""
    bad = [m for m, _ in z.exponents if d % m]
    if bad:
        raise SeriesError(f"factors {bad} do not divide {d}")
    return CyclotomicProduct({d // m: -a for m, a in z.exponents})


# --------------------------------------------------------------------------
# Milnor-Orlik oracle

def lambda_product(a: Mapping[int, Fraction], b: Mapping[int, Fraction]) -> Dict[int, Fraction]:
    """Product in the divisor ring: Lambda_m Lambda_n = gcd(m, n) Lambda_lcm(m, n)."""
    out: Dict[int, Fraction] = {}
    for m, x in a.items():
        for n, y in b.items():
            g = gcd(m, n)
            key = m * n // g
            out[key] = out.get(key, Fraction(0)) + g * x * y
    return {k: v for k, v in out.items() if v}


def milnor_orlik(W: WeightSystem) -> CyclotomicProduct:
    """Divisor of the monodromy characteristic polynomial of an isolated weighted homogeneous singularity.

    prod_i (Lambda_{u_i} / v_i - 1) with d / w_i = u_i / v_i in lowest
    terms; Lambda_m stands for t^m - 1, i.e. the factor (1 - t^m) up to sign.
    """
    if len(W.degrees) != 1:
        raise SeriesError("Milnor-Orlik needs a hypersurface weight system")
    if not W.is_reduced:
        raise SeriesError(f"weight system {W} is not reduced")
    d = W.degrees[0]
    div: Dict[int, Fraction] = {1: Fraction(1)}
    for w in W.weights:
        r = Fraction(d, w)
        factor = {r.numerator: Fraction(1, r.denominator)}
        factor[1] = factor.get(1, Fraction(0)) - 1
        div = lambda_product(div, {k: v for k, v in factor.items() if v})
    if any(v.denominator != 1 for v in div.values()):
        raise SeriesError(f"non-integral divisor for {W}: not an isolated singularity")
    return CyclotomicProduct({m: int(v) for m, v in div.items()})


# --------------------------------------------------------------------------
# zeta function at infinity from the Newton polygon

# Sign of a face contribution, keyed by (face dimension q, |I|).  Only
# facets of the restricted polytopes contribute (q = |I| - 1).  Fixed once by
# calibrate_epsilon() against the Milnor-Orlik oracle and frozen here.
EPSILON: Dict[Tuple[int, int], int] = {(0, 1): 1, (1, 2): -1, (2, 3): 1}


def _polygon_order(points: Sequence[Tuple[int, ...]], normal: Sequence[int]) -> List[Tuple[int, ...]]:
    """Vertices of a planar convex polygon in R^3, in cyclic order."""
    # project away a coordinate where the normal is nonzero
    drop = next(i for i, c in enumerate(normal) if c)
    keep = [i for i in range(3) if i != drop]
    pts2 = sorted({(p[keep[0]], p[keep[1]]): p for p in points}.items())

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower, upper = [], []
    for q, _ in pts2:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], q) <= 0:
            lower.pop()
        lower.append(q)
    for q, _ in reversed(pts2):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], q) <= 0:
            upper.pop()
        upper.append(q)
    hull = lower[:-1] + upper[:-1]
    lookup = dict(pts2)
    return [lookup[q] for q in hull]


def _cone_volume(face: Face) -> int:
    """Lattice-normalized volume of conv(0, face), i.e. |I|! times the Euclidean volume."""
    pts = list(face.points)
    k = len(pts[0])
    if k == 1:
        return abs(pts[0][0])
    if k == 2:
        a, b = min(pts), max(pts)
        return abs(linalg.det([list(a), list(b)]))
    if k == 3:
        ring = _polygon_order(pts, face.covector)
        total = 0
        for i in range(1, len(ring) - 1):
            total += linalg.det([list(ring[0]), list(ring[i]), list(ring[i + 1])])
        return abs(total)
    raise SeriesError("zeta at infinity is implemented for at most three variables")


def zeta_contributions(h: SparsePoly) -> List[dict]:
    """Per-face data (I, covector, m, V, sign) entering the Newton-polygon formula."""
    n = h.nvars()
    if n > 3:
        raise SeriesError("zeta at infinity is implemented for at most three variables")
    if h.is_zero():
        raise SeriesError("zeta function of the zero polynomial")
    out = []
    for size in range(1, n + 1):
        for I in combinations(range(n), size):
            pts = [tuple(e[i] for i in I) for e in h.support() if all(e[j] == 0 for j in range(n) if j not in I)]
            if not pts:
                continue
            if linalg.rank(pts) < size:
                continue  # restricted polytope is not full-dimensional
            origin = (0,) * size
            for face in full_dimensional_facets(pts + [origin]):
                if origin in face.points:
                    continue
                m = face.degree
                vol = _cone_volume(face)
                if vol % m:
                    raise SeriesError(f"face volume {vol} not divisible by lattice distance {m}")
                q = size - 1
                if (q, size) not in EPSILON:
                    raise SeriesError(f"no calibrated sign for faces of dimension {q} in {size} variables")
                out.append({
                    "variables": [h.variables[i] for i in I],
                    "covector": list(face.covector),
                    "m": m,
                    "volume": vol // m,
                    "sign": EPSILON[(q, size)],
                })
    return out


def zeta_infinity(h: SparsePoly, reduced: bool = False) -> CyclotomicProduct:
    """Monodromy zeta function at infinity from the faces of the Newton polygon at infinity."""
    out = Counter()
    for c in zeta_contributions(h):
        out[c["m"]] += c["sign"] * c["volume"]
    z = CyclotomicProduct(out)
    return z.reduced() if reduced else z


def calibrate_epsilon(samples: Sequence[Tuple[SparsePoly, WeightSystem]]) -> Dict[Tuple[int, int], int]:
    """Find the sign schedule for which zeta_infinity reproduces milnor_orlik on all samples.

    Candidates are the eight sign choices for (q, |I|) in {(0,1), (1,2), (2,3)}.
    Raises unless exactly one candidate fits.
    """
    global EPSILON
    keys = [(0, 1), (1, 2), (2, 3)]
    frozen = dict(EPSILON)
    fits = []
    try:
        for signs in ((a, b, c) for a in (1, -1) for b in (1, -1) for c in (1, -1)):
            EPSILON = dict(zip(keys, signs))
            if all(zeta_infinity(h, reduced=True) == milnor_orlik(W) for h, W in samples):
                fits.append(dict(EPSILON))
    finally:
        EPSILON = frozen
    if len(fits) != 1:
        raise SeriesError(f"calibration is ambiguous or impossible: {len(fits)} schedules fit")
    return fits[0]


# --------------------------------------------------------------------------
# Newton non-degeneracy (reported, not assumed)

def _faces_avoiding_origin(h: SparsePoly) -> List[Tuple[Tuple[int, ...], Tuple[Tuple[int, ...], ...]]]:
    """(covector, points) for facets and edges of the full polytope that avoid the origin."""
    n = h.nvars()
    origin = (0,) * n
    pts = list(dict.fromkeys(tuple(e) for e in h.support())) + [origin]
    if linalg.rank(pts[:-1]) < n:
        return []
    facets = full_dimensional_facets(pts)
    faces = {}
    for f in facets:
        if origin not in f.points:
            faces[tuple(sorted(f.points))] = tuple(f.covector)
    for f, g in combinations(facets, 2):
        common = tuple(sorted(set(f.points) & set(g.points)))
        if len(common) >= 2 and origin not in common and common not in faces:
            if linalg.rank([[a - b for a, b in zip(p, common[0])] for p in common[1:]]) == 1:
                u = [a + b for a, b in zip(f.covector, g.covector)]
                faces[common] = tuple(u)
    return [(u, p) for p, u in faces.items()]


def face_degeneracy(h: SparsePoly) -> List[dict]:
    """For each face avoiding the origin: does x_i dh_face/dx_i = 0 have a solution in the torus?

    Status is "nondegenerate", "degenerate" or "undecided" (outside the
    binomial/univariate solver fragment).
    """
    from .invariants import UnsupportedStratum, solve_stratum  # local: avoids an import cycle

    n = h.nvars()
    out = []
    for u, pts in _faces_avoiding_origin(h):
        on = set(pts)
        face = SparsePoly(h.variables, {e: c for e, c in h.items() if e in on})
        eqs = []
        for i, name in enumerate(h.variables):
            d = face.diff(name)
            eqs.append(SparsePoly(h.variables, {tuple(a + (j == i) for j, a in enumerate(e)): c for e, c in d.items()}))
        eqs = [e for e in eqs if not e.is_zero()]
        try:
            sol = solve_stratum(eqs, list(u), list(range(n)))
            status = "nondegenerate" if sol is None else "degenerate"
        except (UnsupportedStratum, ValueError):
            status = "undecided"
        out.append({"face": str(face), "covector": list(u), "status": status})
    return out


# --------------------------------------------------------------------------
# zeta identity verifier

@dataclass
class ZetaReport:
    family: object
    zeta: Optional[CyclotomicProduct] = None
    poincare: Optional[CyclotomicProduct] = None
    orbit: Optional[CyclotomicProduct] = None
    passed: bool = False
    error: str = ""
    degenerate_faces: List[str] = field(default_factory=list)

    @property
    def rhs(self) -> Optional[CyclotomicProduct]:
        if self.poincare is None or self.orbit is None:
            return None
        return self.poincare * self.orbit

    def to_json(self) -> dict:
        def j(z):
            return None if z is None else {"text": z.to_text(), **z.to_json()}

        return {
            "family": self.family.to_json(),
            "zeta_reduced": j(self.zeta),
            "poincare": j(self.poincare),
            "orbit": j(self.orbit),
            "rhs": j(self.rhs),
            "pass": self.passed,
            "error": self.error,
            "degenerate_faces": self.degenerate_faces,
        }


def verify_zeta_theorem(fam) -> ZetaReport:
    """Compare the reduced zeta function at infinity of h with P(t) Or(t) of the dual pair."""
    from .families import FamilyError, build_dual_pair, build_virtual
    from .invariants import OrbitError, dolgachev_icis

    report = ZetaReport(fam)
    try:
        h = build_virtual(fam)
        report.zeta = zeta_infinity(h, reduced=True)
        report.degenerate_faces = [f["face"] for f in face_degeneracy(h) if f["status"] == "degenerate"]
        pair = build_dual_pair(fam)
        report.poincare = poincare_series(pair.weights)
        report.orbit = orbit_polynomial(dolgachev_icis(fam))
    except (FamilyError, OrbitError, PolyError, SeriesError) as exc:
        report.error = str(exc)
        return report
    report.passed = report.zeta == report.rhs
    return report
