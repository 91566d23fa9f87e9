"""Sweeps comparing fixture tables, closed forms and algorithmic constructions.

Each sweep returns a report listing every comparison that disagreed.
Grid members on which a construction is undefined (for instance when the
Newton polygon of **h** has no face split of the tabulated shape) are listed
separately as skipped; fixture rows are never skipped.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from . import dynkin
from .families import (
    XYZ,
    XYZW,
    FamilyDescriptor,
    FamilyError,
    applicable_rows,
    build_dual_pair,
    build_special_F,
    build_virtual,
    check_family,
    coordinate_change,
    enumerate_by_gorenstein,
    family_grid,
    gorenstein_of,
    split_virtual,
    transform_cusp,
    virtual_condition,
    virtual_grid,
    virtual_weight_systems,
)
from .grading import GradingError
from .invariants import (
    OrbitError,
    dolgachev_icis,
    dolgachev_icis_closed,
    dolgachev_virtual,
    dolgachev_virtual_closed,
    gabrielov_icis,
    gabrielov_virtual,
    grouped_equal,
    verify_strange_duality,
)
from .polyalg import PolyError
from .series import SeriesError, verify_zeta_theorem
from .tables import FixtureError, Fixtures, bindings, evaluate, evaluate_int, instantiate

__all__ = [
    "Mismatch",
    "TableReport",
    "verify_tables",
    "bimodal_families",
    "duality_sweep",
    "zeta_sweep",
    "SweepReport",
]

# errors that mean "this construction is undefined here"
_UNDEFINED = (PolyError, FamilyError, OrbitError, GradingError, SeriesError)


@dataclass(frozen=True)
class Mismatch:
    table: str
    subject: str
    field: str
    expected: str
    actual: str

    def to_json(self) -> dict:
        return {"table": self.table, "subject": self.subject, "field": self.field,
                "expected": self.expected, "actual": self.actual}


@dataclass
class TableReport:
    checked: Counter = field(default_factory=Counter)
    mismatches: List[Mismatch] = field(default_factory=list)
    skipped: List[Tuple[str, str, str]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.mismatches

    @property
    def complete(self) -> bool:
        return not self.mismatches and not self.skipped

    def compare(self, table: str, subject, what: str, expected, actual) -> bool:
        self.checked[table] += 1
        if expected == actual:
            return True
        self.mismatches.append(Mismatch(table, str(subject), what, str(expected), str(actual)))
        return False

    def fail(self, table: str, subject, what: str, message: str) -> None:
        self.checked[table] += 1
        self.mismatches.append(Mismatch(table, str(subject), what, "defined", message))

    def skip(self, table: str, subject, message: str) -> None:
        self.skipped.append((table, str(subject), message))

    def summary(self) -> Dict[str, dict]:
        bad = Counter(m.table for m in self.mismatches)
        skipped = Counter(s[0] for s in self.skipped)
        tables = sorted(set(self.checked) | set(skipped), key=lambda t: int(t[1:]))
        return {t: {"checked": self.checked[t], "mismatches": bad[t], "skipped": skipped[t]} for t in tables}

    def to_json(self, limit: int = 50) -> dict:
        return {
            "passed": self.passed,
            "complete": self.complete,
            "tables": self.summary(),
            "mismatches": [m.to_json() for m in self.mismatches[:limit]],
            "skipped": [{"table": t, "subject": s, "reason": r} for t, s, r in self.skipped[:limit]],
        }


def _ints(exprs: Sequence, env) -> List[int]:
    return [evaluate_int(e, env) for e in exprs]


def _env(fam: FamilyDescriptor, k: Optional[int] = None):
    return bindings(fam.type_tag, fam.params, k)


def _pair_type_of(tag: str) -> str:
    return FamilyDescriptor(tag, (1, 1, 1)).pair_type


# --------------------------------------------------------------------------
# fixture tables T1-T7 over the grid

def _check_T1(rep, fx, fam):
    row = fx.row("T1", type=fam.pair_type)
    env = _env(fam)
    rep.compare("T1", fam, "f", instantiate(row["f"], env, XYZ), build_special_F(fam))
    pair = build_dual_pair(fam)
    rep.compare("T1", fam, "f1", instantiate(row["f1"], env, XYZW), pair.f1)
    rep.compare("T1", fam, "f2", instantiate(row["f2"], env, XYZW), pair.f2)


def _check_T2(rep, fx, fam, rows_by_pair):
    env = _env(fam)
    applicable = applicable_rows(fam)
    for row in rows_by_pair.get(fam.pair_type, []):
        holds = bool(evaluate(row["condition"], env))
        rep.compare("T2", fam, f"condition {row['row']}", holds, row["row"] in applicable)
        if not holds:
            continue
        expected = (row["shift"], row["by"], evaluate_int(row["exponent"], env))
        rep.compare("T2", fam, f"coordinate change {row['row']}", expected, coordinate_change(fam, row["row"]))
        rep.compare("T2", fam, f"h {row['row']}", instantiate(row["h"], env, XYZ), transform_cusp(fam, row["row"]))


def _check_T3_T5(rep, fx, fam):
    env = _env(fam)
    t3, t4, t5 = (fx.row(t, type=fam.type_tag) for t in ("T3", "T4", "T5"))
    w1, w2, w = _ints(t4["W1"], env), _ints(t4["W2"], env), _ints(t5["W"], env)
    # degree coincidence, on the tabulated data and on the constructions
    rep.compare("T5", fam, "deg f1 = deg h1 (tables)", w1[3], w[4])
    rep.compare("T5", fam, "deg f2 = deg h2 (tables)", w2[3], w[5])
    pair = build_dual_pair(fam)
    rep.compare("T5", fam, "W", w, list(pair.weights.weights + pair.weights.degrees))
    try:
        h1, h2 = split_virtual(fam)
        W1, W2 = virtual_weight_systems(fam)
    except _UNDEFINED as exc:
        rep.skip("T3", fam, str(exc))
        rep.skip("T4", fam, str(exc))
        return
    rep.compare("T3", fam, "h1", instantiate(t3["h1"], env, XYZ), h1)
    rep.compare("T3", fam, "h2", instantiate(t3["h2"], env, XYZ), h2)
    rep.compare("T4", fam, "W1", w1, list(W1.weights + W1.degrees))
    rep.compare("T4", fam, "W2", w2, list(W2.weights + W2.degrees))
    rep.compare("T5", fam, "degree coincidence", (W1.degrees[0], W2.degrees[0]), pair.weights.degrees)


def _check_T6(rep, fx, fam, algorithmic):
    row = fx.row("T6", type=fam.pair_type)
    env = _env(fam)
    dol = _ints(row["dolgachev"], env)
    rep.compare("T6", fam, "Dolgachev (closed form)", dol, list(dolgachev_icis_closed(fam)))
    rep.compare("T6", fam, "Gabrielov (closed form)", _ints(row["gabrielov"], env), list(gabrielov_icis(fam)))
    if algorithmic:
        try:
            actual = dolgachev_icis(fam)
        except _UNDEFINED as exc:
            rep.skip("T6", fam, str(exc))
            return
        rep.compare("T6", fam, "Dolgachev (orbits)", sorted(dol), sorted(actual))


def _check_T7(rep, fx, fam, algorithmic):
    row = fx.row("T7", type=fam.type_tag)
    env = _env(fam)
    dol = _ints(row["dolgachev"], env)
    rep.compare("T7", fam, "Dolgachev (closed form)", dol, list(dolgachev_virtual_closed(fam)))
    rep.compare("T7", fam, "Gabrielov (closed form)", _ints(row["gabrielov"], env), list(gabrielov_virtual(fam)))
    if algorithmic:
        try:
            actual = dolgachev_virtual(fam).as_tuple()
        except _UNDEFINED as exc:
            rep.skip("T7", fam, str(exc))
            return
        if not grouped_equal(dol, actual):
            rep.compare("T7", fam, "Dolgachev (orbits)", dol, list(actual))
        else:
            rep.checked["T7"] += 1


# --------------------------------------------------------------------------
# named rows (fixture tables T8-T12)

def _fixture_family(rep, table, row, env=None) -> Optional[FamilyDescriptor]:
    subject = row.get("name", row.get("type"))
    try:
        params = tuple(evaluate_int(p, env or {}) for p in row["params"])
        fam = FamilyDescriptor(row["type"], params)
        check_family(fam)
    except (FamilyError, FixtureError) as exc:
        rep.fail(table, subject, "family", str(exc))
        return None
    if not virtual_condition(fam):
        rep.fail(table, fam, "family", "not a virtual singularity")
        return None
    return fam


def _check_named_row(rep, table, fam, row, env, dol_key="dolgachev", gab_key="gabrielov"):
    """h, Gorenstein-independent data and invariants of one fixture row."""
    subject = f"{row.get('name', '')} {fam}".strip()
    try:
        rep.compare(table, subject, "h", instantiate(row["h"], env, XYZ), build_virtual(fam))
    except _UNDEFINED as exc:
        rep.fail(table, subject, "h", str(exc))
    dol = [evaluate_int(v, env) for v in row[dol_key]]
    gab = [evaluate_int(v, env) for v in row[gab_key]]
    rep.compare(table, subject, "Gabrielov", gab, list(gabrielov_virtual(fam)))
    closed = dolgachev_virtual_closed(fam)
    if not grouped_equal(dol, closed):
        rep.compare(table, subject, "Dolgachev (closed form)", dol, list(closed))
    else:
        rep.checked[table] += 1
    try:
        actual = dolgachev_virtual(fam).as_tuple()
    except _UNDEFINED as exc:
        rep.skip(table, subject, str(exc))
        return
    if not grouped_equal(dol, actual):
        rep.compare(table, subject, "Dolgachev (orbits)", dol, list(actual))
    else:
        rep.checked[table] += 1


def _check_T8(rep, fx, bound):
    for row in fx.rows("T8"):
        uses_k = any("k" in str(p) for p in row["params"])
        ks = range(int(row.get("k_min", 1)), bound + 1) if uses_k else [None]
        found = 0
        for k in ks:
            env = {"k": k} if k is not None else {}
            try:
                params = tuple(evaluate_int(p, env) for p in row["params"])
            except FixtureError as exc:
                rep.fail("T8", row["name"], "params", str(exc))
                break
            if max(params) > bound:
                break
            fam = FamilyDescriptor(row["type"], params)
            try:
                check_family(fam)
            except FamilyError:
                continue
            if not virtual_condition(fam):
                continue
            found += 1
            env = dict(_env(fam, k))
            rep.compare("T8", fam, "Gorenstein parameter < 0", True, gorenstein_of(fam) < 0)
            _check_named_row(rep, "T8", fam, row, env)
        if not found:
            rep.fail("T8", row["name"], "family", f"no virtual member with parameters <= {bound}")


def _check_T9(rep, fx):
    for row in fx.rows("T9"):
        fam = _fixture_family(rep, "T9", row)
        if fam is None:
            continue
        rep.compare("T9", fam, "Gorenstein parameter", 1, gorenstein_of(fam))
        _check_named_row(rep, "T9", fam, row, _env(fam))


def bimodal_families(fx: Fixtures) -> Dict[str, FamilyDescriptor]:
    """Names of fixture table T10 mapped to descriptors."""
    return {r["name"]: FamilyDescriptor(r["type"], tuple(r["params"])) for r in fx.rows("T10")}


def _check_T10_T12(rep, fx):
    t9 = {(r["type"], tuple(r["params"])): r for r in fx.rows("T9")}
    t11 = {r["name"]: r for r in fx.rows("T11")}
    families = {}
    for row in fx.rows("T10"):
        fam = _fixture_family(rep, "T10", row)
        if fam is None:
            continue
        families[row["name"]] = fam
        env = _env(fam)
        try:
            rep.compare("T10", row["name"], "h", instantiate(row["h"], env, XYZ), build_virtual(fam))
        except _UNDEFINED as exc:
            rep.fail("T10", row["name"], "h", str(exc))
        rep.compare("T10", row["name"], "Gorenstein parameter", 1, gorenstein_of(fam))
        r9 = t9.get((fam.type_tag, fam.params))
        rep.compare("T10", row["name"], "listed with Gorenstein parameter 1", True, r9 is not None)
        if r9 is not None:
            rep.compare("T10", row["name"], "name in the Gorenstein list", row["name"], r9["name"])
    # every Gorenstein-1 row shares its name with a bimodal row of equal Gabrielov numbers
    for r9 in fx.rows("T9"):
        r11 = t11.get(r9["name"])
        if r11 is None:
            rep.fail("T9", r9["name"], "name", "no such bimodal name")
            continue
        rep.compare("T9", r9["name"], "Gabrielov numbers of the name", sorted(r11["gab_h"]), sorted(r9["gabrielov"]))
    for row in fx.rows("T11"):
        name = row["name"]
        fam = families.get(name)
        if fam is None:
            rep.fail("T11", name, "name", "not in the bimodal list")
            continue
        rep.compare("T11", name, "Gab(h)", sorted(row["gab_h"]), sorted(gabrielov_virtual(fam)))
        rep.compare("T11", name, "Gab(pair)", True, grouped_equal(row["gab_icis"], gabrielov_icis(fam)))
        rep.compare("T11", name, "Dol(pair) = Gab(h)", sorted(row["gab_h"]), sorted(row["dol_icis"]))
        rep.compare("T11", name, "Dol(h) = Gab(pair)", True, grouped_equal(row["dol_h"], row["gab_icis"]))
        try:
            dv = dolgachev_virtual(fam).as_tuple()
            di = dolgachev_icis(fam)
        except _UNDEFINED as exc:
            rep.fail("T11", name, "Dolgachev", str(exc))
            continue
        rep.compare("T11", name, "Dol(h)", True, grouped_equal(row["dol_h"], dv))
        rep.compare("T11", name, "Dol(pair)", sorted(row["dol_icis"]), sorted(di))
    for row in fx.rows("T12"):
        name = row["name"]
        try:
            spec = dynkin.diagram_spec(row)
        except dynkin.DynkinError as exc:
            rep.fail("T12", name, "numbers", str(exc))
            continue
        rep.compare("T12", name, "sum of gamma", row["mu"], sum(spec.gamma))
        r11 = t11.get(name)
        if r11 is not None:
            rep.compare("T12", name, "gamma = Gab(h)", sorted(r11["gab_h"]), sorted(spec.gamma))
        fam = families.get(name)
        if fam is not None:
            z = verify_zeta_theorem(fam)
            rep.compare("T12", name, "mu = deg of reduced zeta", row["mu"], None if z.zeta is None else z.zeta.degree)
        A = dynkin.expanded_diagram(spec)
        B = dynkin.spqr_graph(spec.gamma)
        rep.compare("T12", name, "expanded vs S_gamma invariants", dynkin.invariants(B), dynkin.invariants(A))


# --------------------------------------------------------------------------

def verify_tables(fx: Fixtures, bound: int = 60, algorithmic_dolgachev: bool = False,
                  tables: Optional[Iterable[str]] = None,
                  families: Optional[Sequence[FamilyDescriptor]] = None) -> TableReport:
    """Compare every fixture table with the code.

    Fixture tables T1-T7 are checked on every grid member with parameters
    <= bound (or on ``families``); T8-T12 row by row.  With
    ``algorithmic_dolgachev`` the Dolgachev columns of T6-T7 are also
    compared with the orbit computation on every virtual grid member.
    """
    wanted = set(tables or (f"T{i}" for i in range(1, 13)))
    rep = TableReport()
    grid = tuple(families) if families is not None else family_grid(bound)
    rows_by_pair: Dict[str, list] = {}
    if "T2" in wanted:
        for row in fx.rows("T2"):
            rows_by_pair.setdefault(_pair_type_of(row["type"]), []).append(row)
    for fam in grid:
        for table, check in (("T1", lambda: _check_T1(rep, fx, fam)),
                             ("T2", lambda: _check_T2(rep, fx, fam, rows_by_pair)),
                             ("T6", lambda: _check_T6(rep, fx, fam, algorithmic_dolgachev and virtual_condition(fam)))):
            if table in wanted:
                _guard(rep, table, fam, check)
        if not virtual_condition(fam):
            continue
        if wanted & {"T3", "T4", "T5"}:
            _guard(rep, "T5", fam, lambda: _check_T3_T5(rep, fx, fam))
        if "T7" in wanted:
            _guard(rep, "T7", fam, lambda: _check_T7(rep, fx, fam, algorithmic_dolgachev))
    if "T8" in wanted:
        _guard(rep, "T8", "rows", lambda: _check_T8(rep, fx, bound))
    if "T9" in wanted:
        _guard(rep, "T9", "rows", lambda: _check_T9(rep, fx))
    if wanted & {"T10", "T11", "T12"}:
        _guard(rep, "T11", "rows", lambda: _check_T10_T12(rep, fx))
    return rep


def _guard(rep, table, subject, fn: Callable[[], None]) -> None:
    # fixture problems (bad formula, missing row, non-integral value) are mismatches
    try:
        fn()
    except (FixtureError, KeyError, TypeError) as exc:
        rep.fail(table, subject, "fixture", f"{type(exc).__name__}: {exc}")
    except _UNDEFINED as exc:
        rep.fail(table, subject, "construction", str(exc))


# --------------------------------------------------------------------------
# theorem sweeps

@dataclass
class SweepReport:
    total: int
    passed: int
    failures: List[dict]
    by_type: Dict[str, Tuple[int, int]]

    @property
    def ok(self) -> bool:
        return self.passed == self.total

    def to_json(self, limit: int = 50) -> dict:
        return {"total": self.total, "passed": self.passed, "ok": self.ok,
                "by_type": {t: {"passed": p, "failed": f} for t, (p, f) in sorted(self.by_type.items())},
                "failures": self.failures[:limit]}


def _run(fn, families, jobs: int):
    if jobs > 1 and len(families) > 1:
        from multiprocessing import Pool

        with Pool(jobs) as pool:
            return pool.map(fn, families, chunksize=max(1, len(families) // (jobs * 8)))
    return [fn(f) for f in families]


def _duality_one(fam):
    return verify_strange_duality(fam, premises=True).to_json()


def _zeta_one(fam):
    return verify_zeta_theorem(fam).to_json()


def _sweep(results, key) -> SweepReport:
    by_type: Dict[str, List[int]] = {}
    failures = []
    for r in results:
        t = r["family"]["type"]
        by_type.setdefault(t, [0, 0])
        if r[key]:
            by_type[t][0] += 1
        else:
            by_type[t][1] += 1
            failures.append(r)
    passed = sum(p for p, _ in by_type.values())
    return SweepReport(len(results), passed, failures, {t: tuple(v) for t, v in by_type.items()})


def duality_sweep(families: Sequence[FamilyDescriptor], jobs: int = 1) -> SweepReport:
    return _sweep(_run(_duality_one, list(families), jobs), "duality_pass")


def zeta_sweep(families: Sequence[FamilyDescriptor], jobs: int = 1) -> SweepReport:
    return _sweep(_run(_zeta_one, list(families), jobs), "pass")
