"""Command-line front end.

Exit codes: 0 success, 1 internal error, 2 invalid input or no match,
3 verification failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import List, Optional, Sequence

from . import dynkin
from .families import (
    XYZ,
    DEFAULT_BOUND,
    FamilyDescriptor,
    FamilyError,
    build_dual_pair,
    build_special_F,
    build_virtual,
    check_family,
    classify_polynomial,
    coordinate_change,
    enumerate_by_gorenstein,
    exponent_matrix,
    governing_row,
    gorenstein_of,
    invertible_polynomial,
    reduced_weights_of_f,
    split_virtual,
    virtual_condition,
    virtual_grid,
    virtual_weight_systems,
)
from .grading import (
    ExponentMatrix,
    GradingError,
    canonical_weights,
    grading_index,
    reduce_weights,
    symmetry_group,
)
from .invariants import (
    OrbitError,
    dolgachev_icis,
    dolgachev_icis_closed,
    dolgachev_virtual,
    dolgachev_virtual_closed,
    gabrielov_icis,
    gabrielov_virtual,
    verify_strange_duality,
)
from .polyalg import PolyError, parse_poly
from .series import SeriesError, orbit_polynomial, poincare_series, verify_zeta_theorem, zeta_infinity
from .tables import FixtureError, Fixtures, load_fixtures
from .verification import bimodal_families, duality_sweep, verify_tables, zeta_sweep

EXIT_OK, EXIT_INTERNAL, EXIT_INVALID, EXIT_FAILED = 0, 1, 2, 3

_INPUT_ERRORS = (FamilyError, GradingError, PolyError, FixtureError, dynkin.DynkinError)


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_INVALID):
        super().__init__(message)
        self.code = code


# --------------------------------------------------------------------------
# helpers

def _emit(args, data: dict, lines: Sequence[str]) -> None:
    if args.json:
        print(json.dumps(data, ensure_ascii=False, indent=2))
    else:
        for line in lines:
            print(line)


def _fixtures(args) -> Fixtures:
    if not hasattr(args, "_fixtures"):
        args._fixtures = load_fixtures(args.fixtures)
    return args._fixtures


def _family(args, text: str) -> FamilyDescriptor:
    """A descriptor such as IIA(2,3,18), or an Arnold name from the bimodal table."""
    names = bimodal_families(_fixtures(args))
    fam = names.get(text) or names.get(text.replace("#", "♯")) or FamilyDescriptor.parse(text)
    check_family(fam)
    return fam


def _fmt(values) -> str:
    return ",".join(map(str, values))


def _grouped(values) -> str:
    return f"{values[0]},{values[1]};{values[2]},{values[3]}"


def _try(fn):
    try:
        return fn(), None
    except (FamilyError, OrbitError, PolyError, SeriesError, GradingError) as exc:
        return None, str(exc)


# --------------------------------------------------------------------------
# commands

def cmd_classify(args) -> int:
    f = parse_poly(args.poly, XYZ)
    fam = classify_polynomial(f)
    E = exponent_matrix(fam)
    W = canonical_weights(E)
    red, _ = reduce_weights(W)
    data = {
        "family": fam.to_json(),
        "label": fam.label(),
        "polynomial": str(invertible_polynomial(fam)),
        "weights": red.to_json(),
        "canonical_weights": W.to_json(),
        "group": symmetry_group(E).to_json(),
        "grading_index": grading_index(E),
        "gorenstein": gorenstein_of(fam),
        "virtual": virtual_condition(fam),
    }
    _emit(args, data, [
        f"family: {fam.label()}",
        f"weights: {red}",
        f"canonical weights: {W}",
        f"|G_f|: {symmetry_group(E).order}",
        f"index [G_f:G_0]: {data['grading_index']}",
        f"gorenstein parameter: {data['gorenstein']}",
        f"virtual: {'yes' if data['virtual'] else 'no'}",
    ])
    return EXIT_OK


def _virtual_record(fam) -> dict:
    rec = {"h": str(build_virtual(fam)), "row": governing_row(fam)}
    shift, by, e = coordinate_change(fam)
    rec["coordinate_change"] = f"{shift} -> {shift}+{by}^{e}"
    split, err = _try(lambda: split_virtual(fam))
    if split:
        W1, W2 = virtual_weight_systems(fam)
        rec["faces"] = [{"h": str(split[0]), "weights": W1.to_json()}, {"h": str(split[1]), "weights": W2.to_json()}]
    else:
        rec["faces_error"] = err
    return rec


def cmd_dualize(args) -> int:
    fam = _family(args, args.family)
    pair = build_dual_pair(fam)
    data = {
        "family": fam.to_json(),
        "f": str(invertible_polynomial(fam)),
        "F": str(build_special_F(fam)),
        "pair": pair.to_json(),
        "gorenstein": gorenstein_of(fam),
        "virtual": virtual_condition(fam),
        "pair_invariants": {"gabrielov": list(gabrielov_icis(fam)), "dolgachev_closed": list(dolgachev_icis_closed(fam))},
    }
    dol, err = _try(lambda: dolgachev_icis(fam))
    data["pair_invariants"]["dolgachev"] = list(dol) if dol else None
    if err:
        data["pair_invariants"]["dolgachev_error"] = err
    lines = [
        f"family: {fam.label()}",
        f"f: {data['f']}",
        f"pair: {pair.f1} = {pair.f2} = 0",
        f"pair weights: {pair.weights}",
        f"Gabrielov(pair): {_grouped(gabrielov_icis(fam))}",
        f"Dolgachev(pair): {_fmt(dol) if dol else 'undefined (' + err + ')'}",
    ]
    if virtual_condition(fam):
        v = _virtual_record(fam)
        dv, err = _try(lambda: dolgachev_virtual(fam).as_tuple())
        v["gabrielov"] = list(gabrielov_virtual(fam))
        v["dolgachev_closed"] = list(dolgachev_virtual_closed(fam))
        v["dolgachev"] = list(dv) if dv else None
        if err:
            v["dolgachev_error"] = err
        report = verify_strange_duality(fam, premises=True)
        v["duality"] = report.to_json()
        data["h"] = v
        lines += [
            f"h: {v['h']}",
            f"Gabrielov(h): {_fmt(v['gabrielov'])}",
            f"Dolgachev(h): {_grouped(dv) if dv else 'undefined (' + err + ')'}",
            f"duality: {'pass' if report.duality_pass else 'FAIL'}",
        ]
    _emit(args, data, lines)
    return EXIT_OK


def cmd_virtual(args) -> int:
    fam = _family(args, args.family)
    if not virtual_condition(fam):
        raise CliError(f"{fam} is not a virtual singularity")
    rec = _virtual_record(fam)
    lines = [f"family: {fam.label()}", f"coordinate change: {rec['coordinate_change']}", f"h: {rec['h']}"]
    for i, face in enumerate(rec.get("faces", []), start=1):
        w = face["weights"]
        lines.append(f"h{i}: {face['h']}  weights ({_fmt(w['weights'])};{_fmt(w['degrees'])})")
    if "faces_error" in rec:
        lines.append(f"faces: undefined ({rec['faces_error']})")
    _emit(args, {"family": fam.to_json(), **rec}, lines)
    return EXIT_OK


def cmd_weights(args) -> int:
    if args.poly:
        f = parse_poly(args.target, XYZ)
        E = ExponentMatrix.of(f.support())
        label = str(f)
    else:
        fam = _family(args, args.target)
        E = exponent_matrix(fam)
        label = fam.label()
    W = canonical_weights(E)
    red, c = reduce_weights(W)
    G = symmetry_group(E)
    data = {"input": label, "exponent_matrix": E.to_json(), "canonical": W.to_json(), "reduced": red.to_json(),
            "group": G.to_json(), "grading_index": grading_index(E)}
    _emit(args, data, [
        f"input: {label}",
        f"canonical weights: {W}",
        f"reduced weights: {red}",
        f"c_f: {c}",
        f"G_f: {' x '.join(f'Z/{d}' for d in G.invariant_factors) or 'trivial'} (order {G.order})",
    ])
    return EXIT_OK


def cmd_poincare(args) -> int:
    fam = _family(args, args.family)
    pair = build_dual_pair(fam)
    P = poincare_series(pair.weights)
    data = {"family": fam.to_json(), "weights": pair.weights.to_json(), "poincare": {"text": P.to_text(), **P.to_json()}}
    lines = [f"family: {fam.label()}", f"weights: {pair.weights}", f"P(t) = {P.to_text()}"]
    dol, err = _try(lambda: dolgachev_icis(fam))
    if dol:
        Or = orbit_polynomial(dol)
        data["orbit"] = {"text": Or.to_text(), **Or.to_json()}
        data["product"] = {"text": (P * Or).to_text(), **(P * Or).to_json()}
        lines += [f"Or(t) = {Or.to_text()}", f"P(t) Or(t) = {(P * Or).to_text()}"]
    _emit(args, data, lines)
    return EXIT_OK


def cmd_zeta(args) -> int:
    if args.poly:
        h = parse_poly(args.target, XYZ)
        z = zeta_infinity(h, reduced=args.reduced)
        _emit(args, {"polynomial": str(h), "zeta": {"text": z.to_text(), **z.to_json()}, "reduced": args.reduced},
              [f"zeta = {z.to_text()}", f"degree: {z.degree}"])
        return EXIT_OK
    fam = _family(args, args.target)
    if not virtual_condition(fam):
        raise CliError(f"{fam} is not a virtual singularity")
    rep = verify_zeta_theorem(fam)
    lines = [f"family: {fam.label()}"]
    if rep.zeta is not None:
        lines.append(f"reduced zeta = {rep.zeta.to_text()}  (degree {rep.zeta.degree})")
    if rep.rhs is not None:
        lines.append(f"P(t) Or(t) = {rep.rhs.to_text()}")
    lines.append(f"theorem: {'pass' if rep.passed else 'FAIL'}" + (f" ({rep.error})" if rep.error else ""))
    _emit(args, rep.to_json(), lines)
    return EXIT_OK if rep.passed else EXIT_FAILED


def cmd_verify(args) -> int:
    fx = _fixtures(args)
    families = [_family(args, f) for f in args.family] if args.family else None
    if args.scope == "tables":
        wanted = args.tables.split(",") if args.tables else None
        rep = verify_tables(fx, args.grid_bound, algorithmic_dolgachev=args.algorithmic, tables=wanted,
                            families=families)
        lines = [f"{t}: {s['checked']} checks, {s['mismatches']} mismatches, {s['skipped']} skipped"
                 for t, s in rep.summary().items()]
        lines += [f"MISMATCH {m.table} {m.subject} [{m.field}]: expected {m.expected}, got {m.actual}"
                  for m in rep.mismatches[:args.limit]]
        lines.append("tables: " + ("pass" if rep.passed else "FAIL"))
        _emit(args, rep.to_json(args.limit), lines)
        return EXIT_OK if rep.passed else EXIT_FAILED
    if families is None:
        if args.scope == "zeta" and not args.grid:
            families = list(bimodal_families(fx).values())
        else:
            families = list(virtual_grid(args.grid_bound))
    else:
        bad = [f for f in families if not virtual_condition(f)]
        if bad:
            raise CliError(f"not virtual: {', '.join(map(str, bad))}")
    sweep = duality_sweep if args.scope == "duality" else zeta_sweep
    rep = sweep(families, args.jobs)
    lines = [f"{t}: {p} pass, {f} fail" for t, (p, f) in sorted(rep.by_type.items())]
    for r in rep.failures[:args.limit]:
        fam = FamilyDescriptor.from_json(r["family"])
        lines.append(f"FAIL {fam.label()}" + (f": {r['error']}" if r.get("error") else ""))
    lines.append(f"{args.scope}: {rep.passed}/{rep.total} " + ("pass" if rep.ok else "FAIL"))
    _emit(args, rep.to_json(args.limit), lines)
    return EXIT_OK if rep.ok else EXIT_FAILED


def _known_names(fx: Fixtures) -> dict:
    out = {}
    for r in fx.rows("T9"):
        out[(r["type"], tuple(r["params"]))] = r["name"]
    return out


def cmd_enumerate(args) -> int:
    fams = enumerate_by_gorenstein(args.a, args.grid_bound)
    names = _known_names(_fixtures(args))
    rows = [{"family": f.to_json(), "label": f.label(), "gorenstein": gorenstein_of(f), "h": str(build_virtual(f)),
             "name": names.get((f.type_tag, f.params))} for f in fams]
    lines = [f"{r['label']}  a={r['gorenstein']}  h={r['h']}" + (f"  {r['name']}" if r["name"] else "") for r in rows]
    lines.append(f"{len(rows)} families")
    _emit(args, {"a": args.a, "bound": args.grid_bound, "families": rows}, lines)
    return EXIT_OK if rows else EXIT_INVALID


def cmd_dynkin(args) -> int:
    fx = _fixtures(args)
    if args.gamma:
        gamma = [int(x) for x in args.gamma.replace(";", ",").split(",")]
        presentation = args.presentation or ("pi" if len(gamma) == 4 else "spqr")
        if presentation == "spqr":
            B = dynkin.spqr_graph(gamma)
        elif presentation == "pi":
            B = dynkin.pi_graph(gamma)
        else:
            raise CliError("the expanded presentation needs a name from the diagram table")
        title = f"{presentation}({_fmt(gamma)})"
    else:
        rows = [r for r in fx.rows("T12") if r["name"] in (args.name, args.name.replace("♯", "#"))]
        if not rows:
            raise CliError(f"no diagram row named {args.name!r}")
        spec = dynkin.diagram_spec(rows[0])
        presentation = args.presentation or "expanded"
        if presentation == "expanded":
            B = dynkin.expanded_diagram(spec)
        elif presentation == "spqr":
            B = dynkin.spqr_graph(spec.gamma)
        else:
            t11 = {r["name"]: r for r in fx.rows("T11")}
            B = dynkin.pi_graph(t11[spec.name]["gab_icis"])
        title = f"{spec.name} {presentation}"
        if args.search:
            seq = dynkin.search_braid_sequence(dynkin.expanded_diagram(spec), dynkin.spqr_graph(spec.gamma),
                                               depth=args.depth)
            print(f"braid search (depth {args.depth}): " + ("not found" if seq is None else repr(seq)),
                  file=sys.stderr)
    if args.format == "dot":
        text = B.to_dot(title)
    else:
        text = json.dumps({"name": title, **B.to_json(), "invariants": dynkin.invariants(B)},
                          ensure_ascii=False, indent=2) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


# --------------------------------------------------------------------------

def _global_defaults() -> dict:
    return {"json": False, "fixtures": None, "grid_bound": DEFAULT_BOUND, "jobs": os.cpu_count() or 1}


def build_parser() -> argparse.ArgumentParser:
    # global flags are accepted before or after the subcommand
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="machine-readable output")
    common.add_argument("--fixtures", default=argparse.SUPPRESS, help="replacement table file (JSON)")
    common.add_argument("--grid-bound", type=int, default=argparse.SUPPRESS, help="largest parameter on the grid")
    common.add_argument("--jobs", type=int, default=argparse.SUPPRESS, help="worker processes for sweeps")
    p = argparse.ArgumentParser(prog="strangedual", description="Strange duality between virtual singularities and complete intersection singularities.", parents=[common])
    sub = p.add_subparsers(dest="command", required=True)
    _add = sub.add_parser

    def add_parser(name, **kw):
        return _add(name, parents=[common], **kw)

    sub.add_parser = add_parser

    s = sub.add_parser("classify", help="identify an invertible polynomial")
    s.add_argument("poly")
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("dualize", help="pair, virtual singularity and invariants of a family")
    s.add_argument("family", help="descriptor such as 'IIA(2,3,18)' or a bimodal name")
    s.set_defaults(func=cmd_dualize)

    s = sub.add_parser("virtual", help="virtual singularity h and its faces")
    s.add_argument("family")
    s.set_defaults(func=cmd_virtual)

    s = sub.add_parser("weights", help="weights and symmetry group")
    s.add_argument("target", help="family descriptor, or a polynomial with --poly")
    s.add_argument("--poly", action="store_true")
    s.set_defaults(func=cmd_weights)

    s = sub.add_parser("poincare", help="Poincare series of the dual pair")
    s.add_argument("family")
    s.set_defaults(func=cmd_poincare)

    s = sub.add_parser("zeta", help="zeta function at infinity")
    s.add_argument("target", help="family descriptor, or a polynomial with --poly")
    s.add_argument("--poly", action="store_true")
    s.add_argument("--reduced", action="store_true", help="divide by (1-t) (with --poly)")
    s.set_defaults(func=cmd_zeta)

    s = sub.add_parser("verify", help="check tables or theorems")
    s.add_argument("scope", choices=("tables", "duality", "zeta"))
    s.add_argument("--family", action="append", help="restrict to this family (repeatable)")
    s.add_argument("--tables", help="comma-separated table ids, e.g. T4,T9")
    s.add_argument("--algorithmic", action="store_true",
                   help="also compare Dolgachev columns with the orbit computation on the grid")
    s.add_argument("--grid", action="store_true", help="zeta scope: sweep the grid instead of the bimodal rows")
    s.add_argument("--limit", type=int, default=20, help="failures to list")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("enumerate", help="virtual families by Gorenstein parameter")
    s.add_argument("a", type=int, help="Gorenstein parameter; any negative value selects all a < 0")
    s.set_defaults(func=cmd_enumerate)

    s = sub.add_parser("dynkin", help="Coxeter-Dynkin diagrams")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("name", nargs="?", help="bimodal name, e.g. 'J_{3,-1}'")
    g.add_argument("--gamma", help="three or four Gabrielov numbers")
    s.add_argument("--presentation", choices=("expanded", "spqr", "pi"))
    s.add_argument("--format", choices=("dot", "json"), default="dot")
    s.add_argument("--output", help="write to this file")
    s.add_argument("--search", action="store_true", help="breadth-first search for braid moves (stderr)")
    s.add_argument("--depth", type=int, default=12)
    s.set_defaults(func=cmd_dynkin)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INVALID
    # the global actions are shared with every subparser, so defaults are filled in here
    for key, value in _global_defaults().items():
        if not hasattr(args, key):
            setattr(args, key, value)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except _INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except Exception as exc:  # noqa: BLE001 - report, do not crash
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
