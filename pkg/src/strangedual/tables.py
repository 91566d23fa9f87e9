"""Table fixtures: closed forms stored as data, evaluated exactly.

Formulas are small arithmetic expressions in the family parameters, parsed
with :mod:`ast` and evaluated over :class:`fractions.Fraction`; nothing is
passed to ``eval``.
"""

from __future__ import annotations

import ast
import json
import re
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Dict, List, Mapping, Optional, Sequence, Union

from .polyalg import SparsePoly, parse_poly

__all__ = [
    "FixtureError",
    "Fixtures",
    "load_fixtures",
    "evaluate",
    "evaluate_int",
    "instantiate",
    "bindings",
]

TABLE_IDS = tuple(f"T{i}" for i in range(1, 13))


class FixtureError(ValueError):
    pass


_BINOPS = {
    ast.Add: lambda a, b: a + b,
    ast.Sub: lambda a, b: a - b,
    ast.Mult: lambda a, b: a * b,
    ast.Div: lambda a, b: _divide(a, b),
}
def _divide(a, b):
    if b == 0:
        raise FixtureError("division by zero in formula")
    return Fraction(a) / b


_CMPS = {ast.Eq: lambda a, b: a == b, ast.NotEq: lambda a, b: a != b}


def _eval_node(node, env: Mapping[str, Fraction]):
    if isinstance(node, ast.Expression):
        return _eval_node(node.body, env)
    if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
        return node.value
    if isinstance(node, ast.Name):
        if node.id not in env:
            raise FixtureError(f"unknown parameter {node.id!r}")
        return env[node.id]
    if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
        return _BINOPS[type(node.op)](_eval_node(node.left, env), _eval_node(node.right, env))
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        v = _eval_node(node.operand, env)
        return -v if isinstance(node.op, ast.USub) else v
    if isinstance(node, ast.Compare) and len(node.ops) == 1 and type(node.ops[0]) in _CMPS:
        left = _eval_node(node.left, env)
        right = _eval_node(node.comparators[0], env)
        return _CMPS[type(node.ops[0])](left, right)
    raise FixtureError(f"unsupported formula element: {ast.dump(node)}")


@lru_cache(maxsize=4096)
def _parse(expr: str):
    try:
        return ast.parse(expr.strip(), mode="eval")
    except SyntaxError as exc:
        raise FixtureError(f"cannot parse formula {expr!r}") from exc


def evaluate(expr: Union[str, int], env: Mapping[str, int]) -> Union[Fraction, bool]:
    """Exact value of a formula such as ``"p1*(p3/3+2)"``."""
    if isinstance(expr, int):
        return Fraction(expr)
    v = _eval_node(_parse(expr), env)
    return v if isinstance(v, bool) else Fraction(v)


def evaluate_int(expr: Union[str, int], env: Mapping[str, int]) -> int:
    if type(expr) is int:
        return expr
    v = _eval_node(_parse(expr), env)
    if isinstance(v, bool) or v.denominator != 1:
        raise FixtureError(f"formula {expr!r} is not integral at {dict(env)}: {v}")
    return int(v)


_BRACED = re.compile(r"\{([^{}]*)\}")


def instantiate(template: str, env: Mapping[str, int], variables: Sequence[str]) -> SparsePoly:
    """Parse a polynomial template whose exponents are braced formulas."""
    text = _BRACED.sub(lambda m: str(evaluate_int(m.group(1), env)), template)
    return parse_poly(text, variables)


def bindings(type_tag: str, params: Sequence[int], k: Optional[int] = None) -> Dict[str, int]:
    """Parameter names for a family: (p1, q2, q3) for III, else (p1, p2, p3)."""
    names = ("p1", "q2", "q3") if type_tag == "III" else ("p1", "p2", "p3")
    env = dict(zip(names, params))
    if k is not None:
        env["k"] = k
    return env


class Fixtures:
    """Loaded fixture file with row lookup helpers."""

    def __init__(self, data: Mapping, source: str = "<memory>"):
        missing = [t for t in TABLE_IDS if t not in data]
        if missing:
            raise FixtureError(f"fixture file {source} lacks tables {missing}")
        self.data = data
        self.source = source

    def rows(self, table: str) -> List[dict]:
        return list(self.data[table]["rows"])

    def row(self, table: str, **match) -> dict:
        found = [r for r in self.rows(table) if all(r.get(k) == v for k, v in match.items())]
        if len(found) != 1:
            raise FixtureError(f"{table}: expected one row matching {match}, found {len(found)}")
        return found[0]

    def has_row(self, table: str, **match) -> bool:
        return any(all(r.get(k) == v for k, v in match.items()) for r in self.rows(table))

    def to_json(self) -> dict:
        return json.loads(json.dumps(self.data))


def load_fixtures(path: Optional[Union[str, Path]] = None) -> Fixtures:
    """Packaged tables, or a replacement file when ``path`` is given."""
    if path is None:
        text = resources.files("strangedual").joinpath("data/tables.json").read_text(encoding="utf-8")
        source = "package:data/tables.json"
    else:
        text = Path(path).read_text(encoding="utf-8")
        source = str(path)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FixtureError(f"fixture file {source} is not valid JSON: {exc}") from exc
    return Fixtures(data, source)
