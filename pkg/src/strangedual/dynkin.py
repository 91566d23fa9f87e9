"""Intersection matrices of distinguished bases and the graphs drawn from them.

Conventions: the diagonal is -2, a plain edge is +1, a double edge is -2 and
a dashed edge is -1 (see ``EDGE_WEIGHTS``).  Reflections act by
s_d(x) = x + <x, d> d, and the Coxeter element of an ordered basis is the
product s_1 s_2 ... s_mu.
"""

from __future__ import annotations

import json
import random
from collections import deque
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from . import linalg

__all__ = [
    "DynkinError",
    "EDGE_WEIGHTS",
    "IntersectionMatrix",
    "DiagramSpec",
    "seed_diagram",
    "gabrielov_expand",
    "spqr_graph",
    "pi_graph",
    "braid_move",
    "coxeter_element",
    "coxeter_charpoly",
    "invariants",
    "random_braid_check",
    "search_braid_sequence",
    "diagram_spec",
    "expanded_diagram",
]


class DynkinError(ValueError):
    pass


EDGE_WEIGHTS = {"plain": 1, "double": -2, "dashed": -1}


@dataclass(frozen=True)
class IntersectionMatrix:
    labels: Tuple[str, ...]
    entries: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        entries = tuple(tuple(int(x) for x in row) for row in self.entries)
        labels = tuple(self.labels)
        n = len(entries)
        if len(labels) != n or any(len(r) != n for r in entries):
            raise DynkinError("labels and matrix size disagree")
        for i in range(n):
            if entries[i][i] != -2:
                raise DynkinError(f"diagonal entry {i} is {entries[i][i]}, expected -2")
            for j in range(i):
                if entries[i][j] != entries[j][i]:
                    raise DynkinError(f"matrix not symmetric at ({i},{j})")
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "labels", labels)

    @classmethod
    def from_edges(cls, labels: Sequence[str], edges: Dict[Tuple[int, int], int]) -> "IntersectionMatrix":
        n = len(labels)
        M = [[-2 if i == j else 0 for j in range(n)] for i in range(n)]
        for (i, j), w in edges.items():
            M[i][j] = M[j][i] = w
        return cls(tuple(labels), tuple(map(tuple, M)))

    @property
    def size(self) -> int:
        return len(self.labels)

    def as_list(self) -> List[List[int]]:
        return [list(r) for r in self.entries]

    def edges(self) -> List[Tuple[int, int, int]]:
        n = self.size
        return [(i, j, self.entries[i][j]) for i in range(n) for j in range(i + 1, n) if self.entries[i][j]]

    def det(self) -> int:
        return int(linalg.det(self.as_list()))

    def rank(self) -> int:
        return linalg.rank(self.as_list())

    def to_json(self) -> dict:
        return {
            "labels": list(self.labels),
            "matrix": self.as_list(),
            "edges": [{"source": self.labels[i], "target": self.labels[j], "weight": w} for i, j, w in self.edges()],
        }

    def to_dot(self, name: str = "G") -> str:
        style = {v: k for k, v in EDGE_WEIGHTS.items()}
        lines = [f'graph "{name}" {{']
        for i, lab in enumerate(self.labels):
            lines.append(f'  n{i} [label="{lab}"];')
        for i, j, w in self.edges():
            kind = style.get(w, "solid")
            attrs = {"plain": "style=solid", "dashed": "style=dashed", "double": 'color="black:black"'}.get(kind, "style=solid")
            lines.append(f"  n{i} -- n{j} [weight={w}, {attrs}];")
        lines.append("}")
        return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# seeds and expansion

# seed diagrams: a) 1-2, b) 1-3-2, c) a star with centre 4 and leaves 1, 2, 3.
_SEEDS = {
    "a": (2, [(0, 1)]),
    "b": (3, [(0, 2), (2, 1)]),
    "c": (4, [(0, 3), (1, 3), (2, 3)]),
}


def seed_diagram(kind: str) -> IntersectionMatrix:
    if kind not in _SEEDS:
        raise DynkinError(f"unknown seed {kind!r}; expected a, b or c")
    n, edges = _SEEDS[kind]
    return IntersectionMatrix.from_edges([str(i + 1) for i in range(n)], {e: EDGE_WEIGHTS["plain"] for e in edges})


def gabrielov_expand(seed: IntersectionMatrix, M: Sequence[int]) -> IntersectionMatrix:
    """Basis (e_j^m), ordered by m then j, with Gabrielov's intersection rules."""
    M = [int(m) for m in M]
    if len(M) != seed.size:
        raise DynkinError(f"{len(M)} counts for a seed with {seed.size} vertices")
    if any(m < 1 for m in M):
        raise DynkinError(f"counts must be positive: {M}")
    basis = [(j, m) for m in range(1, max(M) + 1) for j in range(seed.size) if m <= M[j]]
    E = seed.entries
    n = len(basis)
    out = [[0] * n for _ in range(n)]
    for a, (j, m) in enumerate(basis):
        for b, (jj, mm) in enumerate(basis):
            if a == b:
                out[a][b] = -2
            elif m == mm:
                out[a][b] = E[j][jj]
            elif abs(mm - m) == 1 and j == jj:
                out[a][b] = 1
            elif abs(mm - m) == 1 and (mm - m) * (jj - j) < 0:
                out[a][b] = -E[j][jj]
    labels = [f"e{j + 1}^{m}" for j, m in basis]
    return IntersectionMatrix(tuple(labels), tuple(map(tuple, out)))


# --------------------------------------------------------------------------
# target graphs

def _arm(labels, edges, prefix: str, length: int) -> List[int]:
    """Append an arm d^prefix_1 - ... - d^prefix_length; returns its indices."""
    idx = []
    for s in range(1, length + 1):
        labels.append(f"δ^{prefix}_{s}")
        idx.append(len(labels) - 1)
        if s > 1:
            edges[(idx[-2], idx[-1])] = EDGE_WEIGHTS["plain"]
    return idx


def spqr_graph(gamma: Sequence[int]) -> IntersectionMatrix:
    """The graph S_{g1,g2,g3} in the basis order (d_1; arms 1, 2, 3; d_{mu-1}, d_mu)."""
    g = [int(x) for x in gamma]
    if len(g) != 3 or any(x < 1 for x in g):
        raise DynkinError(f"expected three positive Gabrielov numbers, got {gamma}")
    mu = sum(g)
    labels = ["δ_1"]
    edges: Dict[Tuple[int, int], int] = {}
    ends = []
    for i, gi in enumerate(g, start=1):
        arm = _arm(labels, edges, str(i), gi - 1)
        if arm:
            ends.append(arm[-1])
    labels += [f"δ_{mu - 1}", f"δ_{mu}"]
    centre, hub, top = 0, len(labels) - 2, len(labels) - 1
    for e in ends:
        edges[(e, centre)] = EDGE_WEIGHTS["plain"]
        edges[(e, hub)] = EDGE_WEIGHTS["plain"]
    edges[(centre, hub)] = EDGE_WEIGHTS["double"]
    edges[(hub, top)] = EDGE_WEIGHTS["plain"]
    return IntersectionMatrix.from_edges(labels, edges)


def pi_graph(gamma: Sequence[int]) -> IntersectionMatrix:
    """The graph Pi_{g1,g2,g3,g4}: arms 1, 2 meet the pair (d_{r-4}, d_{r-3}),
    arms 3, 4 meet the pair (d_r, d_{r-1}), the two pairs are fully joined,
    and d_{r-2} hangs on d_r with a dashed edge to d_{r-4}.

    Basis order: arms 1 to 4, then d_{r-4}, ..., d_r.
    """
    g = [int(x) for x in gamma]
    if len(g) != 4 or any(x < 1 for x in g):
        raise DynkinError(f"expected four positive Gabrielov numbers, got {gamma}")
    rho = sum(x - 1 for x in g) + 5
    labels: List[str] = []
    edges: Dict[Tuple[int, int], int] = {}
    ends = []
    for i, gi in enumerate(g, start=1):
        arm = _arm(labels, edges, str(i), gi - 1)
        ends.append(arm[-1] if arm else None)
    base = len(labels)
    labels += [f"δ_{rho - 4}", f"δ_{rho - 3}", f"δ_{rho - 2}", f"δ_{rho - 1}", f"δ_{rho}"]
    d4, d3, d2, d1, d0 = base, base + 1, base + 2, base + 3, base + 4
    plain, double, dashed = EDGE_WEIGHTS["plain"], EDGE_WEIGHTS["double"], EDGE_WEIGHTS["dashed"]
    for e in ends[:2]:
        if e is not None:
            edges[(e, d4)] = plain
            edges[(e, d3)] = plain
    for e in ends[2:]:
        if e is not None:
            edges[(e, d0)] = plain
            edges[(e, d1)] = plain
    edges[(d4, d3)] = double
    edges[(d0, d1)] = double
    for a, b in ((d4, d0), (d4, d1), (d3, d0), (d3, d1), (d2, d0)):
        edges[(a, b)] = plain
    edges[(d2, d4)] = dashed
    return IntersectionMatrix.from_edges(labels, edges)


# --------------------------------------------------------------------------
# braid moves and invariants

def braid_move(B: IntersectionMatrix, i: int, direction: int = 1) -> IntersectionMatrix:
    """Elementary transformation at positions (i, i+1), 0-based.

    direction +1: (d_i, d_{i+1}) -> (d_{i+1}, s_{d_{i+1}}(d_i));
    direction -1: (d_i, d_{i+1}) -> (s_{d_i}(d_{i+1}), d_i).
    """
    n = B.size
    if not 0 <= i < n - 1:
        raise DynkinError(f"braid index {i} out of range for size {n}")
    if direction not in (1, -1):
        raise DynkinError("direction must be +1 or -1")
    S = B.as_list()
    # new basis vectors as integer combinations of the old ones
    T = linalg.identity(n)
    T = [[int(x) for x in row] for row in T]
    if direction == 1:
        c = S[i][i + 1]
        T[i] = [1 if k == i + 1 else 0 for k in range(n)]
        T[i + 1] = [1 if k == i else (c if k == i + 1 else 0) for k in range(n)]
    else:
        c = S[i][i + 1]
        T[i] = [1 if k == i + 1 else (c if k == i else 0) for k in range(n)]
        T[i + 1] = [1 if k == i else 0 for k in range(n)]
    new = linalg.matmul(linalg.matmul(T, S), linalg.transpose(T))
    labels = list(B.labels)
    labels[i], labels[i + 1] = labels[i + 1], labels[i]
    return IntersectionMatrix(tuple(labels), tuple(tuple(int(x) for x in r) for r in new))


def coxeter_element(B: IntersectionMatrix) -> List[List[int]]:
    """Matrix of s_1 ... s_mu acting on coordinates in the given basis."""
    n = B.size
    S = B.entries
    C = [[int(i == j) for j in range(n)] for i in range(n)]
    for k in range(n - 1, -1, -1):
        # s_k changes only coordinate k: x_k -> x_k + sum_j S[k][j] x_j
        row = [sum(S[k][j] * C[j][c] for j in range(n)) for c in range(n)]
        C[k] = [C[k][c] + row[c] for c in range(n)]
    return C


def coxeter_charpoly(B: IntersectionMatrix) -> Tuple[int, ...]:
    """Characteristic polynomial of the Coxeter element, highest degree first."""
    return tuple(int(c) for c in linalg.charpoly(coxeter_element(B)))


def invariants(B: IntersectionMatrix) -> dict:
    return {"size": B.size, "charpoly": list(coxeter_charpoly(B)), "det": B.det(), "rank": B.rank()}


def random_braid_check(B: IntersectionMatrix, sequences: int = 100, length: int = 12, seed: int = 0) -> int:
    """Apply random move sequences; returns how many of them preserved all invariants."""
    rng = random.Random(seed)
    ref = invariants(B)
    ok = 0
    for _ in range(sequences):
        C = B
        for _ in range(length):
            C = braid_move(C, rng.randrange(B.size - 1), rng.choice((1, -1)))
        ok += invariants(C) == ref
    return ok


def _canonical(B: IntersectionMatrix) -> Tuple[Tuple[int, ...], ...]:
    # matrices up to sign changes of basis vectors: make each first nonzero
    # off-diagonal entry in row order positive by a spanning-forest sweep
    n = B.size
    S = B.as_list()
    sign = [0] * n
    for r in range(n):
        if sign[r]:
            continue
        sign[r] = 1
        queue = deque([r])
        while queue:
            a = queue.popleft()
            for b in range(n):
                if b != a and S[a][b] and not sign[b]:
                    sign[b] = sign[a] if S[a][b] > 0 else -sign[a]
                    queue.append(b)
    return tuple(tuple(sign[i] * sign[j] * S[i][j] for j in range(n)) for i in range(n))


def search_braid_sequence(source: IntersectionMatrix, target: IntersectionMatrix,
                          depth: int = 12, limit: int = 200000) -> Optional[List[Tuple[int, int]]]:
    """Breadth-first search for moves taking source to target up to basis signs.

    Returns the lexicographically least shortest sequence found, or None
    when the depth or node limit is exhausted.
    """
    if source.size != target.size:
        return None
    goal = _canonical(target)
    start = _canonical(source)
    if start == goal:
        return []
    moves = [(i, d) for i in range(source.size - 1) for d in (1, -1)]
    seen = {start}
    frontier = [(source, [])]
    for _ in range(depth):
        nxt = []
        for B, path in frontier:
            for i, d in moves:
                C = braid_move(B, i, d)
                key = _canonical(C)
                if key in seen:
                    continue
                if key == goal:
                    return path + [(i, d)]
                seen.add(key)
                if len(seen) > limit:
                    return None
                nxt.append((C, path + [(i, d)]))
        frontier = nxt
    return None


# --------------------------------------------------------------------------
# named diagram rows (fixture T12)

@dataclass(frozen=True)
class DiagramSpec:
    name: str
    seed: str
    M: Tuple[int, ...]
    gamma: Tuple[int, int, int]
    mu: int

    def __post_init__(self):
        arity = {"a": 2, "b": 3, "c": 4}
        if arity.get(self.seed) != len(self.M):
            raise DynkinError(f"{self.name}: seed {self.seed} does not match {len(self.M)} counts")
        if sum(self.M) != self.mu:
            raise DynkinError(f"{self.name}: sum of M_j is {sum(self.M)}, expected {self.mu}")

    def to_json(self) -> dict:
        return {"name": self.name, "seed": self.seed, "M": list(self.M), "gamma": list(self.gamma), "mu": self.mu}


def diagram_spec(row: dict) -> DiagramSpec:
    """Build a spec from a fixture row; M and gamma already include the extra critical point."""
    M = list(row["M"])
    gamma = list(row["gamma"])
    seed = {2: "a", 3: "b", 4: "c"}.get(len(M))
    if seed is None:
        raise DynkinError(f"{row.get('name')}: {len(M)} counts match no seed")
    return DiagramSpec(row["name"], seed, tuple(M), tuple(gamma), int(row["mu"]))


def expanded_diagram(spec: DiagramSpec) -> IntersectionMatrix:
    return gabrielov_expand(seed_diagram(spec.seed), spec.M)


def dumps(B: IntersectionMatrix) -> str:
    return json.dumps(B.to_json(), ensure_ascii=False, sort_keys=True, indent=2)
