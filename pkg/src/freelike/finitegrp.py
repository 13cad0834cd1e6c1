"""Finite groups as multiplication tables; exhaustive almost-identity checks.

Built-ins (quaternion group of order 8, the symmetric group on 3 points,
cyclic groups and their squares) are constructed from first principles and
table-validated: Latin square, identity, inverses, and a full O(n^3)
associativity check at construction.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from freelike.errors import BudgetExceeded
from freelike.words import Word, enumerate_words

__all__ = [
    "FiniteGroup",
    "builtin",
    "quaternion_group",
    "symmetric_3",
    "cyclic_group",
    "cyclic_squared",
    "AlmostIdentityCheck",
    "verify_almost_identity",
    "is_identity",
    "finite_girth",
    "parse_group",
    "format_group",
]

MAX_ORDER = 64
DEFAULT_TUPLE_BUDGET = 4096


class FiniteGroup:
    """Order-n group given by an n x n index table."""

    __slots__ = ("order", "table", "identity", "element_names", "inverse", "_np_table")

    def __init__(self, table: Sequence[Sequence[int]], element_names: Sequence[str] | None = None):
        n = len(table)
        if n == 0 or n > MAX_ORDER:
            raise ValueError(f"order must be in 1..{MAX_ORDER}")
        rows = tuple(tuple(int(x) for x in row) for row in table)
        if any(len(row) != n for row in rows):
            raise ValueError("table must be square")
        if any(not 0 <= x < n for row in rows for x in row):
            raise ValueError("table entries must be element indices")
        full = frozenset(range(n))
        for i in range(n):
            if frozenset(rows[i]) != full or frozenset(r[i] for r in rows) != full:
                raise ValueError("table is not a Latin square")
        identity = next(
            (e for e in range(n) if all(rows[e][x] == x and rows[x][e] == x for x in range(n))),
            None,
        )
        if identity is None:
            raise ValueError("table has no identity element")
        for a in range(n):
            for b in range(n):
                ab = rows[a][b]
                for c in range(n):
                    if rows[ab][c] != rows[a][rows[b][c]]:
                        raise ValueError(f"table not associative at ({a},{b},{c})")
        inverse = tuple(rows[a].index(identity) for a in range(n))
        names = tuple(element_names) if element_names else tuple(str(i) for i in range(n))
        if len(names) != n:
            raise ValueError("need one name per element")
        object.__setattr__(self, "order", n)
        object.__setattr__(self, "table", rows)
        object.__setattr__(self, "identity", identity)
        object.__setattr__(self, "inverse", inverse)
        object.__setattr__(self, "element_names", names)
        object.__setattr__(self, "_np_table", np.array(rows, dtype=np.int64))

    def __setattr__(self, name, value):
        raise AttributeError("FiniteGroup is immutable")

    def __repr__(self):
        return f"<FiniteGroup order={self.order}>"

    def mult(self, a: int, b: int) -> int:
        return self.table[a][b]

    def element_order(self, a: int) -> int:
        x, n = a, 1
        while x != self.identity:
            x = self.table[x][a]
            n += 1
        return n

    def evaluate_word(self, w: Word, assignment: Sequence[int]) -> int:
        """Left-to-right product of the letter images (inverses via table)."""
        if w.rank != len(assignment):
            raise ValueError(f"word rank {w.rank} != tuple length {len(assignment)}")
        acc = self.identity
        for code in w.data:
            g = assignment[code >> 1]
            acc = self.table[acc][g if code & 1 else self.inverse[g]]
        return acc

    def evaluate_word_batch(self, w: Word, tuples: np.ndarray) -> np.ndarray:
        """Evaluate one word on many tuples at once (rows of ``tuples``)."""
        if tuples.ndim != 2 or tuples.shape[1] != w.rank:
            raise ValueError("tuples must be (m, rank)-shaped")
        inv = np.array(self.inverse, dtype=np.int64)
        acc = np.full(tuples.shape[0], self.identity, dtype=np.int64)
        for code in w.data:
            gs = tuples[:, code >> 1]
            if not code & 1:
                gs = inv[gs]
            acc = self._np_table[acc, gs]
        return acc

    def subgroup_generated(self, tuple_elems: Sequence[int]) -> frozenset[int]:
        """Closure of the elements and their inverses under the product."""
        frontier = {self.identity}
        frontier.update(tuple_elems)
        frontier.update(self.inverse[g] for g in tuple_elems)
        seen = set(frontier)
        gens = sorted(seen)
        while frontier:
            nxt = set()
            for x in frontier:
                for g in gens:
                    y = self.table[x][g]
                    if y not in seen:
                        seen.add(y)
                        nxt.add(y)
            frontier = nxt
        return frozenset(seen)

    def is_generating(self, tuple_elems: Sequence[int]) -> bool:
        return len(self.subgroup_generated(tuple_elems)) == self.order


# -- built-ins ----------------------------------------------------------------


def quaternion_group() -> FiniteGroup:
    """{+-1, +-i, +-j, +-k} with i^2 = j^2 = k^2 = ijk = -1."""
    units = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
    base = {
        ("1", "1"): "1", ("1", "i"): "i", ("1", "j"): "j", ("1", "k"): "k",
        ("i", "1"): "i", ("i", "i"): "-1", ("i", "j"): "k", ("i", "k"): "-j",
        ("j", "1"): "j", ("j", "i"): "-k", ("j", "j"): "-1", ("j", "k"): "i",
        ("k", "1"): "k", ("k", "i"): "j", ("k", "j"): "-i", ("k", "k"): "-1",
    }

    def mul(x: str, y: str) -> str:
        sx, ax = (x[1:], -1) if x.startswith("-") else (x, 1)
        sy, ay = (y[1:], -1) if y.startswith("-") else (y, 1)
        r = base[(sx, sy)]
        sr, ar = (r[1:], -1) if r.startswith("-") else (r, 1)
        return sr if ax * ay * ar > 0 else "-" + sr

    idx = {u: i for i, u in enumerate(units)}
    table = [[idx[mul(a, b)] for b in units] for a in units]
    return FiniteGroup(table, units)


def _perm_name(p: tuple[int, ...]) -> str:
    if p == (0, 1, 2):
        return "e"
    moved = [i for i in range(3) if p[i] != i]
    if len(moved) == 2:
        return f"({moved[0] + 1}{moved[1] + 1})"
    cyc = [0, p[0], p[p[0]]]
    return "(" + "".join(str(x + 1) for x in cyc) + ")"


def symmetric_3() -> FiniteGroup:
    """S3 from permutation composition: (p*q)(x) = p[q[x]]."""
    perms = sorted(itertools.permutations(range(3)))
    idx = {p: i for i, p in enumerate(perms)}
    table = [
        [idx[tuple(p[q[x]] for x in range(3))] for q in perms] for p in perms
    ]
    return FiniteGroup(table, [_perm_name(p) for p in perms])


def cyclic_group(n: int) -> FiniteGroup:
    if n < 1:
        raise ValueError("n must be >= 1")
    table = [[(i + j) % n for j in range(n)] for i in range(n)]
    return FiniteGroup(table, [str(i) for i in range(n)])


def cyclic_squared(n: int) -> FiniteGroup:
    """The direct product Z/n x Z/n."""
    if n < 1:
        raise ValueError("n must be >= 1")
    pairs = [(i, j) for i in range(n) for j in range(n)]
    idx = {p: i for i, p in enumerate(pairs)}
    table = [
        [idx[((a + c) % n, (b + d) % n)] for (c, d) in pairs] for (a, b) in pairs
    ]
    return FiniteGroup(table, [f"({i},{j})" for i, j in pairs])


def builtin(name: str) -> FiniteGroup:
    """Look up Q8, S3, Z<n>, or Z<n>xZ<n>."""
    name = name.strip()
    if name.upper() == "Q8":
        return quaternion_group()
    if name.upper() == "S3":
        return symmetric_3()
    m = re.fullmatch(r"[Zz](\d+)", name)
    if m:
        return cyclic_group(int(m.group(1)))
    m = re.fullmatch(r"[Zz](\d+)x[Zz](\d+)", name)
    if m and m.group(1) == m.group(2):
        return cyclic_squared(int(m.group(1)))
    raise ValueError(f"unknown builtin group {name!r}")


# -- almost-identity verification ----------------------------------------------


@dataclass(frozen=True)
class AlmostIdentityCheck:
    holds: bool
    counterexample: tuple[int, ...] | None = None
    counterexample_names: tuple[str, ...] | None = None
    evaluation: int | None = None  # what the word evaluated to there

    def to_dict(self) -> dict:
        d: dict = {"holds": self.holds}
        if self.counterexample is not None:
            d["counterexample"] = list(self.counterexample)
            d["counterexample_names"] = list(self.counterexample_names or ())
            d["evaluation"] = self.evaluation
        return d


def _all_tuples(g: FiniteGroup, k: int, budget: int) -> np.ndarray:
    if g.order**k > budget:
        raise BudgetExceeded(
            f"{g.order}^{k} tuples exceed the budget of {budget}; raise it explicitly"
        )
    return np.array(list(itertools.product(range(g.order), repeat=k)), dtype=np.int64)


def verify_almost_identity(
    g: FiniteGroup, u: Word, k: int, budget: int = DEFAULT_TUPLE_BUDGET
) -> AlmostIdentityCheck:
    """Does ``u`` vanish on every *generating* k-tuple?  First failing
    generating tuple (lexicographic order) is the counterexample."""
    if u.rank != k:
        raise ValueError(f"word rank {u.rank} != k = {k}")
    tuples = _all_tuples(g, k, budget)
    values = g.evaluate_word_batch(u, tuples)
    for row, val in zip(tuples, values):
        if val != g.identity and g.is_generating(tuple(int(x) for x in row)):
            t = tuple(int(x) for x in row)
            return AlmostIdentityCheck(
                False, t, tuple(g.element_names[x] for x in t), int(val)
            )
    return AlmostIdentityCheck(True)


def is_identity(
    g: FiniteGroup, u: Word, k: int, budget: int = DEFAULT_TUPLE_BUDGET
) -> AlmostIdentityCheck:
    """Does ``u`` vanish on *every* k-tuple, generating or not?"""
    if u.rank != k:
        raise ValueError(f"word rank {u.rank} != k = {k}")
    tuples = _all_tuples(g, k, budget)
    values = g.evaluate_word_batch(u, tuples)
    bad = np.nonzero(values != g.identity)[0]
    if bad.size:
        t = tuple(int(x) for x in tuples[bad[0]])
        return AlmostIdentityCheck(
            False, t, tuple(g.element_names[x] for x in t), int(values[bad[0]])
        )
    return AlmostIdentityCheck(True)


def finite_girth(g: FiniteGroup, tuple_elems: Sequence[int]) -> int:
    """Length of the shortest nontrivial cyclically reduced word vanishing
    on a generating tuple; scanning is capped at |G| + 1 (the order of the
    first element already gives a relation within that bound)."""
    tuple_elems = tuple(tuple_elems)
    if not g.is_generating(tuple_elems):
        raise ValueError("tuple does not generate the group")
    k = len(tuple_elems)
    for u in enumerate_words(k, g.order + 1, mode="canonical"):
        if g.evaluate_word(u, tuple_elems) == g.identity:
            return len(u)  # ascending enumeration: first hit is shortest
    raise AssertionError("a generating tuple always has a relation of length <= |G|")


# -- group file format: order/identity headers, then n table rows --------------


def parse_group(text: str) -> FiniteGroup:
    order = None
    identity = None
    names: list[str] | None = None
    rows: list[list[int]] = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        low = line.lower()
        if low.startswith("order:"):
            order = int(line.split(":", 1)[1])
        elif low.startswith("identity:"):
            identity = int(line.split(":", 1)[1])
        elif low.startswith("names:"):
            names = line.split(":", 1)[1].split()
        else:
            rows.append([int(x) for x in line.split()])
    if order is None:
        raise ValueError("missing 'order:' header")
    if len(rows) != order:
        raise ValueError(f"expected {order} table rows, got {len(rows)}")
    g = FiniteGroup(rows, names)
    if identity is not None and g.identity != identity:
        raise ValueError(f"declared identity {identity} but table says {g.identity}")
    return g


def format_group(g: FiniteGroup) -> str:
    lines = [f"order: {g.order}", f"identity: {g.identity}"]
    lines.append("names: " + " ".join(g.element_names))
    for row in g.table:
        lines.append(" ".join(str(x) for x in row))
    return "\n".join(lines) + "\n"
