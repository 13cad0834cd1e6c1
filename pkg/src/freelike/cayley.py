"""Cayley-ball construction over a group oracle, inner boundary, Cheeger
upper bounds, and graph export.

Vertices carry the first-discovered BFS word as representative (geodesic in
generator length); vertex 0 is always the identity.  Edge records are
``(source, generator 1..k, sign +1/-1, target)``, deduplicated as undirected
edges on ``(min, max, generator)`` and complete for every source of layer
<= radius - 1.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from freelike.cert import GeneratingSet
from freelike.errors import BudgetExceeded
from freelike.oracle import GroupOracle
from freelike.words import Word, concat, invert

__all__ = [
    "CayleyBall",
    "build_ball",
    "inner_boundary",
    "CheegerReport",
    "cheeger_upper_bound",
    "sub_ball_family",
    "random_connected_family",
    "export_graph",
]

DEFAULT_VERTEX_BUDGET = 1_000_000


class CayleyBall:
    """Radius-r ball with labeled edges and per-vertex word representatives."""

    __slots__ = ("radius", "vertices", "layers", "edges", "generating_set", "_adj")

    def __init__(self, radius, vertices, layers, edges, generating_set):
        self.radius = radius
        self.vertices = list(vertices)
        self.layers = list(layers)
        self.edges = list(edges)
        self.generating_set = generating_set
        self._adj = None

    def __repr__(self):
        return (
            f"<CayleyBall r={self.radius}, {len(self.vertices)} vertices, "
            f"{len(self.edges)} edges>"
        )

    @property
    def vertex_count(self) -> int:
        return len(self.vertices)

    def sphere(self, s: int) -> set[int]:
        return {v for v, l in enumerate(self.layers) if l == s}

    def ball_vertices(self, s: int) -> set[int]:
        return {v for v, l in enumerate(self.layers) if l <= s}

    def adjacency(self) -> list[set[int]]:
        """Undirected neighbor sets (self-loops excluded)."""
        if self._adj is None:
            adj: list[set[int]] = [set() for _ in self.vertices]
            for u, _g, _s, v in self.edges:
                if u != v:
                    adj[u].add(v)
                    adj[v].add(u)
            self._adj = adj
        return self._adj


def build_ball(
    o: GroupOracle,
    z: GeneratingSet | Sequence[Word],
    radius: int,
    budget: int = DEFAULT_VERTEX_BUDGET,
) -> CayleyBall:
    """BFS from the identity, multiplying representatives by the generators.

    ``z`` is a :class:`GeneratingSet` or any sequence of nonempty words
    over the oracle's alphabet (a single word is allowed here; the k >= 2
    constraint belongs to the certification layer).

    New candidates are identified against existing vertices: by the
    backend's canonical key when it has one, else by exact reduced word and
    then oracle equality against the layers a neighbor can reach (distance
    can change by at most 1 along an edge).
    """
    if radius < 0:
        raise ValueError("radius must be >= 0")
    words = z.words if isinstance(z, GeneratingSet) else tuple(z)
    if not words or any(not isinstance(w, Word) or not w for w in words):
        raise ValueError("generators must be nonempty words")
    if any(w.rank != o.rank for w in words):
        raise ValueError("generating set rank does not match oracle")
    empty = Word((), o.rank)
    vertices: list[Word] = [empty]
    layers: list[int] = [0]
    edges: list[tuple[int, int, int, int]] = []
    edge_seen: set[tuple[int, int, int]] = set()
    keyed = o.canonical_key(empty) is not None
    index: dict = {o.canonical_key(empty) if keyed else empty.data: 0}
    layer_members: list[list[int]] = [[0]]

    def identify(w: Word, min_layer: int) -> int | None:
        if keyed:
            return index.get(o.canonical_key(w))
        hit = index.get(w.data)
        if hit is not None:
            return hit
        for layer in range(max(0, min_layer), len(layer_members)):
            for v in layer_members[layer]:
                if o.are_equal(w, vertices[v]):
                    return v
        return None

    for layer in range(radius):
        if layer >= len(layer_members):
            break  # group exhausted before reaching the radius
        frontier = layer_members[layer]
        for u in frontier:
            rep = vertices[u]
            for gi, gen in enumerate(words):
                for sign in (1, -1):
                    cand = concat(rep, gen if sign > 0 else invert(gen))
                    v = identify(cand, layer - 1)
                    if v is None:
                        v = len(vertices)
                        if v >= budget:
                            raise BudgetExceeded(
                                f"ball exceeded the vertex budget of {budget}"
                            )
                        vertices.append(cand)
                        layers.append(layer + 1)
                        index[o.canonical_key(cand) if keyed else cand.data] = v
                        while len(layer_members) <= layer + 1:
                            layer_members.append([])
                        layer_members[layer + 1].append(v)
                    key = (min(u, v), max(u, v), gi + 1)
                    if key not in edge_seen:
                        edge_seen.add(key)
                        edges.append((u, gi + 1, sign, v))
    return CayleyBall(radius, vertices, layers, edges, z)


def inner_boundary(ball: CayleyBall, members: Iterable[int]) -> set[int]:
    """Members of A having a neighbor outside A.

    Every member must lie at layer <= radius - 1, where adjacency is
    complete; deeper members would silently under-report the boundary.
    """
    a = set(members)
    if not a:
        raise ValueError("vertex set must be nonempty")
    for v in a:
        if not 0 <= v < ball.vertex_count:
            raise ValueError(f"vertex {v} not in ball")
        if ball.layers[v] > ball.radius - 1:
            raise ValueError(
                f"vertex {v} lies at layer {ball.layers[v]}; adjacency is only "
                f"complete through layer {ball.radius - 1}"
            )
    adj = ball.adjacency()
    return {v for v in a if any(w not in a for w in adj[v])}


@dataclass(frozen=True)
class CheegerReport:
    best_ratio: Fraction
    best_label: str
    best_set: frozenset[int]
    candidates: tuple[tuple[str, int, int, Fraction], ...]  # label, |A|, |bd A|, ratio

    def to_dict(self) -> dict:
        return {
            "best_ratio": str(self.best_ratio),
            "best_ratio_float": float(self.best_ratio),
            "best_label": self.best_label,
            "best_set_size": len(self.best_set),
            "candidates": [
                {
                    "label": label,
                    "size": size,
                    "boundary": bd,
                    "ratio": str(ratio),
                    "ratio_float": float(ratio),
                }
                for label, size, bd, ratio in self.candidates
            ],
        }


def sub_ball_family(ball: CayleyBall) -> list[tuple[str, set[int]]]:
    """All sub-balls of radius 0 .. r-1 (the layers where adjacency is complete)."""
    return [
        (f"ball<=#{s}", ball.ball_vertices(s)) for s in range(ball.radius)
    ]


def random_connected_family(
    ball: CayleyBall, count: int, size: int, seed: int
) -> list[tuple[str, set[int]]]:
    """Seeded random connected sets grown from the identity by BFS attachment.

    Growth stays inside layer <= r-1; if the region is smaller than ``size``
    the set saturates there.
    """
    rng = random.Random(seed)
    adj = ball.adjacency()
    region = ball.ball_vertices(ball.radius - 1) if ball.radius > 0 else set()
    out = []
    for i in range(count):
        a = {0}
        frontier = sorted((adj[0] & region) - a)
        while len(a) < size and frontier:
            v = rng.choice(frontier)
            a.add(v)
            frontier = sorted(
                {w for x in a for w in adj[x] if w in region} - a
            )
        out.append((f"random#{i}", a))
    return out


def cheeger_upper_bound(
    ball: CayleyBall, candidates: Sequence[tuple[str, set[int]]]
) -> CheegerReport:
    """Minimum of |inner boundary| / |A| over the candidate family.

    Any value returned is an upper bound for the Cheeger constant of the
    full Cayley graph.
    """
    if not candidates:
        raise ValueError("candidate family must be nonempty")
    rows = []
    best = None
    for label, a in candidates:
        bd = inner_boundary(ball, a)
        ratio = Fraction(len(bd), len(a))
        rows.append((label, len(a), len(bd), ratio))
        if best is None or ratio < best[0]:
            best = (ratio, label, frozenset(a))
    assert best is not None
    return CheegerReport(best[0], best[1], best[2], tuple(rows))


# -- export / import ------------------------------------------------------------


def export_graph(ball: CayleyBall, fmt: str = "adjacency") -> str:
    """Deterministic text form; ``adjacency`` is the percolation input format
    (root 0 and the radius sphere as target), ``dot`` a labeled digraph."""
    if fmt == "adjacency":
        lines = [
            f"vertices: {ball.vertex_count}",
            f"radius: {ball.radius}",
            "root: 0",
            "target: " + " ".join(str(v) for v in sorted(ball.sphere(ball.radius))),
        ]
        for u, g, s, v in ball.edges:
            lines.append(f"{u} {g}{'+' if s > 0 else '-'} {v}")
        return "\n".join(lines) + "\n"
    if fmt == "dot":
        lines = ["digraph cayley {"]
        for u, g, s, v in ball.edges:
            lines.append(f'  {u} -> {v} [label="g{g}{"+" if s > 0 else "-"}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown export format {fmt!r}")
