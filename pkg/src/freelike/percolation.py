"""Bernoulli bond percolation on finite graphs (Cayley balls, trees).

Randomness contract: the uniform for edge ``e`` of trial ``t`` under master
seed ``s`` is element ``e`` of the Philox stream keyed ``[s, t]``.  Trials
are therefore independent, reproducible, and partitionable across workers
with bit-identical results.  An edge is open iff its uniform is < p, so
realizations at p1 < p2 are coupled: every open edge at p1 is open at p2.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from concurrent.futures import ThreadPoolExecutor
from typing import Sequence

import numpy as np

from freelike import _kernels
from freelike.errors import NonBracketingError

__all__ = [
    "PercGraph",
    "from_ball",
    "parse_adjacency",
    "sample_open_edges",
    "clusters",
    "PercCurvePoint",
    "crossing_probability",
    "exact_crossing_small",
    "ThresholdEstimate",
    "threshold_estimate",
    "pc_reference",
    "CompareReport",
    "compare_quotient_vs_tree",
    "wilson_interval",
    "wilson_sigma",
]

_Z95 = 1.959963984540054
EXACT_EDGE_LIMIT = 20
BRACKET_RESOLUTION = Fraction(1, 256)


class PercGraph:
    """Undirected multigraph with a root and a target vertex set."""

    __slots__ = ("n", "edges", "root", "target", "_eu", "_ev")

    def __init__(self, n: int, edges: Sequence[tuple[int, int]], root: int, target):
        edges = tuple((int(u), int(v)) for u, v in edges)
        target = frozenset(int(t) for t in target)
        if n < 1:
            raise ValueError("graph needs at least one vertex")
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range")
        if not 0 <= root < n:
            raise ValueError("root out of range")
        if any(not 0 <= t < n for t in target):
            raise ValueError("target vertex out of range")
        if root in target and n > 1:
            raise ValueError("root may only belong to the target in a 1-vertex graph")
        self.n = n
        self.edges = edges
        self.root = root
        self.target = target
        self._eu = np.array([e[0] for e in edges], dtype=np.int32)
        self._ev = np.array([e[1] for e in edges], dtype=np.int32)

    def __repr__(self):
        return f"<PercGraph n={self.n}, {len(self.edges)} edges, |target|={len(self.target)}>"

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def target_mask(self) -> np.ndarray:
        mask = np.zeros(self.n, dtype=np.uint8)
        for t in self.target:
            mask[t] = 1
        return mask


def from_ball(ball) -> PercGraph:
    """Cayley ball as a percolation graph: root 0, target = outer sphere.

    Self-loops (a generator trivial in the group) are dropped; parallel
    edges from duplicated generators are kept.
    """
    edges = [(u, v) for u, _g, _s, v in ball.edges if u != v]
    return PercGraph(ball.vertex_count, edges, 0, ball.sphere(ball.radius))


def parse_adjacency(text: str) -> PercGraph:
    """Read the adjacency text format (vertices/root/target headers plus
    ``u g+ v`` edge lines)."""
    n = None
    root = 0
    target: set[int] = set()
    edges: list[tuple[int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        low = line.lower()
        if low.startswith("vertices:"):
            n = int(line.split(":", 1)[1])
        elif low.startswith("radius:"):
            continue
        elif low.startswith("root:"):
            root = int(line.split(":", 1)[1])
        elif low.startswith("target:"):
            target = {int(x) for x in line.split(":", 1)[1].split()}
        else:
            parts = line.split()
            if len(parts) != 3:
                raise ValueError(f"line {lineno}: expected 'u g+ v', got {line!r}")
            u, v = int(parts[0]), int(parts[2])
            if u != v:
                edges.append((u, v))
    if n is None:
        raise ValueError("missing 'vertices:' header")
    return PercGraph(n, edges, root, target)


# -- sampling -------------------------------------------------------------------


def _uniforms(edge_count: int, seed: int, trial: int) -> np.ndarray:
    gen = np.random.Generator(np.random.Philox(key=[seed, trial]))
    return gen.random(edge_count)


def sample_open_edges(g: PercGraph, p: float, seed: int, trial: int = 0) -> np.ndarray:
    """Boolean mask: edge open iff its (seed, trial, edge) uniform is < p."""
    if not 0 <= p <= 1:
        raise ValueError("p must lie in [0, 1]")
    return _uniforms(g.edge_count, seed, trial) < p


def clusters(g: PercGraph, open_mask: np.ndarray) -> np.ndarray:
    """Component labels of the open subgraph; the label of a component is
    its minimum vertex index."""
    open_mask = np.asarray(open_mask)
    if open_mask.shape != (g.edge_count,):
        raise ValueError("open mask length must equal the edge count")
    return _kernels.component_labels(
        g.n, g._eu, g._ev, open_mask.astype(np.uint8)
    )


def wilson_interval(k: int, n: int, z: float = _Z95) -> tuple[float, float]:
    if n <= 0:
        raise ValueError("need at least one trial")
    phat = k / n
    denom = 1 + z * z / n
    center = (phat + z * z / (2 * n)) / denom
    half = z * math.sqrt(phat * (1 - phat) / n + z * z / (4 * n * n)) / denom
    # Wilson always contains the point estimate; guard the float rounding.
    return max(0.0, min(center - half, phat)), min(1.0, max(center + half, phat))


def wilson_sigma(k: int, n: int, z: float = _Z95) -> float:
    lo, hi = wilson_interval(k, n, z)
    return (hi - lo) / (2 * z)


@dataclass(frozen=True)
class PercCurvePoint:
    p: float
    trials: int
    crossings: int
    ci95: tuple[float, float]

    @property
    def estimate(self) -> Fraction:
        return Fraction(self.crossings, self.trials)

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "trials": self.trials,
            "crossings": self.crossings,
            "estimate": str(self.estimate),
            "estimate_float": self.crossings / self.trials,
            "ci95": list(self.ci95),
        }


def _count_crossings(
    g: PercGraph, p: float, trials: int, seed: int, workers: int = 1
) -> int:
    mask = g.target_mask()

    def run_range(lo: int, hi: int) -> int:
        count = 0
        for t in range(lo, hi):
            u = _uniforms(g.edge_count, seed, t)
            if _kernels.crossing_from_uniforms(
                g._eu, g._ev, u, p, g.n, g.root, mask
            ):
                count += 1
        return count

    if workers <= 1 or trials < 2 * workers:
        return run_range(0, trials)
    bounds = np.linspace(0, trials, workers + 1, dtype=int)
    with ThreadPoolExecutor(max_workers=workers) as ex:
        parts = ex.map(lambda se: run_range(se[0], se[1]), zip(bounds, bounds[1:]))
    return sum(parts)  # order-independent: result identical for all worker counts


def crossing_probability(
    g: PercGraph, p: float, trials: int, seed: int, workers: int = 1
) -> PercCurvePoint:
    """Monte Carlo estimate of P_p(root's open component meets the target)."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if not 0 <= p <= 1:
        raise ValueError("p must lie in [0, 1]")
    if not g.target:
        raise ValueError("target set is empty")
    k = _count_crossings(g, p, trials, seed, workers)
    return PercCurvePoint(p, trials, k, wilson_interval(k, trials))


def _connected_root_target(g: PercGraph, open_edges) -> bool:
    parent = list(range(g.n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in open_edges:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[rv] = ru
    rr = find(g.root)
    return any(find(t) == rr for t in g.target)


def exact_crossing_small(g: PercGraph, p):
    """Exact crossing probability by summing over all 2^|E| realizations.

    Accepts a float or a Fraction for ``p`` and computes in that arithmetic;
    the edge count is capped at 20 (the top of the cap takes minutes).
    """
    if not g.target:
        raise ValueError("target set is empty")
    e = g.edge_count
    if e > EXACT_EDGE_LIMIT:
        raise ValueError(f"exact enumeration capped at {EXACT_EDGE_LIMIT} edges")
    one = Fraction(1) if isinstance(p, Fraction) else 1.0
    total = one - one  # typed zero
    for mask in range(1 << e):
        open_edges = [g.edges[i] for i in range(e) if mask >> i & 1]
        if _connected_root_target(g, open_edges):
            k = len(open_edges)
            total += p**k * (one - p) ** (e - k)
    return total


@dataclass(frozen=True)
class ThresholdEstimate:
    p_hat: float
    target_crossing: float
    bracket: tuple[float, float]
    trials_per_probe: int
    seed: int
    stopped: str  # "width" or "ambiguous"
    probes: tuple[PercCurvePoint, ...]

    @property
    def sigma(self) -> float:
        last = self.probes[-1]
        return wilson_sigma(last.crossings, last.trials)

    def to_dict(self) -> dict:
        return {
            "p_hat": self.p_hat,
            "target_crossing": self.target_crossing,
            "bracket": list(self.bracket),
            "trials_per_probe": self.trials_per_probe,
            "seed": self.seed,
            "stopped": self.stopped,
            "sigma": self.sigma,
            "probes": [pt.to_dict() for pt in self.probes],
        }


def threshold_estimate(
    g: PercGraph,
    trials_per_probe: int,
    target: float = 0.5,
    seed: int = 0,
    workers: int = 1,
) -> ThresholdEstimate:
    """Bisection for the p where the crossing probability passes ``target``.

    All probes reuse the same coupled trial streams (seed, trial), so the
    empirical crossing curve is monotone in p and bisection is well
    defined.  Stops when the bracket narrows to 1/256, or earlier at the
    probe value itself when the probe's Wilson CI straddles the target
    (statistically ambiguous direction).
    """
    if trials_per_probe < 1:
        raise ValueError("trials_per_probe must be >= 1")
    if not g.target:
        raise ValueError("target set is empty")
    # Bracketing check with the exact endpoints: at p=0 nothing is open,
    # at p=1 everything is.
    est0 = 1.0 if g.root in g.target else 0.0
    est1 = 1.0 if _bfs_reaches(g) else 0.0
    if not est0 <= target <= est1:
        raise NonBracketingError(
            f"target {target} outside crossing range [{est0}, {est1}]"
        )
    lo, hi = 0.0, 1.0
    probes: list[PercCurvePoint] = []
    stopped = "width"
    while hi - lo > BRACKET_RESOLUTION:
        mid = (lo + hi) / 2
        k = _count_crossings(g, mid, trials_per_probe, seed, workers)
        pt = PercCurvePoint(mid, trials_per_probe, k, wilson_interval(k, trials_per_probe))
        probes.append(pt)
        ci_lo, ci_hi = pt.ci95
        if ci_lo < target < ci_hi:
            stopped = "ambiguous"
            p_hat = mid
            break
        if k / trials_per_probe < target:
            lo = mid
        else:
            hi = mid
    else:
        p_hat = (lo + hi) / 2
    return ThresholdEstimate(
        p_hat, target, (lo, hi), trials_per_probe, seed, stopped, tuple(probes)
    )


def _bfs_reaches(g: PercGraph) -> bool:
    seen = {g.root}
    queue = deque([g.root])
    adj: dict[int, list[int]] = {}
    for u, v in g.edges:
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
    while queue:
        x = queue.popleft()
        if x in g.target:
            return True
        for y in adj.get(x, ()):
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return bool(g.target & seen)


def pc_reference(k: int) -> Fraction:
    """Critical probability of the 2k-regular tree: 1 / (2k - 1)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return Fraction(1, 2 * k - 1)


@dataclass(frozen=True)
class CompareReport:
    radius: int
    trials_per_probe: int
    seed: int
    quotient: ThresholdEstimate
    tree: ThresholdEstimate
    graphs_identical: bool
    quotient_vertices: int
    tree_vertices: int
    quotient_edges: int
    tree_edges: int

    @property
    def difference(self) -> float:
        return self.quotient.p_hat - self.tree.p_hat

    @property
    def sigma_combined(self) -> float:
        return math.hypot(self.quotient.sigma, self.tree.sigma)

    def to_dict(self) -> dict:
        return {
            "radius": self.radius,
            "trials_per_probe": self.trials_per_probe,
            "seed": self.seed,
            "p_hat_quotient": self.quotient.p_hat,
            "p_hat_tree": self.tree.p_hat,
            "difference": self.difference,
            "sigma_combined": self.sigma_combined,
            "graphs_identical": self.graphs_identical,
            "quotient_vertices": self.quotient_vertices,
            "tree_vertices": self.tree_vertices,
            "quotient_edges": self.quotient_edges,
            "tree_edges": self.tree_edges,
            "quotient": self.quotient.to_dict(),
            "tree": self.tree.to_dict(),
        }


def compare_quotient_vs_tree(
    presentation,
    gens,
    radius: int,
    trials_per_probe: int,
    seed: int,
    workers: int = 1,
    target: float = 0.5,
) -> CompareReport:
    """Same-seed threshold estimates on the quotient's Cayley ball and on
    the matching free-group ball.

    When the quotient has no relation of length <= 2*radius both balls are
    literally identical and the reported difference is exactly 0; in
    general a quotient's threshold cannot sit below the tree's.
    """
    from freelike.cayley import build_ball
    from freelike.cert import GeneratingSet, girth_scan
    from freelike.oracle import GroupOracle
    from freelike.words import Word

    dehn = GroupOracle.small_cancellation(presentation)
    short = girth_scan(dehn, gens, 2)
    if short.shortest_relation is not None:
        raise ValueError(
            "generating set has a relation of length <= 2 (duplicate or trivial "
            "generator); comparison needs distinct generators"
        )
    k = gens.k
    free_gens = GeneratingSet(
        tuple(Word([i + 1], k) for i in range(k)), label=f"free rank {k}"
    )
    g_ball = build_ball(dehn, gens, radius)
    t_ball = build_ball(GroupOracle.free(k), free_gens, radius)
    g_graph = from_ball(g_ball)
    t_graph = from_ball(t_ball)
    identical = (
        g_graph.n == t_graph.n
        and g_graph.edges == t_graph.edges
        and g_graph.target == t_graph.target
    )
    est_g = threshold_estimate(g_graph, trials_per_probe, target, seed, workers)
    est_t = threshold_estimate(t_graph, trials_per_probe, target, seed, workers)
    return CompareReport(
        radius,
        trials_per_probe,
        seed,
        est_g,
        est_t,
        identical,
        g_graph.n,
        t_graph.n,
        g_graph.edge_count,
        t_graph.edge_count,
    )
