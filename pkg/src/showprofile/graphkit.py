"""Graph statistics kernel.

Degree statistics, clustering coefficients, BFS path lengths, Newman
modularity with a Louvain optimizer, an Erdos-Renyi baseline, and the
shifted power curve ``y = a * x**b + c`` fitted by golden-section search
over the exponent.
"""

from __future__ import annotations

import math
import random
from collections import Counter, defaultdict, deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Hashable, Iterable, Mapping, Optional, Sequence

import numpy as np

Node = Hashable


class UndefinedResultError(ValueError):
    """A statistic has no defined value for the given graph."""


@dataclass(frozen=True)
class SocialGraph:
    """Immutable graph over opaque, mutually comparable node ids.

    Undirected edges are stored with the smaller id first. Use
    :meth:`build` rather than the constructor.
    """

    nodes: frozenset
    edges: Mapping[tuple, float]
    directed: bool = False

    @classmethod
    def build(
        cls,
        nodes: Iterable[Node] = (),
        edges: Iterable[tuple] = (),
        directed: bool = False,
    ) -> "SocialGraph":
        """Edges are ``(u, v)`` or ``(u, v, weight)``. Endpoints are added to nodes."""
        node_set = set(nodes)
        store: dict[tuple, float] = {}
        for e in edges:
            if len(e) == 2:
                u, v = e
                w = 1.0
            else:
                u, v, w = e
            if u == v:
                raise ValueError(f"self-loop on {u!r}")
            if w < 0:
                raise ValueError(f"negative weight on {(u, v)!r}")
            key = (u, v) if directed or u < v else (v, u)
            if key in store:
                raise ValueError(f"duplicate edge {key!r}")
            store[key] = float(w)
            node_set.update((u, v))
        return cls(frozenset(node_set), store, directed)

    @cached_property
    def sorted_nodes(self) -> list:
        return sorted(self.nodes)

    @cached_property
    def adjacency(self) -> dict:
        """Undirected view: node -> {neighbor: weight}. For directed graphs
        reciprocal edges are merged by summing weights."""
        adj: dict = {n: {} for n in self.nodes}
        for (u, v), w in self.edges.items():
            adj[u][v] = adj[u].get(v, 0.0) + w
            adj[v][u] = adj[v].get(u, 0.0) + w
        return adj

    @cached_property
    def successors(self) -> dict:
        out: dict = {n: {} for n in self.nodes}
        for (u, v), w in self.edges.items():
            out[u][v] = w
            if not self.directed:
                out[v][u] = w
        return out

    @cached_property
    def predecessors(self) -> dict:
        out: dict = {n: {} for n in self.nodes}
        for (u, v), w in self.edges.items():
            out[v][u] = w
            if not self.directed:
                out[u][v] = w
        return out

    def has_edge(self, u: Node, v: Node) -> bool:
        if self.directed:
            return (u, v) in self.edges
        return ((u, v) if u < v else (v, u)) in self.edges

    def weight(self, u: Node, v: Node) -> float:
        if self.directed:
            return self.edges[(u, v)]
        return self.edges[(u, v) if u < v else (v, u)]

    def degree(self, node: Node) -> int:
        return len(self.adjacency[node])

    def total_weight(self) -> float:
        return float(sum(self.edges.values()))

    def subgraph(self, keep: Iterable[Node]) -> "SocialGraph":
        keep = set(keep) & self.nodes
        edges = [(u, v, w) for (u, v), w in self.edges.items() if u in keep and v in keep]
        return SocialGraph.build(keep, edges, self.directed)

    def undirected(self) -> "SocialGraph":
        """Collapse direction; reciprocal pairs become one edge of weight 1."""
        if not self.directed:
            return self
        pairs = {(u, v) if u < v else (v, u) for u, v in self.edges}
        return SocialGraph.build(self.nodes, sorted(pairs))

    def edge_list(self) -> list[tuple]:
        return [(u, v, w) for (u, v), w in sorted(self.edges.items())]


@dataclass(frozen=True)
class Partition:
    """Total node -> community assignment with community ids 0..count-1."""

    assignment: Mapping
    count: int

    @classmethod
    def from_mapping(cls, mapping: Mapping) -> "Partition":
        # relabel communities in order of first appearance over sorted nodes
        relabel: dict = {}
        out = {}
        for node in sorted(mapping):
            c = mapping[node]
            if c not in relabel:
                relabel[c] = len(relabel)
            out[node] = relabel[c]
        return cls(out, len(relabel))

    @classmethod
    def from_groups(cls, groups: Iterable[Iterable[Node]]) -> "Partition":
        return cls.from_mapping({n: i for i, grp in enumerate(groups) for n in grp})

    def groups(self) -> list[list]:
        out: list[list] = [[] for _ in range(self.count)]
        for node in sorted(self.assignment):
            out[self.assignment[node]].append(node)
        return out


@dataclass(frozen=True)
class CurveFit:
    a: float
    b: float
    c: float
    r_squared: float

    def __call__(self, x):
        return self.a * np.power(np.asarray(x, dtype=float), self.b) + self.c


@dataclass(frozen=True)
class DegreeDistribution:
    histogram: dict[int, int]
    # (degree, fraction of nodes with degree <= that value)
    cdf: list[tuple[int, float]]
    mean: Optional[float]
    node_count: int
    degrees: dict = field(default_factory=dict, compare=False)


def _require_undirected(g: SocialGraph) -> None:
    if g.directed:
        raise ValueError("operation requires an undirected graph")


def degree_distribution(g: SocialGraph, kind: str = "total") -> DegreeDistribution:
    """Histogram and CDF of node degrees.

    ``kind`` selects ``"in"`` or ``"out"`` degree on directed graphs;
    ``"total"`` counts distinct neighbours in the undirected view.
    """
    if kind == "total":
        degrees = {n: len(nbrs) for n, nbrs in g.adjacency.items()}
    elif kind == "in":
        degrees = {n: len(p) for n, p in g.predecessors.items()}
    elif kind == "out":
        degrees = {n: len(s) for n, s in g.successors.items()}
    else:
        raise ValueError(f"unknown degree kind {kind!r}")
    hist = dict(sorted(Counter(degrees.values()).items()))
    n = len(degrees)
    cdf = []
    running = 0
    for d, count in hist.items():
        running += count
        cdf.append((d, running / n))
    mean = sum(degrees.values()) / n if n else None
    return DegreeDistribution(hist, cdf, mean, n, degrees)


def local_clustering_coefficient(g: SocialGraph, node: Node) -> float:
    _require_undirected(g)
    if node not in g.nodes:
        raise KeyError(f"unknown node {node!r}")
    nbrs = list(g.adjacency[node])
    k = len(nbrs)
    if k < 2:
        return 0.0
    adj = g.adjacency
    links = 0
    for i, u in enumerate(nbrs):
        au = adj[u]
        for v in nbrs[i + 1:]:
            if v in au:
                links += 1
    return links / (k * (k - 1) / 2)


def clustering_coefficients(g: SocialGraph) -> dict:
    return {n: local_clustering_coefficient(g, n) for n in g.sorted_nodes}


def average_clustering_coefficient(g: SocialGraph) -> float:
    """Mean local coefficient over all nodes; degree < 2 nodes count as 0."""
    _require_undirected(g)
    if not g.nodes:
        raise UndefinedResultError("average clustering of an empty graph")
    coeffs = clustering_coefficients(g)
    return math.fsum(coeffs.values()) / len(coeffs)


def bfs_distances(g: SocialGraph, source: Node) -> dict:
    dist = {source: 0}
    queue = deque([source])
    adj = g.adjacency
    while queue:
        u = queue.popleft()
        du = dist[u] + 1
        for v in adj[u]:
            if v not in dist:
                dist[v] = du
                queue.append(v)
    return dist


def _path_stats(g: SocialGraph) -> tuple[int, int, int]:
    total = 0
    pairs = 0
    longest = 0
    for s in g.sorted_nodes:
        dist = bfs_distances(g, s)
        for d in dist.values():
            if d:
                total += d
                pairs += 1
                if d > longest:
                    longest = d
    return total, pairs, longest


def average_path_length(g: SocialGraph) -> float:
    """Mean hop distance over ordered pairs of distinct, mutually reachable nodes."""
    _require_undirected(g)
    total, pairs, _ = _path_stats(g)
    if pairs == 0:
        raise UndefinedResultError("fewer than 2 mutually reachable nodes")
    return total / pairs


def diameter(g: SocialGraph) -> int:
    """Largest finite eccentricity, taken over all components."""
    _require_undirected(g)
    total, pairs, longest = _path_stats(g)
    if pairs == 0:
        raise UndefinedResultError("fewer than 2 mutually reachable nodes")
    return longest


def connected_components(g: SocialGraph) -> list[list]:
    seen: set = set()
    comps = []
    for s in g.sorted_nodes:
        if s in seen:
            continue
        comp = sorted(bfs_distances(g, s))
        seen.update(comp)
        comps.append(comp)
    return comps


def modularity(g: SocialGraph, partition: Partition | Mapping) -> float:
    """Newman modularity, weighted when edge weights are present."""
    _require_undirected(g)
    assignment = partition.assignment if isinstance(partition, Partition) else partition
    missing = g.nodes - set(assignment)
    if missing:
        raise ValueError(f"partition is not total; {len(missing)} nodes unassigned")
    m = g.total_weight()
    if m <= 0:
        raise UndefinedResultError("modularity needs positive total edge weight")
    intra: dict = defaultdict(float)
    degree_sum: dict = defaultdict(float)
    for (u, v), w in g.edges.items():
        cu, cv = assignment[u], assignment[v]
        if cu == cv:
            intra[cu] += w
        degree_sum[cu] += w
        degree_sum[cv] += w
    q = 0.0
    for c in sorted(degree_sum, key=repr):
        q += intra[c] / m - (degree_sum[c] / (2.0 * m)) ** 2
    return q


# ---------------------------------------------------------------- Louvain


def _one_level(
    adj: list[dict], order: list[int], m2: float, init: Optional[list[int]] = None
) -> tuple[list[int], bool]:
    """Local moving phase on an indexed weighted graph.

    adj[i][j] is A_ij; adj[i][i] holds twice the weight internal to node i.
    Candidate moves are every neighbouring community plus an empty one.
    Returns community per node and whether anything moved.
    """
    n = len(adj)
    k = [sum(a.values()) for a in adj]
    comm = list(range(n)) if init is None else list(init)
    tot = [0.0] * n
    size = [0] * n
    for i in range(n):
        tot[comm[i]] += k[i]
        size[comm[i]] += 1
    moved_any = False
    eps = 1e-12
    improved = True
    while improved:
        improved = False
        for i in order:
            ci = comm[i]
            links: dict[int, float] = defaultdict(float)
            for j, w in adj[i].items():
                if j != i:
                    links[comm[j]] += w
            tot[ci] -= k[i]
            size[ci] -= 1
            gains = {c: links[c] - tot[c] * k[i] / m2 for c in links}
            gains[ci] = links.get(ci, 0.0) - tot[ci] * k[i] / m2
            if size[ci] > 0:
                empty = next(c for c in range(n) if size[c] == 0 and c != ci)
                gains.setdefault(empty, 0.0)
            top = max(gains.values())
            best_c = ci
            if top > gains[ci] + eps:
                # equal gains go to the lowest community id
                best_c = min(c for c, g in gains.items() if g >= top - eps)
            tot[best_c] += k[i]
            size[best_c] += 1
            if best_c != ci:
                comm[i] = best_c
                improved = True
                moved_any = True
    return comm, moved_any


def _aggregate(adj: list[dict], comm: list[int]) -> tuple[list[dict], list[int]]:
    relabel: dict[int, int] = {}
    for c in comm:
        relabel.setdefault(c, len(relabel))
    new_adj: list[dict] = [defaultdict(float) for _ in relabel]
    for i, nbrs in enumerate(adj):
        ci = relabel[comm[i]]
        for j, w in nbrs.items():
            new_adj[ci][relabel[comm[j]]] += w
    return [dict(a) for a in new_adj], [relabel[c] for c in comm]


def _unfold(base: list[dict], m2: float, rng: random.Random) -> list[int]:
    """One Louvain run, followed by node-level refinement of its result until
    neither refinement nor a new aggregation round moves anything."""
    member = list(range(len(base)))
    init: Optional[list[int]] = None
    while True:
        # multi-level phase starting from ``member`` communities
        if init is None:
            adj = base
            member = list(range(len(base)))
        else:
            adj, member = _aggregate(base, init)
        while True:
            order = list(range(len(adj)))
            rng.shuffle(order)
            comm, moved = _one_level(adj, order, m2)
            if not moved:
                break
            adj, comm_idx = _aggregate(adj, comm)
            member = [comm_idx[s] for s in member]
        order = list(range(len(base)))
        rng.shuffle(order)
        refined, moved = _one_level(base, order, m2, init=member)
        if not moved:
            return member
        init = refined


def _vertex_mover(adj: list[dict], m2: float, comm: list[int]) -> list[int]:
    """Kernighan-Lin style refinement.

    Each pass moves every node exactly once, always taking the best available
    move even when it lowers modularity, and rolls back to the best partition
    seen during the pass. Stops when a pass brings no gain.
    """
    n = len(adj)
    k = [sum(a.values()) for a in adj]
    eps = 1e-12
    comm = list(comm)
    while True:
        tot = [0.0] * n
        size = [0] * n
        for i in range(n):
            tot[comm[i]] += k[i]
            size[comm[i]] += 1
        locked = [False] * n
        state = list(comm)
        cur = best = 0.0
        best_state = list(comm)
        for _ in range(n):
            pick = None
            for i in range(n):
                if locked[i]:
                    continue
                ci = state[i]
                links: dict[int, float] = defaultdict(float)
                for j, w in adj[i].items():
                    if j != i:
                        links[state[j]] += w
                tot_ci = tot[ci] - k[i]
                stay = links.get(ci, 0.0) - tot_ci * k[i] / m2
                cands = {c: links[c] - tot[c] * k[i] / m2 for c in links if c != ci}
                if size[ci] > 1:
                    empty = next(c for c in range(n) if size[c] == 0)
                    cands.setdefault(empty, 0.0)
                for c in sorted(cands):
                    delta = cands[c] - stay
                    if pick is None or delta > pick[0] + eps:
                        pick = (delta, i, c)
            if pick is None:
                break
            delta, i, c = pick
            ci = state[i]
            tot[ci] -= k[i]
            size[ci] -= 1
            tot[c] += k[i]
            size[c] += 1
            state[i] = c
            locked[i] = True
            cur += delta
            if cur > best + eps:
                best = cur
                best_state = list(state)
        if best <= eps:
            return comm
        comm = best_state


def louvain_communities(
    g: SocialGraph, seed: int = 0, restarts: int = 8, refine_limit: int = 300
) -> tuple[Partition, float]:
    """Multi-level modularity maximization (fast unfolding).

    Each of ``restarts`` runs visits nodes in a seeded shuffle of the sorted
    node list, then refines the final partition at node level. The best
    modularity wins, earliest run on ties. Graphs with at most
    ``refine_limit`` nodes get an extra vertex-mover pass per run. Equal move
    gains go to the lower community id. Deterministic for a fixed seed.
    """
    _require_undirected(g)
    m = g.total_weight()
    if m <= 0:
        raise UndefinedResultError("modularity needs positive total edge weight")
    rng = random.Random(seed)
    nodes = g.sorted_nodes
    index = {n: i for i, n in enumerate(nodes)}
    base: list[dict] = [dict() for _ in nodes]
    for (u, v), w in g.edges.items():
        i, j = index[u], index[v]
        base[i][j] = base[i].get(j, 0.0) + w
        base[j][i] = base[j].get(i, 0.0) + w
    best: Optional[tuple[Partition, float]] = None
    for _ in range(max(1, restarts)):
        member = _unfold(base, 2.0 * m, rng)
        if len(nodes) <= refine_limit:
            member = _vertex_mover(base, 2.0 * m, member)
        partition = Partition.from_mapping({n: member[i] for i, n in enumerate(nodes)})
        q = modularity(g, partition)
        if best is None or q > best[1] + 1e-12:
            best = (partition, q)
    return best


def erdos_renyi_graph(n: int, m: int, seed: int = 0) -> SocialGraph:
    """G(n, m): ``m`` distinct edges drawn uniformly over ``n`` integer nodes."""
    max_edges = n * (n - 1) // 2
    if m > max_edges:
        raise ValueError(f"{m} edges do not fit in {n} nodes")
    rng = random.Random(seed)
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    return SocialGraph.build(range(n), rng.sample(pairs, m))


# --------------------------------------------------------- curve fitting

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def _linear_part(x: np.ndarray, y: np.ndarray, b: float) -> tuple[float, float, float]:
    """Closed-form least squares for (a, c) at fixed exponent; returns (a, c, sse)."""
    z = np.power(x, b)
    zc = z - z.mean()
    szz = float(zc @ zc)
    if szz <= 1e-300 * max(1.0, float(z @ z)):
        c = float(y.mean())
        r = y - c
        return 0.0, c, float(r @ r)
    a = float(zc @ (y - y.mean())) / szz
    c = float(y.mean() - a * z.mean())
    r = y - a * z - c
    return a, c, float(r @ r)


def fit_shifted_power(
    points: Sequence[tuple[float, float]],
    b_range: tuple[float, float] = (-5.0, 5.0),
    tol: float = 1e-6,
    grid: int = 201,
) -> CurveFit:
    """Least-squares fit of ``y = a * x**b + c`` for positive ``x``.

    A coarse grid over the exponent brackets the best basin, then
    golden-section narrows it to ``tol``. Constant ``y`` returns
    ``(0, 0, mean(y))`` with R^2 = 1 by convention.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[0] < 3 or pts.shape[1] != 2:
        raise ValueError("need at least 3 (x, y) points")
    x, y = pts[:, 0], pts[:, 1]
    if np.any(x <= 0):
        raise ValueError("x must be positive")
    if len(np.unique(x)) < 3:
        raise ValueError("need at least 3 distinct x values")
    if np.all(y == y[0]):
        return CurveFit(0.0, 0.0, float(y[0]), 1.0)

    lo, hi = b_range
    bs = np.linspace(lo, hi, grid)
    sse = [_linear_part(x, y, b)[2] for b in bs]
    best = int(np.argmin(sse))
    left = bs[max(best - 1, 0)]
    right = bs[min(best + 1, grid - 1)]

    def f(b: float) -> float:
        return _linear_part(x, y, b)[2]

    p = right - _GOLDEN * (right - left)
    q = left + _GOLDEN * (right - left)
    fp, fq = f(p), f(q)
    while right - left > tol:
        if fp <= fq:
            right, q, fq = q, p, fp
            p = right - _GOLDEN * (right - left)
            fp = f(p)
        else:
            left, p, fp = p, q, fq
            q = left + _GOLDEN * (right - left)
            fq = f(q)
    b = (left + right) / 2.0
    # the grid point itself may beat the bracket interior at a kink
    if sse[best] < f(b):
        b = float(bs[best])
    a, c, res = _linear_part(x, y, b)
    dev = y - y.mean()
    ss_tot = float(dev @ dev)
    return CurveFit(a, float(b), c, 1.0 - res / ss_tot)
