"""Propagation aspect: audience overlap across broadcast rounds and users
moving their posting from one show to another."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Sequence

from .graphkit import SocialGraph
from .model import Dataset, TvShow
from .retrieval import ShowCorpus

DEFAULT_WINDOW = 86_400


@dataclass(frozen=True)
class RoundOverlap:
    show_id: str
    only_first: int
    only_second: int
    both: int


def round_overlap(show: TvShow, corpus: ShowCorpus, dataset: Dataset) -> RoundOverlap:
    """Distinct corpus authors posting in the first round only, the second
    only, or both. Posts outside every round are ignored."""
    if len(show.rounds) < 2:
        raise ValueError(f"show {show.show_id} has fewer than 2 rounds")
    (s1, e1), (s2, e2) = show.rounds[0], show.rounds[1]
    by_id = dataset.microblog_by_id
    first, second = set(), set()
    for mid in corpus.members:
        m = by_id[mid]
        if s1 <= m.timestamp < e1:
            first.add(m.author_id)
        elif s2 <= m.timestamp < e2:
            second.add(m.author_id)
    return RoundOverlap(show.show_id, len(first - second), len(second - first), len(first & second))


@dataclass(frozen=True)
class PropagationGraph:
    graph: SocialGraph  # directed; weight = distinct users moving src -> dst
    window: int
    strict: bool
    # users contributing to each edge
    users: Mapping[tuple[str, str], frozenset[str]]

    def in_degree(self) -> dict[str, int]:
        return {n: len(p) for n, p in sorted(self.graph.predecessors.items())}

    def edge_rows(self) -> list[tuple[str, str, int]]:
        return [(u, v, int(w)) for u, v, w in self.graph.edge_list()]


def _attribution(shows: Iterable[str], corpora: Mapping[str, ShowCorpus]) -> dict[str, set[str]]:
    out: dict[str, set[str]] = defaultdict(set)
    for sid in shows:
        corpus = corpora.get(sid)
        if corpus is not None:
            for mid in corpus.members:
                out[mid].add(sid)
    return out


def transitions(
    shows: Iterable[TvShow],
    corpora: Mapping[str, ShowCorpus],
    dataset: Dataset,
    window: int,
    strict: bool = False,
) -> list[tuple[str, str, str, int]]:
    """Every (user, src, dst, dst_timestamp) show switch within ``window``.

    A user's attributed posts are ordered by (timestamp, id); consecutive
    posts on different shows at most ``window`` seconds apart form a
    transition. A post attributed to several shows yields one transition per
    ordered show pair unless ``strict`` drops such posts.
    """
    if window <= 0:
        raise ValueError("window must be positive")
    show_ids = sorted(s.show_id for s in shows)
    attr = _attribution(show_ids, corpora)
    by_id = dataset.microblog_by_id
    per_user: dict[str, list[tuple[int, str]]] = defaultdict(list)
    for mid, sids in attr.items():
        if strict and len(sids) > 1:
            continue
        m = by_id[mid]
        per_user[m.author_id].append((m.timestamp, mid))
    out = []
    for user in sorted(per_user):
        posts = sorted(per_user[user])
        for (t0, a), (t1, b) in zip(posts, posts[1:]):
            if t1 - t0 > window:
                continue
            for src in sorted(attr[a]):
                for dst in sorted(attr[b]):
                    if src != dst:
                        out.append((user, src, dst, t1))
    return out


def _graph_from(show_ids: Sequence[str], moves: Iterable[tuple[str, str, str, int]], window: int, strict: bool) -> PropagationGraph:
    users: dict[tuple[str, str], set[str]] = defaultdict(set)
    for user, src, dst, _ in moves:
        users[(src, dst)].add(user)
    edges = [(s, d, len(u)) for (s, d), u in sorted(users.items())]
    g = SocialGraph.build(show_ids, edges, directed=True)
    return PropagationGraph(g, window, strict, {k: frozenset(v) for k, v in sorted(users.items())})


def propagation_graph(
    shows: Iterable[TvShow],
    corpora: Mapping[str, ShowCorpus],
    dataset: Dataset,
    window: int = DEFAULT_WINDOW,
    strict: bool = False,
) -> PropagationGraph:
    shows = list(shows)
    moves = transitions(shows, corpora, dataset, window, strict)
    return _graph_from(sorted(s.show_id for s in shows), moves, window, strict)


def windowed_propagation_graphs(
    shows: Iterable[TvShow],
    corpora: Mapping[str, ShowCorpus],
    dataset: Dataset,
    window: int,
    start: int,
    count: int,
    strict: bool = False,
) -> list[tuple[int, int, PropagationGraph]]:
    """Propagation graphs over consecutive ``[start + i*window, start + (i+1)*window)``
    intervals; a transition belongs to the interval holding its destination post."""
    shows = list(shows)
    show_ids = sorted(s.show_id for s in shows)
    moves = transitions(shows, corpora, dataset, window, strict)
    out = []
    for i in range(count):
        lo, hi = start + i * window, start + (i + 1) * window
        out.append((lo, hi, _graph_from(show_ids, [mv for mv in moves if lo <= mv[3] < hi], window, strict)))
    return out


@dataclass(frozen=True)
class OutflowReport:
    ranking: list[tuple[str, int]]  # (destination, users), heaviest first
    total: int
    top: Optional[str]
    top_share: Optional[float]
    empty: bool


def propagation_event_report(graphs: Sequence[PropagationGraph], focus: str) -> list[OutflowReport]:
    """Per window, where users leaving ``focus`` went."""
    if not graphs:
        raise ValueError("need at least one window")
    out = []
    for pg in graphs:
        if focus not in pg.graph.nodes:
            raise KeyError(f"focus show {focus!r} not in propagation graph")
        ranking = sorted(((dst, int(w)) for dst, w in pg.graph.successors[focus].items()), key=lambda r: (-r[1], r[0]))
        total = sum(w for _, w in ranking)
        if ranking:
            out.append(OutflowReport(ranking, total, ranking[0][0], ranking[0][1] / total, False))
        else:
            out.append(OutflowReport([], 0, None, None, True))
    return out
