"""Social-relationship aspect: follow topology among a show's posters, actor
co-posting and follow graphs, and actor/fan influence on show corpora."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Sequence

from .graphkit import SocialGraph, connected_components
from .model import Dataset, TvShow
from .profiler_user import follow_graph
from .retrieval import ShowCorpus


@dataclass(frozen=True)
class ViewerTopology:
    authors: int
    isolated_fraction: float
    connected_fraction: float
    component_sizes: dict[int, int]  # component size -> number of components


def viewer_topology_stats(corpus: ShowCorpus, dataset: Dataset) -> ViewerTopology:
    """Isolation of a corpus's authors in their induced (undirected) follow graph."""
    authors = corpus.authors(dataset)
    if not authors:
        raise ValueError(f"corpus {corpus.show_id} is empty")
    g = follow_graph(dataset, authors)
    isolated = sum(1 for n in g.nodes if g.degree(n) == 0)
    sizes = Counter(len(c) for c in connected_components(g))
    n = len(authors)
    return ViewerTopology(n, isolated / n, (n - isolated) / n, dict(sorted(sizes.items())))


def actor_accounts(shows: Iterable[TvShow]) -> dict[str, Optional[str]]:
    """Actor name -> account across shows; the first linked account by show
    id wins when shows disagree."""
    out: dict[str, Optional[str]] = {}
    for show in sorted(shows, key=lambda s: s.show_id):
        for actor in show.actors:
            acct = show.actor_accounts.get(actor)
            if out.get(actor) is None:
                out[actor] = acct
    return out


def actor_copost_graph(
    shows: Iterable[TvShow],
    corpora: Mapping[str, ShowCorpus],
    dataset: Dataset,
    directed: bool = False,
) -> SocialGraph:
    """Edge between two actors when one posted in the corpus of a show
    featuring the other. ``directed=True`` keeps poster -> cast orientation."""
    shows = list(shows)
    accounts = actor_accounts(shows)
    by_account: dict[str, set[str]] = {}
    for actor, acct in accounts.items():
        if acct is not None:
            by_account.setdefault(acct, set()).add(actor)
    by_id = dataset.microblog_by_id
    arcs: set[tuple[str, str]] = set()
    for show in shows:
        corpus = corpora.get(show.show_id)
        if corpus is None:
            continue
        posting = set()
        for mid in corpus.members:
            posting |= by_account.get(by_id[mid].author_id, set())
        for poster in posting:
            for cast in show.actors:
                if cast != poster:
                    arcs.add((poster, cast))
    if directed:
        return SocialGraph.build(accounts, sorted(arcs), directed=True)
    pairs = {(a, b) if a < b else (b, a) for a, b in arcs}
    return SocialGraph.build(accounts, sorted(pairs))


def actor_follow_graph(dataset: Dataset, actors: Mapping[str, Optional[str]]) -> SocialGraph:
    """Undirected follow relations among actor accounts, over actor names."""
    name_of: dict[str, list[str]] = {}
    for actor, acct in actors.items():
        if acct is not None:
            name_of.setdefault(acct, []).append(actor)
    pairs = set()
    for e in dataset.follows:
        for a in name_of.get(e.follower, ()):
            for b in name_of.get(e.followee, ()):
                if a != b:
                    pairs.add((a, b) if a < b else (b, a))
    return SocialGraph.build(actors, sorted(pairs))


def graph_intersection(g1: SocialGraph, g2: SocialGraph) -> SocialGraph:
    if g1.nodes != g2.nodes or g1.directed != g2.directed:
        raise ValueError("graphs must share the same node universe and directedness")
    edges = [(u, v, w) for (u, v), w in sorted(g1.edges.items()) if (u, v) in g2.edges]
    return SocialGraph.build(g1.nodes, edges, g1.directed)


@dataclass(frozen=True)
class InfluenceRecord:
    actor: str
    show_id: str
    actor_fraction: float
    fan_fraction: float


@dataclass(frozen=True)
class InfluenceResult:
    records: list[InfluenceRecord]
    # actors of the show without a linked account, omitted from records
    uncovered: list[str]


def actor_influence(show: TvShow, corpus: ShowCorpus, dataset: Dataset) -> InfluenceResult:
    """Share of a show's corpus posted by each actor account and by its fans
    (direct followers, the actor excluded)."""
    if not corpus.members:
        raise ValueError(f"corpus {corpus.show_id} is empty")
    by_id = dataset.microblog_by_id
    posts_by = Counter(by_id[mid].author_id for mid in corpus.members)
    total = len(corpus.members)
    records, uncovered = [], []
    for actor in show.actors:
        acct = show.actor_accounts.get(actor)
        if acct is None:
            uncovered.append(actor)
            continue
        fans = dataset.followers.get(acct, set()) - {acct}
        records.append(InfluenceRecord(
            actor,
            show.show_id,
            posts_by.get(acct, 0) / total,
            sum(posts_by.get(f, 0) for f in fans) / total,
        ))
    return InfluenceResult(records, uncovered)


@dataclass(frozen=True)
class ActorSummary:
    actor: str
    shows: int
    mean_influence: float
    variance_influence: float  # population variance across the actor's shows
    fan_count: int


def actor_influence_stats(
    records: Sequence[InfluenceRecord],
    dataset: Dataset,
    accounts: Mapping[str, Optional[str]],
) -> list[ActorSummary]:
    grouped: dict[str, list[float]] = {}
    for r in records:
        grouped.setdefault(r.actor, []).append(r.actor_fraction)
    out = []
    for actor in sorted(grouped):
        vals = grouped[actor]
        mean = math.fsum(vals) / len(vals)
        var = math.fsum((v - mean) ** 2 for v in vals) / len(vals)
        acct = accounts.get(actor)
        fans = len(dataset.followers.get(acct, set()) - {acct}) if acct else 0
        out.append(ActorSummary(actor, len(vals), mean, var, fans))
    return out
