"""Content aspect: lexicon sentiment tabulation and the network of shows
linked by shared microblog authors."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from itertools import combinations
from typing import Any, Iterable, Mapping, Optional

from .graphkit import (
    SocialGraph,
    UndefinedResultError,
    average_clustering_coefficient,
    average_path_length,
    clustering_coefficients,
    degree_distribution,
    diameter,
    erdos_renyi_graph,
    fit_shifted_power,
    louvain_communities,
)
from .lexicon import SentimentLexicons
from .model import Dataset, SentimentLabel, TvShow, normalize_text
from .retrieval import ShowCorpus


def _count_hits(text: str, entries: list[str]) -> int:
    """Leftmost-longest, non-overlapping scan; ``entries`` sorted longest first."""
    count = 0
    i = 0
    n = len(text)
    while i < n:
        for e in entries:
            if text.startswith(e, i):
                count += 1
                i += len(e)
                break
        else:
            i += 1
    return count


def _prepared(lex: SentimentLexicons) -> tuple[list[str], list[str]]:
    def order(entries: Iterable[str]) -> list[str]:
        return sorted({normalize_text(e) for e in entries}, key=lambda e: (-len(e), e))

    return order(lex.positive), order(lex.negative)


def classify_sentiment(content: str, lex: SentimentLexicons) -> SentimentLabel:
    pos_entries, neg_entries = _prepared(lex)
    return _classify(normalize_text(content), pos_entries, neg_entries)


def _classify(text: str, pos_entries: list[str], neg_entries: list[str]) -> SentimentLabel:
    pos = _count_hits(text, pos_entries)
    neg = _count_hits(text, neg_entries)
    if pos > neg:
        return SentimentLabel.POSITIVE
    if neg > pos:
        return SentimentLabel.NEGATIVE
    return SentimentLabel.NON_SENTIMENT


def classify_corpus(corpus: ShowCorpus, dataset: Dataset, lex: SentimentLexicons) -> dict[str, SentimentLabel]:
    pos_entries, neg_entries = _prepared(lex)
    texts = dataset.normalized_content
    return {mid: _classify(texts[mid], pos_entries, neg_entries) for mid in sorted(corpus.members)}


@dataclass(frozen=True)
class SentimentRow:
    positive: int = 0
    negative: int = 0
    non_sentiment: int = 0

    @property
    def total(self) -> int:
        return self.positive + self.negative + self.non_sentiment

    @property
    def emotional_fraction(self) -> Optional[float]:
        return (self.positive + self.negative) / self.total if self.total else None

    def as_dict(self) -> dict[str, Any]:
        return {
            "positive": self.positive,
            "negative": self.negative,
            "non_sentiment": self.non_sentiment,
            "total": self.total,
            "emotional_fraction": self.emotional_fraction,
        }


@dataclass(frozen=True)
class SentimentSummary:
    initial: SentimentRow
    repost: SentimentRow

    @property
    def total(self) -> int:
        return self.initial.total + self.repost.total


def _row(labels: Iterable[SentimentLabel]) -> SentimentRow:
    c = Counter(labels)
    return SentimentRow(c[SentimentLabel.POSITIVE], c[SentimentLabel.NEGATIVE], c[SentimentLabel.NON_SENTIMENT])


def sentiment_summary(corpus: ShowCorpus, dataset: Dataset, lex: SentimentLexicons) -> SentimentSummary:
    """Sentiment counts split into initial posts (no root) and reposts/comments."""
    labels = classify_corpus(corpus, dataset, lex)
    by_id = dataset.microblog_by_id
    initial = [lab for mid, lab in labels.items() if by_id[mid].root_id is None]
    repost = [lab for mid, lab in labels.items() if by_id[mid].root_id is not None]
    return SentimentSummary(_row(initial), _row(repost))


@dataclass(frozen=True)
class PositiveFractionRow:
    show_id: str
    positive: int
    negative: int
    fraction: Optional[float]  # pos / (pos + neg)
    view_count: Optional[int]
    rank: Optional[int]  # by descending view count; None when flagged
    flag: Optional[str] = None


def positive_fraction_table(
    shows: Iterable[TvShow],
    corpora: Mapping[str, ShowCorpus],
    dataset: Dataset,
    lex: SentimentLexicons,
) -> list[PositiveFractionRow]:
    """Positive share among sentiment-bearing posts, per show, ordered by
    view rank. Shows with no sentiment-bearing posts or no view count are
    flagged and listed after the ranked ones."""
    rows = []
    for show in sorted(shows, key=lambda s: s.show_id):
        corpus = corpora.get(show.show_id)
        counts = Counter(classify_corpus(corpus, dataset, lex).values()) if corpus else Counter()
        pos, neg = counts[SentimentLabel.POSITIVE], counts[SentimentLabel.NEGATIVE]
        flag = None
        if pos + neg == 0:
            flag = "no_sentiment_posts"
        elif show.view_count is None:
            flag = "no_view_count"
        frac = pos / (pos + neg) if pos + neg else None
        rows.append((show, pos, neg, frac, flag))
    ranked = sorted((r for r in rows if r[4] is None), key=lambda r: (-r[0].view_count, r[0].show_id))
    flagged = [r for r in rows if r[4] is not None]
    out = [PositiveFractionRow(s.show_id, p, n, f, s.view_count, i + 1) for i, (s, p, n, f, _) in enumerate(ranked)]
    out += [PositiveFractionRow(s.show_id, p, n, f, s.view_count, None, flag) for s, p, n, f, flag in flagged]
    return out


# ------------------------------------------------------------- show network


def build_show_network(
    shows: Iterable[TvShow],
    corpora: Mapping[str, ShowCorpus],
    dataset: Dataset,
    min_common_users: int = 1,
) -> SocialGraph:
    """Shows linked when their corpora share at least ``min_common_users``
    authors; edge weight is the number of shared authors."""
    show_ids = sorted(s.show_id for s in shows)
    authors = {sid: corpora[sid].authors(dataset) if sid in corpora else set() for sid in show_ids}
    edges = []
    for a, b in combinations(show_ids, 2):
        w = len(authors[a] & authors[b])
        if w >= min_common_users and w > 0:
            edges.append((a, b, w))
    return SocialGraph.build(show_ids, edges)


def show_network_profile(net: SocialGraph, seed: int = 0, min_common_users: Optional[int] = None) -> dict:
    """Every show-network statistic as a JSON-ready dict."""
    if not net.nodes:
        raise UndefinedResultError("show network has no nodes")
    dist = degree_distribution(net)
    n = dist.node_count
    coeffs = clustering_coefficients(net)
    cc_values = sorted(coeffs.values())
    cc_cdf = [(v, sum(1 for x in cc_values if x <= v) / n) for v in sorted(set(cc_values))]

    report: dict[str, Any] = {
        "seed": seed,
        "min_common_users": min_common_users,
        "nodes": n,
        "edges": len(net.edges),
        "degree": {
            "histogram": [[d, c] for d, c in dist.histogram.items()],
            "cdf": [[d, f] for d, f in dist.cdf],
            "mean": dist.mean,
            "fraction_above_40": sum(1 for d in dist.degrees.values() if d > 40) / n,
            "per_node": [[node, dist.degrees[node]] for node in net.sorted_nodes],
        },
        "clustering": {
            "per_node": [[node, coeffs[node]] for node in net.sorted_nodes],
            "cdf": [[v, f] for v, f in cc_cdf],
            "average": average_clustering_coefficient(net),
        },
    }
    try:
        report["average_path_length"] = average_path_length(net)
        report["diameter"] = diameter(net)
    except UndefinedResultError:
        report["average_path_length"] = None
        report["diameter"] = None

    if net.edges:
        partition, q = louvain_communities(net, seed=seed)
        report["communities"] = {"count": partition.count, "modularity": q, "groups": partition.groups()}
    else:
        report["communities"] = None

    # ascending degree against rank: the increasing, saturating form
    degrees_sorted = sorted(dist.degrees.values())
    points = [(i + 1, d) for i, d in enumerate(degrees_sorted)]
    try:
        fit = fit_shifted_power(points)
        report["degree_fit"] = {"a": fit.a, "b": fit.b, "c": fit.c, "r_squared": fit.r_squared, "points": len(points)}
    except ValueError:
        report["degree_fit"] = None

    m = len(net.edges)
    if n >= 2:
        baseline = erdos_renyi_graph(n, m, seed=seed)
        base = {"nodes": n, "edges": m, "average_clustering": average_clustering_coefficient(baseline)}
        try:
            base["average_path_length"] = average_path_length(baseline)
        except UndefinedResultError:
            base["average_path_length"] = None
        report["random_baseline"] = base
    else:
        report["random_baseline"] = None
    return report
