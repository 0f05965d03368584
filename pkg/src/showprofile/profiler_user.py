"""User aspect: demographics, regional participation index, preference
clustering of users by the category labels of the shows they post about."""

from __future__ import annotations

import math
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

from .graphkit import SocialGraph, average_clustering_coefficient
from .model import Dataset, TvShow
from .retrieval import ShowCorpus

TOP_RANK = 10


@dataclass(frozen=True)
class AgeHistogram:
    bins: dict[int, int]  # unit-width bins: age -> users
    known: int
    unknown: int
    mean: Optional[float]  # None when no user has a known age


def age_histogram(user_ids: Iterable[str], dataset: Dataset) -> AgeHistogram:
    by_id = dataset.user_by_id
    ages = []
    unknown = 0
    for uid in set(user_ids):
        u = by_id.get(uid)
        if u is None or u.age is None:
            unknown += 1
        else:
            ages.append(u.age)
    bins = dict(sorted(Counter(ages).items()))
    mean = math.fsum(ages) / len(ages) if ages else None
    return AgeHistogram(bins, len(ages), unknown, mean)


@dataclass(frozen=True, order=True)
class RegionCount:
    region: str
    users: int


def region_counts(user_ids: Iterable[str], dataset: Dataset) -> tuple[list[RegionCount], int]:
    """Per-region user counts and the number of users with unknown region."""
    by_id = dataset.user_by_id
    counts: Counter = Counter()
    unknown = 0
    for uid in set(user_ids):
        u = by_id.get(uid)
        if u is None or u.region is None:
            unknown += 1
        else:
            counts[u.region] += 1
    return [RegionCount(r, n) for r, n in sorted(counts.items())], unknown


@dataclass(frozen=True)
class ParticipationRow:
    rank: int
    region: str
    users: int
    index: float


def participation_index(counts: Sequence[RegionCount]) -> list[ParticipationRow]:
    """Top-10 participation index ``(UN_i - UN_10) / UN_10`` for every region.

    Regions are ranked by descending user count, ties by ascending region id;
    the 10th region in that order supplies ``UN_10``.
    """
    if len(counts) < TOP_RANK:
        raise ValueError(f"participation index needs at least {TOP_RANK} regions, got {len(counts)}")
    ranked = sorted(counts, key=lambda rc: (-rc.users, rc.region))
    base = ranked[TOP_RANK - 1].users
    if base <= 0:
        raise ValueError("the 10th-ranked region has no users")
    return [ParticipationRow(i + 1, rc.region, rc.users, (rc.users - base) / base) for i, rc in enumerate(ranked)]


# ------------------------------------------------------------ label vectors


@dataclass(frozen=True)
class LabelVector:
    user_id: str
    weights: Mapping[str, float]


def _label_counts(corpora: Mapping[str, ShowCorpus], shows: Mapping[str, TvShow], dataset: Dataset) -> dict[str, Counter]:
    # each post contributes 1/3 per label; the constant factor cancels on
    # normalization so integer counts are accumulated instead
    by_id = dataset.microblog_by_id
    acc: dict[str, Counter] = defaultdict(Counter)
    for sid in sorted(corpora):
        if sid not in shows:
            continue
        labels = shows[sid].labels
        for mid in corpora[sid].members:
            c = acc[by_id[mid].author_id]
            for lab in labels:
                c[lab] += 1
    return acc


def _normalize(user_id: str, counts: Counter) -> LabelVector:
    total = sum(counts.values())
    return LabelVector(user_id, {lab: counts[lab] / total for lab in sorted(counts)})


def user_label_vector(
    user_id: str, corpora: Mapping[str, ShowCorpus], shows: Iterable[TvShow], dataset: Dataset
) -> LabelVector:
    show_map = {s.show_id: s for s in shows}
    by_id = dataset.microblog_by_id
    counts: Counter = Counter()
    for sid in sorted(corpora):
        if sid not in show_map:
            continue
        n = sum(1 for mid in corpora[sid].members if by_id[mid].author_id == user_id)
        for lab in show_map[sid].labels:
            counts[lab] += n
    if not +counts:
        raise ValueError(f"user {user_id} has no show-attributed microblogs")
    return _normalize(user_id, +counts)


def label_vectors(
    corpora: Mapping[str, ShowCorpus], shows: Iterable[TvShow], dataset: Dataset
) -> list[LabelVector]:
    """Label vectors for every author of any corpus, sorted by user id."""
    acc = _label_counts(corpora, {s.show_id: s for s in shows}, dataset)
    return [_normalize(uid, acc[uid]) for uid in sorted(acc)]


# ------------------------------------------------------------------ k-means


@dataclass(frozen=True)
class KMeansResult:
    assignment: dict[str, int]
    centroids: np.ndarray
    labels: list[str]  # vector dimension order
    objective_history: list[float] = field(default_factory=list)
    iterations: int = 0
    converged: bool = False
    # fewer distinct vectors than k: some clusters necessarily stay empty
    degenerate: bool = False

    @property
    def objective(self) -> float:
        return self.objective_history[-1] if self.objective_history else 0.0


def _kmeans_pp(X: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    n = len(X)
    chosen = [int(rng.integers(n))]
    d2 = ((X - X[chosen[0]]) ** 2).sum(axis=1)
    for _ in range(1, k):
        total = d2.sum()
        if total <= 0:
            # all remaining mass at existing centroids: take the next unused index
            idx = next((i for i in range(n) if i not in chosen), chosen[0])
        else:
            idx = int(rng.choice(n, p=d2 / total))
        chosen.append(idx)
        d2 = np.minimum(d2, ((X - X[idx]) ** 2).sum(axis=1))
    return X[chosen].copy()


def _assign(X: np.ndarray, centroids: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    d2 = ((X[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)
    labels = d2.argmin(axis=1)  # first minimum -> lowest centroid index on ties
    return labels, d2[np.arange(len(X)), labels]


def kmeans_cluster(vectors: Sequence[LabelVector], k: int, seed: int = 0, max_iter: int = 300) -> KMeansResult:
    """Lloyd's algorithm on label vectors with k-means++ seeding.

    Inputs are sorted by user id first, so the result depends only on the
    vector set and the seed. An empty cluster is re-seeded with the point
    farthest from its centroid.
    """
    if not 1 <= k <= len(vectors):
        raise ValueError(f"k={k} outside [1, {len(vectors)}]")
    vecs = sorted(vectors, key=lambda v: v.user_id)
    dims = sorted({lab for v in vecs for lab in v.weights})
    col = {lab: j for j, lab in enumerate(dims)}
    X = np.zeros((len(vecs), len(dims)))
    for i, v in enumerate(vecs):
        for lab, w in v.weights.items():
            X[i, col[lab]] = w
    degenerate = len(np.unique(X, axis=0)) < k
    rng = np.random.default_rng(seed)
    centroids = _kmeans_pp(X, k, rng)

    labels = None
    history: list[float] = []
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        new_labels, _ = _assign(X, centroids)
        if labels is not None and np.array_equal(new_labels, labels):
            converged = True
            break
        labels = new_labels
        for j in range(k):
            members = labels == j
            if members.any():
                centroids[j] = X[members].mean(axis=0)
        if not degenerate:
            for j in range(k):
                if not (labels == j).any():
                    dist = ((X - centroids[labels]) ** 2).sum(axis=1)
                    far = int(dist.argmax())
                    labels[far] = j
                    centroids[j] = X[far]
        dist = ((X - centroids[labels]) ** 2).sum(axis=1)
        history.append(float(dist.sum()))
    assignment = {v.user_id: int(labels[i]) for i, v in enumerate(vecs)}
    return KMeansResult(assignment, centroids, dims, history, it, converged, degenerate)


# ----------------------------------------------------------------- cohesion


@dataclass(frozen=True)
class VipFollowRow:
    vip: str
    in_cluster_fraction: float  # cluster members following this VIP
    outside_fraction: Optional[float]  # other non-VIP users following it


@dataclass(frozen=True)
class ClusterCohesion:
    size: int
    internal_edges: int
    density: Optional[float]  # None for clusters of fewer than 2 users
    average_clustering: float
    vip_follows: list[VipFollowRow]


def follow_graph(dataset: Dataset, users: Optional[Iterable[str]] = None) -> SocialGraph:
    """Undirected follow graph, optionally induced on ``users``."""
    keep = set(users) if users is not None else None
    pairs = set()
    for e in dataset.follows:
        if e.follower == e.followee:
            continue
        if keep is not None and (e.follower not in keep or e.followee not in keep):
            continue
        pairs.add((e.follower, e.followee) if e.follower < e.followee else (e.followee, e.follower))
    nodes = keep if keep is not None else {u.user_id for u in dataset.users}
    return SocialGraph.build(nodes, sorted(pairs))


def cluster_cohesion(cluster: Iterable[str], dataset: Dataset) -> ClusterCohesion:
    members = set(cluster)
    g = follow_graph(dataset, members)
    n = len(members)
    density = len(g.edges) / (n * (n - 1) / 2) if n >= 2 else None
    avg_cc = average_clustering_coefficient(g) if n else 0.0

    vips = sorted(u.user_id for u in dataset.users if u.is_vip)
    non_vip = {u.user_id for u in dataset.users if not u.is_vip}
    inside = members & non_vip
    outside = non_vip - members
    rows = []
    for vip in vips:
        fans = dataset.followers.get(vip, set())
        rows.append(VipFollowRow(
            vip,
            len(fans & inside) / len(inside) if inside else 0.0,
            len(fans & outside) / len(outside) if outside else None,
        ))
    return ClusterCohesion(n, len(g.edges), density, avg_cc, rows)
