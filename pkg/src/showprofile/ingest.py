"""Trace file I/O and the seeded synthetic trace generator.

A dataset directory holds four JSON-lines files (``microblogs.jsonl``,
``users.jsonl``, ``follows.jsonl``, ``shows.jsonl``), one record per line,
keys named after the record fields, timestamps as integer epoch seconds.
"""

from __future__ import annotations

import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Mapping, Optional, Sequence

import numpy as np

from .lexicon import DEFAULT_NEGATIVE, DEFAULT_POSITIVE
from .model import (
    LABEL_COUNT,
    Dataset,
    FollowEdge,
    Microblog,
    SentimentLabel,
    TvShow,
    UserProfile,
    _rounds_ok,
)

logger = logging.getLogger(__name__)

FILES = {
    "microblogs": "microblogs.jsonl",
    "users": "users.jsonl",
    "follows": "follows.jsonl",
    "shows": "shows.jsonl",
}
GROUND_TRUTH_FILE = "ground_truth.json"


class IngestError(ValueError):
    def __init__(self, file: str, line: Optional[int], field: Optional[str], message: str):
        self.file = file
        self.line = line
        self.field = field
        where = file if line is None else f"{file}:{line}"
        if field:
            where += f" [{field}]"
        super().__init__(f"{where}: {message}")


class _LineError(Exception):
    def __init__(self, field: Optional[str], message: str):
        self.field = field
        self.message = message


def _req(rec: Mapping, key: str, kind: type | tuple) -> Any:
    if key not in rec:
        raise _LineError(key, "missing field")
    val = rec[key]
    if not isinstance(val, kind) or isinstance(val, bool) and kind is not bool:
        raise _LineError(key, f"expected {getattr(kind, '__name__', kind)}, got {type(val).__name__}")
    return val


def _opt(rec: Mapping, key: str, kind: type | tuple) -> Any:
    if rec.get(key) is None:
        return None
    return _req(rec, key, kind)


def _timestamp(rec: Mapping) -> int:
    if "timestamp" not in rec:
        raise _LineError("timestamp", "missing field")
    raw = rec["timestamp"]
    if isinstance(raw, bool):
        raise _LineError("timestamp", f"unparseable timestamp {raw!r}")
    if isinstance(raw, int):
        ts = raw
    elif isinstance(raw, float) and raw.is_integer():
        ts = int(raw)
    elif isinstance(raw, str) and raw.strip().lstrip("-").isdigit():
        ts = int(raw.strip())
    else:
        raise _LineError("timestamp", f"unparseable timestamp {raw!r}")
    if ts < 0:
        raise _LineError("timestamp", f"negative timestamp {ts}")
    return ts


def _microblog(rec: Mapping) -> Microblog:
    mid = _req(rec, "id", str)
    root = _opt(rec, "root_id", str)
    if root == mid:
        raise _LineError("root_id", "microblog reposts itself")
    return Microblog(
        id=mid,
        author_id=_req(rec, "author_id", str),
        author_name=_req(rec, "author_name", str),
        author_ip=_req(rec, "author_ip", str),
        timestamp=_timestamp(rec),
        root_id=root,
        content=_req(rec, "content", str),
    )


def _user(rec: Mapping) -> UserProfile:
    age = _opt(rec, "age", int)
    if age is not None and not 1 <= age <= 120:
        raise _LineError("age", f"age {age} outside [1, 120]")
    return UserProfile(
        user_id=_req(rec, "user_id", str),
        age=age,
        region=_opt(rec, "region", str),
        is_vip=bool(_opt(rec, "is_vip", bool) or False),
        synthetic=bool(_opt(rec, "synthetic", bool) or False),
    )


def _follow(rec: Mapping) -> FollowEdge:
    edge = FollowEdge(_req(rec, "follower", str), _req(rec, "followee", str))
    if edge.follower == edge.followee:
        raise _LineError("followee", "user follows itself")
    return edge


def _show(rec: Mapping) -> TvShow:
    labels = _req(rec, "labels", list)
    if len(labels) != LABEL_COUNT:
        raise _LineError("labels", f"expected {LABEL_COUNT} labels, got {len(labels)}")
    actors = _req(rec, "actors", list)
    accounts = _opt(rec, "actor_accounts", dict) or {}
    for name in accounts:
        if name not in actors:
            raise _LineError("actor_accounts", f"account for unknown actor {name!r}")
    rounds_raw = _opt(rec, "rounds", list) or []
    try:
        rounds = tuple((int(s), int(e)) for s, e in rounds_raw)
    except (TypeError, ValueError):
        raise _LineError("rounds", "rounds must be [start, end] integer pairs") from None
    if not _rounds_ok(rounds):
        raise _LineError("rounds", "rounds must be sorted, non-empty and non-overlapping")
    view_count = _opt(rec, "view_count", int)
    if view_count is not None and view_count < 0:
        raise _LineError("view_count", "negative view count")
    return TvShow(
        show_id=_req(rec, "show_id", str),
        title=_req(rec, "title", str),
        labels=tuple(str(x) for x in labels),
        actors=tuple(str(x) for x in actors),
        topics=frozenset(str(x) for x in _req(rec, "topics", list)),
        actor_accounts=dict(accounts),
        rounds=rounds,
        view_count=view_count,
    )


_PARSERS: dict[str, tuple[Callable[[Mapping], Any], Optional[Callable[[Any], Any]]]] = {
    "microblogs": (_microblog, lambda r: r.id),
    "users": (_user, lambda r: r.user_id),
    "follows": (_follow, lambda r: (r.follower, r.followee)),
    "shows": (_show, lambda r: r.show_id),
}


def _parse_file(kind: str, path: Path, lenient: bool) -> tuple[list, int]:
    build, key = _PARSERS[kind]
    out = []
    first_line: dict = {}
    skipped = 0
    name = str(path)
    try:
        fh = open(path, encoding="utf-8")
    except OSError as exc:
        raise IngestError(name, None, None, f"cannot open ({exc.strerror})") from exc
    with fh:
        try:
            lines = list(fh)
        except UnicodeDecodeError as exc:
            raise IngestError(name, None, None, "file is not valid UTF-8") from exc
    for lineno, line in enumerate(lines, 1):
        if not line.strip():
            continue
        try:
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise _LineError(None, f"invalid JSON ({exc.msg})") from None
            if not isinstance(rec, dict):
                raise _LineError(None, "record is not a JSON object")
            item = build(rec)
            k = key(item)
            if k in first_line:
                raise _LineError(None, f"duplicate id {k!r} (first seen on line {first_line[k]}, again on line {lineno})")
        except _LineError as err:
            if lenient:
                skipped += 1
                logger.warning("%s:%d: skipped (%s)", name, lineno, err.message)
                continue
            raise IngestError(name, lineno, err.field, err.message) from None
        first_line[k] = lineno
        out.append(item)
    out.sort(key=key)
    return out, skipped


def _resolve_paths(paths: Path | str | Mapping[str, Path | str]) -> dict[str, Path]:
    if isinstance(paths, Mapping):
        missing = set(FILES) - set(paths)
        if missing:
            raise IngestError(", ".join(sorted(missing)), None, None, "no path given")
        return {k: Path(paths[k]) for k in FILES}
    root = Path(paths)
    return {k: root / v for k, v in FILES.items()}


def parse_dataset(
    paths: Path | str | Mapping[str, Path | str],
    *,
    lenient: bool = False,
    workers: int = 1,
    skipped: Optional[dict[str, int]] = None,
) -> Dataset:
    """Parse the four trace files into a :class:`Dataset`.

    ``paths`` is a dataset directory or a mapping with keys ``microblogs``,
    ``users``, ``follows`` and ``shows``. Strict mode raises
    :class:`IngestError` on the first bad line; lenient mode skips bad lines
    and, if ``skipped`` is given, records per-file skip counts in it.
    Microblog authors and follow endpoints without a profile get a stub
    :class:`UserProfile` with ``synthetic=True``.
    """
    resolved = _resolve_paths(paths)
    for kind, p in resolved.items():
        if not p.is_file():
            raise IngestError(str(p), None, None, f"{kind} file not found")
    kinds = list(FILES)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parsed = list(pool.map(lambda k: _parse_file(k, resolved[k], lenient), kinds))
    else:
        parsed = [_parse_file(k, resolved[k], lenient) for k in kinds]
    results = dict(zip(kinds, parsed))
    if skipped is not None:
        skipped.update({k: results[k][1] for k in kinds})

    users = results["users"][0]
    known = {u.user_id for u in users}
    needed = {m.author_id for m in results["microblogs"][0]}
    for e in results["follows"][0]:
        needed.update((e.follower, e.followee))
    stubs = [UserProfile(uid, synthetic=True) for uid in sorted(needed - known)]
    if stubs:
        logger.info("synthesized %d stub user profiles", len(stubs))
        users = sorted(users + stubs, key=lambda u: u.user_id)
    return Dataset(
        microblogs=tuple(results["microblogs"][0]),
        users=tuple(users),
        follows=tuple(results["follows"][0]),
        shows=tuple(results["shows"][0]),
    )


def _dump(records: Sequence[Mapping], path: Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for rec in records:
            fh.write(json.dumps(rec, ensure_ascii=False, sort_keys=True) + "\n")


def write_dataset(dataset: Dataset, directory: Path | str) -> dict[str, Path]:
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    paths = {k: out / v for k, v in FILES.items()}
    _dump([m.to_record() for m in sorted(dataset.microblogs, key=lambda m: m.id)], paths["microblogs"])
    _dump([u.to_record() for u in sorted(dataset.users, key=lambda u: u.user_id)], paths["users"])
    _dump([e.to_record() for e in sorted(dataset.follows, key=lambda e: (e.follower, e.followee))], paths["follows"])
    _dump([s.to_record() for s in sorted(dataset.shows, key=lambda s: s.show_id)], paths["shows"])
    return paths


# ------------------------------------------------------------------ synthetic

FILLER = (
    "watching", "tonight", "episode", "finally", "scene", "plot", "friends", "just",
    "saw", "the", "new", "ending", "today", "again", "cast", "music", "with", "family",
    "weekend", "channel", "replay", "opening", "season", "everyone",
)
LABEL_POOL = (
    "Love", "Idol", "Modern", "Costume", "War", "Historical", "Comedy", "Family",
    "Tragedy", "Suspense", "Youth", "Crime", "Fantasy", "Urban", "Mystery",
)
VIP_NAMES = ("vip_tencent_video", "vip_hunan_tv", "vip_tencent_ent", "vip_bestv", "vip_dragon_tv")
N_REGIONS = 20
DAY = 86_400
BASE_TIME = 1_306_886_400  # 2011-06-01T00:00:00Z
TRANSITION_SPACING = 30 * DAY


def _check_vocabulary() -> None:
    lex = DEFAULT_POSITIVE + DEFAULT_NEGATIVE
    for word in FILLER:
        for entry in lex:
            assert entry not in word, (word, entry)
    for a in lex:
        for b in lex:
            assert a == b or a not in b, (a, b)


_check_vocabulary()


@dataclass(frozen=True)
class SyntheticSpec:
    seed: int
    n_users: int = 200
    n_shows: int = 6
    n_microblogs: int = 2000
    planted_clusters: int = 2
    # (user_id, show_from, show_to, gap_seconds)
    planted_transitions: tuple[tuple[str, str, str, int], ...] = ()
    sentiment_mix: tuple[float, float, float] = (0.5, 0.2, 0.3)
    # per-show override of sentiment_mix for show-attributed posts
    show_sentiment_mixes: Mapping[str, tuple[float, float, float]] = field(default_factory=dict)

    def user_ids(self) -> list[str]:
        width = max(4, len(str(self.n_users)))
        return [f"u{i:0{width}d}" for i in range(1, self.n_users + 1)]

    def show_ids(self) -> list[str]:
        width = max(2, len(str(self.n_shows)))
        return [f"v{i:0{width}d}" for i in range(1, self.n_shows + 1)]

    def validate(self) -> None:
        for name in ("n_users", "n_shows", "n_microblogs", "planted_clusters"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")
        for mix in [self.sentiment_mix, *self.show_sentiment_mixes.values()]:
            if len(mix) != 3 or any(not 0 <= p <= 1 for p in mix) or abs(sum(mix) - 1) > 1e-9:
                raise ValueError(f"sentiment mix {mix} must be 3 probabilities summing to 1")
        if self.planted_clusters > self.n_users:
            raise ValueError("planted_clusters exceeds n_users")
        if self.planted_clusters > self.n_shows:
            raise ValueError("planted_clusters exceeds n_shows (each cluster needs its own shows)")
        users, shows = set(self.user_ids()), set(self.show_ids())
        for sid in self.show_sentiment_mixes:
            if sid not in shows:
                raise ValueError(f"sentiment override for unknown show {sid}")
        for uid, a, b, gap in self.planted_transitions:
            if uid not in users:
                raise ValueError(f"planted transition for unknown user {uid}")
            if a not in shows or b not in shows or a == b:
                raise ValueError(f"planted transition {a}->{b} needs two distinct known shows")
            if not 0 < gap < TRANSITION_SPACING:
                raise ValueError(f"transition gap must be in (0, {TRANSITION_SPACING})")
        if 2 * len(self.planted_transitions) > self.n_microblogs:
            raise ValueError("n_microblogs too small for the planted transitions")


@dataclass(frozen=True)
class GroundTruth:
    attribution: Mapping[str, str]  # microblog id -> show id
    clusters: Mapping[str, int]  # ordinary user id -> planted cluster
    propagation_edges: Mapping[tuple[str, str], int]  # (src, dst) -> distinct users
    sentiment: Mapping[str, SentimentLabel]  # microblog id -> planted label

    def to_json(self) -> str:
        return json.dumps(
            {
                "attribution": dict(sorted(self.attribution.items())),
                "clusters": dict(sorted(self.clusters.items())),
                "propagation_edges": [
                    {"src": s, "dst": d, "weight": w} for (s, d), w in sorted(self.propagation_edges.items())
                ],
                "sentiment": {k: v.value for k, v in sorted(self.sentiment.items())},
            },
            ensure_ascii=False,
            sort_keys=True,
            indent=1,
        )

    @classmethod
    def from_json(cls, text: str) -> "GroundTruth":
        raw = json.loads(text)
        return cls(
            attribution=raw["attribution"],
            clusters=raw["clusters"],
            propagation_edges={(e["src"], e["dst"]): e["weight"] for e in raw["propagation_edges"]},
            sentiment={k: SentimentLabel(v) for k, v in raw["sentiment"].items()},
        )


class _Writer:
    """Accumulates generated microblogs with sequential ids."""

    def __init__(self, rng: np.random.Generator, total: int):
        self.rng = rng
        self.width = max(6, len(str(total)))
        self.posts: list[Microblog] = []
        self.sentiment: dict[str, SentimentLabel] = {}

    def content(self, mix: Sequence[float], topic: Optional[str]) -> tuple[str, SentimentLabel]:
        rng = self.rng
        label = (SentimentLabel.POSITIVE, SentimentLabel.NEGATIVE, SentimentLabel.NON_SENTIMENT)[
            int(rng.choice(3, p=np.asarray(mix, dtype=float)))
        ]
        words = [FILLER[i] for i in rng.integers(0, len(FILLER), size=int(rng.integers(3, 7)))]
        if label is SentimentLabel.POSITIVE:
            words += [DEFAULT_POSITIVE[i] for i in rng.integers(0, len(DEFAULT_POSITIVE), size=int(rng.integers(1, 3)))]
        elif label is SentimentLabel.NEGATIVE:
            words += [DEFAULT_NEGATIVE[i] for i in rng.integers(0, len(DEFAULT_NEGATIVE), size=int(rng.integers(1, 3)))]
        elif rng.random() < 0.5:
            # balanced hits: still non-sentiment under the tie rule
            words += [DEFAULT_POSITIVE[int(rng.integers(len(DEFAULT_POSITIVE)))],
                      DEFAULT_NEGATIVE[int(rng.integers(len(DEFAULT_NEGATIVE)))]]
        if topic is not None:
            words.append(topic.upper() if rng.random() < 0.2 else topic)
        order = rng.permutation(len(words))
        return " ".join(words[i] for i in order), label

    def add(self, author: str, ts: int, mix: Sequence[float], topic: Optional[str], root: Optional[str] = None) -> str:
        mid = f"m{len(self.posts) + 1:0{self.width}d}"
        text, label = self.content(mix, topic)
        ip = f"10.{len(author) % 256}.{sum(map(ord, author)) % 256}.{(sum(map(ord, author)) * 7) % 256}"
        self.posts.append(Microblog(mid, author, author.replace("_", " ").title(), ip, int(ts), text, root))
        self.sentiment[mid] = label
        return mid


def generate_synthetic(spec: SyntheticSpec) -> tuple[Dataset, GroundTruth]:
    """Build a seeded synthetic trace with planted structure.

    Every ordinary user belongs to a preference cluster and posts only about
    one "home" show of that cluster, so the only cross-show transitions are
    the planted ones. All shows of a cluster share the same labels. Actor
    accounts and VIP accounts are extra users on top of ``n_users``.
    """
    spec.validate()
    rng = np.random.default_rng(spec.seed)
    C = spec.planted_clusters
    show_ids = spec.show_ids()
    user_ids = spec.user_ids()
    regions = [f"r{i:02d}" for i in range(1, N_REGIONS + 1)]
    region_w = 1.0 / np.arange(1, N_REGIONS + 1)
    region_w /= region_w.sum()

    def cluster_labels(c: int) -> tuple[str, ...]:
        return tuple(LABEL_POOL[3 * c + j] if 3 * c + j < len(LABEL_POOL) else f"Label{3 * c + j}" for j in range(3))

    shows: list[TvShow] = []
    show_cluster: dict[str, int] = {}
    for j, sid in enumerate(show_ids):
        c = j % C
        show_cluster[sid] = c
        lead, second = f"Lead {sid}", f"Support {sid}"
        accounts: dict[str, Optional[str]] = {lead: f"actor_{sid}_lead", second: f"actor_{sid}_support" if j % 2 == 0 else None}
        r1 = BASE_TIME + j * 5 * DAY
        r2 = BASE_TIME + 150 * DAY + j * 5 * DAY
        shows.append(TvShow(
            show_id=sid,
            title=f"Drama{sid}",
            labels=cluster_labels(c),
            actors=(lead, second),
            topics=frozenset({f"Drama{sid}", f"Role{sid}a", f"Role{sid}b"}),
            actor_accounts=accounts,
            rounds=((r1, r1 + 30 * DAY), (r2, r2 + 30 * DAY)),
            view_count=int(rng.integers(100_000, 10_000_000)),
        ))
    show_by_id = {s.show_id: s for s in shows}

    users: list[UserProfile] = []
    cluster_of = {uid: i % C for i, uid in enumerate(user_ids)}
    cluster_shows = {c: [s for s in show_ids if show_cluster[s] == c] for c in range(C)}
    home = {uid: cluster_shows[cluster_of[uid]][int(rng.integers(len(cluster_shows[cluster_of[uid]])))] for uid in user_ids}
    for uid in user_ids:
        age = None if rng.random() < 0.1 else int(np.clip(round(rng.normal(20, 4)), 12, 60))
        region = None if rng.random() < 0.05 else regions[int(rng.choice(N_REGIONS, p=region_w))]
        users.append(UserProfile(uid, age, region))
    vips = [VIP_NAMES[c] if c < len(VIP_NAMES) else f"vip_{c}" for c in range(C)]
    users += [UserProfile(v, is_vip=True) for v in vips]
    actor_accounts = sorted(a for s in shows for a in s.linked_accounts().values())
    users += [UserProfile(a) for a in actor_accounts]

    follows: set[tuple[str, str]] = set()
    members = {c: [u for u in user_ids if cluster_of[u] == c] for c in range(C)}
    for uid in user_ids:
        c = cluster_of[uid]
        if rng.random() < 0.6:
            follows.add((uid, vips[c]))
        peers = members[c]
        if len(peers) > 1:
            for _ in range(2):
                other = peers[int(rng.integers(len(peers)))]
                if other != uid:
                    follows.add((uid, other))
        for acct in show_by_id[home[uid]].linked_accounts().values():
            if rng.random() < 0.3:
                follows.add((uid, acct))
    for j, s in enumerate(shows):
        nxt = shows[(j + 1) % len(shows)]
        if nxt is not s and rng.random() < 0.5:
            follows.add((s.linked_accounts()[s.actors[0]], nxt.linked_accounts()[nxt.actors[0]]))

    writer = _Writer(rng, spec.n_microblogs)
    attribution: dict[str, str] = {}

    def mix_for(sid: Optional[str]) -> tuple[float, float, float]:
        return spec.show_sentiment_mixes.get(sid, spec.sentiment_mix) if sid else spec.sentiment_mix

    def topic_of(sid: str) -> str:
        topics = sorted(show_by_id[sid].topics)
        return topics[int(rng.integers(len(topics)))]

    # planted transitions: dedicated users, spaced far apart in time
    transition_users = {t[0] for t in spec.planted_transitions}
    edges: dict[tuple[str, str], set[str]] = {}
    for k, (uid, a, b, gap) in enumerate(spec.planted_transitions):
        t0 = BASE_TIME + k * TRANSITION_SPACING
        attribution[writer.add(uid, t0, mix_for(a), topic_of(a))] = a
        attribution[writer.add(uid, t0 + gap, mix_for(b), topic_of(b))] = b
        edges.setdefault((a, b), set()).add(uid)

    posters = [u for u in user_ids if u not in transition_users]
    by_home: dict[str, list[str]] = {s: [] for s in show_ids}
    for u in posters:
        by_home[home[u]].append(u)
    remaining = spec.n_microblogs - len(writer.posts)
    attributed: list[str] = []
    noise: list[str] = []
    by_id: dict[str, Microblog] = {}

    def in_round(sid: str) -> int:
        rounds = show_by_id[sid].rounds
        start, end = rounds[int(rng.integers(len(rounds)))]
        return int(rng.integers(start, end - 7 * DAY))

    for _ in range(remaining):
        roll = rng.random()
        if not posters:
            roll = 0.0
        if roll < 0.05 or not posters:
            acct_show = shows[int(rng.integers(len(shows)))]
            accts = sorted(acct_show.linked_accounts().values())
            acct = accts[int(rng.integers(len(accts)))]
            mid = writer.add(acct, in_round(acct_show.show_id), mix_for(acct_show.show_id), None)
            attribution[mid] = acct_show.show_id
            attributed.append(mid)
        elif roll < 0.55:
            uid = posters[int(rng.integers(len(posters)))]
            sid = home[uid]
            mid = writer.add(uid, in_round(sid), mix_for(sid), topic_of(sid))
            attribution[mid] = sid
            attributed.append(mid)
        elif roll < 0.80 and attributed:
            root = attributed[int(rng.integers(len(attributed)))]
            sid = attribution[root]
            pool = by_home[sid] or [sorted(show_by_id[sid].linked_accounts().values())[0]]
            uid = pool[int(rng.integers(len(pool)))]
            ts = by_id[root].timestamp + int(rng.integers(60, 6 * 3600))
            mid = writer.add(uid, ts, mix_for(sid), None, root=root)
            attribution[mid] = sid
            attributed.append(mid)
        else:
            uid = posters[int(rng.integers(len(posters)))]
            root = noise[int(rng.integers(len(noise)))] if noise and rng.random() < 0.2 else None
            ts = (by_id[root].timestamp + 60) if root else BASE_TIME + int(rng.integers(0, 200 * DAY))
            mid = writer.add(uid, ts, spec.sentiment_mix, None, root=root)
            noise.append(mid)
        by_id[mid] = writer.posts[-1]

    dataset = Dataset(
        microblogs=tuple(sorted(writer.posts, key=lambda m: m.id)),
        users=tuple(sorted(users, key=lambda u: u.user_id)),
        follows=tuple(FollowEdge(a, b) for a, b in sorted(follows)),
        shows=tuple(shows),
    )
    truth = GroundTruth(
        attribution=dict(sorted(attribution.items())),
        clusters=dict(sorted(cluster_of.items())),
        propagation_edges={k: len(v) for k, v in sorted(edges.items())},
        sentiment=dict(sorted(writer.sentiment.items())),
    )
    return dataset, truth


def write_synthetic(dataset: Dataset, truth: GroundTruth, directory: Path | str) -> None:
    write_dataset(dataset, directory)
    with open(Path(directory) / GROUND_TRUTH_FILE, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(truth.to_json() + "\n")


def read_ground_truth(directory: Path | str) -> GroundTruth:
    with open(Path(directory) / GROUND_TRUTH_FILE, encoding="utf-8") as fh:
        return GroundTruth.from_json(fh.read())


def plant_round_overlap(
    only_first: int, only_second: int, both: int, seed: int = 0
) -> tuple[Dataset, tuple[int, int, int]]:
    """A one-show trace whose two broadcast rounds have exactly the requested
    audience split. Extra posts outside both rounds are mixed in and must be
    ignored by the overlap count."""
    rng = np.random.default_rng(seed)
    sid = "v01"
    r1 = (BASE_TIME, BASE_TIME + 30 * DAY)
    r2 = (BASE_TIME + 100 * DAY, BASE_TIME + 130 * DAY)
    show = TvShow(sid, "Drama v01", ("Love", "Idol", "Modern"), ("Lead v01",),
                  frozenset({"Dramav01"}), {"Lead v01": None}, (r1, r2), 1000)
    writer = _Writer(rng, 10 * (only_first + only_second + both) + 10)
    users = []
    plan = ["first"] * only_first + ["second"] * only_second + ["both"] * both
    for i, which in enumerate(plan):
        uid = f"u{i + 1:05d}"
        users.append(UserProfile(uid))
        rounds = {"first": [r1], "second": [r2], "both": [r1, r2]}[which]
        for start, end in rounds:
            for _ in range(int(rng.integers(1, 4))):
                writer.add(uid, int(rng.integers(start, end)), (0.4, 0.2, 0.4), "Dramav01")
    # off-air chatter by outsiders: between rounds and after the second
    for i in range(max(5, len(plan) // 10)):
        uid = f"x{i + 1:05d}"
        users.append(UserProfile(uid))
        gap = (r1[1], r2[0]) if i % 2 == 0 else (r2[1], r2[1] + 30 * DAY)
        writer.add(uid, int(rng.integers(*gap)), (0.4, 0.2, 0.4), "Dramav01")
    dataset = Dataset(tuple(sorted(writer.posts, key=lambda m: m.id)),
                      tuple(sorted(users, key=lambda u: u.user_id)), (), (show,))
    return dataset, (only_first, only_second, both)


# bundled fixture: regenerate with ``write_synthetic(*generate_synthetic(FIXTURE_SPEC), dir)``
FIXTURE_SPEC = SyntheticSpec(
    seed=7,
    n_users=300,
    n_shows=10,
    n_microblogs=5000,
    planted_clusters=3,
    planted_transitions=tuple(
        [(f"u{i:04d}", "v02", "v01", 600 * i) for i in range(1, 7)]
        + [(f"u{i:04d}", "v02", "v04", 3600) for i in (7, 8)]
        + [(f"u{i:04d}", "v02", "v05", 7200) for i in (9, 10)]
        + [(f"u{i:04d}", "v06", "v05", 1800 * (i - 10)) for i in (11, 12, 13)]
        + [("u0014", "v01", "v03", 43_200)]
    ),
)


def fixture_dir() -> Path:
    """Directory of the bundled synthetic fixture generated from :data:`FIXTURE_SPEC`."""
    return Path(__file__).parent / "data" / "fixture"
