"""Domain records shared by every stage of the pipeline.

All records are frozen dataclasses. ``Dataset`` carries a few lazily built
lookup tables (author index, repost children, normalized content) that are
derived from its fields and never part of equality.
"""

from __future__ import annotations

import enum
import unicodedata
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Iterable, Mapping, Optional


def normalize_text(text: str) -> str:
    """NFC-normalize and case-fold; used for every substring match."""
    return unicodedata.normalize("NFC", text).casefold()


class SentimentLabel(str, enum.Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"
    NON_SENTIMENT = "non_sentiment"


@dataclass(frozen=True)
class Microblog:
    id: str
    author_id: str
    author_name: str
    author_ip: str
    timestamp: int
    content: str
    root_id: Optional[str] = None

    @property
    def is_repost(self) -> bool:
        return self.root_id is not None

    def to_record(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "author_id": self.author_id,
            "author_name": self.author_name,
            "author_ip": self.author_ip,
            "timestamp": self.timestamp,
            "root_id": self.root_id,
            "content": self.content,
        }

    @classmethod
    def from_record(cls, rec: Mapping[str, Any]) -> "Microblog":
        return cls(
            id=rec["id"],
            author_id=rec["author_id"],
            author_name=rec["author_name"],
            author_ip=rec["author_ip"],
            timestamp=rec["timestamp"],
            root_id=rec.get("root_id"),
            content=rec["content"],
        )


@dataclass(frozen=True)
class UserProfile:
    user_id: str
    age: Optional[int] = None
    region: Optional[str] = None
    is_vip: bool = False
    # set by ingest for authors / follow endpoints with no profile record
    synthetic: bool = False

    def to_record(self) -> dict[str, Any]:
        return {
            "user_id": self.user_id,
            "age": self.age,
            "region": self.region,
            "is_vip": self.is_vip,
            "synthetic": self.synthetic,
        }

    @classmethod
    def from_record(cls, rec: Mapping[str, Any]) -> "UserProfile":
        return cls(
            user_id=rec["user_id"],
            age=rec.get("age"),
            region=rec.get("region"),
            is_vip=bool(rec.get("is_vip", False)),
            synthetic=bool(rec.get("synthetic", False)),
        )


@dataclass(frozen=True)
class FollowEdge:
    follower: str
    followee: str

    def to_record(self) -> dict[str, Any]:
        return {"follower": self.follower, "followee": self.followee}

    @classmethod
    def from_record(cls, rec: Mapping[str, Any]) -> "FollowEdge":
        return cls(follower=rec["follower"], followee=rec["followee"])


@dataclass(frozen=True)
class TvShow:
    show_id: str
    title: str
    labels: tuple[str, ...]
    actors: tuple[str, ...]
    topics: frozenset[str]
    actor_accounts: Mapping[str, Optional[str]] = field(default_factory=dict)
    # half-open [start, end) broadcast intervals
    rounds: tuple[tuple[int, int], ...] = ()
    view_count: Optional[int] = None

    def linked_accounts(self) -> dict[str, str]:
        """Actor name -> user id, for actors that have an account."""
        return {a: u for a, u in self.actor_accounts.items() if u is not None}

    def to_record(self) -> dict[str, Any]:
        return {
            "show_id": self.show_id,
            "title": self.title,
            "labels": list(self.labels),
            "actors": list(self.actors),
            "actor_accounts": {a: self.actor_accounts[a] for a in sorted(self.actor_accounts)},
            "topics": sorted(self.topics),
            "rounds": [list(r) for r in self.rounds],
            "view_count": self.view_count,
        }

    @classmethod
    def from_record(cls, rec: Mapping[str, Any]) -> "TvShow":
        return cls(
            show_id=rec["show_id"],
            title=rec["title"],
            labels=tuple(rec["labels"]),
            actors=tuple(rec["actors"]),
            topics=frozenset(rec["topics"]),
            actor_accounts=dict(rec.get("actor_accounts") or {}),
            rounds=tuple((int(s), int(e)) for s, e in rec.get("rounds") or ()),
            view_count=rec.get("view_count"),
        )


@dataclass(frozen=True)
class Dataset:
    microblogs: tuple[Microblog, ...] = ()
    users: tuple[UserProfile, ...] = ()
    follows: tuple[FollowEdge, ...] = ()
    shows: tuple[TvShow, ...] = ()

    def warm(self) -> None:
        """Build every lazy index up front, before sharing across threads."""
        for name in ("microblog_by_id", "user_by_id", "show_by_id", "posts_by_author",
                     "children", "normalized_content", "followers"):
            getattr(self, name)

    @cached_property
    def microblog_by_id(self) -> dict[str, Microblog]:
        return {m.id: m for m in self.microblogs}

    @cached_property
    def user_by_id(self) -> dict[str, UserProfile]:
        return {u.user_id: u for u in self.users}

    @cached_property
    def show_by_id(self) -> dict[str, TvShow]:
        return {s.show_id: s for s in self.shows}

    @cached_property
    def posts_by_author(self) -> dict[str, list[str]]:
        out: dict[str, list[str]] = defaultdict(list)
        for m in self.microblogs:
            out[m.author_id].append(m.id)
        return dict(out)

    @cached_property
    def children(self) -> dict[str, list[str]]:
        """root_id -> ids of microblogs that repost/comment on it."""
        out: dict[str, list[str]] = defaultdict(list)
        for m in self.microblogs:
            if m.root_id is not None:
                out[m.root_id].append(m.id)
        return dict(out)

    @cached_property
    def normalized_content(self) -> dict[str, str]:
        return {m.id: normalize_text(m.content) for m in self.microblogs}

    @cached_property
    def followers(self) -> dict[str, set[str]]:
        """followee -> set of followers."""
        out: dict[str, set[str]] = defaultdict(set)
        for e in self.follows:
            out[e.followee].add(e.follower)
        return dict(out)


@dataclass(frozen=True, order=True)
class Violation:
    rule: str
    kind: str
    locator: str
    detail: str = ""


LABEL_COUNT = 3


def _rounds_ok(rounds: Iterable[tuple[int, int]]) -> bool:
    prev_end = None
    for start, end in rounds:
        if start >= end:
            return False
        if prev_end is not None and start < prev_end:
            return False
        prev_end = end
    return True


def validate_dataset(dataset: Dataset) -> list[Violation]:
    """Check every record invariant; violations are returned, never raised.

    Locators are record ids rather than positions so the returned list (sorted)
    does not depend on record order.
    """
    out: list[Violation] = []

    user_ids = Counter(u.user_id for u in dataset.users)
    for uid, n in user_ids.items():
        out.extend(Violation("user.duplicate_id", "user", uid) for _ in range(n - 1))
    for u in dataset.users:
        if u.age is not None and not (1 <= u.age <= 120):
            out.append(Violation("user.age_range", "user", u.user_id, str(u.age)))

    blog_ids = Counter(m.id for m in dataset.microblogs)
    for mid, n in blog_ids.items():
        out.extend(Violation("microblog.duplicate_id", "microblog", mid) for _ in range(n - 1))
    for m in dataset.microblogs:
        if m.root_id is not None and m.root_id == m.id:
            out.append(Violation("microblog.self_root", "microblog", m.id))
        if m.timestamp < 0:
            out.append(Violation("microblog.negative_timestamp", "microblog", m.id, str(m.timestamp)))
        if m.author_id not in user_ids:
            out.append(Violation("microblog.unknown_author", "microblog", m.id, m.author_id))

    pairs = Counter((e.follower, e.followee) for e in dataset.follows)
    for (a, b), n in pairs.items():
        loc = f"{a}->{b}"
        out.extend(Violation("follow.duplicate", "follow", loc) for _ in range(n - 1))
        if a == b:
            out.extend(Violation("follow.self_loop", "follow", loc) for _ in range(n))
        for endpoint in (a, b):
            if endpoint not in user_ids:
                out.extend(Violation("follow.unknown_endpoint", "follow", loc, endpoint) for _ in range(n))

    show_ids = Counter(s.show_id for s in dataset.shows)
    for sid, n in show_ids.items():
        out.extend(Violation("show.duplicate_id", "show", sid) for _ in range(n - 1))
    for s in dataset.shows:
        if len(s.labels) != LABEL_COUNT:
            out.append(Violation("show.label_count", "show", s.show_id, str(len(s.labels))))
        if not _rounds_ok(s.rounds):
            out.append(Violation("show.rounds_order", "show", s.show_id))
        for actor in s.actor_accounts:
            if actor not in s.actors:
                out.append(Violation("show.unknown_actor_account", "show", s.show_id, actor))
        if s.view_count is not None and s.view_count < 0:
            out.append(Violation("show.negative_view_count", "show", s.show_id))

    return sorted(out)
