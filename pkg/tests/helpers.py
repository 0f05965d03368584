"""Builders shared by the test modules."""

from __future__ import annotations

from hypothesis import strategies as st

from showprofile.graphkit import SocialGraph
from showprofile.model import Dataset, FollowEdge, Microblog, TvShow, UserProfile


def post(mid, author, ts=0, content="", root=None):
    return Microblog(mid, author, author, "0.0.0.0", ts, content, root)


def show(sid, labels=("Love", "Idol", "Modern"), actors=(), accounts=None, topics=None,
         rounds=((0, 100), (200, 300)), view_count=None):
    return TvShow(
        show_id=sid,
        title=f"Drama{sid}",
        labels=tuple(labels),
        actors=tuple(actors),
        topics=frozenset(topics if topics is not None else {f"Drama{sid}"}),
        actor_accounts=dict(accounts or {}),
        rounds=tuple(rounds),
        view_count=view_count,
    )


def dataset(posts=(), users=None, follows=(), shows=()):
    """Dataset with a profile for every author and follow endpoint."""
    given = {u.user_id if isinstance(u, UserProfile) else u: u for u in users or ()}
    ids = set(given) | {p.author_id for p in posts}
    for a, b in follows:
        ids |= {a, b}
    profiles = tuple(given[u] if isinstance(given.get(u), UserProfile) else UserProfile(u) for u in sorted(ids))
    return Dataset(tuple(posts), profiles, tuple(FollowEdge(a, b) for a, b in follows), tuple(shows))


@st.composite
def graphs(draw, min_nodes=0, max_nodes=12, weighted=False):
    n = draw(st.integers(min_nodes, max_nodes))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    if weighted:
        ws = draw(st.lists(st.integers(1, 5), min_size=len(chosen), max_size=len(chosen)))
        return SocialGraph.build(range(n), [(u, v, w) for (u, v), w in zip(chosen, ws)])
    return SocialGraph.build(range(n), chosen)
