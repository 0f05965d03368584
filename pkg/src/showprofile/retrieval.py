"""Show-relevant microblog retrieval.

Seeds are posts by a show's linked actor accounts plus posts whose content
contains one of the show's topic keywords; the corpus is the seed set closed
under repost/comment links.
"""

from __future__ import annotations

import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Optional

from .model import Dataset, TvShow, normalize_text

logger = logging.getLogger(__name__)

ACTOR_MATCH = "actor_match"
TOPIC_PREFIX = "topic_match:"
EXPANSION_PREFIX = "expansion:"


class EmptyTopicsError(ValueError):
    pass


@dataclass(frozen=True)
class ShowCorpus:
    show_id: str
    members: frozenset[str]
    # microblog id -> provenance tags, e.g. "actor_match", "topic_match:<kw>",
    # "expansion:<seed id>"
    provenance: Mapping[str, frozenset[str]]

    def __len__(self) -> int:
        return len(self.members)

    def authors(self, dataset: Dataset) -> set[str]:
        by_id = dataset.microblog_by_id
        return {by_id[m].author_id for m in self.members}


def retrieve_actor_microblogs(show: TvShow, dataset: Dataset) -> set[str]:
    out: set[str] = set()
    posts = dataset.posts_by_author
    for account in show.linked_accounts().values():
        out.update(posts.get(account, ()))
    return out


def retrieve_topic_microblogs(show: TvShow, dataset: Dataset) -> dict[str, set[str]]:
    """Microblog id -> topic keywords found in its content (substring match
    after NFC normalization and case folding)."""
    if not show.topics:
        raise EmptyTopicsError(f"show {show.show_id} has no topic keywords")
    # keywords differing only in case or normal form are all reported
    keywords = sorted((normalize_text(t), t) for t in show.topics if t)
    out: dict[str, set[str]] = {}
    for mid, text in dataset.normalized_content.items():
        hits = {orig for norm, orig in keywords if norm in text}
        if hits:
            out[mid] = hits
    return out


def expand_seed_set(seeds: Iterable[str], dataset: Dataset) -> set[str]:
    """Close ``seeds`` under "root_id in S implies post in S".

    Dangling root ids never enter the set since only existing posts are
    reached by walking ``dataset.children``.
    """
    closed = set(seeds)
    stack = sorted(closed)
    children = dataset.children
    while stack:
        for child in children.get(stack.pop(), ()):
            if child not in closed:
                closed.add(child)
                stack.append(child)
    return closed


def _nearest_seed(mid: str, seeds: set[str], dataset: Dataset) -> Optional[str]:
    by_id = dataset.microblog_by_id
    seen = {mid}
    cur = by_id[mid].root_id
    while cur is not None and cur not in seen:
        if cur in seeds:
            return cur
        seen.add(cur)
        nxt = by_id.get(cur)
        cur = nxt.root_id if nxt is not None else None
    return None


def retrieve_show_corpus(show: TvShow, dataset: Dataset) -> ShowCorpus:
    actor_hits = retrieve_actor_microblogs(show, dataset)
    topic_hits = retrieve_topic_microblogs(show, dataset)
    seeds = actor_hits | set(topic_hits)
    members = expand_seed_set(seeds, dataset)
    provenance: dict[str, frozenset[str]] = {}
    for mid in sorted(members):
        tags = set()
        if mid in actor_hits:
            tags.add(ACTOR_MATCH)
        for kw in topic_hits.get(mid, ()):
            tags.add(TOPIC_PREFIX + kw)
        if not tags:
            seed = _nearest_seed(mid, seeds, dataset)
            tags.add(EXPANSION_PREFIX + str(seed))
        provenance[mid] = frozenset(tags)
    return ShowCorpus(show.show_id, frozenset(members), provenance)


def empty_corpus(show_id: str) -> ShowCorpus:
    return ShowCorpus(show_id, frozenset(), {})


def retrieve_all(
    dataset: Dataset, show_ids: Optional[Iterable[str]] = None, workers: int = 1
) -> dict[str, ShowCorpus]:
    """Corpora for the given shows (all shows by default), keyed in show_id order."""
    shows = [dataset.show_by_id[s] for s in sorted(show_ids)] if show_ids is not None \
        else sorted(dataset.shows, key=lambda s: s.show_id)
    dataset.warm()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            corpora = list(pool.map(lambda s: retrieve_show_corpus(s, dataset), shows))
    else:
        corpora = [retrieve_show_corpus(s, dataset) for s in shows]
    for c in corpora:
        logger.info("show %s: %d microblogs retrieved", c.show_id, len(c))
    return {c.show_id: c for c in corpora}


def multi_show_members(corpora: Mapping[str, ShowCorpus]) -> dict[str, list[str]]:
    """Microblogs that landed in more than one corpus -> their show ids."""
    hits: dict[str, list[str]] = {}
    for sid in sorted(corpora):
        for mid in corpora[sid].members:
            hits.setdefault(mid, []).append(sid)
    return {m: s for m, s in sorted(hits.items()) if len(s) > 1}


# --------------------------------------------------------------- corpus files


def corpus_rows(corpora: Mapping[str, ShowCorpus]) -> list[dict]:
    rows = []
    for sid in sorted(corpora):
        c = corpora[sid]
        for mid in sorted(c.members):
            rows.append({"show_id": sid, "microblog_id": mid, "provenance": sorted(c.provenance[mid])})
    return rows


def write_corpora(corpora: Mapping[str, ShowCorpus], path: Path | str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for row in corpus_rows(corpora):
            fh.write(json.dumps(row, ensure_ascii=False, sort_keys=True) + "\n")


def read_corpora(path: Path | str) -> dict[str, ShowCorpus]:
    """Read a corpus file, or every ``*.jsonl`` file in a directory."""
    path = Path(path)
    files = sorted(path.glob("*.jsonl")) if path.is_dir() else [path]
    members: dict[str, set[str]] = {}
    prov: dict[str, dict[str, frozenset[str]]] = {}
    for f in files:
        with open(f, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                if not line.strip():
                    continue
                try:
                    row = json.loads(line)
                    sid, mid, tags = row["show_id"], row["microblog_id"], row["provenance"]
                except (ValueError, KeyError) as exc:
                    raise ValueError(f"{f}:{lineno}: malformed corpus row ({exc})") from exc
                members.setdefault(sid, set()).add(mid)
                prov.setdefault(sid, {})[mid] = frozenset(tags)
    return {sid: ShowCorpus(sid, frozenset(members[sid]), prov[sid]) for sid in sorted(members)}
