"""Sentiment lexicons: loading, validation and the built-in test lexicon."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path

from .model import normalize_text

DEFAULT_POSITIVE = (
    "love", "great", "awesome", "wonderful", "excellent", "amazing", "touching", "brilliant",
)
DEFAULT_NEGATIVE = (
    "boring", "awful", "terrible", "hate", "worst", "disappointing", "annoying", "ugly",
)


@dataclass(frozen=True)
class SentimentLexicons:
    positive: frozenset[str]
    negative: frozenset[str]

    def __post_init__(self) -> None:
        pos = {normalize_text(p) for p in self.positive}
        neg = {normalize_text(n) for n in self.negative}
        if not pos or not neg:
            raise ValueError("both lexicons must be non-empty")
        if "" in pos or "" in neg:
            raise ValueError("lexicon entries must be non-empty strings")
        shared = pos & neg
        if shared:
            raise ValueError(f"lexicons overlap: {sorted(shared)}")

    @classmethod
    def default(cls) -> "SentimentLexicons":
        return cls(frozenset(DEFAULT_POSITIVE), frozenset(DEFAULT_NEGATIVE))

    @classmethod
    def load(cls, path: Path | str) -> "SentimentLexicons":
        """JSON file with ``"positive"`` and ``"negative"`` string arrays."""
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
        return cls(frozenset(data["positive"]), frozenset(data["negative"]))

    def to_json(self) -> str:
        return json.dumps(
            {"positive": sorted(self.positive), "negative": sorted(self.negative)},
            ensure_ascii=False,
            sort_keys=True,
        )

    def digest(self) -> str:
        return hashlib.sha256(self.to_json().encode("utf-8")).hexdigest()
