"""Lexicon-based sentiment scoring.

Scores text by summing integer valences of matched lexicon terms
(AFINN-style, -5..+5), with greedy longest-phrase-first matching and
user-supplied polarity overrides that shadow the shipped values.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from importlib import resources
from typing import Iterable, NamedTuple

SCORE_MIN = -5
SCORE_MAX = 5

# Maximal runs of letters/digits, joined by internal apostrophes or hyphens.
_TOKEN_RE = re.compile(r"[^\W_]+(?:['-][^\W_]+)*")
_APOSTROPHES = str.maketrans({"‘": "'", "’": "'", "‛": "'"})


class LexiconError(ValueError):
    """Raised for malformed lexicon data or out-of-range scores."""


class Bucket(Enum):
    """Five-level sentiment label derived from the score sum."""

    STRONGLY_NEGATIVE = "StronglyNegative"
    NEGATIVE = "Negative"
    NEUTRAL = "Neutral"
    POSITIVE = "Positive"
    STRONGLY_POSITIVE = "StronglyPositive"


def tokenize(text: str) -> list[str]:
    """Split text into lowercase tokens, keeping internal apostrophes/hyphens."""
    if not text:
        return []
    return _TOKEN_RE.findall(text.translate(_APOSTROPHES).lower())


def _validate_term(term: str) -> str:
    if not term:
        raise LexiconError("term must be non-empty")
    if term != term.lower():
        raise LexiconError(f"term must be lowercase: {term!r}")
    if term != " ".join(term.split()):
        raise LexiconError(f"term must be single-space-separated: {term!r}")
    return term


def _validate_score(score: int) -> int:
    if not SCORE_MIN <= score <= SCORE_MAX:
        raise LexiconError(f"score {score} outside [{SCORE_MIN}, {SCORE_MAX}]")
    return score


@dataclass(frozen=True)
class PolarityOverride:
    """A user-supplied (term, score) pair that shadows the lexicon's value."""

    term: str
    score: int

    def __post_init__(self) -> None:
        normalized = " ".join(self.term.lower().split())
        if not normalized:
            raise LexiconError("override term must be non-empty")
        object.__setattr__(self, "term", normalized)
        _validate_score(self.score)

    @property
    def phrase_len(self) -> int:
        return len(self.term.split())


@dataclass(frozen=True)
class Lexicon:
    """Immutable term->score table with the longest phrase length precomputed."""

    entries: dict[str, int]
    max_phrase_len: int

    @classmethod
    def from_entries(cls, pairs: Iterable[tuple[str, int]]) -> Lexicon:
        entries: dict[str, int] = {}
        max_len = 1
        for term, score in pairs:
            term = _validate_term(term)
            _validate_score(score)
            entries[term] = score
            max_len = max(max_len, len(term.split()))
        return cls(entries=entries, max_phrase_len=max_len)

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, term: str) -> bool:
        return term in self.entries


def load_lexicon(stream: Iterable[str]) -> Lexicon:
    """Load a lexicon from `term<TAB>score` lines.

    Later duplicates overwrite earlier ones. Malformed lines raise
    LexiconError naming the line number; blank lines and comments are
    not permitted.
    """
    pairs: list[tuple[str, int]] = []
    for lineno, raw in enumerate(stream, start=1):
        line = raw.rstrip("\n").rstrip("\r")
        if line.count("\t") != 1:
            raise LexiconError(f"line {lineno}: expected exactly one tab")
        term, score_text = line.split("\t")
        try:
            score = int(score_text)
        except ValueError:
            raise LexiconError(f"line {lineno}: score {score_text!r} is not an integer") from None
        if not SCORE_MIN <= score <= SCORE_MAX:
            raise LexiconError(f"line {lineno}: score {score} outside [{SCORE_MIN}, {SCORE_MAX}]")
        try:
            pairs.append((_validate_term(term), score))
        except LexiconError as exc:
            raise LexiconError(f"line {lineno}: {exc}") from None
    return Lexicon.from_entries(pairs)


def load_lexicon_file(path) -> Lexicon:
    with open(path, encoding="utf-8") as handle:
        return load_lexicon(handle)


@lru_cache(maxsize=1)
def default_lexicon() -> Lexicon:
    """The bundled AFINN-111 lexicon (2,477 entries, includes phrases)."""
    text = resources.files(__package__).joinpath("data/AFINN-111.txt").read_text("utf-8")
    return load_lexicon(text.splitlines())


class TermMatch(NamedTuple):
    term: str
    score: int
    token_index: int


@dataclass(frozen=True)
class SentimentReport:
    """Outcome of scoring one text: sum, matches, bucket and flag verdict."""

    sum: int
    matches: tuple[TermMatch, ...]
    token_count: int
    bucket: Bucket
    flagged: bool

    def to_dict(self) -> dict:
        return {
            "sum": self.sum,
            "token_count": self.token_count,
            "bucket": self.bucket.value,
            "flagged": self.flagged,
            "matches": [
                {"term": m.term, "score": m.score, "token_index": m.token_index}
                for m in self.matches
            ],
        }


def bucket_of(total: int) -> Bucket:
    """Map a score sum onto the five sentiment levels (strong cutoff at |4|)."""
    if total <= -4:
        return Bucket.STRONGLY_NEGATIVE
    if total < 0:
        return Bucket.NEGATIVE
    if total == 0:
        return Bucket.NEUTRAL
    if total < 4:
        return Bucket.POSITIVE
    return Bucket.STRONGLY_POSITIVE


def score(
    text: str,
    lexicon: Lexicon,
    overrides: Iterable[PolarityOverride] = (),
    threshold: int = 0,
) -> SentimentReport:
    """Score text against the lexicon plus overrides.

    Matching is greedy left-to-right, longest phrase first; overrides are
    consulted before the lexicon at every phrase length, and each token is
    consumed by at most one match. The report is flagged iff sum < threshold.
    """
    if not SCORE_MIN <= threshold <= SCORE_MAX:
        raise ValueError(f"threshold {threshold} outside [{SCORE_MIN}, {SCORE_MAX}]")
    override_map: dict[str, int] = {}
    max_len = lexicon.max_phrase_len
    for override in overrides:
        override_map[override.term] = override.score
        max_len = max(max_len, override.phrase_len)

    tokens = tokenize(text)
    matches: list[TermMatch] = []
    i = 0
    while i < len(tokens):
        advance = 1
        for n in range(min(max_len, len(tokens) - i), 0, -1):
            term = " ".join(tokens[i : i + n])
            value = override_map.get(term)
            if value is None:
                value = lexicon.entries.get(term)
            if value is not None:
                matches.append(TermMatch(term, value, i))
                advance = n
                break
        i += advance

    total = sum(m.score for m in matches)
    return SentimentReport(
        sum=total,
        matches=tuple(matches),
        token_count=len(tokens),
        bucket=bucket_of(total),
        flagged=total < threshold,
    )
