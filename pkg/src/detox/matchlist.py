"""Blacklist and profanity matching with word-boundary regex semantics."""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from importlib import resources
from typing import Iterable

EXCERPT_WIDTH = 80


class MatcherError(ValueError):
    """Raised when a match term is empty or its raw regex does not compile."""


class Source(Enum):
    BLACKLIST = "Blacklist"
    PROFANITY = "Profanity"


@dataclass(frozen=True)
class MatchTerm:
    """A literal word/phrase, or an explicit raw regex, to search for."""

    pattern: str
    is_raw_regex: bool = False
    source: Source = Source.BLACKLIST

    def __post_init__(self) -> None:
        if not self.pattern:
            raise MatcherError("match term pattern must be non-empty")
        if self.is_raw_regex:
            try:
                re.compile(self.pattern)
            except re.error as exc:
                raise MatcherError(f"invalid regex for term {self.pattern!r}: {exc}") from None


@dataclass(frozen=True)
class MatchHit:
    term: MatchTerm
    start: int
    end: int
    excerpt: str

    def to_dict(self) -> dict:
        return {
            "term": self.term.pattern,
            "source": self.term.source.value,
            "start": self.start,
            "end": self.end,
            "excerpt": self.excerpt,
        }


def _term_regex(term: MatchTerm) -> re.Pattern[str]:
    if term.is_raw_regex:
        return re.compile(term.pattern, re.IGNORECASE)
    # Lookarounds instead of \b so terms ending in non-word characters
    # ("c++") still anchor at word boundaries.
    return re.compile(rf"(?<!\w){re.escape(term.pattern)}(?!\w)", re.IGNORECASE)


class CompiledMatcher:
    """Immutable matcher over a fixed set of terms; safe to share."""

    def __init__(self, terms: Iterable[MatchTerm]):
        self._terms: tuple[MatchTerm, ...] = tuple(terms)
        self._regexes: tuple[re.Pattern[str], ...] = tuple(
            _term_regex(t) for t in self._terms
        )

    @property
    def terms(self) -> tuple[MatchTerm, ...]:
        return self._terms

    def __len__(self) -> int:
        return len(self._terms)


def compile(terms: Iterable[MatchTerm]) -> CompiledMatcher:  # noqa: A001 - contract name
    """Compile terms into a matcher; literals get escaped word-boundary regexes."""
    return CompiledMatcher(terms)


def _excerpt(text: str, start: int, end: int, width: int = EXCERPT_WIDTH) -> str:
    if end - start >= width:
        return text[start:end]
    lo = max(0, start - (width - (end - start)) // 2)
    hi = min(len(text), lo + width)
    lo = max(0, hi - width)
    return text[lo:hi]


def find_all(matcher: CompiledMatcher, text: str) -> list[MatchHit]:
    """All non-overlapping hits in document order.

    Overlaps resolve leftmost-first; at the same start offset the term
    listed first wins. Deterministic for identical inputs.
    """
    candidates: list[tuple[int, int, int]] = []
    for index, regex in enumerate(matcher._regexes):
        for found in regex.finditer(text):
            if found.start() == found.end():
                continue
            candidates.append((found.start(), index, found.end()))
    candidates.sort()

    hits: list[MatchHit] = []
    last_end = 0
    for start, index, end in candidates:
        if start < last_end:
            continue
        hits.append(
            MatchHit(
                term=matcher._terms[index],
                start=start,
                end=end,
                excerpt=_excerpt(text, start, end),
            )
        )
        last_end = end
    return hits


@lru_cache(maxsize=1)
def default_profanity_words() -> tuple[str, ...]:
    """The bundled profanity word list (one lowercase word per line)."""
    text = resources.files(__package__).joinpath("data/profanity.txt").read_text("utf-8")
    return tuple(line.strip() for line in text.splitlines() if line.strip())


def profanity_terms(words: Iterable[str] | None = None) -> list[MatchTerm]:
    if words is None:
        words = default_profanity_words()
    return [MatchTerm(pattern=w, source=Source.PROFANITY) for w in words]
