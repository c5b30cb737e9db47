"""Filtering pipeline: per-item policy, reversible rewriting, page scanning.

Decision order per item: exclusion, then blacklist/profanity hits, then the
sentiment flag (sum < sensitivity). Flagged items become placeholders with
category and keyword metadata; hits blur or remove the container depending
on profile and mode. Rewritten nodes carry ``data-detox`` markers and are
never reprocessed, which makes re-filtering a byte-identical no-op.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import IO, Iterable, Mapping

from . import dom
from .extraction import (
    MARK_ATTR,
    ExtractedItem,
    HealthReport,
    PatternSet,
    count_fresh_anchors,
    extract,
    extract_text,
    host_matches_suffix,
    pattern_health,
)
from .lexicon import (
    SCORE_MAX,
    SCORE_MIN,
    Lexicon,
    LexiconError,
    PolarityOverride,
    SentimentReport,
    default_lexicon,
    score,
)
from .matchlist import (
    CompiledMatcher,
    MatcherError,
    MatchHit,
    MatchTerm,
    Source,
    compile as compile_terms,
    default_profanity_words,
    find_all,
    profanity_terms,
)
from .textmodel import (
    ClassifierModel,
    KeywordTags,
    Prediction,
    default_stopwords,
    extract_keywords,
    predict,
)


class Action(Enum):
    KEEP = "Keep"
    ANNOTATE = "Annotate"
    BLUR = "Blur"
    REMOVE = "Remove"
    PLACEHOLDER = "Placeholder"


class Reason(Enum):
    BLACKLIST = "Blacklist"
    PROFANITY = "Profanity"
    SENTIMENT = "Sentiment"


class Mode(Enum):
    SEARCH_RESULTS = "search"
    GENERIC_PAGE = "page"


class ProfileError(ValueError):
    """Profile validation failure; `fields` names every offending field."""

    def __init__(self, fields: list[str], message: str | None = None) -> None:
        self.fields = fields
        super().__init__(message or f"invalid profile fields: {', '.join(fields)}")


_PROFILE_FIELDS = (
    "sensitivity",
    "overrides",
    "blacklist",
    "blur_enabled",
    "profanity_enabled",
    "disabled_sites",
    "version",
)


@dataclass(frozen=True)
class UserProfile:
    """User policy: sensitivity threshold, overrides, blacklist and toggles."""

    sensitivity: int = 0
    overrides: tuple[PolarityOverride, ...] = ()
    blacklist: tuple[MatchTerm, ...] = ()
    blur_enabled: bool = True
    profanity_enabled: bool = True
    disabled_sites: tuple[str, ...] = ()
    version: int = 0

    def __post_init__(self) -> None:
        if not SCORE_MIN <= self.sensitivity <= SCORE_MAX:
            raise ProfileError(
                ["sensitivity"],
                f"sensitivity {self.sensitivity} outside [{SCORE_MIN}, {SCORE_MAX}]",
            )

    def to_dict(self) -> dict:
        return {
            "sensitivity": self.sensitivity,
            "overrides": [{"term": o.term, "score": o.score} for o in self.overrides],
            "blacklist": [
                {"pattern": t.pattern, "is_raw_regex": t.is_raw_regex} for t in self.blacklist
            ],
            "blur_enabled": self.blur_enabled,
            "profanity_enabled": self.profanity_enabled,
            "disabled_sites": list(self.disabled_sites),
            "version": self.version,
        }

    @classmethod
    def from_dict(cls, document: Mapping) -> UserProfile:
        """Build a profile from its JSON form; unknown fields are rejected."""
        if not isinstance(document, Mapping):
            raise ProfileError([], "profile document must be an object")
        unknown = sorted(set(document) - set(_PROFILE_FIELDS))
        if unknown:
            raise ProfileError(unknown, f"unknown profile fields: {', '.join(unknown)}")
        if "version" not in document:
            raise ProfileError(["version"], "profile document must carry a version")
        values = _coerce_profile_values(document)
        return cls(**values)


def _coerce_profile_values(document: Mapping) -> dict:
    bad: list[str] = []
    values: dict = {}
    for name in _PROFILE_FIELDS:
        if name not in document:
            continue
        raw = document[name]
        try:
            if name == "sensitivity" or name == "version":
                if isinstance(raw, bool) or not isinstance(raw, int):
                    raise ValueError("must be an integer")
                if name == "sensitivity" and not SCORE_MIN <= raw <= SCORE_MAX:
                    raise ValueError("out of range")
                values[name] = raw
            elif name == "overrides":
                values[name] = tuple(_coerce_override(entry) for entry in raw)
            elif name == "blacklist":
                values[name] = tuple(_coerce_match_term(entry) for entry in raw)
            elif name in ("blur_enabled", "profanity_enabled"):
                if not isinstance(raw, bool):
                    raise ValueError("must be a boolean")
                values[name] = raw
            elif name == "disabled_sites":
                sites = tuple(str(site).strip().lower() for site in raw)
                if any(not site for site in sites):
                    raise ValueError("sites must be non-empty")
                values[name] = sites
        except (ValueError, TypeError, LexiconError, MatcherError):
            bad.append(name)
    if bad:
        raise ProfileError(bad)
    return values


def _coerce_override(entry) -> PolarityOverride:
    if isinstance(entry, PolarityOverride):
        return entry
    if isinstance(entry, Mapping):
        score_value = entry["score"]
        if isinstance(score_value, bool) or not isinstance(score_value, int):
            raise ValueError("override score must be an integer")
        return PolarityOverride(term=str(entry["term"]), score=score_value)
    term, score_value = entry
    return PolarityOverride(term=str(term), score=int(score_value))


def _coerce_match_term(entry) -> MatchTerm:
    if isinstance(entry, MatchTerm):
        return entry
    if isinstance(entry, Mapping):
        return MatchTerm(
            pattern=str(entry["pattern"]),
            is_raw_regex=bool(entry.get("is_raw_regex", False)),
            source=Source.BLACKLIST,
        )
    return MatchTerm(pattern=str(entry), source=Source.BLACKLIST)


def update_profile(current: UserProfile, changes: Mapping) -> UserProfile:
    """Apply a validated mutation, bumping the version counter."""
    unknown = sorted(set(changes) - (set(_PROFILE_FIELDS) - {"version"}))
    if unknown:
        raise ProfileError(unknown, f"unknown profile fields: {', '.join(unknown)}")
    values = _coerce_profile_values(changes)
    return replace(current, **values, version=current.version + 1)


def load_profile(handle: IO[str] | str) -> UserProfile:
    text = handle if isinstance(handle, str) else handle.read()
    try:
        document = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProfileError([], f"profile is not valid JSON: {exc}") from None
    return UserProfile.from_dict(document)


def load_profile_file(path) -> UserProfile:
    with open(path, encoding="utf-8") as handle:
        return load_profile(handle)


@dataclass(frozen=True)
class Matchers:
    blacklist: CompiledMatcher
    profanity: CompiledMatcher | None


def build_matchers(
    profile: UserProfile, profanity_words: Iterable[str] | None = None
) -> Matchers:
    """Compile the profile's blacklist plus the profanity list when enabled."""
    blacklist = compile_terms(profile.blacklist)
    profanity = None
    if profile.profanity_enabled:
        words = tuple(profanity_words) if profanity_words is not None else default_profanity_words()
        profanity = compile_terms(profanity_terms(words))
    return Matchers(blacklist=blacklist, profanity=profanity)


@dataclass(frozen=True)
class FilterDeps:
    """Shared engine state for decisions: lexicon, model and keyword inputs."""

    lexicon: Lexicon
    model: ClassifierModel | None = None
    stopwords: frozenset[str] = field(default_factory=default_stopwords)
    profanity_words: tuple[str, ...] = field(default_factory=default_profanity_words)
    keywords_k: int = 5
    deep_all: bool = False  # run classifier/keywords on unflagged items too

    @classmethod
    def default(cls, model: ClassifierModel | None = None) -> FilterDeps:
        return cls(lexicon=default_lexicon(), model=model)


@dataclass
class FilterDecision:
    """Per-item verdict plus the evidence that produced it."""

    item_id: int
    action: Action
    reason: Reason
    sentiment: SentimentReport
    domain: str
    hits: tuple[MatchHit, ...] = ()
    category: Prediction | None = None
    keywords: KeywordTags | None = None

    def to_dict(self) -> dict:
        return {
            "item_id": self.item_id,
            "action": self.action.value,
            "reason": self.reason.value,
            "domain": self.domain,
            "sentiment": self.sentiment.to_dict(),
            "hits": [hit.to_dict() for hit in self.hits],
            "category": self.category.to_dict() if self.category else None,
            "keywords": self.keywords.to_dict() if self.keywords else None,
        }


def decide(
    item: ExtractedItem,
    profile: UserProfile,
    lexicon: Lexicon,
    matchers: Matchers,
    model: ClassifierModel | None,
    mode: Mode,
    *,
    stopwords: frozenset[str] | None = None,
    keywords_k: int = 5,
    deep_all: bool = False,
) -> FilterDecision:
    """Pure per-item policy: exclusion, then hits, then the sentiment flag."""
    report = score(item.text, lexicon, profile.overrides, profile.sensitivity)

    if item.excluded:
        return FilterDecision(
            item_id=item.item_id,
            action=Action.KEEP,
            reason=Reason.SENTIMENT,
            sentiment=report,
            domain=item.host,
        )

    hits = tuple(find_all(matchers.blacklist, item.text))
    reason = Reason.BLACKLIST
    if not hits and matchers.profanity is not None:
        hits = tuple(find_all(matchers.profanity, item.text))
        reason = Reason.PROFANITY
    if hits:
        if profile.blur_enabled:
            action = Action.BLUR
        elif mode is Mode.SEARCH_RESULTS:
            action = Action.REMOVE
        else:
            action = Action.BLUR
        return FilterDecision(
            item_id=item.item_id,
            action=action,
            reason=reason,
            sentiment=report,
            domain=item.host,
            hits=hits,
        )

    category = None
    keywords = None
    if report.flagged or deep_all:
        if model is not None:
            category = predict(model, item.text)
        keywords = extract_keywords(item.text, stopwords, keywords_k)
    if report.flagged:
        return FilterDecision(
            item_id=item.item_id,
            action=Action.PLACEHOLDER,
            reason=Reason.SENTIMENT,
            sentiment=report,
            domain=item.host,
            category=category,
            keywords=keywords,
        )
    return FilterDecision(
        item_id=item.item_id,
        action=Action.ANNOTATE,
        reason=Reason.SENTIMENT,
        sentiment=report,
        domain=item.host,
        category=category,
        keywords=keywords,
    )


@dataclass
class FilteredDocument:
    """Rewritten page plus decisions, reversal originals and pattern health."""

    html: str
    decisions: list[FilterDecision]
    originals: dict[int, str]
    health: HealthReport

    def decision_for(self, item_id: int) -> FilterDecision | None:
        for decision in self.decisions:
            if decision.item_id == item_id:
                return decision
        return None


class UnknownItemError(LookupError):
    """Raised when an item id has no reversible marker in the document."""


def _marker_attrs(kind: str, item_id: int) -> dict[str, str | None]:
    return {MARK_ATTR: kind, "data-item": str(item_id)}


def _rewrite(doc: dom.Document, decisions: list[FilterDecision], items: dict[int, ExtractedItem]) -> dict[int, str]:
    # Snapshot every non-Keep container before any mutation so nested
    # containers never capture each other's markers.
    originals = {
        d.item_id: dom.serialize(items[d.item_id].container)
        for d in decisions
        if d.action is not Action.KEEP
    }
    for decision in decisions:
        container = items[decision.item_id].container
        if decision.action is Action.KEEP:
            continue
        if decision.action is Action.ANNOTATE:
            container.attrs[MARK_ATTR] = "annotated"
            container.attrs["data-item"] = str(decision.item_id)
            container.attrs["data-bucket"] = decision.sentiment.bucket.value
            continue
        if decision.action is Action.BLUR:
            wrapper = dom.Element("div", _marker_attrs("blur", decision.item_id))
            dom.replace_node(container, wrapper)
            wrapper.append(container)
            continue
        if decision.action is Action.REMOVE:
            marker = dom.Element("div", _marker_attrs("removed", decision.item_id))
            dom.replace_node(container, marker)
            continue
        # Placeholder
        attrs = _marker_attrs("placeholder", decision.item_id)
        attrs["data-domain"] = decision.domain
        attrs["data-score"] = str(decision.sentiment.sum)
        attrs["data-bucket"] = decision.sentiment.bucket.value
        if decision.category is not None:
            attrs["data-category"] = decision.category.category
        if decision.keywords is not None:
            attrs["data-keywords"] = ",".join(decision.keywords.tokens())
        marker = dom.Element("div", attrs)
        dom.replace_node(container, marker)
    return originals


def filter_document(
    html: str,
    patterns: PatternSet,
    profile: UserProfile,
    deps: FilterDeps,
    mode: Mode = Mode.SEARCH_RESULTS,
) -> FilteredDocument:
    """Run the full workflow over a page and return the rewritten document.

    Already-marked nodes are skipped, so filtering the function's own output
    is a byte-identical no-op.
    """
    doc = dom.parse_html(html)
    anchor_count = count_fresh_anchors(doc)
    items = extract(doc, patterns)
    matchers = build_matchers(profile, deps.profanity_words)
    decisions = [
        decide(
            item,
            profile,
            deps.lexicon,
            matchers,
            deps.model,
            mode,
            stopwords=deps.stopwords,
            keywords_k=deps.keywords_k,
            deep_all=deps.deep_all,
        )
        for item in items
    ]
    health = pattern_health(items, patterns, anchor_count)
    originals = _rewrite(doc, decisions, {item.item_id: item for item in items})
    return FilteredDocument(
        html=dom.serialize(doc),
        decisions=decisions,
        originals=originals,
        health=health,
    )


def reinstate(document: FilteredDocument, item_id: int) -> FilteredDocument:
    """Swap an item's marker back for its original markup, byte-identically."""
    if item_id not in document.originals:
        raise UnknownItemError(f"item {item_id} has no stored original")
    doc = dom.parse_html(document.html)
    marker = None
    for element in dom.iter_elements(doc):
        if element.attrs.get("data-item") == str(item_id) and MARK_ATTR in element.attrs:
            marker = element
            break
    if marker is None:
        raise UnknownItemError(f"item {item_id} has no marker in the document")

    fragment = dom.parse_html(document.originals[item_id])
    dom.replace_with_nodes(marker, list(fragment.children))

    decisions = [
        replace(d, action=Action.KEEP, hits=()) if d.item_id == item_id else d
        for d in document.decisions
    ]
    return FilteredDocument(
        html=dom.serialize(doc),
        decisions=decisions,
        originals=dict(document.originals),
        health=document.health,
    )


@dataclass(frozen=True)
class ScanReport:
    """Blacklist hits found on a non-search page, with the warn verdict."""

    site: str
    hits: tuple[MatchHit, ...]
    warn: bool

    def to_dict(self) -> dict:
        return {
            "site": self.site,
            "warn": self.warn,
            "hits": [hit.to_dict() for hit in self.hits],
        }


def _looks_like_html(content: str) -> bool:
    lowered = content.lstrip()
    if lowered.startswith("<"):
        return True
    for offset, char in enumerate(content):
        if char == "<" and offset + 1 < len(content) and (
            content[offset + 1].isalpha() or content[offset + 1] in "/!"
        ):
            return True
    return False


def scan_page(content: str, site: str, profile: UserProfile) -> ScanReport:
    """Run the blacklist over a page (HTML stripped to text first)."""
    text = extract_text(dom.parse_html(content)) if _looks_like_html(content) else content
    matcher = compile_terms(profile.blacklist)
    hits = tuple(find_all(matcher, text))
    site = site.strip().lower()
    disabled = any(host_matches_suffix(site, suffix) for suffix in profile.disabled_sites)
    return ScanReport(site=site, hits=hits, warn=bool(hits) and not disabled)
