"""Search-result extraction: pattern configs, container resolution, health.

Anchors with non-empty hrefs are walked up to the nearest ancestor-or-self
node matching any rule's container selector; the first rule in file order
assigns the category. Subtrees already rewritten by the filter (carrying the
``data-detox`` attribute) are never reprocessed.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from typing import IO, Iterator
from urllib.parse import urlparse

from . import dom

MARK_ATTR = "data-detox"


class PatternError(ValueError):
    """Raised for unparseable pattern configs or selectors."""


class Category(Enum):
    ORGANIC = "Organic"
    FEATURED = "Featured"
    NEWS = "News"
    VIDEO = "Video"


@dataclass(frozen=True)
class PatternRule:
    category: Category
    container_selector: str
    title_selector: str | None = None
    link_selector: str | None = None


class PatternSet:
    """Ordered site-specific rules plus host exclusions; immutable after load."""

    def __init__(
        self,
        site_id: str,
        rules: list[PatternRule],
        exclusion_hosts: tuple[str, ...] = (),
        version: str = "1",
    ) -> None:
        if not rules:
            raise PatternError("pattern set needs at least one rule")
        self.site_id = site_id
        self.version = version
        self.exclusion_hosts = tuple(host.lower().lstrip(".") for host in exclusion_hosts)
        self.rules = tuple(rules)
        compiled = []
        for index, rule in enumerate(self.rules):
            try:
                compiled.append(
                    (
                        dom.parse_selector(rule.container_selector),
                        dom.parse_selector(rule.title_selector) if rule.title_selector else None,
                        dom.parse_selector(rule.link_selector) if rule.link_selector else None,
                    )
                )
            except dom.SelectorError as exc:
                raise PatternError(f"rule {index}: {exc}") from None
        self._compiled = tuple(compiled)

    def __repr__(self) -> str:
        return f"PatternSet({self.site_id!r}, {len(self.rules)} rules)"


def parse_patterns(source: IO[str] | str | dict) -> PatternSet:
    """Parse a JSON pattern config (stream, string or already-decoded dict)."""
    if isinstance(source, dict):
        document = source
    else:
        text = source if isinstance(source, str) else source.read()
        try:
            document = json.loads(text)
        except json.JSONDecodeError as exc:
            raise PatternError(f"pattern config is not valid JSON: {exc}") from None
    if not isinstance(document, dict):
        raise PatternError("pattern config must be a JSON object")

    raw_rules = document.get("rules")
    if not isinstance(raw_rules, list) or not raw_rules:
        raise PatternError("pattern config needs a non-empty 'rules' list")
    rules: list[PatternRule] = []
    for index, raw in enumerate(raw_rules):
        if not isinstance(raw, dict):
            raise PatternError(f"rule {index}: expected an object")
        category_name = raw.get("category")
        try:
            category = Category(category_name)
        except ValueError:
            known = ", ".join(c.value for c in Category)
            raise PatternError(
                f"rule {index}: unknown category {category_name!r} (known: {known})"
            ) from None
        container = raw.get("container_selector")
        if not container or not isinstance(container, str):
            raise PatternError(f"rule {index}: container_selector is required")
        rules.append(
            PatternRule(
                category=category,
                container_selector=container,
                title_selector=raw.get("title_selector"),
                link_selector=raw.get("link_selector"),
            )
        )
    return PatternSet(
        site_id=str(document.get("site_id", "")),
        rules=rules,
        exclusion_hosts=tuple(document.get("exclusion_hosts", ())),
        version=str(document.get("version", "1")),
    )


def load_patterns_file(path) -> PatternSet:
    with open(path, encoding="utf-8") as handle:
        return parse_patterns(handle)


@dataclass
class ExtractedItem:
    """One categorized result container and its text/link metadata."""

    item_id: int
    category: Category
    title: str
    text: str
    url: str
    host: str
    container: dom.Element
    excluded: bool
    rule_index: int


def extract_text(node: dom.Node | dom.Document) -> str:
    """Recursive text of a node: script/style skipped, whitespace collapsed."""
    return dom.text_content(node)


def host_matches_suffix(host: str, suffix: str) -> bool:
    """True when host equals the suffix or ends with it at a label boundary."""
    host = host.lower().rstrip(".")
    suffix = suffix.lower().lstrip(".")
    return host == suffix or host.endswith("." + suffix)


def _is_marked(element: dom.Element) -> bool:
    return MARK_ATTR in element.attrs


def _iter_fresh_anchors(root: dom.Node | dom.Document) -> Iterator[dom.Element]:
    """Anchors with non-empty href, in document order, skipping marked subtrees."""
    children = getattr(root, "children", None)
    if not children:
        return
    for child in children:
        if not isinstance(child, dom.Element):
            continue
        if _is_marked(child):
            continue
        if child.tag == "a" and (child.attrs.get("href") or "").strip():
            yield child
        yield from _iter_fresh_anchors(child)


def count_fresh_anchors(doc: dom.Document | str) -> int:
    if isinstance(doc, str):
        doc = dom.parse_html(doc)
    return sum(1 for _ in _iter_fresh_anchors(doc))


def _first_match(container: dom.Element, selector: dom.Selector) -> dom.Element | None:
    if selector.matches(container):
        return container
    return dom.find_first(container, selector)


def _document_order(doc: dom.Document) -> dict[int, int]:
    return {id(element): position for position, element in enumerate(dom.iter_elements(doc))}


def extract(doc: dom.Document | str, patterns: PatternSet) -> list[ExtractedItem]:
    """Extract categorized items from the document, one per matched container."""
    if isinstance(doc, str):
        doc = dom.parse_html(doc)

    containers: dict[int, tuple[dom.Element, int]] = {}
    for anchor in _iter_fresh_anchors(doc):
        node: dom.Node | None = anchor
        while isinstance(node, dom.Element):
            rule_index = _matching_rule(node, patterns)
            if rule_index is not None:
                if id(node) not in containers:
                    containers[id(node)] = (node, rule_index)
                break
            node = node.parent

    order = _document_order(doc)
    ordered = sorted(containers.values(), key=lambda pair: order[id(pair[0])])

    items: list[ExtractedItem] = []
    for item_id, (container, rule_index) in enumerate(ordered):
        rule = patterns.rules[rule_index]
        _, title_selector, link_selector = patterns._compiled[rule_index]
        link = _resolve_link(container, link_selector)
        url = (link.attrs.get("href") or "").strip() if link is not None else ""
        host = (urlparse(url).hostname or "").lower()
        if title_selector is not None:
            title_node = _first_match(container, title_selector)
            title = extract_text(title_node) if title_node is not None else ""
        else:
            title = extract_text(link) if link is not None else ""
        items.append(
            ExtractedItem(
                item_id=item_id,
                category=rule.category,
                title=title,
                text=extract_text(container),
                url=url,
                host=host,
                container=container,
                excluded=any(host_matches_suffix(host, s) for s in patterns.exclusion_hosts)
                if host
                else False,
                rule_index=rule_index,
            )
        )
    return items


def _matching_rule(element: dom.Element, patterns: PatternSet) -> int | None:
    for index, (container_selector, _, _) in enumerate(patterns._compiled):
        if container_selector.matches(element):
            return index
    return None


def _resolve_link(container: dom.Element, link_selector: dom.Selector | None) -> dom.Element | None:
    if link_selector is not None:
        return _first_match(container, link_selector)
    if container.tag == "a" and (container.attrs.get("href") or "").strip():
        return container
    for element in dom.iter_elements(container):
        if element.tag == "a" and (element.attrs.get("href") or "").strip():
            return element
    return None


HEALTH_OK = "Ok"
HEALTH_DEGRADED = "Degraded"


@dataclass(frozen=True)
class RuleHealth:
    category: Category
    container_selector: str
    matches: int


@dataclass(frozen=True)
class HealthReport:
    """Per-rule match counts; Degraded when anchors exist but nothing matched."""

    status: str
    anchor_count: int
    rules: tuple[RuleHealth, ...]

    @property
    def matched_total(self) -> int:
        return sum(rule.matches for rule in self.rules)

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "anchor_count": self.anchor_count,
            "rules": [
                {
                    "category": rule.category.value,
                    "container_selector": rule.container_selector,
                    "matches": rule.matches,
                }
                for rule in self.rules
            ],
        }


def pattern_health(
    items: list[ExtractedItem], patterns: PatternSet, anchor_count: int
) -> HealthReport:
    """Report per-rule item counts; a link-bearing page with zero matches is Degraded."""
    per_rule = [0] * len(patterns.rules)
    for item in items:
        per_rule[item.rule_index] += 1
    status = HEALTH_DEGRADED if anchor_count >= 1 and not items else HEALTH_OK
    return HealthReport(
        status=status,
        anchor_count=anchor_count,
        rules=tuple(
            RuleHealth(rule.category, rule.container_selector, count)
            for rule, count in zip(patterns.rules, per_rule)
        ),
    )
