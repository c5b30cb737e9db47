from __future__ import annotations

import io
import json

import pytest

from detox import dom
from detox.extraction import (
    Category,
    PatternError,
    count_fresh_anchors,
    extract,
    extract_text,
    host_matches_suffix,
    load_patterns_file,
    parse_patterns,
    pattern_health,
)

from .conftest import FIXTURES

MINIMAL_CONFIG = {
    "site_id": "mini",
    "rules": [{"category": "Organic", "container_selector": "div.result"}],
}


# --- parse_patterns ----------------------------------------------------------


def test_minimal_config_one_rule() -> None:
    patterns = parse_patterns(dict(MINIMAL_CONFIG))
    assert len(patterns.rules) == 1
    assert patterns.rules[0].category is Category.ORGANIC


def test_unknown_category_is_error() -> None:
    config = {"rules": [{"category": "Sponsored", "container_selector": "div"}]}
    with pytest.raises(PatternError, match="Sponsored"):
        parse_patterns(config)


def test_bad_selector_names_rule_index() -> None:
    config = {"rules": [
        {"category": "Organic", "container_selector": "div.ok"},
        {"category": "News", "container_selector": "[broken"},
    ]}
    with pytest.raises(PatternError, match="rule 1"):
        parse_patterns(config)


def test_rules_are_required() -> None:
    with pytest.raises(PatternError, match="rules"):
        parse_patterns({"site_id": "empty", "rules": []})


def test_invalid_json_stream_is_error() -> None:
    with pytest.raises(PatternError, match="JSON"):
        parse_patterns(io.StringIO("{nope"))


def test_repo_fixture_has_four_rules_and_wikipedia_exclusion() -> None:
    patterns = load_patterns_file(FIXTURES / "patterns" / "serp.json")
    assert len(patterns.rules) == 4
    assert "wikipedia.org" in patterns.exclusion_hosts
    assert [rule.category for rule in patterns.rules] == [
        Category.ORGANIC,
        Category.FEATURED,
        Category.NEWS,
        Category.VIDEO,
    ]


# --- extract -----------------------------------------------------------------


def test_no_anchors_extracts_nothing(serp_patterns) -> None:
    assert extract("<div class='g'>no links here</div>", serp_patterns) == []


def test_fixture_serp_items(serp_html, serp_patterns) -> None:
    items = extract(serp_html, serp_patterns)
    assert len(items) == 6
    assert [item.item_id for item in items] == list(range(6))
    by_category = {}
    for item in items:
        by_category.setdefault(item.category, []).append(item)
    assert len(by_category[Category.ORGANIC]) == 3
    assert len(by_category[Category.FEATURED]) == 1
    assert len(by_category[Category.NEWS]) == 1
    assert len(by_category[Category.VIDEO]) == 1

    excluded = [item for item in items if item.excluded]
    assert len(excluded) == 1
    assert excluded[0].host == "en.wikipedia.org"


def test_two_anchors_in_one_container_dedup(serp_patterns) -> None:
    html = (
        '<div class="g">'
        '<a href="https://a.example/1">one</a>'
        '<a href="https://a.example/2">two</a>'
        "</div>"
    )
    items = extract(html, serp_patterns)
    assert len(items) == 1
    assert items[0].url == "https://a.example/1"


def test_items_in_document_order(serp_html, serp_patterns) -> None:
    items = extract(serp_html, serp_patterns)
    hosts = [item.host for item in items]
    assert hosts == [
        "civic-portal.example",
        "sports-daily.example",
        "en.wikipedia.org",
        "world-briefs.example",
        "news-wire.example",
        "video-hub.example",
    ]


def test_reparse_same_bytes_same_items(serp_html, serp_patterns) -> None:
    first = extract(serp_html, serp_patterns)
    second = extract(serp_html, serp_patterns)
    assert [(i.item_id, i.category, i.title, i.text, i.url, i.host, i.excluded) for i in first] == [
        (i.item_id, i.category, i.title, i.text, i.url, i.host, i.excluded) for i in second
    ]


def test_container_is_ancestor_or_self_of_an_anchor(serp_html, serp_patterns) -> None:
    for item in extract(serp_html, serp_patterns):
        anchors = [
            element
            for element in [item.container, *dom.iter_elements(item.container)]
            if element.tag == "a" and (element.attrs.get("href") or "").strip()
        ]
        assert anchors


def test_first_rule_in_file_order_assigns_category() -> None:
    config = {
        "rules": [
            {"category": "News", "container_selector": "div.block"},
            {"category": "Organic", "container_selector": "div.block"},
        ]
    }
    patterns = parse_patterns(config)
    items = extract('<div class="block"><a href="https://x.example">x</a></div>', patterns)
    assert items[0].category is Category.NEWS


def test_rule_reorder_changes_categories_not_container_set(serp_html) -> None:
    with open(FIXTURES / "patterns" / "serp.json", encoding="utf-8") as handle:
        config = json.load(handle)
    reordered = dict(config)
    reordered["rules"] = list(reversed(config["rules"]))
    original = extract(serp_html, parse_patterns(config))
    shuffled = extract(serp_html, parse_patterns(reordered))
    assert {item.url for item in original} == {item.url for item in shuffled}


def test_nearest_matching_ancestor_wins(serp_patterns) -> None:
    html = (
        '<div class="news-card"><div class="g">'
        '<a href="https://nested.example/x">x</a>'
        "</div></div>"
    )
    items = extract(html, serp_patterns)
    assert len(items) == 1
    assert items[0].category is Category.ORGANIC


def test_anchor_itself_may_be_the_container() -> None:
    patterns = parse_patterns(
        {"rules": [{"category": "Organic", "container_selector": "a.result"}]}
    )
    items = extract('<a class="result" href="https://self.example/a">self</a>', patterns)
    assert len(items) == 1
    assert items[0].url == "https://self.example/a"


def test_marked_subtrees_are_skipped(serp_patterns) -> None:
    html = (
        '<div data-detox="blur"><div class="g">'
        '<a href="https://x.example/a">hidden</a></div></div>'
        '<div class="g"><a href="https://y.example/b">fresh</a></div>'
    )
    items = extract(html, serp_patterns)
    assert [item.host for item in items] == ["y.example"]
    assert count_fresh_anchors(html) == 1


def test_anchor_without_href_is_ignored(serp_patterns) -> None:
    assert extract('<div class="g"><a name="x">no href</a></div>', serp_patterns) == []
    assert count_fresh_anchors('<a href="">e</a><a href="  ">w</a>') == 0


def test_title_selector_and_fallback(serp_html, serp_patterns) -> None:
    items = extract(serp_html, serp_patterns)
    organic = [item for item in items if item.category is Category.ORGANIC]
    assert organic[0].title == "Local team celebrates championship win"
    featured = [item for item in items if item.category is Category.FEATURED][0]
    # no title_selector on the Featured rule: falls back to the link's text
    assert featured.title == "civic-portal.example"


def test_text_is_whitespace_normalized(serp_patterns) -> None:
    html = '<div class="g"><a href="https://x.example">a\n   b\t c</a></div>'
    assert extract(html, serp_patterns)[0].text == "a b c"


# --- exclusion ---------------------------------------------------------------


@pytest.mark.parametrize(
    ("host", "suffix", "expected"),
    [
        ("en.wikipedia.org", "wikipedia.org", True),
        ("wikipedia.org", "wikipedia.org", True),
        ("notwikipedia.org", "wikipedia.org", False),
        ("wikipedia.org.evil.example", "wikipedia.org", False),
        ("EN.WIKIPEDIA.ORG", "wikipedia.org", True),
    ],
)
def test_host_suffix_label_boundary(host: str, suffix: str, expected: bool) -> None:
    assert host_matches_suffix(host, suffix) is expected


# --- extract_text ------------------------------------------------------------


def test_extract_text_examples() -> None:
    assert extract_text(dom.parse_html("<div>  </div>")) == ""
    assert extract_text(dom.parse_html("<div>a<span>b</span> c</div>")) == "ab c"
    assert extract_text(dom.parse_html("<div>x<script>var y</script>z</div>")) == "xz"


# --- pattern_health ----------------------------------------------------------


def test_health_ok_when_no_anchors(serp_patterns) -> None:
    report = pattern_health([], serp_patterns, anchor_count=0)
    assert report.status == "Ok"


def test_health_degraded_when_anchors_but_no_matches(serp_patterns, drift_html) -> None:
    items = extract(drift_html, serp_patterns)
    anchors = count_fresh_anchors(drift_html)
    assert items == [] and anchors == 3
    report = pattern_health(items, serp_patterns, anchors)
    assert report.status == "Degraded"


def test_health_per_rule_counts(serp_html, serp_patterns) -> None:
    items = extract(serp_html, serp_patterns)
    report = pattern_health(items, serp_patterns, count_fresh_anchors(serp_html))
    counts = {rule.category.value: rule.matches for rule in report.rules}
    assert counts == {"Organic": 3, "Featured": 1, "News": 1, "Video": 1}
    assert report.status == "Ok"
    assert report.anchor_count == 10
    payload = json.dumps(report.to_dict())
    assert '"Degraded"' not in payload
