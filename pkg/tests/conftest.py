from __future__ import annotations

import io
from pathlib import Path

import pytest

from detox.extraction import PatternSet, load_patterns_file
from detox.lexicon import Lexicon, default_lexicon
from detox.pipeline import FilterDeps
from detox.textmodel import ClassifierModel, ingest_csv, train

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

TINY_CSV = """publish_date,headline_category,headline_text
20200101,sports.cricket,team wins the cup after stellar bowling spell
20200102,sports.cricket,captain praises bowling attack in winning run
20200103,sports.cricket,spin bowling decides a tense chase at the cup
20200104,city.mumbai,metro line opens to commuters across the harbour
20200105,city.mumbai,civic body clears road repair plan for monsoon
20200106,city.mumbai,harbour metro trial run begins for commuters
20200107,tech,new handset launch brings faster chips to market
20200108,tech,startup ships faster chips for budget handsets
"""


@pytest.fixture(scope="session")
def lexicon() -> Lexicon:
    return default_lexicon()


@pytest.fixture(scope="session")
def serp_html() -> str:
    return (FIXTURES / "html" / "serp.html").read_text("utf-8")


@pytest.fixture(scope="session")
def drift_html() -> str:
    return (FIXTURES / "html" / "drift.html").read_text("utf-8")


@pytest.fixture(scope="session")
def generic_html() -> str:
    return (FIXTURES / "html" / "generic.html").read_text("utf-8")


@pytest.fixture(scope="session")
def serp_patterns() -> PatternSet:
    return load_patterns_file(FIXTURES / "patterns" / "serp.json")


@pytest.fixture(scope="session")
def tiny_model() -> ClassifierModel:
    return train(ingest_csv(io.StringIO(TINY_CSV), class_cap=50), alpha=1.0)


@pytest.fixture(scope="session")
def deps(tiny_model) -> FilterDeps:
    return FilterDeps.default(model=tiny_model)
