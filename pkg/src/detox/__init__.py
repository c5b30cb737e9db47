"""Detox content-filtering engine.

Library surface: lexicon sentiment scoring, blacklist/profanity matching,
headline classification, search-result extraction, and reversible document
filtering, plus an HTTP service and a batch CLI built on top.
"""

from .lexicon import (
    Bucket,
    Lexicon,
    PolarityOverride,
    SentimentReport,
    bucket_of,
    default_lexicon,
    load_lexicon,
    score,
    tokenize,
)
from .matchlist import CompiledMatcher, MatchHit, MatchTerm, Source, find_all
from .extraction import (
    Category,
    ExtractedItem,
    HealthReport,
    PatternRule,
    PatternSet,
    extract,
    extract_text,
    parse_patterns,
    pattern_health,
)
from .pipeline import (
    Action,
    FilterDecision,
    FilterDeps,
    FilteredDocument,
    Mode,
    Reason,
    ScanReport,
    UserProfile,
    decide,
    filter_document,
    reinstate,
    scan_page,
    update_profile,
)
from .textmodel import (
    ClassifierModel,
    KeywordTags,
    Prediction,
    TrainingCorpus,
    extract_keywords,
    ingest_csv,
    load_model,
    predict,
    save_model,
    train,
)

__version__ = "0.1.0"

__all__ = [
    "Action",
    "Bucket",
    "Category",
    "ClassifierModel",
    "CompiledMatcher",
    "ExtractedItem",
    "FilterDecision",
    "FilterDeps",
    "FilteredDocument",
    "HealthReport",
    "KeywordTags",
    "Lexicon",
    "MatchHit",
    "MatchTerm",
    "Mode",
    "PatternRule",
    "PatternSet",
    "PolarityOverride",
    "Prediction",
    "Reason",
    "ScanReport",
    "SentimentReport",
    "Source",
    "TrainingCorpus",
    "UserProfile",
    "bucket_of",
    "decide",
    "default_lexicon",
    "extract",
    "extract_keywords",
    "extract_text",
    "filter_document",
    "find_all",
    "ingest_csv",
    "load_lexicon",
    "load_model",
    "parse_patterns",
    "pattern_health",
    "predict",
    "reinstate",
    "save_model",
    "scan_page",
    "score",
    "tokenize",
    "train",
    "update_profile",
]
