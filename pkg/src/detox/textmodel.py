"""Multinomial Naive Bayes headline classifier and TF keyword tagging.

Training uses Laplace-style additive smoothing over a bag-of-words model:
prior(c) = docs_in_c / total_docs and
p(t|c) = (count(t,c) + alpha) / (tokens_in_c + alpha * vocab_size).
Models are immutable after training and persist as a versioned JSON document.
"""

from __future__ import annotations

import csv
import json
import math
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from typing import Iterable

from .lexicon import tokenize

CATEGORY_COLUMN = "headline_category"
TEXT_COLUMN = "headline_text"
DEFAULT_CLASS_CAP = 50

MODEL_MAGIC = "detox-classifier"
MODEL_VERSION = 1


class IngestError(ValueError):
    """Raised when the training CSV is unusable."""


class ModelError(ValueError):
    """Raised for unreadable, corrupt or wrong-version model files."""


@dataclass(frozen=True)
class TrainingCorpus:
    """(category, text) rows surviving the class cap, plus the drop count."""

    rows: tuple[tuple[str, str], ...]
    class_cap: int
    dropped: int = 0

    @property
    def classes(self) -> tuple[str, ...]:
        return tuple(sorted({category for category, _ in self.rows}))


def ingest_csv(stream: Iterable[str], class_cap: int = DEFAULT_CLASS_CAP) -> TrainingCorpus:
    """Read headline rows, keeping only the `class_cap` most frequent categories.

    Frequency ties break by lexicographic category name. Extra columns are
    ignored; a missing required column or zero usable rows is an error.
    """
    if class_cap < 1:
        raise IngestError(f"class_cap must be >= 1, got {class_cap}")
    reader = csv.DictReader(stream)
    fields = reader.fieldnames or []
    for column in (CATEGORY_COLUMN, TEXT_COLUMN):
        if column not in fields:
            raise IngestError(f"CSV is missing required column {column!r}")

    rows: list[tuple[str, str]] = []
    for record in reader:
        category = (record.get(CATEGORY_COLUMN) or "").strip().lower()
        text = (record.get(TEXT_COLUMN) or "").strip()
        if category and text:
            rows.append((category, text))
    if not rows:
        raise IngestError("CSV contains zero usable rows")

    frequency = Counter(category for category, _ in rows)
    ranked = sorted(frequency.items(), key=lambda item: (-item[1], item[0]))
    kept_categories = {category for category, _ in ranked[:class_cap]}
    kept = [row for row in rows if row[0] in kept_categories]
    return TrainingCorpus(rows=tuple(kept), class_cap=class_cap, dropped=len(rows) - len(kept))


@dataclass(frozen=True)
class ClassifierModel:
    """Trained classifier: priors and smoothed token likelihoods per class."""

    classes: tuple[str, ...]
    log_priors: tuple[float, ...]
    vocab: dict[str, int]
    log_likelihoods: tuple[tuple[float, ...], ...]
    class_token_totals: tuple[int, ...]
    alpha: float
    vocab_size: int

    def unseen_log_likelihood(self, class_index: int) -> float:
        """Smoothed log-likelihood of a token absent from the vocabulary."""
        denominator = self.class_token_totals[class_index] + self.alpha * self.vocab_size
        return math.log(self.alpha / denominator)


@dataclass(frozen=True)
class Prediction:
    category: str
    log_posterior: float
    runner_up: str
    margin: float

    def to_dict(self) -> dict:
        return {
            "category": self.category,
            "log_posterior": self.log_posterior,
            "runner_up": self.runner_up,
            "margin": self.margin,
        }


def train(corpus: TrainingCorpus, alpha: float = 1.0) -> ClassifierModel:
    """Train a multinomial model with additive smoothing `alpha`."""
    if alpha <= 0:
        raise ValueError(f"alpha must be > 0, got {alpha}")
    if not corpus.rows:
        raise ValueError("cannot train on an empty corpus")

    classes = corpus.classes
    doc_counts = Counter(category for category, _ in corpus.rows)
    token_counts: dict[str, Counter[str]] = {c: Counter() for c in classes}
    for category, text in corpus.rows:
        token_counts[category].update(tokenize(text))

    vocab = {token: i for i, token in enumerate(sorted(set().union(*token_counts.values())))}
    vocab_size = len(vocab)
    total_docs = len(corpus.rows)

    log_priors = tuple(math.log(doc_counts[c] / total_docs) for c in classes)
    class_token_totals = tuple(sum(token_counts[c].values()) for c in classes)
    log_likelihoods = []
    for c, token_total in zip(classes, class_token_totals):
        denominator = token_total + alpha * vocab_size
        counts = token_counts[c]
        log_likelihoods.append(
            tuple(math.log((counts[token] + alpha) / denominator) for token in vocab)
        )

    return ClassifierModel(
        classes=classes,
        log_priors=log_priors,
        vocab=vocab,
        log_likelihoods=tuple(log_likelihoods),
        class_token_totals=class_token_totals,
        alpha=alpha,
        vocab_size=vocab_size,
    )


def log_posteriors(model: ClassifierModel, text: str) -> dict[str, float]:
    """Unnormalized log-posterior (log prior + token log-likelihoods) per class."""
    tokens = tokenize(text)
    scores: dict[str, float] = {}
    for index, name in enumerate(model.classes):
        total = model.log_priors[index]
        unseen = model.unseen_log_likelihood(index)
        likelihoods = model.log_likelihoods[index]
        for token in tokens:
            position = model.vocab.get(token)
            total += likelihoods[position] if position is not None else unseen
        scores[name] = total
    return scores


def predict(model: ClassifierModel, text: str) -> Prediction:
    """Argmax class for the text; ties break by lexicographic class name."""
    scores = log_posteriors(model, text)
    ordered = sorted(scores.items(), key=lambda item: (-item[1], item[0]))
    best_name, best_score = ordered[0]
    if len(ordered) > 1:
        runner_name, runner_score = ordered[1]
        return Prediction(best_name, best_score, runner_name, best_score - runner_score)
    return Prediction(best_name, best_score, "", 0.0)


@dataclass(frozen=True)
class KeywordTags:
    """Top-k (token, count) pairs, ordered by count desc then token asc."""

    tags: tuple[tuple[str, int], ...]
    k: int

    def to_dict(self) -> dict:
        return {"k": self.k, "tags": [{"token": t, "count": n} for t, n in self.tags]}

    def tokens(self) -> list[str]:
        return [token for token, _ in self.tags]


@lru_cache(maxsize=1)
def default_stopwords() -> frozenset[str]:
    text = resources.files(__package__).joinpath("data/stopwords.txt").read_text("utf-8")
    return frozenset(line.strip() for line in text.splitlines() if line.strip())


def extract_keywords(text: str, stopwords: frozenset[str] | set[str] | None = None, k: int = 5) -> KeywordTags:
    """Term-frequency keywords: drop stopwords and tokens under 3 chars."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if stopwords is None:
        stopwords = default_stopwords()
    counts = Counter(
        token for token in tokenize(text) if len(token) >= 3 and token not in stopwords
    )
    ranked = sorted(counts.items(), key=lambda item: (-item[1], item[0]))
    return KeywordTags(tags=tuple(ranked[:k]), k=k)


def save_model(model: ClassifierModel, path) -> None:
    """Write the model as a versioned JSON document (full float precision)."""
    vocab_tokens = [""] * len(model.vocab)
    for token, index in model.vocab.items():
        vocab_tokens[index] = token
    document = {
        "magic": MODEL_MAGIC,
        "version": MODEL_VERSION,
        "alpha": model.alpha,
        "classes": list(model.classes),
        "log_priors": list(model.log_priors),
        "vocab": vocab_tokens,
        "log_likelihoods": [list(row) for row in model.log_likelihoods],
        "class_token_totals": list(model.class_token_totals),
    }
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(document, handle)


def load_model(path) -> ClassifierModel:
    """Load a model written by save_model; corrupt or foreign files are errors."""
    try:
        with open(path, encoding="utf-8") as handle:
            document = json.load(handle)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise ModelError(f"model file {path} is corrupt: {exc}") from None
    if not isinstance(document, dict) or document.get("magic") != MODEL_MAGIC:
        raise ModelError(f"model file {path} is not a {MODEL_MAGIC} document")
    version = document.get("version")
    if version != MODEL_VERSION:
        raise ModelError(
            f"model file {path} has format version {version!r}; supported: {MODEL_VERSION}"
        )
    try:
        vocab_tokens = document["vocab"]
        model = ClassifierModel(
            classes=tuple(document["classes"]),
            log_priors=tuple(document["log_priors"]),
            vocab={token: i for i, token in enumerate(vocab_tokens)},
            log_likelihoods=tuple(tuple(row) for row in document["log_likelihoods"]),
            class_token_totals=tuple(document["class_token_totals"]),
            alpha=document["alpha"],
            vocab_size=len(vocab_tokens),
        )
    except (KeyError, TypeError) as exc:
        raise ModelError(f"model file {path} is missing fields: {exc}") from None
    if len(model.log_likelihoods) != len(model.classes):
        raise ModelError(f"model file {path} has inconsistent class tables")
    return model
