"""Independent oracles used to check engine results.

Deliberately naive implementations that share no code path with the
engine: per-token dictionary sums, sliding-window literal matching, and
count-at-predict-time naive Bayes posteriors.
"""

from __future__ import annotations

import math
from collections import Counter

from detox.lexicon import tokenize


def dict_sum(tokens: list[str], table: dict[str, int]) -> int:
    """Naive per-token sum: each token looked up alone, unknowns are 0."""
    return sum(table.get(token, 0) for token in tokens)


def _wordish(char: str) -> bool:
    return char.isalnum() or char == "_"


def window_spans(text: str, term: str) -> list[tuple[int, int]]:
    """Case-insensitive literal occurrences with word boundaries, by scanning
    every position."""
    hay = text.lower()
    needle = term.lower()
    spans: list[tuple[int, int]] = []
    if not needle:
        return spans
    for start in range(0, len(hay) - len(needle) + 1):
        if hay[start : start + len(needle)] != needle:
            continue
        before = hay[start - 1] if start > 0 else ""
        after = hay[start + len(needle)] if start + len(needle) < len(hay) else ""
        if (not before or not _wordish(before)) and (not after or not _wordish(after)):
            spans.append((start, start + len(needle)))
    return spans


def resolve_nonoverlapping(candidates: list[tuple[int, int, int]]) -> list[tuple[int, int, int]]:
    """Sweep (start, term_index, end) candidates: leftmost first, then term order."""
    picked: list[tuple[int, int, int]] = []
    last_end = 0
    for start, index, end in sorted(candidates):
        if start >= last_end:
            picked.append((start, index, end))
            last_end = end
    return picked


def nb_log_posteriors(
    rows: list[tuple[str, str]], alpha: float, text: str
) -> dict[str, float]:
    """Brute-force multinomial NB: counts recomputed from rows at query time."""
    doc_counts = Counter(category for category, _ in rows)
    classes = sorted(doc_counts)
    token_counts: dict[str, Counter[str]] = {c: Counter() for c in classes}
    vocab: set[str] = set()
    for category, row_text in rows:
        tokens = tokenize(row_text)
        vocab.update(tokens)
        token_counts[category].update(tokens)
    vocab_size = len(vocab)

    posteriors: dict[str, float] = {}
    for category in classes:
        log_posterior = math.log(doc_counts[category] / len(rows))
        class_total = sum(token_counts[category].values())
        denominator = class_total + alpha * vocab_size
        for token in tokenize(text):
            count = token_counts[category][token] if token in vocab else 0
            log_posterior += math.log((count + alpha) / denominator)
        posteriors[category] = log_posterior
    return posteriors


def nb_argmax(posteriors: dict[str, float]) -> str:
    """Best class with lexicographic tie-break."""
    return min(posteriors, key=lambda name: (-posteriors[name], name))
