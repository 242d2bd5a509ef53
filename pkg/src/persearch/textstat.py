"""Text analysis: tokenization, document statistics and keyword extraction.

Everything here is a pure function over its inputs, so the module is safe
to call from any number of threads.
"""

from __future__ import annotations

import re
import unicodedata
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import AbstractSet, Optional

# Token = maximal run of alphanumeric characters (unicode-aware, underscore
# excluded), taken from the lowercased text.
_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)

# A sentence terminator is a maximal run of . ! ? followed by whitespace or
# the end of the text.
_SENTENCE_RE = re.compile(r"[.!?]+(?=\s|\Z)")

_VOWEL_GROUP_RE = re.compile(r"[aeiouy]+")

DEFAULT_KEYWORD_COUNT = 10

# Small English stopword list; overridable via load_stopwords().
DEFAULT_STOPWORDS = frozenset({
    "a", "an", "and", "are", "as", "at", "be", "but", "by", "for", "from",
    "had", "has", "have", "he", "her", "his", "if", "in", "is", "it", "its",
    "not", "of", "on", "or", "she", "such", "that", "the", "their", "then",
    "there", "these", "they", "this", "to", "was", "were", "will", "with",
})

# The top-K keyword list of a document: (token, frequency) pairs, frequency
# descending, ties broken by token ascending.
KeywordProfile = list[tuple[str, int]]


@dataclass(frozen=True)
class TextStats:
    """Counters and derived ratios for one piece of text.

    Ratios (``words_per_sentence``, ``syllables_per_word``, ``flesch_index``)
    are ``None`` when their denominator is zero; 0.0 is a legal value for
    all three, so a sentinel number would be ambiguous.
    """

    paragraphs: int
    words: int
    sentences: int
    printable_chars: int
    spaces: int
    tabs: int
    carriage_returns: int
    line_feeds: int
    nonprintable_others: int
    words_per_sentence: Optional[float]
    syllables_per_word: Optional[float]
    flesch_index: Optional[float]
    word_frequencies: tuple[tuple[str, int], ...]


def tokenize(text: str) -> list[str]:
    """Split text into lowercased alphanumeric tokens, order preserved."""
    return _TOKEN_RE.findall(text.lower())


def count_syllables(word: str) -> int:
    """Approximate syllable count of a lowercase word.

    Counts maximal vowel groups (a e i o u y), subtracting one for a final
    silent 'e' (word ends with 'e' but not 'le') when at least one syllable
    remains. Never returns less than 1.
    """
    if not word:
        raise ValueError("cannot count syllables of an empty word")
    groups = len(_VOWEL_GROUP_RE.findall(word))
    if word.endswith("e") and not word.endswith("le") and groups - 1 >= 1:
        groups -= 1
    return max(groups, 1)


def _count_sentences(text: str, words: int) -> int:
    terminators = len(_SENTENCE_RE.findall(text))
    if terminators == 0 and words > 0:
        return 1
    return terminators


def _count_paragraphs(text: str) -> int:
    normalized = text.replace("\r\n", "\n").replace("\r", "\n")
    blocks = re.split(r"\n\s*\n", normalized)
    return sum(1 for block in blocks if _TOKEN_RE.search(block.lower()))


def text_statistics(text: str) -> TextStats:
    """Compute the full set of counters and ratios for ``text``."""
    tokens = tokenize(text)
    words = len(tokens)
    sentences = _count_sentences(text, words)

    spaces = text.count(" ")
    tabs = text.count("\t")
    carriage_returns = text.count("\r")
    line_feeds = text.count("\n")
    nonprintable_others = sum(
        1
        for ch in text
        if ch not in ("\t", "\r", "\n") and unicodedata.category(ch) == "Cc"
    )
    printable = len(text) - tabs - carriage_returns - line_feeds - nonprintable_others

    syllables = sum(count_syllables(token) for token in tokens)

    words_per_sentence = words / sentences if sentences > 0 else None
    syllables_per_word = syllables / words if words > 0 else None
    if words > 0 and sentences > 0:
        flesch = 206.835 - 1.015 * (words / sentences) - 84.6 * (syllables / words)
    else:
        flesch = None

    counts = Counter(tokens)
    frequencies = tuple(sorted(counts.items(), key=lambda kv: (-kv[1], kv[0])))

    return TextStats(
        paragraphs=_count_paragraphs(text),
        words=words,
        sentences=sentences,
        printable_chars=printable,
        spaces=spaces,
        tabs=tabs,
        carriage_returns=carriage_returns,
        line_feeds=line_feeds,
        nonprintable_others=nonprintable_others,
        words_per_sentence=words_per_sentence,
        syllables_per_word=syllables_per_word,
        flesch_index=flesch,
        word_frequencies=frequencies,
    )


def extract_keywords(
    text: str,
    stopwords: AbstractSet[str] = DEFAULT_STOPWORDS,
    k: int = DEFAULT_KEYWORD_COUNT,
) -> KeywordProfile:
    """Top-``k`` non-stopword tokens of ``text`` by frequency.

    Single-character tokens are excluded. Ties are broken by token,
    ascending. A text with no eligible tokens yields an empty list.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    counts = Counter(
        token for token in tokenize(text) if len(token) > 1 and token not in stopwords
    )
    ranked = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    return ranked[:k]


def load_stopwords(path: str | Path) -> frozenset[str]:
    """Load a stopword file: UTF-8, one token per line, '#' lines are comments."""
    words = set()
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        words.add(line.lower())
    return frozenset(words)
