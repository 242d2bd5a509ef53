"""Corpus ingestion and keyword matching.

Documents are reduced to a keyword profile at ingestion time; queries match
against those profiles only, never against full document bodies.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import TYPE_CHECKING, AbstractSet

from .errors import EmptyQueryError
from .textstat import (
    DEFAULT_KEYWORD_COUNT,
    DEFAULT_STOPWORDS,
    KeywordProfile,
    extract_keywords,
    tokenize,
)

if TYPE_CHECKING:
    from .profile_store import ProfileStore, StoreSnapshot


@dataclass(frozen=True)
class DocumentRecord:
    """One corpus document. Bodies are consumed at ingestion and not kept."""

    doc_id: int
    uri: str
    title: str


@dataclass(frozen=True)
class KeywordEntry:
    """The keyword profile of one ingested document."""

    doc_id: int
    profile: tuple[tuple[str, int], ...]

    @staticmethod
    def from_profile(doc_id: int, profile: KeywordProfile) -> "KeywordEntry":
        return KeywordEntry(doc_id=doc_id, profile=tuple(profile))


@dataclass(frozen=True)
class MatchResult:
    doc_id: int
    uri: str
    title: str
    match_strength: int


def normalize_query(query: str, stopwords: AbstractSet[str] = DEFAULT_STOPWORDS) -> str:
    """Canonical form of a query: tokens minus stopwords, space-joined."""
    return " ".join(t for t in tokenize(query) if t not in stopwords)


def ingest_document(
    store: "ProfileStore",
    uri: str,
    title: str,
    body: str,
    k: int = DEFAULT_KEYWORD_COUNT,
    stopwords: AbstractSet[str] = DEFAULT_STOPWORDS,
) -> DocumentRecord:
    """Compute the keyword profile of ``body`` and add the document to the store.

    Raises ConflictError if ``uri`` was already ingested and ValueError if
    ``uri`` is empty.
    """
    profile = extract_keywords(body, stopwords, k)
    return store.add_document(uri, title, profile)


def ingest_directory(
    store: "ProfileStore",
    corpus_dir: str | Path,
    k: int = DEFAULT_KEYWORD_COUNT,
    stopwords: AbstractSet[str] = DEFAULT_STOPWORDS,
) -> list[DocumentRecord]:
    """Ingest every file under ``corpus_dir`` in sorted relative-path order.

    The uri is the relative path, the title the first nonblank line (or the
    uri for files without one). Unreadable or non-UTF-8 files raise OSError /
    UnicodeDecodeError before any record for that file is written.
    """
    root = Path(corpus_dir)
    records = []
    paths = sorted(p for p in root.rglob("*") if p.is_file())
    for path in paths:
        uri = path.relative_to(root).as_posix()
        body = path.read_text(encoding="utf-8")
        title = next((line.strip() for line in body.splitlines() if line.strip()), uri)
        records.append(ingest_document(store, uri, title, body, k, stopwords))
    return records


def match_query(
    snapshot: "StoreSnapshot",
    query: str,
    stopwords: AbstractSet[str] = DEFAULT_STOPWORDS,
) -> list[MatchResult]:
    """Documents whose keyword profile contains any query token, in base order.

    Base order is match strength (sum of the profile frequencies of the
    distinct matching query tokens) descending, doc_id ascending. A query
    with no non-stopword tokens raises EmptyQueryError.
    """
    terms = {t for t in tokenize(query) if t not in stopwords}
    if not terms:
        raise EmptyQueryError(f"query {query!r} has no eligible tokens")

    results = []
    for document in snapshot.documents:
        entry = snapshot.keywords_for(document.doc_id)
        strength = sum(freq for token, freq in entry.profile if token in terms)
        if strength >= 1:
            results.append(
                MatchResult(
                    doc_id=document.doc_id,
                    uri=document.uri,
                    title=document.title,
                    match_strength=strength,
                )
            )
    results.sort(key=lambda m: (-m.match_strength, m.doc_id))
    return results
