"""Persistence and authentication.

The store keeps three newline-delimited JSON files under one directory:

    users.jsonl   registered users (salted password digests, never clear text)
    events.jsonl  append-only log of search/click events
    corpus.jsonl  ingested documents with their keyword profiles

Raw events are stored append-only; click counts and weights are derived at
read time so that per-visit dwell is never lost and reloading the files
replays the exact same state. All mutations go through a single lock
(single writer); snapshots are immutable and freely shareable.
"""

from __future__ import annotations

import hashlib
import hmac
import json
import secrets
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Optional

from .errors import AuthError, ConflictError, NotFoundError
from .index import DocumentRecord, KeywordEntry
from .textstat import KeywordProfile

_PBKDF2_ITERATIONS = 100_000
_SCHEME = f"pbkdf2_sha256${_PBKDF2_ITERATIONS}"

DEFAULT_TOKEN_TTL_SECONDS = 24 * 60 * 60


@dataclass(frozen=True)
class UserProfile:
    user_id: int
    username: str
    digest: str
    salt: str
    scheme: str
    address: str = ""
    occupation: str = ""
    qualification: str = ""
    interests: tuple[str, ...] = ()


@dataclass(frozen=True)
class SearchEvent:
    """One recorded interaction.

    ``doc_id`` is None for bare search records (a query was issued but no
    link clicked); those rows only feed the searches-per-key count and are
    ignored by the ranker and the miner.
    """

    event_id: int
    user_id: int
    query: str
    doc_id: Optional[int]
    clicked_at: int
    left_at: int

    @property
    def dwell_seconds(self) -> int:
        return self.left_at - self.clicked_at


@dataclass(frozen=True)
class StoreSnapshot:
    """Immutable point-in-time view of the whole store."""

    users: tuple[UserProfile, ...]
    events: tuple[SearchEvent, ...]
    documents: tuple[DocumentRecord, ...]
    keyword_entries: tuple[KeywordEntry, ...]
    _keywords_by_doc: dict[int, KeywordEntry] = field(
        init=False, repr=False, compare=False, default_factory=dict
    )

    def __post_init__(self):
        self._keywords_by_doc.update({e.doc_id: e for e in self.keyword_entries})

    def keywords_for(self, doc_id: int) -> KeywordEntry:
        return self._keywords_by_doc[doc_id]

    def document(self, doc_id: int) -> Optional[DocumentRecord]:
        for document in self.documents:
            if document.doc_id == doc_id:
                return document
        return None

    def user_by_username(self, username: str) -> Optional[UserProfile]:
        for user in self.users:
            if user.username == username:
                return user
        return None


def _hash_password(password: str, salt: str, iterations: int) -> str:
    return hashlib.pbkdf2_hmac(
        "sha256", password.encode("utf-8"), bytes.fromhex(salt), iterations
    ).hex()


def _verify_password(password: str, user: UserProfile) -> bool:
    kind, _, iterations = user.scheme.partition("$")
    if kind != "pbkdf2_sha256":
        return False
    candidate = _hash_password(password, user.salt, int(iterations))
    return hmac.compare_digest(candidate, user.digest)


def serialize_user(user: UserProfile) -> str:
    return json.dumps(
        {
            "user_id": user.user_id,
            "username": user.username,
            "digest": user.digest,
            "salt": user.salt,
            "scheme": user.scheme,
            "address": user.address,
            "occupation": user.occupation,
            "qualification": user.qualification,
            "interests": list(user.interests),
        },
        ensure_ascii=False,
        separators=(",", ":"),
    )


def serialize_event(event: SearchEvent) -> str:
    return json.dumps(
        {
            "event_id": event.event_id,
            "user_id": event.user_id,
            "query": event.query,
            "doc_id": event.doc_id,
            "clicked_at": event.clicked_at,
            "left_at": event.left_at,
        },
        ensure_ascii=False,
        separators=(",", ":"),
    )


def serialize_document(document: DocumentRecord, entry: KeywordEntry) -> str:
    return json.dumps(
        {
            "doc_id": document.doc_id,
            "uri": document.uri,
            "title": document.title,
            "keywords": [[token, freq] for token, freq in entry.profile],
        },
        ensure_ascii=False,
        separators=(",", ":"),
    )


class ProfileStore:
    """Single-writer store over a directory of jsonl files.

    ``clock`` is injectable so token expiry is testable.
    """

    def __init__(
        self,
        store_dir: str | Path,
        token_ttl_seconds: int = DEFAULT_TOKEN_TTL_SECONDS,
        clock: Callable[[], float] = time.time,
    ):
        self.store_dir = Path(store_dir)
        self.store_dir.mkdir(parents=True, exist_ok=True)
        self.token_ttl_seconds = token_ttl_seconds
        self.clock = clock
        self._lock = threading.Lock()
        self._users: list[UserProfile] = []
        self._events: list[SearchEvent] = []
        self._documents: list[DocumentRecord] = []
        self._keyword_entries: list[KeywordEntry] = []
        self._tokens: dict[str, tuple[int, float]] = {}
        self._load()

    @property
    def users_path(self) -> Path:
        return self.store_dir / "users.jsonl"

    @property
    def events_path(self) -> Path:
        return self.store_dir / "events.jsonl"

    @property
    def corpus_path(self) -> Path:
        return self.store_dir / "corpus.jsonl"

    def _load(self) -> None:
        for record in self._read_jsonl(self.users_path):
            self._users.append(
                UserProfile(
                    user_id=record["user_id"],
                    username=record["username"],
                    digest=record["digest"],
                    salt=record["salt"],
                    scheme=record["scheme"],
                    address=record["address"],
                    occupation=record["occupation"],
                    qualification=record["qualification"],
                    interests=tuple(record["interests"]),
                )
            )
        for record in self._read_jsonl(self.corpus_path):
            self._documents.append(
                DocumentRecord(
                    doc_id=record["doc_id"], uri=record["uri"], title=record["title"]
                )
            )
            self._keyword_entries.append(
                KeywordEntry(
                    doc_id=record["doc_id"],
                    profile=tuple((token, freq) for token, freq in record["keywords"]),
                )
            )
        for record in self._read_jsonl(self.events_path):
            self._events.append(
                SearchEvent(
                    event_id=record["event_id"],
                    user_id=record["user_id"],
                    query=record["query"],
                    doc_id=record["doc_id"],
                    clicked_at=record["clicked_at"],
                    left_at=record["left_at"],
                )
            )

    @staticmethod
    def _read_jsonl(path: Path) -> Iterable[dict]:
        if not path.exists():
            return []
        with path.open("r", encoding="utf-8") as handle:
            return [json.loads(line) for line in handle if line.strip()]

    @staticmethod
    def _append_line(path: Path, line: str) -> None:
        # One write call per line keeps appends atomic at the line level.
        with path.open("a", encoding="utf-8") as handle:
            handle.write(line + "\n")
            handle.flush()

    # -- users -------------------------------------------------------------

    def register_user(
        self,
        username: str,
        password: str,
        address: str = "",
        occupation: str = "",
        qualification: str = "",
        interests: Iterable[str] = (),
    ) -> int:
        if not username:
            raise ValueError("username must be nonempty")
        if not password:
            raise ValueError("password must be nonempty")
        with self._lock:
            if any(u.username == username for u in self._users):
                raise ConflictError(f"username {username!r} already registered")
            salt = secrets.token_hex(16)
            user = UserProfile(
                user_id=len(self._users) + 1,
                username=username,
                digest=_hash_password(password, salt, _PBKDF2_ITERATIONS),
                salt=salt,
                scheme=_SCHEME,
                address=address,
                occupation=occupation,
                qualification=qualification,
                interests=tuple(interests),
            )
            self._users.append(user)
            self._append_line(self.users_path, serialize_user(user))
            return user.user_id

    def authenticate(self, username: str, password: str) -> str:
        """Return a fresh session token, or raise a uniform AuthError.

        The failure is indistinguishable between unknown-user and
        wrong-password; a dummy digest is computed for unknown users so the
        two paths do comparable work.
        """
        with self._lock:
            user = next((u for u in self._users if u.username == username), None)
        if user is None:
            _hash_password(password, "00" * 16, _PBKDF2_ITERATIONS)
            raise AuthError("invalid credentials")
        if not _verify_password(password, user):
            raise AuthError("invalid credentials")
        token = secrets.token_urlsafe(32)
        with self._lock:
            self._tokens[token] = (user.user_id, self.clock() + self.token_ttl_seconds)
        return token

    def resolve_token(self, token: str) -> int:
        """Map a session token to its user_id; expired tokens are purged."""
        with self._lock:
            entry = self._tokens.get(token)
            if entry is None:
                raise AuthError("invalid or expired token")
            user_id, expires_at = entry
            if self.clock() >= expires_at:
                del self._tokens[token]
                raise AuthError("invalid or expired token")
            return user_id

    # -- corpus ------------------------------------------------------------

    def add_document(self, uri: str, title: str, profile: KeywordProfile) -> DocumentRecord:
        if not uri:
            raise ValueError("uri must be nonempty")
        with self._lock:
            if any(d.uri == uri for d in self._documents):
                raise ConflictError(f"uri {uri!r} already ingested")
            document = DocumentRecord(doc_id=len(self._documents) + 1, uri=uri, title=title)
            entry = KeywordEntry.from_profile(document.doc_id, profile)
            self._documents.append(document)
            self._keyword_entries.append(entry)
            self._append_line(self.corpus_path, serialize_document(document, entry))
            return document

    # -- events ------------------------------------------------------------

    def append_event(
        self,
        user_id: int,
        query: str,
        doc_id: Optional[int],
        clicked_at: int,
        left_at: int,
    ) -> int:
        for name, value in (("clicked_at", clicked_at), ("left_at", left_at)):
            if not isinstance(value, int) or isinstance(value, bool):
                raise ValueError(f"{name} must be an integer timestamp")
        if left_at < clicked_at:
            raise ValueError("left_at must not precede clicked_at")
        with self._lock:
            if not any(u.user_id == user_id for u in self._users):
                raise NotFoundError(f"unknown user_id {user_id}")
            if doc_id is not None and not any(d.doc_id == doc_id for d in self._documents):
                raise NotFoundError(f"unknown doc_id {doc_id}")
            event = SearchEvent(
                event_id=len(self._events) + 1,
                user_id=user_id,
                query=query,
                doc_id=doc_id,
                clicked_at=clicked_at,
                left_at=left_at,
            )
            self._events.append(event)
            self._append_line(self.events_path, serialize_event(event))
            return event.event_id

    # -- snapshots ---------------------------------------------------------

    def snapshot(self) -> StoreSnapshot:
        with self._lock:
            return StoreSnapshot(
                users=tuple(self._users),
                events=tuple(self._events),
                documents=tuple(self._documents),
                keyword_entries=tuple(self._keyword_entries),
            )
