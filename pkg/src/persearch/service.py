"""Authenticated HTTP API over the store, index, ranker and miner.

Each request computes from one immutable store snapshot; writes go through
the store's single writer. Request and response bodies are JSON; errors are
``{"error": <code>, "message": <text>}``. Timestamps are integer UTC
seconds and auth uses ``Authorization: Bearer <token>``.
"""

from __future__ import annotations

from pathlib import Path
from typing import Optional

from fastapi import Depends, FastAPI, Query, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse, PlainTextResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .errors import AuthError, ConflictError, EmptyQueryError, NotFoundError
from .index import match_query, normalize_query
from .miner import (
    BY_DATE,
    BY_MINUTES,
    DEFAULT_SESSION_GAP_SECONDS,
    UNIT,
    build_sequences,
    mine,
    report_lines,
    resolve_min_sup,
)
from .profile_store import ProfileStore
from .ranker import DEFAULT_FLOOR, link_scores, personalized_order

ALGORITHMS = {"gsp": UNIT, "wtgsp": BY_DATE, "wmgsp": BY_MINUTES}


class ApiError(Exception):
    def __init__(self, status_code: int, code: str, message: str):
        super().__init__(message)
        self.status_code = status_code
        self.code = code
        self.message = message


class RegisterRequest(BaseModel):
    username: str
    password: str
    address: str = ""
    occupation: str = ""
    qualification: str = ""
    interests: list[str] = []


class LoginRequest(BaseModel):
    username: str
    password: str


class EventRequest(BaseModel):
    query: str
    doc_id: int
    clicked_at: int
    left_at: int


def create_app(
    store: ProfileStore,
    floor_constant: float = DEFAULT_FLOOR,
    session_gap_seconds: int = DEFAULT_SESSION_GAP_SECONDS,
    static_dir: Optional[str | Path] = None,
) -> FastAPI:
    app = FastAPI(title="persearch", docs_url=None, redoc_url=None)

    @app.exception_handler(ApiError)
    async def handle_api_error(request: Request, exc: ApiError):
        return JSONResponse(
            status_code=exc.status_code,
            content={"error": exc.code, "message": exc.message},
        )

    @app.exception_handler(RequestValidationError)
    async def handle_validation_error(request: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=400,
            content={"error": "invalid_argument", "message": str(exc.errors()[:1])},
        )

    def authenticated_user(request: Request) -> int:
        header = request.headers.get("authorization", "")
        scheme, _, token = header.partition(" ")
        if scheme.lower() != "bearer" or not token:
            raise ApiError(401, "auth_failure", "missing or invalid bearer token")
        try:
            return store.resolve_token(token.strip())
        except AuthError as exc:
            raise ApiError(401, "auth_failure", str(exc))

    @app.post("/users", status_code=201)
    def register(body: RegisterRequest):
        try:
            user_id = store.register_user(
                username=body.username,
                password=body.password,
                address=body.address,
                occupation=body.occupation,
                qualification=body.qualification,
                interests=body.interests,
            )
        except ConflictError as exc:
            raise ApiError(409, "conflict", str(exc))
        except ValueError as exc:
            raise ApiError(400, "invalid_argument", str(exc))
        return {"user_id": user_id}

    @app.post("/sessions")
    def login(body: LoginRequest):
        try:
            token = store.authenticate(body.username, body.password)
        except AuthError as exc:
            raise ApiError(401, "auth_failure", str(exc))
        return {"token": token}

    @app.get("/search")
    def search(q: str = "", user_id: int = Depends(authenticated_user)):
        snapshot = store.snapshot()
        try:
            matches = match_query(snapshot, q)
        except EmptyQueryError as exc:
            raise ApiError(400, "empty_query", str(exc))
        query = normalize_query(q)
        scores = link_scores(user_id, query, snapshot, floor_constant)
        ordered = personalized_order(matches, scores)
        score_of = {s.doc_id: s.score for s in scores}

        # Bare search record: lets searches-per-key be derived from the log.
        now = int(store.clock())
        store.append_event(user_id, query, None, now, now)

        return [
            {
                "doc_id": m.doc_id,
                "uri": m.uri,
                "title": m.title,
                "score": score_of.get(m.doc_id, 0.0),
                "base_strength": m.match_strength,
            }
            for m in ordered
        ]

    @app.post("/events", status_code=201)
    def record_event(body: EventRequest, user_id: int = Depends(authenticated_user)):
        query = normalize_query(body.query)
        if not query:
            raise ApiError(400, "invalid_argument", "query has no eligible tokens")
        try:
            event_id = store.append_event(
                user_id=user_id,
                query=query,
                doc_id=body.doc_id,
                clicked_at=body.clicked_at,
                left_at=body.left_at,
            )
        except NotFoundError as exc:
            raise ApiError(404, "not_found", str(exc))
        except ValueError as exc:
            raise ApiError(400, "invalid_argument", str(exc))
        return {"event_id": event_id}

    @app.get("/patterns")
    def patterns(
        algo: str,
        min_sup: str = Query(...),
        user: Optional[str] = None,
        user_id: int = Depends(authenticated_user),
    ):
        weighting = ALGORITHMS.get(algo)
        if weighting is None:
            raise ApiError(400, "invalid_argument", f"unknown algo {algo!r}")
        snapshot = store.snapshot()
        if user is not None:
            profile = snapshot.user_by_username(user)
            if profile is None:
                raise ApiError(404, "not_found", f"unknown user {user!r}")
            mined_for = profile.user_id
        else:
            mined_for = user_id
        events = [e for e in snapshot.events if e.user_id == mined_for]
        sequences = build_sequences(events, session_gap_seconds)
        body = ""
        if sequences:
            try:
                threshold = resolve_min_sup(min_sup, len(sequences))
                frequent = mine(sequences, threshold, weighting)
            except ValueError as exc:
                raise ApiError(400, "invalid_argument", str(exc))
            lines = report_lines(frequent)
            if lines:
                body = "\n".join(lines) + "\n"
        return PlainTextResponse(content=body, media_type="application/x-ndjson")

    if static_dir is not None and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(static_dir), html=True), name="ui")

    return app
