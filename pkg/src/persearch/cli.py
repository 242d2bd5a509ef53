"""Operator command line: ingest, serve, mine, replay, stats.

Exit codes: 0 success, 1 runtime failure, 2 usage error (argparse default).
Every command is deterministic for identical inputs and flags; replay never
touches the network.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional

from .errors import StoreError
from .index import ingest_directory, match_query, normalize_query
from .miner import (
    DEFAULT_SESSION_GAP_SECONDS,
    build_sequences,
    mine,
    report_lines,
    resolve_min_sup,
)
from .profile_store import ProfileStore, SearchEvent, StoreSnapshot
from .ranker import DEFAULT_FLOOR, link_scores, personalized_order
from .service import ALGORITHMS, create_app
from .textstat import (
    DEFAULT_KEYWORD_COUNT,
    DEFAULT_STOPWORDS,
    load_stopwords,
    text_statistics,
)


def _fail(message: str) -> int:
    print(f"persearch: error: {message}", file=sys.stderr)
    return 1


def _open_store(store_dir: str) -> ProfileStore:
    path = Path(store_dir)
    if not path.is_dir():
        raise FileNotFoundError(f"store directory {store_dir!r} does not exist")
    return ProfileStore(path)


def _result_line(match, score: float) -> str:
    return json.dumps(
        {
            "doc_id": match.doc_id,
            "uri": match.uri,
            "title": match.title,
            "score": score,
            "base_strength": match.match_strength,
        },
        ensure_ascii=False,
        separators=(",", ":"),
    )


def cmd_ingest(args: argparse.Namespace) -> int:
    corpus_dir = Path(args.corpus_dir)
    if not corpus_dir.is_dir():
        return _fail(f"corpus directory {args.corpus_dir!r} does not exist")
    stopwords = DEFAULT_STOPWORDS
    if args.stopwords:
        stopwords = load_stopwords(args.stopwords)
    store = ProfileStore(args.store_dir)
    records = ingest_directory(store, corpus_dir, args.keywords, stopwords)
    if not records:
        print(f"warning: no files found in {args.corpus_dir}", file=sys.stderr)
    print(f"ingested {len(records)} documents into {args.store_dir}")
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    import signal

    import uvicorn

    store = _open_store(args.store_dir)
    app = create_app(
        store,
        floor_constant=args.floor,
        session_gap_seconds=args.session_gap_min * 60,
        static_dir=args.static,
    )
    # uvicorn re-raises a captured SIGTERM once its graceful shutdown is
    # done; turn that into a clean exit (appends are flushed per line).
    signal.signal(signal.SIGTERM, lambda signum, frame: sys.exit(0))
    try:
        uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    except KeyboardInterrupt:
        pass
    return 0


def cmd_mine(args: argparse.Namespace) -> int:
    store = _open_store(args.store_dir)
    snapshot = store.snapshot()
    events = snapshot.events
    if args.user is not None:
        profile = snapshot.user_by_username(args.user)
        if profile is None:
            return _fail(f"unknown user {args.user!r}")
        events = tuple(e for e in events if e.user_id == profile.user_id)
    sequences = build_sequences(events, args.session_gap_min * 60)
    if sequences:
        threshold = resolve_min_sup(args.min_sup, len(sequences))
        frequent = mine(sequences, threshold, ALGORITHMS[args.algo])
        for line in report_lines(frequent):
            print(line)
    return 0


def _load_events_file(path: Path) -> tuple[SearchEvent, ...]:
    events = []
    with path.open("r", encoding="utf-8") as handle:
        for line in handle:
            if not line.strip():
                continue
            record = json.loads(line)
            events.append(
                SearchEvent(
                    event_id=record["event_id"],
                    user_id=record["user_id"],
                    query=record["query"],
                    doc_id=record["doc_id"],
                    clicked_at=record["clicked_at"],
                    left_at=record["left_at"],
                )
            )
    return tuple(events)


def cmd_replay(args: argparse.Namespace) -> int:
    store = _open_store(args.store_dir)
    events_path = Path(args.events_file)
    if not events_path.is_file():
        return _fail(f"events file {args.events_file!r} does not exist")
    base = store.snapshot()
    user = base.user_by_username(args.user)
    if user is None:
        return _fail(f"unknown user {args.user!r}")
    replayed = StoreSnapshot(
        users=base.users,
        events=_load_events_file(events_path),
        documents=base.documents,
        keyword_entries=base.keyword_entries,
    )
    matches = match_query(replayed, args.query)
    query = normalize_query(args.query)
    scores = link_scores(user.user_id, query, replayed)
    score_of = {s.doc_id: s.score for s in scores}
    for match in personalized_order(matches, scores):
        print(_result_line(match, score_of.get(match.doc_id, 0.0)))
    return 0


def cmd_stats(args: argparse.Namespace) -> int:
    path = Path(args.file)
    if not path.is_file():
        return _fail(f"file {args.file!r} does not exist")
    stats = text_statistics(path.read_text(encoding="utf-8"))

    def ratio(value: Optional[float]) -> str:
        return "undefined" if value is None else f"{value:.3f}"

    print(f"paragraphs: {stats.paragraphs}")
    print(f"words: {stats.words}")
    print(f"sentences: {stats.sentences}")
    print(f"printable characters (including spaces): {stats.printable_chars}")
    print(f"spaces: {stats.spaces}")
    print(f"tabs: {stats.tabs}")
    print(f"carriage returns: {stats.carriage_returns}")
    print(f"line feeds: {stats.line_feeds}")
    print(f"other non-printable characters: {stats.nonprintable_others}")
    print(f"words per sentence: {ratio(stats.words_per_sentence)}")
    print(f"syllables per word (approximate): {ratio(stats.syllables_per_word)}")
    print(f"flesch index: {ratio(stats.flesch_index)}")
    print("word frequencies:")
    for token, count in stats.word_frequencies:
        print(f"  {token} {count}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="persearch",
        description="Personalized local search engine and session pattern miner.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_ingest = sub.add_parser("ingest", help="index a directory of text files")
    p_ingest.add_argument("corpus_dir")
    p_ingest.add_argument("store_dir")
    p_ingest.add_argument("--keywords", type=int, default=DEFAULT_KEYWORD_COUNT,
                          help="keywords kept per document (default 10)")
    p_ingest.add_argument("--stopwords", default=None,
                          help="stopword file: one token per line, # comments")
    p_ingest.set_defaults(func=cmd_ingest)

    p_serve = sub.add_parser("serve", help="run the HTTP service")
    p_serve.add_argument("store_dir")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8000)
    p_serve.add_argument("--floor", type=float, default=DEFAULT_FLOOR,
                         help="weight floor constant (default 0.3)")
    p_serve.add_argument("--session-gap-min", type=int,
                         default=DEFAULT_SESSION_GAP_SECONDS // 60,
                         help="session gap in minutes (default 30)")
    p_serve.add_argument("--static", default=None,
                         help="directory of UI assets to serve at /")
    p_serve.set_defaults(func=cmd_serve)

    p_mine = sub.add_parser("mine", help="mine frequent click patterns")
    p_mine.add_argument("store_dir")
    p_mine.add_argument("--algo", choices=sorted(ALGORITHMS), required=True)
    p_mine.add_argument("--min-sup", required=True,
                        help="absolute support, or a percentage like 50%%")
    p_mine.add_argument("--user", default=None,
                        help="mine one user's sessions (default: all users)")
    p_mine.add_argument("--session-gap-min", type=int,
                        default=DEFAULT_SESSION_GAP_SECONDS // 60)
    p_mine.set_defaults(func=cmd_mine)

    p_replay = sub.add_parser("replay", help="rank a query against a replayed event log")
    p_replay.add_argument("store_dir")
    p_replay.add_argument("events_file")
    p_replay.add_argument("query")
    p_replay.add_argument("user")
    p_replay.set_defaults(func=cmd_replay)

    p_stats = sub.add_parser("stats", help="print text statistics for a file")
    p_stats.add_argument("file")
    p_stats.set_defaults(func=cmd_stats)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (StoreError, OSError, ValueError, json.JSONDecodeError) as exc:
        return _fail(str(exc))


if __name__ == "__main__":
    sys.exit(main())
