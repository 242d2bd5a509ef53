"""Acceptance criteria, one test per criterion.

A summary hook in conftest.py prints one PASS/FAIL line per criterion at
the end of the run. Everything here runs without the browser UI.
"""

import itertools
import json
import random
import subprocess
import sys
import time

import pytest
from fastapi.testclient import TestClient

from persearch.index import MatchResult, ingest_directory
from persearch.miner import BY_DATE, BY_MINUTES, Sequence, SequenceItem, mine
from persearch.profile_store import ProfileStore, SearchEvent, StoreSnapshot
from persearch.ranker import (
    WeightContext,
    get_weight_minutes,
    get_weight_time,
    link_scores,
    personalized_order,
)
from persearch.service import create_app
from persearch.textstat import DEFAULT_STOPWORDS, text_statistics


def seq_of(letters, session_id=1, clicked_at=None, dwell=0):
    stamp = (lambda i: i * 60) if clicked_at is None else (lambda i: clicked_at)
    items = tuple(
        SequenceItem(ch, stamp(i), dwell) for i, ch in enumerate(letters)
    )
    return Sequence(1, session_id, items)


def brute_force_frequent(sequences, min_sup):
    """Enumerate every pattern up to the longest sequence and count the
    sequences containing it (recursive subsequence check)."""

    def is_subseq(pattern, items):
        if not pattern:
            return True
        if not items:
            return False
        if pattern[0] == items[0]:
            return is_subseq(pattern[1:], items[1:])
        return is_subseq(pattern, items[1:])

    doc_lists = [s.doc_ids() for s in sequences]
    alphabet = sorted({d for ids in doc_lists for d in ids})
    longest = max((len(ids) for ids in doc_lists), default=0)
    frequent = {}
    for k in range(1, longest + 1):
        for pattern in itertools.product(alphabet, repeat=k):
            count = sum(1 for ids in doc_lists if is_subseq(pattern, ids))
            if count >= min_sup:
                frequent[pattern] = count
    return frequent


def random_instance(rng):
    alphabet = "abcd"[: rng.randrange(1, 5)]
    sequences = [
        seq_of([rng.choice(alphabet) for _ in range(rng.randrange(1, 6))],
               session_id=i + 1)
        for i in range(rng.randrange(1, 7))
    ]
    min_sup = rng.randrange(1, len(sequences) + 1)
    return sequences, min_sup


def test_criterion_1_gsp_oracle_equivalence():
    started = time.perf_counter()
    fixture = [seq_of("abc"), seq_of("ac", 2), seq_of("bc", 3)]
    assert mine(fixture, 2).support_map() == {
        ("a",): 2, ("b",): 2, ("c",): 3, ("a", "c"): 2, ("b", "c"): 2,
    }

    rng = random.Random(101)
    for _ in range(200):
        sequences, min_sup = random_instance(rng)
        assert mine(sequences, min_sup).support_map() == brute_force_frequent(
            sequences, min_sup
        )
    assert time.perf_counter() - started < 10.0


def test_criterion_2_weight_formulas():
    day = 86400
    ctx = WeightContext(0, 10 * day)
    assert get_weight_time(0, ctx) == pytest.approx(0.3, abs=1e-12)
    assert get_weight_time(10 * day, ctx) == pytest.approx(1.3, abs=1e-12)
    assert get_weight_time(5 * day, ctx) == pytest.approx(0.8, abs=1e-12)
    assert get_weight_minutes(7, 10) == pytest.approx(1.0, abs=1e-12)

    rng = random.Random(102)
    for _ in range(2000):
        low = rng.randrange(0, 10_000)
        high = low + rng.randrange(0, 10_000)
        weight = get_weight_time(rng.uniform(low, high), WeightContext(low, high))
        assert 0.3 - 1e-12 <= weight <= 1.3 + 1e-12
        window = rng.uniform(0, 1000)
        dwell = rng.uniform(0, window)
        weight = get_weight_minutes(dwell, window)
        assert 0.3 - 1e-12 <= weight <= 1.3 + 1e-12


def test_criterion_3_reranking_loop(tmp_path, corpus_dir):
    clock = [1_700_000_000.0]
    store = ProfileStore(tmp_path / "store", clock=lambda: clock[0])
    ingest_directory(store, corpus_dir)
    client = TestClient(create_app(store))

    client.post("/users", json={"username": "fresh", "password": "pw"})
    token = client.post(
        "/sessions", json={"username": "fresh", "password": "pw"}
    ).json()["token"]
    headers = {"Authorization": f"Bearer {token}"}

    first = client.get("/search", params={"q": "card"}, headers=headers).json()
    assert [r["doc_id"] for r in first] == [2, 1, 3]  # base order
    assert all(r["score"] == 0.0 for r in first)

    third = first[2]["doc_id"]
    now = int(clock[0])
    response = client.post(
        "/events",
        json={"query": "card", "doc_id": third,
              "clicked_at": now, "left_at": now + 45},
        headers=headers,
    )
    assert response.status_code == 201

    second = client.get("/search", params={"q": "card"}, headers=headers).json()
    assert second[0]["doc_id"] == third
    assert sorted(r["doc_id"] for r in second) == sorted(r["doc_id"] for r in first)


def test_criterion_4_rank_monotonicity():
    # 500 randomized logs; the appended click for doc d falls within the
    # span of the clicks already recorded for the (user, query), keeping the
    # dwell-normalization window fixed (outside it the property does not
    # hold: rescaling the window can move every other link's score).
    rng = random.Random(103)
    violations = 0
    for _ in range(500):
        docs = list(range(1, rng.randrange(3, 8)))
        matches = [
            MatchResult(doc_id=d, uri=f"d{d}", title=f"D{d}",
                        match_strength=rng.randrange(1, 9))
            for d in docs
        ]
        matches.sort(key=lambda m: (-m.match_strength, m.doc_id))
        events = []
        for i in range(rng.randrange(0, 9)):
            clicked_at = rng.randrange(0, 7200)
            events.append(
                SearchEvent(i + 1, 1, "card", rng.choice(docs), clicked_at,
                            clicked_at + rng.randrange(0, 1800))
            )
        target = rng.choice(docs)
        if events:
            low = min(e.clicked_at for e in events)
            high = max(e.clicked_at for e in events)
            clicked_at = rng.randint(low, high)
        else:
            clicked_at = rng.randrange(0, 7200)
        extra = SearchEvent(len(events) + 1, 1, "card", target, clicked_at,
                            clicked_at + rng.randrange(0, 1800))

        def rank(event_list):
            snapshot = StoreSnapshot(users=(), events=tuple(event_list),
                                     documents=(), keyword_entries=())
            ordered = personalized_order(
                matches, link_scores(1, "card", snapshot)
            )
            return [m.doc_id for m in ordered].index(target)

        if rank(events + [extra]) > rank(events):
            violations += 1
    assert violations == 0


def test_criterion_5_keyword_extraction(tmp_path, corpus_dir):
    store = ProfileStore(tmp_path / "store")
    ingest_directory(store, corpus_dir)
    snapshot = store.snapshot()
    for entry in snapshot.keyword_entries:
        assert len(entry.profile) <= 10
        assert not {token for token, _ in entry.profile} & DEFAULT_STOPWORDS

    # Hand-counted top list for cards.txt (doc 2): card*4, then fun/game/
    # players at 2 (lexicographic), then games/play at 1.
    assert snapshot.keywords_for(2).profile == (
        ("card", 4), ("fun", 2), ("game", 2), ("players", 2),
        ("games", 1), ("play", 1),
    )


def test_criterion_6_text_statistics():
    stats = text_statistics("The cat sat.")
    assert stats.words == 3
    assert stats.sentences == 1
    assert stats.flesch_index == pytest.approx(119.19, abs=1e-9)

    mixed = "Alpha beta.\r\n\r\nGamma\tdelta!\n\x07"
    stats = text_statistics(mixed)
    assert stats.paragraphs == 2
    assert stats.words == 4
    assert stats.sentences == 2
    assert stats.printable_chars == 22
    assert stats.spaces == 1
    assert stats.tabs == 1
    assert stats.carriage_returns == 2
    assert stats.line_feeds == 3
    assert stats.nonprintable_others == 1


def test_criterion_7_replay_determinism(tmp_path, corpus_dir):
    store_dir = tmp_path / "store"
    store = ProfileStore(store_dir)
    ingest_directory(store, corpus_dir)
    store.register_user("alice", "pw1")
    store.append_event(1, "card", 3, 100, 160)
    store.append_event(1, "card", 1, 700, 1000)
    before = store.snapshot()

    events_file = tmp_path / "events.jsonl"
    events_file.write_text(
        '{"event_id":1,"user_id":1,"query":"card","doc_id":3,'
        '"clicked_at":100,"left_at":160}\n',
        encoding="utf-8",
    )
    command = [sys.executable, "-m", "persearch", "replay",
               str(store_dir), str(events_file), "card", "alice"]
    first = subprocess.run(command, capture_output=True)
    second = subprocess.run(command, capture_output=True)
    assert first.returncode == second.returncode == 0
    assert first.stdout == second.stdout
    assert json.loads(first.stdout.splitlines()[0])["doc_id"] == 3

    assert ProfileStore(store_dir).snapshot() == before


def test_criterion_8_weighted_unit_consistency():
    # Weights pinned to 1: all clicks share one timestamp so both the date
    # and the dwell window are zero, and the floor is raised to 1.
    rng = random.Random(104)
    for _ in range(200):
        alphabet = "abcd"[: rng.randrange(1, 5)]
        sequences = [
            seq_of([rng.choice(alphabet) for _ in range(rng.randrange(1, 6))],
                   session_id=i + 1, clicked_at=500,
                   dwell=rng.randrange(0, 600))
            for i in range(rng.randrange(1, 7))
        ]
        min_sup = rng.randrange(1, len(sequences) + 1)
        ctx = WeightContext(500, 500, floor_constant=1.0)
        unit = mine(sequences, min_sup).support_map()
        assert mine(sequences, min_sup, BY_DATE, ctx).support_map() == unit
        assert mine(sequences, min_sup, BY_MINUTES, ctx).support_map() == unit
        assert unit == brute_force_frequent(sequences, min_sup)
