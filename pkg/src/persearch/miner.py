"""Sequential pattern mining over user click sequences.

One level-wise candidate-generation core serves three support definitions:

    unit        classic counting: a sequence contributes 1 to every
                candidate it contains
    by_date     recency weighting: the contribution is the date weight of
                the mean click timestamp of the matched items
    by_minutes  dwell weighting: the contribution is the dwell weight of
                the mean dwell of the matched items over the global window

Items are single doc_ids (click streams), not itemsets. Where a candidate
occurs several times in a sequence, the leftmost (earliest) embedding is
the one weighed; it is deterministic and symmetric in the pattern's items.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Iterable, NamedTuple, Optional, Sequence as Seq

import json

from .profile_store import SearchEvent
from .ranker import DEFAULT_FLOOR, WeightContext, get_weight_minutes, get_weight_time

UNIT = "unit"
BY_DATE = "by_date"
BY_MINUTES = "by_minutes"
WEIGHTINGS = (UNIT, BY_DATE, BY_MINUTES)

DEFAULT_SESSION_GAP_SECONDS = 30 * 60

Item = Hashable


class SequenceItem(NamedTuple):
    doc_id: Item
    clicked_at: int
    dwell_seconds: int


@dataclass(frozen=True)
class Sequence:
    """One user session: clicks ordered by timestamp."""

    user_id: int
    session_id: int
    items: tuple[SequenceItem, ...]

    def doc_ids(self) -> tuple[Item, ...]:
        return tuple(item.doc_id for item in self.items)


@dataclass(frozen=True)
class Pattern:
    items: tuple[Item, ...]
    support: float


@dataclass(frozen=True)
class FrequentSet:
    """Frequent patterns grouped by length, each level sorted by support
    descending then items ascending."""

    min_sup: float
    by_length: dict[int, tuple[Pattern, ...]]

    def support_map(self) -> dict[tuple[Item, ...], float]:
        return {
            p.items: p.support for level in self.by_length.values() for p in level
        }


def build_sequences(
    events: Iterable[SearchEvent],
    session_gap_seconds: int = DEFAULT_SESSION_GAP_SECONDS,
) -> list[Sequence]:
    """Split each user's clicks into sessions at gaps above the threshold.

    Bare search records (doc_id None) are skipped. Events are ordered by
    click time (event id breaking ties); a gap strictly greater than
    ``session_gap_seconds`` starts a new session.
    """
    if session_gap_seconds <= 0:
        raise ValueError("session_gap_seconds must be positive")
    by_user: dict[int, list[SearchEvent]] = {}
    for event in events:
        if event.doc_id is None:
            continue
        by_user.setdefault(event.user_id, []).append(event)

    sequences = []
    for user_id in sorted(by_user):
        clicks = sorted(by_user[user_id], key=lambda e: (e.clicked_at, e.event_id))
        session: list[SequenceItem] = []
        session_id = 1
        previous = None
        for event in clicks:
            if previous is not None and event.clicked_at - previous > session_gap_seconds:
                sequences.append(Sequence(user_id, session_id, tuple(session)))
                session = []
                session_id += 1
            session.append(
                SequenceItem(event.doc_id, event.clicked_at, event.dwell_seconds)
            )
            previous = event.clicked_at
        if session:
            sequences.append(Sequence(user_id, session_id, tuple(session)))
    return sequences


def _leftmost_match(doc_ids: Seq[Item], items: tuple[Item, ...]) -> Optional[list[int]]:
    """Indices of the earliest embedding of ``items`` in ``doc_ids``, or None."""
    positions = []
    start = 0
    for wanted in items:
        i = start
        while i < len(doc_ids) and doc_ids[i] != wanted:
            i += 1
        if i == len(doc_ids):
            return None
        positions.append(i)
        start = i + 1
    return positions


def contains(seq: Sequence, pattern: Pattern) -> bool:
    """True iff the pattern's items form an order-preserving (not necessarily
    contiguous) subsequence of the sequence's doc ids."""
    return _leftmost_match(seq.doc_ids(), pattern.items) is not None


def generate_candidates(frequent: Iterable[tuple[Item, ...]]) -> list[tuple[Item, ...]]:
    """Candidate k-sequences from the frequent (k-1)-sequences.

    For k=2 every ordered pair of frequent items (including repeats); for
    k>2 the standard join (s1 extends s2 when s1 minus its head equals s2
    minus its tail) followed by the contiguous-subsequence prune. Inputs
    must all have the same length.
    """
    previous = sorted(set(frequent))
    if not previous:
        return []
    length = len(previous[0])
    if any(len(p) != length for p in previous):
        raise ValueError("frequent sequences must all have the same length")

    if length == 1:
        return [x + y for x in previous for y in previous]

    previous_set = set(previous)
    candidates = set()
    for s1 in previous:
        for s2 in previous:
            if s1[1:] == s2[:-1]:
                candidates.add(s1 + (s2[-1],))
    return sorted(
        c for c in candidates if c[:-1] in previous_set and c[1:] in previous_set
    )


def derive_context(
    sequences: Iterable[Sequence], floor_constant: float = DEFAULT_FLOOR
) -> WeightContext:
    """Weight context spanning every click timestamp in ``sequences``."""
    stamps = [item.clicked_at for seq in sequences for item in seq.items]
    if not stamps:
        return WeightContext(0, 0, floor_constant)
    return WeightContext(min(stamps), max(stamps), floor_constant)


def mine(
    sequences: Seq[Sequence],
    min_sup: float,
    weighting: str = UNIT,
    ctx: Optional[WeightContext] = None,
) -> FrequentSet:
    """Level-wise frequent-sequence mining with pluggable occurrence weights.

    The support of a candidate is the sum over sequences of that sequence's
    contribution (see module docstring). Candidates reaching ``min_sup``
    survive to seed the next level; the loop stops at the first empty level.
    """
    if weighting not in WEIGHTINGS:
        raise ValueError(f"unknown weighting {weighting!r}")
    if min_sup <= 0:
        raise ValueError("min_sup must be positive")
    if ctx is None:
        ctx = derive_context(sequences)
    window_minutes = ctx.window / 60

    def contribution(seq: Sequence, items: tuple[Item, ...]) -> float:
        positions = _leftmost_match(seq.doc_ids(), items)
        if positions is None:
            return 0.0
        if weighting == UNIT:
            return 1.0
        matched = [seq.items[i] for i in positions]
        if weighting == BY_DATE:
            mean_date = sum(item.clicked_at for item in matched) / len(matched)
            return get_weight_time(mean_date, ctx)
        mean_dwell_minutes = sum(item.dwell_seconds for item in matched) / len(matched) / 60
        return get_weight_minutes(mean_dwell_minutes, window_minutes, ctx.floor_constant)

    def frequent_level(candidates: list[tuple[Item, ...]]) -> list[Pattern]:
        supports = {c: 0.0 for c in candidates}
        for seq in sequences:
            for candidate in candidates:
                supports[candidate] += contribution(seq, candidate)
        level = [
            Pattern(items, support)
            for items, support in supports.items()
            if support >= min_sup
        ]
        level.sort(key=lambda p: (-p.support, p.items))
        return level

    by_length: dict[int, tuple[Pattern, ...]] = {}
    singles = sorted({doc_id for seq in sequences for doc_id in seq.doc_ids()})
    level = frequent_level([(item,) for item in singles])
    k = 1
    while level:
        by_length[k] = tuple(level)
        candidates = generate_candidates([p.items for p in level])
        level = frequent_level(candidates)
        k += 1
    return FrequentSet(min_sup=min_sup, by_length=by_length)


def resolve_min_sup(spec: str, sequence_count: int) -> float:
    """Parse a support threshold: a number, or a percentage of the sequence
    count (``"50%"`` over 4 sequences resolves to 2.0)."""
    text = spec.strip()
    try:
        if text.endswith("%"):
            return float(text[:-1]) / 100 * sequence_count
        return float(text)
    except ValueError:
        raise ValueError(f"invalid min_sup {spec!r}") from None


def report_lines(frequent: FrequentSet) -> list[str]:
    """The pattern report: one JSON object per line, ordered by length then
    support descending then items."""
    lines = []
    for k in sorted(frequent.by_length):
        for pattern in frequent.by_length[k]:
            lines.append(
                json.dumps(
                    {"items": list(pattern.items), "support": pattern.support, "k": k},
                    ensure_ascii=False,
                    separators=(",", ":"),
                )
            )
    return lines
