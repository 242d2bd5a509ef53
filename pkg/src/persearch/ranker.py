"""Per-(user, query, link) preference weights and the personalized ordering.

Every click contributes one weight of ``dwell/window + floor``, so visit
count enters through summation and time spent through the normalized dwell
term. Links the user never clicked keep weight zero and are listed after
the weighted ones, in base order; nothing is ever dropped.

All functions are pure computations over immutable snapshots.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterable, Sequence

if TYPE_CHECKING:
    from .index import MatchResult
    from .profile_store import StoreSnapshot

DEFAULT_FLOOR = 0.3


@dataclass(frozen=True)
class WeightContext:
    """The normalization window for date-based weights."""

    min_date: float
    max_date: float
    floor_constant: float = DEFAULT_FLOOR

    def __post_init__(self):
        if self.max_date < self.min_date:
            raise ValueError("max_date must not precede min_date")
        if self.floor_constant <= 0:
            raise ValueError("floor_constant must be positive")

    @property
    def window(self) -> float:
        return self.max_date - self.min_date


@dataclass(frozen=True)
class LinkScore:
    user_id: int
    query: str
    doc_id: int
    click_count: int
    total_dwell_minutes: float
    score: float


def get_weight_time(item_date: float, ctx: WeightContext) -> float:
    """Recency weight: (item - min)/window + floor; floor alone when window is 0."""
    if not ctx.min_date <= item_date <= ctx.max_date:
        raise ValueError(
            f"item_date {item_date} outside [{ctx.min_date}, {ctx.max_date}]"
        )
    if ctx.window == 0:
        return ctx.floor_constant
    return (item_date - ctx.min_date) / ctx.window + ctx.floor_constant


def get_weight_minutes(
    dwell_minutes: float, window_minutes: float, floor_constant: float = DEFAULT_FLOOR
) -> float:
    """Dwell weight: dwell/window + floor, with the ratio capped at 1.

    A zero window (single-click history) contributes the floor alone.
    """
    if dwell_minutes < 0 or window_minutes < 0:
        raise ValueError("dwell_minutes and window_minutes must be nonnegative")
    if window_minutes == 0:
        return floor_constant
    return min(dwell_minutes / window_minutes, 1.0) + floor_constant


def link_scores(
    user_id: int,
    query: str,
    snapshot: "StoreSnapshot",
    floor_constant: float = DEFAULT_FLOOR,
) -> list[LinkScore]:
    """Accumulated weights of every link this user clicked for ``query``.

    ``query`` must already be normalized (see index.normalize_query). The
    dwell window is the span of this user's click timestamps for the query,
    in minutes. Bare search records (doc_id None) are skipped.
    """
    clicks = [
        e
        for e in snapshot.events
        if e.user_id == user_id and e.query == query and e.doc_id is not None
    ]
    if not clicks:
        return []
    window_minutes = (
        max(e.clicked_at for e in clicks) - min(e.clicked_at for e in clicks)
    ) / 60

    by_doc: dict[int, list] = {}
    for event in clicks:
        by_doc.setdefault(event.doc_id, []).append(event)

    scores = []
    for doc_id in sorted(by_doc):
        events = by_doc[doc_id]
        dwell_minutes = [e.dwell_seconds / 60 for e in events]
        score = sum(
            get_weight_minutes(dwell, window_minutes, floor_constant)
            for dwell in dwell_minutes
        )
        scores.append(
            LinkScore(
                user_id=user_id,
                query=query,
                doc_id=doc_id,
                click_count=len(events),
                total_dwell_minutes=sum(dwell_minutes),
                score=score,
            )
        )
    return scores


def personalized_order(
    matches: Sequence["MatchResult"], scores: Iterable[LinkScore]
) -> list["MatchResult"]:
    """Reorder base-ordered matches: weighted links first, the rest unchanged.

    Links with positive score are sorted by score descending (ties keep base
    order); zero-score links follow in base order. The output is always a
    permutation of ``matches``.
    """
    score_of = {s.doc_id: s.score for s in scores}
    interested = [m for m in matches if score_of.get(m.doc_id, 0.0) > 0]
    interested.sort(key=lambda m: -score_of[m.doc_id])
    uninterested = [m for m in matches if score_of.get(m.doc_id, 0.0) <= 0]
    return interested + uninterested
