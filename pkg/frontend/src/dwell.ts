// Dwell measurement: the time between opening a result and returning to the
// results page. At most one timer is active; opening another result discards
// the previous timer rather than guessing its dwell.

export interface DwellTimer {
  query: string;
  docId: number;
  clickedAt: number; // UTC seconds
}

export interface CompletedDwell {
  query: string;
  docId: number;
  clickedAt: number;
  leftAt: number;
}

export class DwellTracker {
  private active: DwellTimer | null = null;

  get current(): DwellTimer | null {
    return this.active;
  }

  start(query: string, docId: number, clickedAt: number): void {
    this.active = { query, docId, clickedAt };
  }

  discard(): void {
    this.active = null;
  }

  /** Close the active timer, clamping so left_at >= clicked_at always holds. */
  finish(leftAt: number): CompletedDwell | null {
    if (!this.active) return null;
    const timer = this.active;
    this.active = null;
    return {
      query: timer.query,
      docId: timer.docId,
      clickedAt: timer.clickedAt,
      leftAt: Math.max(leftAt, timer.clickedAt),
    };
  }
}
