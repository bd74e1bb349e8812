/** Move composition: clicks and drags accumulate flow entries into the
 * pending move set, checked against the local legality mirror before any
 * submission. */

import { BoardGraph } from "./graph.js";
import { checkMoves, humanPieceCounts, Verdict } from "./legality.js";
import { SessionState, WireMove } from "./protocol.js";

export interface ComposerEvent {
  kind: "place" | "drag" | "remove" | "clear";
  from?: number; // drag source
  to?: number; // drag target or placement vertex
  count?: number; // pieces moved (default 1)
  index?: number; // entry to remove
}

export class MoveComposer {
  pending: WireMove[] = [];
  lastHint: string | null = null;

  constructor(
    private graph: BoardGraph,
    private state: SessionState,
  ) {}

  /** Fold an interaction into the pending move set; illegal interactions
   * leave the set unchanged and set a hint instead. */
  apply(event: ComposerEvent): boolean {
    if (event.kind === "clear") {
      this.pending = [];
      this.lastHint = null;
      return true;
    }
    if (event.kind === "remove") {
      if (event.index === undefined || event.index >= this.pending.length) {
        return false;
      }
      this.pending.splice(event.index, 1);
      this.lastHint = null;
      return true;
    }
    const entry: WireMove =
      event.kind === "place"
        ? { from: null, to: event.to ?? -1, count: event.count ?? 1 }
        : { from: event.from ?? -1, to: event.to ?? -1, count: event.count ?? 1 };
    const trial = this.mergeEntry(entry);
    const verdict = this.partialCheck(trial);
    if (!verdict.ok) {
      this.lastHint = verdict.reason ?? "illegal";
      return false;
    }
    this.pending = trial;
    this.lastHint = null;
    return true;
  }

  private mergeEntry(entry: WireMove): WireMove[] {
    const out = this.pending.map((e) => ({ ...e }));
    const match = out.find((e) => e.from === entry.from && e.to === entry.to);
    if (match) {
      match.count += entry.count;
    } else {
      out.push(entry);
    }
    return out;
  }

  /** Mirror check relaxed for composition: placements may still be short of
   * the full piece count while being assembled. */
  private partialCheck(moves: WireMove[]): Verdict {
    const verdict = checkMoves(this.state, this.graph, moves);
    if (verdict.ok) {
      return verdict;
    }
    if (verdict.reason?.startsWith("placement must use exactly")) {
      const total = moves.reduce((acc, e) => acc + e.count, 0);
      const target = this.state.human_side === "revolutionaries" ? this.state.r : this.state.s;
      if (total < target) {
        return { ok: true };
      }
    }
    return verdict;
  }

  placedTotal(): number {
    return this.pending.reduce((acc, e) => acc + e.count, 0);
  }

  /** Remaining pieces at a vertex after the pending flows leave it. */
  remainingAt(vertex: number): number {
    const counts = humanPieceCounts(this.state);
    const leaving = this.pending
      .filter((e) => e.from === vertex)
      .reduce((acc, e) => acc + e.count, 0);
    return counts[vertex] - leaving;
  }

  /** Final mirror verdict for submission. */
  finalCheck(): Verdict {
    return checkMoves(this.state, this.graph, this.pending);
  }

  take(): WireMove[] {
    const moves = this.pending;
    this.pending = [];
    return moves;
  }
}
