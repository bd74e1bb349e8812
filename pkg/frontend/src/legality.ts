/** Local legality mirror: adjacency plus conservation plus phase, an exact
 * duplicate of the server's rules for move validation (strategy logic stays
 * server-side). A move the mirror rejects is never submitted; a server
 * rejection of a mirror-approved move is a mirror defect and is logged. */

import { BoardGraph, hasEdge } from "./graph.js";
import { SessionState, WireMove } from "./protocol.js";

export interface Verdict {
  ok: boolean;
  reason?: string;
  entry?: WireMove;
}

export function humanPieceCounts(state: SessionState): number[] {
  return state.human_side === "revolutionaries"
    ? state.rev_count
    : state.spy_count;
}

export function humanPieceTotal(state: SessionState): number {
  return state.human_side === "revolutionaries" ? state.r : state.s;
}

function isPlacementPhase(state: SessionState): boolean {
  return state.phase === "rev_placement" || state.phase === "spy_placement";
}

function humanTurn(state: SessionState): boolean {
  const revPhase = state.phase === "rev_placement" || state.phase === "rev_to_move";
  return (state.human_side === "revolutionaries") === revPhase;
}

export function checkMoves(
  state: SessionState,
  graph: BoardGraph,
  moves: WireMove[],
): Verdict {
  if (state.status !== "active") {
    return { ok: false, reason: "game is over" };
  }
  if (!humanTurn(state)) {
    return { ok: false, reason: `waiting for the ${state.phase} phase to pass` };
  }
  const placements = moves.filter((m) => m.from === null);
  const flows = moves.filter((m) => m.from !== null);
  if (placements.length > 0 && flows.length > 0) {
    return { ok: false, reason: "cannot mix placement and movement entries" };
  }
  if (isPlacementPhase(state)) {
    if (flows.length > 0) {
      return { ok: false, reason: "placement phase: use placement entries", entry: flows[0] };
    }
    let total = 0;
    for (const entry of placements) {
      if (
        !Number.isInteger(entry.to) ||
        entry.to < 0 ||
        entry.to >= graph.vertexCount ||
        !Number.isInteger(entry.count) ||
        entry.count <= 0
      ) {
        return { ok: false, reason: "bad placement entry", entry };
      }
      total += entry.count;
    }
    if (total !== humanPieceTotal(state)) {
      return {
        ok: false,
        reason: `placement must use exactly ${humanPieceTotal(state)} pieces`,
      };
    }
    return { ok: true };
  }
  if (placements.length > 0) {
    return { ok: false, reason: "movement phase: placement already done", entry: placements[0] };
  }
  const counts = humanPieceCounts(state);
  const outflow = new Map<number, number>();
  for (const entry of flows) {
    const from = entry.from as number;
    if (
      !Number.isInteger(from) ||
      !Number.isInteger(entry.to) ||
      from < 0 ||
      from >= graph.vertexCount ||
      entry.to < 0 ||
      entry.to >= graph.vertexCount
    ) {
      return { ok: false, reason: "vertex out of range", entry };
    }
    if (!Number.isInteger(entry.count) || entry.count <= 0) {
      return { ok: false, reason: "flow count must be positive", entry };
    }
    if (from === entry.to) {
      return { ok: false, reason: "staying is implicit; drop the entry", entry };
    }
    if (!hasEdge(graph, from, entry.to)) {
      return { ok: false, reason: `${from}-${entry.to} is not an edge`, entry };
    }
    outflow.set(from, (outflow.get(from) ?? 0) + entry.count);
  }
  for (const [v, out] of outflow) {
    if (out > counts[v]) {
      return {
        ok: false,
        reason: `vertex ${v} sends ${out} pieces but holds ${counts[v]}`,
      };
    }
  }
  return { ok: true };
}
