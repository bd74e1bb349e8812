/** Per-vertex badges and per-part counters recomputed from the raw state. */

import { BoardGraph } from "./graph.js";
import { SessionState } from "./protocol.js";

export interface VertexBadge {
  vertex: number;
  revs: number;
  spies: number;
  covered: boolean; // meeting with a spy on it
  unguarded: boolean; // meeting with no spy: a win for the revolutionaries
}

export interface PartCounters {
  part: number;
  revs: number; // r_j
  spies: number; // s_j
  covered: number; // c_j: revolutionaries sharing a vertex with a spy
}

export function vertexBadges(state: SessionState): VertexBadge[] {
  return state.rev_count.map((revs, vertex) => {
    const spies = state.spy_count[vertex];
    const meeting = revs >= state.m;
    return {
      vertex,
      revs,
      spies,
      covered: meeting && spies > 0,
      unguarded: meeting && spies === 0,
    };
  });
}

export function partCounters(state: SessionState, graph: BoardGraph): PartCounters[] {
  const labels = graph.partLabels;
  if (!labels) {
    return [];
  }
  const k = Math.max(...labels) + 1;
  const out: PartCounters[] = Array.from({ length: k }, (_, part) => ({
    part,
    revs: 0,
    spies: 0,
    covered: 0,
  }));
  labels.forEach((part, vertex) => {
    out[part].revs += state.rev_count[vertex];
    out[part].spies += state.spy_count[vertex];
    if (state.spy_count[vertex] > 0) {
      out[part].covered += state.rev_count[vertex];
    }
  });
  return out;
}

export function firstUnguardedMeeting(state: SessionState): number | null {
  for (let v = 0; v < state.rev_count.length; v += 1) {
    if (state.rev_count[v] >= state.m && state.spy_count[v] === 0) {
      return v;
    }
  }
  return null;
}
