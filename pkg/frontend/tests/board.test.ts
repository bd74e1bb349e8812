// @vitest-environment happy-dom
/** DOM rendering: win banner, bipartite side counters, hypercube levels. */

import { expect, test } from "vitest";

import { Board } from "../src/board.js";
import { MoveComposer } from "../src/compose.js";
import { parseGraphText } from "../src/graph.js";
import { GameSession } from "../src/session.js";
import { SessionState } from "../src/protocol.js";

function fakeSession(state: SessionState): GameSession {
  // construct without the network: mimic GameSession's shape
  const session = Object.create(GameSession.prototype) as GameSession;
  session.state = state;
  session.listeners = [];
  session.mirrorDefects = [];
  session.graph = parseGraphText(state.graph);
  session.composer = new MoveComposer(session.graph, state);
  return session;
}

function baseState(overrides: Partial<SessionState>): SessionState {
  return {
    schema: "revspy/1",
    session_id: "t",
    m: 2,
    r: 4,
    s: 2,
    graph: "n 4\nparts 0 0 1 1\ne 0 2\ne 0 3\ne 1 2\ne 1 3",
    layout: { parts: [0, 0, 1, 1] },
    human_side: "revolutionaries",
    ai_strategy: "spy.random",
    phase: "rev_to_move",
    round: 2,
    rev_count: [2, 0, 2, 0],
    spy_count: [1, 0, 0, 1],
    status: "active",
    outcome: null,
    ai_move: null,
    horizon: 50,
    ...overrides,
  };
}

test("terminal state renders a winner banner with round and vertex", () => {
  const state = baseState({
    status: "finished",
    outcome: { winner: "revolutionaries", round: 2, vertex: 2, detail: null },
  });
  const root = document.createElement("div");
  new Board(root, fakeSession(state));
  const banner = root.querySelector(".banner") as HTMLElement;
  expect(banner.textContent).toContain("revolutionaries win");
  expect(banner.textContent).toContain("round 2");
  expect(banner.textContent).toContain("vertex 2");
  expect(banner.classList.contains("banner-win")).toBe(true);
});

test("bipartite state shows per-side counters and covered flags", () => {
  const root = document.createElement("div");
  new Board(root, fakeSession(baseState({})));
  const counters = root.querySelector(".side-counters") as HTMLElement;
  expect(counters.textContent).toContain("side 1: r=2 s=1 covered=2");
  expect(counters.textContent).toContain("side 2: r=2 s=1 covered=0");
  const covered = root.querySelector('.vertex[data-vertex="0"]') as HTMLElement;
  expect(covered.classList.contains("covered")).toBe(true);
  const open = root.querySelector('.vertex[data-vertex="2"]') as HTMLElement;
  expect(open.classList.contains("unguarded")).toBe(true);
});

test("hypercube vertices group into weight levels", () => {
  const state = baseState({
    graph: "n 8\nhypercube 3\ne 0 1\ne 0 2\ne 0 4\ne 1 3\ne 1 5\ne 2 3\ne 2 6\ne 3 7\ne 4 5\ne 4 6\ne 5 7\ne 6 7",
    layout: { hypercube: 3 },
    rev_count: [0, 1, 1, 0, 1, 0, 0, 0],
    spy_count: [0, 0, 0, 0, 0, 0, 0, 1],
  });
  const root = document.createElement("div");
  new Board(root, fakeSession(state));
  const tops = new Map<string, number[]>();
  root.querySelectorAll<HTMLElement>(".vertex").forEach((el) => {
    const v = Number(el.dataset.vertex);
    const key = el.style.top;
    tops.set(key, [...(tops.get(key) ?? []), v]);
  });
  // same popcount -> same row
  const rows = [...tops.values()].map((vs) => vs.sort((a, b) => a - b));
  const byWeight = [[0], [1, 2, 4], [3, 5, 6], [7]];
  for (const level of byWeight) {
    expect(rows).toContainEqual(level);
  }
});
