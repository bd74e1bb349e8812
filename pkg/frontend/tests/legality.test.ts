/** Mirror/server agreement: on a 50-case fuzz set of move payloads, the
 * local legality mirror accepts exactly what the server accepts. */

import { expect, inject, test } from "vitest";

import { parseGraphText } from "../src/graph.js";
import { checkMoves } from "../src/legality.js";
import { ApiClient, ApiError, SessionState, WireMove } from "../src/protocol.js";

function mulberry(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) | 0;
    let t = Math.imul(a ^ (a >>> 15), 1 | a);
    t = (t + Math.imul(t ^ (t >>> 7), 61 | t)) ^ t;
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

async function freshSession(client: ApiClient): Promise<SessionState> {
  const state = await client.createSession({
    graph: "star:6",
    m: 2,
    r: 4,
    s: 2,
    human_side: "revolutionaries",
    ai_strategy: "spy.dominating-vertex",
    seed: 1,
  });
  // fixed placement: two pairs on leaves 1 and 2
  return client.submitMoves(state.session_id, [
    { from: null, to: 1, count: 2 },
    { from: null, to: 2, count: 2 },
  ]);
}

function randomMoves(
  rand: () => number,
  state: SessionState,
  n: number,
): WireMove[] {
  const occupied = state.rev_count
    .map((c, v) => [v, c] as const)
    .filter(([, c]) => c > 0)
    .map(([v]) => v);
  const entries = 1 + Math.floor(rand() * 3);
  const moves: WireMove[] = [];
  for (let i = 0; i < entries; i += 1) {
    if (rand() < 0.55 && occupied.length > 0) {
      // plausible: move from an occupied leaf toward the star center
      const from = occupied[Math.floor(rand() * occupied.length)];
      moves.push({ from, to: 0, count: 1 + Math.floor(rand() * 2) });
    } else {
      moves.push({
        from: Math.floor(rand() * n),
        to: Math.floor(rand() * n),
        count: 1 + Math.floor(rand() * 3),
      });
    }
  }
  return moves;
}

test("mirror and server agree on 50 fuzzed move payloads", async () => {
  const client = new ApiClient(inject("serviceBase"));
  const graph = parseGraphText((await freshSession(client)).graph);
  const rand = mulberry(2024);
  let accepted = 0;
  let rejected = 0;
  for (let caseNo = 0; caseNo < 50; caseNo += 1) {
    const state = await freshSession(client);
    const moves = randomMoves(rand, state, graph.vertexCount);
    const verdict = checkMoves(state, graph, moves);
    let serverOk = true;
    let serverCode = "";
    try {
      await client.submitMoves(state.session_id, moves);
    } catch (err) {
      serverOk = false;
      serverCode = err instanceof ApiError ? err.error.code : String(err);
    }
    expect(
      verdict.ok,
      `case ${caseNo}: mirror=${verdict.ok} (${verdict.reason ?? ""}) ` +
        `server=${serverOk} (${serverCode}) moves=${JSON.stringify(moves)}`,
    ).toBe(serverOk);
    if (serverOk) accepted += 1;
    else rejected += 1;
  }
  // the fuzz set must exercise both outcomes to mean anything
  expect(accepted).toBeGreaterThan(5);
  expect(rejected).toBeGreaterThan(5);
});

test("mirror rejects out-of-turn and finished-game moves", async () => {
  const client = new ApiClient(inject("serviceBase"));
  const state = await freshSession(client);
  const graph = parseGraphText(state.graph);
  // legal move structure but submitted twice in a row: after the first, the
  // AI replies and it is the human's turn again, so play through to the end
  const resigned = await client.resign(state.session_id);
  expect(checkMoves(resigned, graph, [{ from: 1, to: 0, count: 1 }]).ok).toBe(false);
});

test("session refuses to send mirror-rejected moves", async () => {
  const { GameSession } = await import("../src/session.js");
  const client = new ApiClient(inject("serviceBase"));
  const session = await GameSession.create(client, {
    graph: "star:6",
    m: 2,
    r: 4,
    s: 2,
    human_side: "revolutionaries",
    ai_strategy: "spy.dominating-vertex",
    seed: 7,
  });
  await session.submit([
    { from: null, to: 1, count: 2 },
    { from: null, to: 2, count: 2 },
  ]);
  await expect(
    session.submit([{ from: 1, to: 2, count: 1 }]),
  ).rejects.toThrow(/mirror rejected/);
  expect(session.mirrorDefects).toEqual([]);
});
