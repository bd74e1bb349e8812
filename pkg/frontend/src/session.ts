/** Headless game-session controller: owns the state, the composer and the
 * submission rule (never send what the mirror rejects; log any server
 * rejection of a mirror-approved move as a mirror defect). The DOM board
 * drives this; tests drive it directly. */

import { MoveComposer } from "./compose.js";
import { BoardGraph, parseGraphText } from "./graph.js";
import { checkMoves } from "./legality.js";
import { ApiClient, ApiError, SessionState, WireMove } from "./protocol.js";

export interface MirrorDefect {
  moves: WireMove[];
  serverError: string;
}

export class GameSession {
  state: SessionState;
  graph: BoardGraph;
  composer: MoveComposer;
  mirrorDefects: MirrorDefect[] = [];
  listeners: Array<(state: SessionState) => void> = [];

  private constructor(private client: ApiClient, state: SessionState) {
    this.state = state;
    this.graph = parseGraphText(state.graph);
    this.composer = new MoveComposer(this.graph, this.state);
  }

  static async create(
    client: ApiClient,
    req: Parameters<ApiClient["createSession"]>[0],
  ): Promise<GameSession> {
    const state = await client.createSession(req);
    return new GameSession(client, state);
  }

  onState(listener: (state: SessionState) => void): void {
    this.listeners.push(listener);
  }

  private update(state: SessionState): void {
    this.state = state;
    this.composer = new MoveComposer(this.graph, this.state);
    for (const listener of this.listeners) {
      listener(state);
    }
  }

  /** Submit explicit moves (scripted play and tests). The mirror runs
   * first; a mirror rejection never reaches the server. */
  async submit(moves: WireMove[]): Promise<SessionState> {
    const verdict = checkMoves(this.state, this.graph, moves);
    if (!verdict.ok) {
      throw new Error(`mirror rejected: ${verdict.reason}`);
    }
    try {
      const state = await this.client.submitMoves(this.state.session_id, moves);
      this.update(state);
      return state;
    } catch (err) {
      if (err instanceof ApiError) {
        this.mirrorDefects.push({ moves, serverError: err.error.code });
      }
      throw err;
    }
  }

  /** Submit whatever the composer holds, if the mirror approves. */
  async submitPending(): Promise<SessionState | null> {
    const verdict = this.composer.finalCheck();
    if (!verdict.ok) {
      this.composer.lastHint = verdict.reason ?? "illegal";
      return null;
    }
    return this.submit(this.composer.take());
  }

  async refresh(): Promise<SessionState> {
    const state = await this.client.getState(this.state.session_id);
    this.update(state);
    return state;
  }

  async resign(): Promise<SessionState> {
    const state = await this.client.resign(this.state.session_id);
    this.update(state);
    return state;
  }

  transcript(): Promise<Record<string, unknown>> {
    return this.client.transcript(this.state.session_id);
  }
}
