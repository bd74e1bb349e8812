/** Wire types and client for the revspy session service (schema revspy/1). */

export const SCHEMA = "revspy/1";

export interface WireMove {
  from: number | null; // null marks a placement entry
  to: number;
  count: number;
}

export interface ServiceError {
  code: string;
  message: string;
  detail?: unknown;
}

export interface SessionState {
  schema: string;
  session_id: string;
  m: number;
  r: number;
  s: number;
  graph: string;
  layout: { parts?: number[]; hypercube?: number };
  human_side: "revolutionaries" | "spies";
  ai_strategy: string;
  phase: "rev_placement" | "spy_placement" | "rev_to_move" | "spy_to_move";
  round: number;
  rev_count: number[];
  spy_count: number[];
  status: "active" | "finished";
  outcome: {
    winner: string;
    round: number;
    vertex: number | null;
    detail: string | null;
  } | null;
  ai_move: WireMove[] | null;
  horizon: number;
}

export interface StrategyInfo {
  id: string;
  side: string;
  description: string;
}

export class ApiError extends Error {
  constructor(public status: number, public error: ServiceError) {
    super(`${error.code}: ${error.message}`);
  }
}

export interface CreateSessionRequest {
  graph: string;
  m: number;
  r: number;
  s: number;
  human_side: "revolutionaries" | "spies";
  ai_strategy: string;
  seed?: number;
  horizon?: number;
  params?: Record<string, unknown>;
}

async function parseResponse<T>(resp: Response): Promise<T> {
  const body = await resp.json();
  if (!resp.ok) {
    throw new ApiError(resp.status, (body as { error: ServiceError }).error);
  }
  return body as T;
}

export class ApiClient {
  constructor(private base: string) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const resp = await fetch(this.base + path, {
      method,
      headers: { "Content-Type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    return parseResponse<T>(resp);
  }

  strategies(): Promise<{ strategies: StrategyInfo[] }> {
    return this.request("GET", "/strategies");
  }

  createSession(req: CreateSessionRequest): Promise<SessionState> {
    return this.request("POST", "/sessions", req);
  }

  getState(sessionId: string): Promise<SessionState> {
    return this.request("GET", `/sessions/${sessionId}`);
  }

  submitMoves(sessionId: string, moves: WireMove[]): Promise<SessionState> {
    return this.request("POST", `/sessions/${sessionId}/moves`, { moves });
  }

  resign(sessionId: string): Promise<SessionState> {
    return this.request("POST", `/sessions/${sessionId}/resign`);
  }

  transcript(sessionId: string): Promise<Record<string, unknown>> {
    return this.request("GET", `/sessions/${sessionId}/transcript`);
  }
}
