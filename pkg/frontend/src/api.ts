/**
 * Typed client for the propagation service.
 *
 * The service is the single source of truth: every mutation returns the
 * authoritative session state, and a 409 conflict leaves the server-side
 * session untouched.
 */

export interface ModelStats {
  num_vars: number;
  num_clauses: number;
  clause_var_ratio: number | null;
  median_literals_per_clause: number | null;
  pct_clauses_gt2: number;
  num_binary_or_unit: number;
}

export interface SessionState {
  session_id: string;
  model_id: string;
  /** Signed literals: positive = selected, negative = excluded. */
  decided: number[];
  implied_true: number[];
  implied_false: number[];
  free: number[];
  /** Variable index (as string) to feature name, when uploaded. */
  names: Record<string, string>;
}

export interface Classification {
  core: number[];
  dead: number[];
  free: number[];
  names: Record<string, string>;
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    detail: string,
  ) {
    super(`${code}: ${detail}`);
  }
}

/** A decision the current session cannot accept (HTTP 409). */
export class ConflictError extends ApiError {}

async function parseError(response: Response): Promise<never> {
  let code = "unknown_error";
  let detail = response.statusText;
  try {
    const body = (await response.json()) as { error?: string; detail?: string };
    code = body.error ?? code;
    detail = body.detail ?? detail;
  } catch {
    // non-JSON error body; keep the status text
  }
  if (response.status === 409) {
    throw new ConflictError(response.status, code, detail);
  }
  throw new ApiError(response.status, code, detail);
}

export class PropagationClient {
  constructor(private readonly baseUrl: string) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await fetch(`${this.baseUrl}${path}`, init);
    if (!response.ok) {
      await parseError(response);
    }
    return (await response.json()) as T;
  }

  uploadModel(dimacs: string, names?: Record<number, string>): Promise<{ model_id: string; stats: ModelStats }> {
    return this.request("/models", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ dimacs, names: names ?? null }),
    });
  }

  getClassification(modelId: string): Promise<Classification> {
    return this.request(`/models/${modelId}/classification`);
  }

  createSession(modelId: string): Promise<SessionState> {
    return this.request("/sessions", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ model_id: modelId }),
    });
  }

  getSession(sessionId: string): Promise<SessionState> {
    return this.request(`/sessions/${sessionId}`);
  }

  decide(sessionId: string, literal: number): Promise<SessionState> {
    return this.request(`/sessions/${sessionId}/decisions`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ literal }),
    });
  }

  retract(sessionId: string, variable: number): Promise<SessionState> {
    return this.request(`/sessions/${sessionId}/decisions/${variable}`, {
      method: "DELETE",
    });
  }
}
