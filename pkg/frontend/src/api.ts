/** Thin typed client for the labeling-service HTTP API. */

import type {
  DatasetInfo,
  NextQuery,
  SessionCreated,
  SessionState,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
  }
}

async function parseError(resp: Response): Promise<ApiError> {
  let code = "error";
  let message = resp.statusText;
  try {
    const body = await resp.json();
    code = body.code ?? code;
    message = body.message ?? JSON.stringify(body);
  } catch {
    /* non-JSON error body */
  }
  return new ApiError(resp.status, code, message);
}

export class ApiClient {
  constructor(readonly base: string = "") {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const resp = await fetch(this.base + path, {
      headers: { "content-type": "application/json" },
      ...init,
    });
    if (!resp.ok) {
      throw await parseError(resp);
    }
    return (await resp.json()) as T;
  }

  createSession(body: {
    dataset?: string;
    csv?: string;
    config?: Record<string, unknown>;
  }): Promise<SessionCreated> {
    return this.request("/api/sessions", {
      method: "POST",
      body: JSON.stringify(body),
    });
  }

  next(id: string): Promise<NextQuery> {
    return this.request(`/api/sessions/${id}/next`);
  }

  postLabel(
    id: string,
    point: number,
    cls: number,
  ): Promise<{ labeled_count: number; status: string }> {
    return this.request(`/api/sessions/${id}/labels`, {
      method: "POST",
      body: JSON.stringify({ point, class: cls }),
    });
  }

  state(id: string): Promise<SessionState> {
    return this.request(`/api/sessions/${id}/state`);
  }

  exportCurve(id: string): Promise<Record<string, unknown>> {
    return this.request(`/api/sessions/${id}/export`);
  }

  async datasets(): Promise<DatasetInfo[]> {
    const body = await this.request<{ datasets: DatasetInfo[] }>("/api/datasets");
    return body.datasets;
  }
}
