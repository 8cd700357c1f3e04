/** Minimal typed client for the critiquing service HTTP API. */

import type {
  ApiError,
  CatalogSchema,
  CatalogSummary,
  Display,
  PreferenceEdit,
  SessionSummary,
} from "./types.js";

export class ServiceApiError extends Error {
  readonly code: string;
  readonly field?: string;
  readonly status: number;

  constructor(status: number, payload: ApiError) {
    super(payload.detail || payload.error);
    this.status = status;
    this.code = payload.error;
    this.field = payload.field;
  }
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  const response = await fetch(url, {
    headers: { "Content-Type": "application/json" },
    ...init,
  });
  const body = await response.json();
  if (!response.ok) {
    throw new ServiceApiError(response.status, body as ApiError);
  }
  return body as T;
}

export class ServiceClient {
  constructor(readonly baseUrl: string) {}

  private url(path: string): string {
    return this.baseUrl.replace(/\/$/, "") + path;
  }

  listCatalogs(): Promise<{ catalogs: CatalogSummary[] }> {
    return request(this.url("/catalogs"));
  }

  getCatalog(catalogId: string): Promise<CatalogSchema> {
    return request(this.url(`/catalogs/${encodeURIComponent(catalogId)}`));
  }

  addCatalog(catalog: Record<string, unknown>): Promise<{ catalog_id: string }> {
    return request(this.url("/catalogs"), { method: "POST", body: JSON.stringify(catalog) });
  }

  createSession(catalogId: string, mode: string): Promise<{ session_id: string; mode: string }> {
    return request(this.url("/sessions"), {
      method: "POST",
      body: JSON.stringify({ catalog_id: catalogId, mode }),
    });
  }

  updatePreferences(
    sessionId: string,
    edits: PreferenceEdit[],
  ): Promise<{ model: Record<string, unknown>[]; size: number }> {
    return request(this.url(`/sessions/${encodeURIComponent(sessionId)}/preferences`), {
      method: "POST",
      body: JSON.stringify({ edits }),
    });
  }

  getDisplay(sessionId: string): Promise<Display> {
    return request(this.url(`/sessions/${encodeURIComponent(sessionId)}/display`));
  }

  recordChoice(sessionId: string, optionId: string): Promise<SessionSummary> {
    return request(this.url(`/sessions/${encodeURIComponent(sessionId)}/choice`), {
      method: "POST",
      body: JSON.stringify({ option_id: optionId }),
    });
  }

  getStats(mode?: string): Promise<{ modes: Record<string, Record<string, number>> }> {
    const suffix = mode ? `?mode=${encodeURIComponent(mode)}` : "";
    return request(this.url(`/stats${suffix}`));
  }
}
