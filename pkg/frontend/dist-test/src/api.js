/** Minimal typed client for the critiquing service HTTP API. */
export class ServiceApiError extends Error {
    constructor(status, payload) {
        super(payload.detail || payload.error);
        this.status = status;
        this.code = payload.error;
        this.field = payload.field;
    }
}
async function request(url, init) {
    const response = await fetch(url, {
        headers: { "Content-Type": "application/json" },
        ...init,
    });
    const body = await response.json();
    if (!response.ok) {
        throw new ServiceApiError(response.status, body);
    }
    return body;
}
export class ServiceClient {
    constructor(baseUrl) {
        this.baseUrl = baseUrl;
    }
    url(path) {
        return this.baseUrl.replace(/\/$/, "") + path;
    }
    listCatalogs() {
        return request(this.url("/catalogs"));
    }
    getCatalog(catalogId) {
        return request(this.url(`/catalogs/${encodeURIComponent(catalogId)}`));
    }
    addCatalog(catalog) {
        return request(this.url("/catalogs"), { method: "POST", body: JSON.stringify(catalog) });
    }
    createSession(catalogId, mode) {
        return request(this.url("/sessions"), {
            method: "POST",
            body: JSON.stringify({ catalog_id: catalogId, mode }),
        });
    }
    updatePreferences(sessionId, edits) {
        return request(this.url(`/sessions/${encodeURIComponent(sessionId)}/preferences`), {
            method: "POST",
            body: JSON.stringify({ edits }),
        });
    }
    getDisplay(sessionId) {
        return request(this.url(`/sessions/${encodeURIComponent(sessionId)}/display`));
    }
    recordChoice(sessionId, optionId) {
        return request(this.url(`/sessions/${encodeURIComponent(sessionId)}/choice`), {
            method: "POST",
            body: JSON.stringify({ option_id: optionId }),
        });
    }
    getStats(mode) {
        const suffix = mode ? `?mode=${encodeURIComponent(mode)}` : "";
        return request(this.url(`/stats${suffix}`));
    }
}
