/**
 * Typed client for the clonewatch triage API (/api/v1).
 *
 * The fetch implementation is injectable so contract tests can run against
 * recorded responses without a server, and the browser build uses the real
 * fetch unchanged.
 */
export class ApiError extends Error {
    constructor(status, code, message, detail = "") {
        super(message);
        this.status = status;
        this.code = code;
        this.detail = detail;
        this.name = "ApiError";
    }
}
export class ApiClient {
    constructor(baseUrl = "", fetchFn = globalThis.fetch, token) {
        this.baseUrl = baseUrl;
        this.fetchFn = fetchFn;
        this.token = token;
    }
    async request(method, path, body) {
        const headers = { Accept: "application/json" };
        if (body !== undefined)
            headers["Content-Type"] = "application/json";
        if (this.token)
            headers["Authorization"] = `Bearer ${this.token}`;
        const response = await this.fetchFn(this.baseUrl + path, {
            method,
            headers,
            body: body === undefined ? undefined : JSON.stringify(body),
        });
        if (response.status >= 400) {
            let parsed = {};
            try {
                parsed = (await response.json());
            }
            catch {
                // non-JSON error body; fall through to the generic error
            }
            throw new ApiError(response.status, parsed.code ?? "error", parsed.message ?? `request failed with status ${response.status}`, parsed.detail ?? "");
        }
        return (await response.json());
    }
    listRuns() {
        return this.request("GET", "/api/v1/runs");
    }
    listCandidates(runId, opts = {}) {
        const params = new URLSearchParams();
        if (opts.verdict)
            params.set("verdict", opts.verdict);
        if (opts.cursor)
            params.set("cursor", opts.cursor);
        if (opts.limit)
            params.set("limit", String(opts.limit));
        const qs = params.toString();
        return this.request("GET", `/api/v1/runs/${runId}/candidates${qs ? "?" + qs : ""}`);
    }
    getEvidence(runId, domain) {
        return this.request("GET", `/api/v1/runs/${runId}/candidates/${domain}/evidence`);
    }
    postVerdict(runId, domain, verdict, rationale = "") {
        return this.request("POST", `/api/v1/runs/${runId}/candidates/${domain}/verdict`, {
            verdict,
            rationale,
        });
    }
    getStatus(runId) {
        return this.request("GET", `/api/v1/runs/${runId}/status`);
    }
    getGraph(runId) {
        return this.request("GET", `/api/v1/runs/${runId}/graph`);
    }
    triggerIteration(runId) {
        return this.request("POST", `/api/v1/runs/${runId}/iterate`);
    }
}
