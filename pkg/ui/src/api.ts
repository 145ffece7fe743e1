/**
 * Typed client for the clonewatch triage API (/api/v1).
 *
 * The fetch implementation is injectable so contract tests can run against
 * recorded responses without a server, and the browser build uses the real
 * fetch unchanged.
 */

export interface Indicator {
  kind: string;
  status: string;
  detail: string;
}

export interface SharedTitle {
  site: string;
  title: string;
}

export interface Registration {
  created: string | null;
  updated: string | null;
  source: string;
}

export interface TriageItem {
  run_id: string;
  domain: string;
  hit_count: number;
  distinct_origin_articles: number;
  distinct_origin_sites: number;
  first_seen_iteration: number;
  surfaced_by: string;
  score: number;
  verdict: string;
  verdict_rationale: string;
  indicators: Indicator[];
  shared_title_sample: SharedTitle[];
  registration: Registration | null;
}

export interface CandidatesPage {
  items: TriageItem[];
  cursor: string | null;
  total: number;
}

export interface VerdictResponse {
  item: TriageItem;
  frontier_delta: number;
}

export interface RunStatus {
  run_id: string;
  iteration: number;
  query_count: number;
  frontier: string[];
  visited: string[];
  pending: number;
  iterating: boolean;
  stop_reason: string | null;
  report: unknown;
}

export interface GraphEdgeEvidence {
  query_id: string;
  origin_site: string;
  hit_url: string;
}

export interface GraphEdge {
  a: string;
  b: string;
  evidence: GraphEdgeEvidence[];
}

export interface GraphPayload {
  built_from_run?: string;
  nodes: string[];
  edges: GraphEdge[];
  components: number;
  average_degree: number;
}

export interface EvidencePayload {
  item: TriageItem;
  evidence: unknown;
  shared_titles: SharedTitle[];
}

/** Minimal structural view of a fetch Response; both browser fetch and fakes satisfy it. */
export interface FetchResponseLike {
  status: number;
  json(): Promise<unknown>;
}

export type FetchLike = (
  url: string,
  init?: { method?: string; headers?: Record<string, string>; body?: string },
) => Promise<FetchResponseLike>;

export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    message: string,
    public detail = "",
  ) {
    super(message);
    this.name = "ApiError";
  }
}

interface ErrorBody {
  code?: string;
  message?: string;
  detail?: string;
}

export class ApiClient {
  constructor(
    private baseUrl: string = "",
    private fetchFn: FetchLike = (globalThis as { fetch: FetchLike }).fetch,
    private token?: string,
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const headers: Record<string, string> = { Accept: "application/json" };
    if (body !== undefined) headers["Content-Type"] = "application/json";
    if (this.token) headers["Authorization"] = `Bearer ${this.token}`;
    const response = await this.fetchFn(this.baseUrl + path, {
      method,
      headers,
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    if (response.status >= 400) {
      let parsed: ErrorBody = {};
      try {
        parsed = (await response.json()) as ErrorBody;
      } catch {
        // non-JSON error body; fall through to the generic error
      }
      throw new ApiError(
        response.status,
        parsed.code ?? "error",
        parsed.message ?? `request failed with status ${response.status}`,
        parsed.detail ?? "",
      );
    }
    return (await response.json()) as T;
  }

  listRuns(): Promise<{ runs: string[] }> {
    return this.request("GET", "/api/v1/runs");
  }

  listCandidates(
    runId: string,
    opts: { verdict?: string; cursor?: string; limit?: number } = {},
  ): Promise<CandidatesPage> {
    const params = new URLSearchParams();
    if (opts.verdict) params.set("verdict", opts.verdict);
    if (opts.cursor) params.set("cursor", opts.cursor);
    if (opts.limit) params.set("limit", String(opts.limit));
    const qs = params.toString();
    return this.request("GET", `/api/v1/runs/${runId}/candidates${qs ? "?" + qs : ""}`);
  }

  getEvidence(runId: string, domain: string): Promise<EvidencePayload> {
    return this.request("GET", `/api/v1/runs/${runId}/candidates/${domain}/evidence`);
  }

  postVerdict(
    runId: string,
    domain: string,
    verdict: string,
    rationale = "",
  ): Promise<VerdictResponse> {
    return this.request("POST", `/api/v1/runs/${runId}/candidates/${domain}/verdict`, {
      verdict,
      rationale,
    });
  }

  getStatus(runId: string): Promise<RunStatus> {
    return this.request("GET", `/api/v1/runs/${runId}/status`);
  }

  getGraph(runId: string): Promise<GraphPayload> {
    return this.request("GET", `/api/v1/runs/${runId}/graph`);
  }

  triggerIteration(runId: string): Promise<{ run_id: string; status: string }> {
    return this.request("POST", `/api/v1/runs/${runId}/iterate`);
  }
}
