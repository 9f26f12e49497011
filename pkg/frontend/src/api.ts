// Thin client over the service's HTTP/JSON API. Every call keeps the raw
// response text alongside the parsed body so history snapshots can be
// compared byte-for-byte on re-run.

import type {
  DistributionBody,
  ErrorBody,
  EstimateResult,
  LrReport,
  LrRequestBody,
  SourcesBody,
  TlhgPrediction,
  UploadResult,
} from "./types.js";

export class ApiError extends Error {
  readonly code: string;
  readonly status: number;

  constructor(code: string, message: string, status: number) {
    super(message);
    this.name = "ApiError";
    this.code = code;
    this.status = status;
  }
}

export interface ApiResult<T> {
  /** Exact response body text as received; byte-identity baseline. */
  raw: string;
  body: T;
}

type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

function throwFromBody(raw: string, status: number): never {
  let code = "unknown";
  let message = `service returned HTTP ${status}`;
  try {
    const parsed = JSON.parse(raw) as ErrorBody;
    code = parsed.error.code;
    message = parsed.error.message;
  } catch {
    // non-JSON error body; keep the generic message
  }
  throw new ApiError(code, message, status);
}

export class ApiClient {
  private readonly base: string;
  private readonly fetchFn: FetchLike;

  constructor(baseUrl: string, fetchFn?: FetchLike) {
    this.base = baseUrl.replace(/\/+$/, "");
    this.fetchFn = fetchFn ?? ((url, init) => fetch(url, init));
  }

  private async request(path: string, init?: RequestInit): Promise<string> {
    const resp = await this.fetchFn(this.base + path, init);
    const raw = await resp.text();
    if (!resp.ok) {
      throwFromBody(raw, resp.status);
    }
    return raw;
  }

  private async postJson<T>(path: string, payload: unknown
  ): Promise<ApiResult<T>> {
    const raw = await this.request(path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(payload),
    });
    return { raw, body: JSON.parse(raw) as T };
  }

  private async getJson<T>(path: string): Promise<ApiResult<T>> {
    const raw = await this.request(path);
    return { raw, body: JSON.parse(raw) as T };
  }

  classify(payload: { profile: string; coverage?: string; mode?: string }
  ): Promise<ApiResult<TlhgPrediction>> {
    return this.postJson("/classify", payload);
  }

  /** One report, or an array when sources are evaluated separately. */
  lr(payload: LrRequestBody): Promise<ApiResult<LrReport | LrReport[]>> {
    return this.postJson("/lr", payload);
  }

  uploadDistribution(weights: Record<string, number>, name?: string
  ): Promise<ApiResult<UploadResult>> {
    const payload: Record<string, unknown> = { weights };
    if (name !== undefined) payload["name"] = name;
    return this.postJson("/tlhg-distribution", payload);
  }

  getDistribution(session: string): Promise<ApiResult<DistributionBody>> {
    return this.getJson(`/tlhg-distribution/${session}`);
  }

  sources(): Promise<ApiResult<SourcesBody>> {
    return this.getJson("/sources");
  }

  estimate(params: Record<string, string | number>
  ): Promise<ApiResult<EstimateResult>> {
    const query = new URLSearchParams(
      Object.entries(params).map(([k, v]) => [k, String(v)]));
    return this.getJson(`/estimators?${query.toString()}`);
  }
}
