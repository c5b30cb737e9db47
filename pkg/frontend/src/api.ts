// Thin typed client for the detox HTTP API. All filtering verdicts come
// from these responses; the UI never re-derives them locally.

import type {
  FilterResponse,
  Profile,
  ScanReport,
  ServiceHealth,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    message: string,
    readonly fields: string[] = [],
  ) {
    super(message);
  }
}

export class ConflictError extends ApiError {}

type FetchLike = typeof fetch;

async function readError(response: Response): Promise<ApiError> {
  let message = `HTTP ${response.status}`;
  let fields: string[] = [];
  try {
    const body = (await response.json()) as { error?: string; fields?: string[] };
    if (body.error) message = body.error;
    if (Array.isArray(body.fields)) fields = body.fields;
  } catch {
    // non-JSON error body: keep the status line
  }
  return response.status === 409
    ? new ConflictError(response.status, message, fields)
    : new ApiError(response.status, message, fields);
}

export class DetoxApi {
  private readonly fetchFn: FetchLike;

  constructor(
    readonly baseUrl: string,
    fetchFn?: FetchLike,
  ) {
    this.fetchFn = fetchFn ?? ((...args) => fetch(...args));
  }

  private async request<T>(
    method: string,
    path: string,
    body?: unknown,
    signal?: AbortSignal,
  ): Promise<T> {
    const response = await this.fetchFn(this.baseUrl + path, {
      method,
      signal,
      headers: body === undefined ? undefined : { "content-type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    if (!response.ok) throw await readError(response);
    return (await response.json()) as T;
  }

  health(): Promise<ServiceHealth> {
    return this.request("GET", "/v1/health");
  }

  filter(html: string, siteId: string, mode: string, signal?: AbortSignal): Promise<FilterResponse> {
    return this.request("POST", "/v1/filter", { html, site_id: siteId, mode }, signal);
  }

  original(itemId: number): Promise<{ item_id: number; html: string }> {
    return this.request("GET", `/v1/original/${itemId}`);
  }

  getProfile(): Promise<Profile> {
    return this.request("GET", "/v1/profile");
  }

  putProfile(profile: Profile): Promise<Profile> {
    return this.request("PUT", "/v1/profile", profile);
  }

  scan(content: string, site: string): Promise<ScanReport> {
    return this.request("POST", "/v1/scan", { content, site });
  }
}
