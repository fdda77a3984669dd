/** Thin client for the olg HTTP service. All processing happens server-side;
 * this module only moves JSON back and forth. */

export type DocumentSource = { text: string } | { url: string };

export interface LinkRecord {
  parent: string;
  child: string;
  name: string;
  mapping_count: number;
}

export interface GenerateStats {
  pairs_considered: number;
  links_added: number;
  links_skipped_duplicate: number;
  parameters_mapped: number;
  child_params_unmapped: number;
  per_link: LinkRecord[];
  warnings: string[];
}

export interface GenerateResponse {
  document: string;
  diff: string;
  stats: GenerateStats;
}

export interface MultiSuccessOperation {
  path: string;
  method: string;
  success_codes: string[];
}

export interface AnalyzeResponse {
  property_counts: Record<string, number>;
  property_present: Record<string, boolean>;
  multi_success_operations: MultiSuccessOperation[];
  has_any_flagged_property: boolean;
  preexisting_link_count: number;
}

export interface GenerateOptions {
  allowUnmapped?: boolean;
  format?: "json" | "yaml";
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    message: string,
    readonly line?: number,
    readonly column?: number,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  generate(source: DocumentSource, options: GenerateOptions = {}): Promise<GenerateResponse> {
    const params = new URLSearchParams();
    if (options.allowUnmapped) params.set("allow_unmapped", "true");
    if (options.format) params.set("format", options.format);
    const query = params.toString();
    return this.post<GenerateResponse>(`/api/generate${query ? `?${query}` : ""}`, source);
  }

  analyze(source: DocumentSource): Promise<AnalyzeResponse> {
    return this.post<AnalyzeResponse>("/api/analyze", source);
  }

  private async post<T>(path: string, source: DocumentSource): Promise<T> {
    let response: Response;
    try {
      response = await this.fetchFn(this.baseUrl + path, {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify(source),
      });
    } catch (err) {
      throw new ApiError(0, `request failed: ${err instanceof Error ? err.message : String(err)}`);
    }
    const text = await response.text();
    let body: unknown = null;
    try {
      body = text === "" ? null : JSON.parse(text);
    } catch {
      body = null; // non-JSON payload; fall back to the status line below
    }
    if (!response.ok) {
      throw toApiError(response.status, response.statusText, body);
    }
    if (body === null) {
      throw new ApiError(response.status, "service returned an empty or non-JSON body");
    }
    return body as T;
  }
}

function toApiError(status: number, statusText: string, body: unknown): ApiError {
  if (typeof body === "object" && body !== null) {
    const record = body as Record<string, unknown>;
    // The service reports its own failures as {error, line?, column?};
    // framework-level validation failures arrive as {detail}.
    const message =
      typeof record.error === "string"
        ? record.error
        : record.detail !== undefined
          ? JSON.stringify(record.detail)
          : `${status} ${statusText}`;
    return new ApiError(
      status,
      message,
      typeof record.line === "number" ? record.line : undefined,
      typeof record.column === "number" ? record.column : undefined,
    );
  }
  return new ApiError(status, `${status} ${statusText}`);
}
