// Fetch client for the workbench service.  Structural state never lives
// here: every view change round-trips through /view with new options.

import type {
  DbInfo,
  SearchResponse,
  TransformResponse,
  ViewQuery,
  ViewResponse,
} from "./types.js";

export class StaleRevisionError extends Error {
  constructor(public revision: number) {
    super(`database revision changed (now ${revision})`);
  }
}

export class ApiError extends Error {
  constructor(public status: number, public reason: string, message: string) {
    super(message);
  }
}

async function fail(res: Response): Promise<never> {
  let reason = "error";
  let message = `${res.status}`;
  let revision = -1;
  try {
    const body = await res.json();
    reason = body.detail?.reason ?? reason;
    message = body.detail?.message ?? message;
    revision = body.detail?.revision ?? revision;
  } catch {
    /* non-JSON error body */
  }
  if (res.status === 409) throw new StaleRevisionError(revision);
  throw new ApiError(res.status, reason, message);
}

function viewParams(q: ViewQuery): URLSearchParams {
  const params = new URLSearchParams();
  if (q.n !== undefined) params.set("n", String(q.n));
  if (q.hideStructural) params.set("hideStructural", "true");
  if (q.hideContext) params.set("hideContext", "true");
  if (q.markCutAncestors) params.set("markCutAncestors", "true");
  if (q.focus) params.set("focus", q.focus);
  if (q.hidden && q.hidden.length) params.set("hidden", q.hidden.join(","));
  return params;
}

export class ApiClient {
  constructor(private base: string = "") {}

  private async get<T>(path: string, signal?: AbortSignal): Promise<T> {
    const res = await fetch(this.base + path, { signal });
    if (!res.ok) await fail(res);
    return res.json() as Promise<T>;
  }

  getDb(): Promise<DbInfo> {
    return this.get<DbInfo>("/api/db");
  }

  async loadPath(path: string): Promise<number> {
    const res = await fetch(this.base + "/api/db/load", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ path }),
    });
    if (!res.ok) await fail(res);
    return (await res.json()).revision as number;
  }

  async loadText(text: string, format: string = "auto"): Promise<number> {
    const res = await fetch(this.base + "/api/db/load", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ text, format }),
    });
    if (!res.ok) await fail(res);
    return (await res.json()).revision as number;
  }

  getView(name: string, q: ViewQuery, signal?: AbortSignal): Promise<ViewResponse> {
    const params = viewParams(q);
    const suffix = params.toString() ? `?${params}` : "";
    return this.get<ViewResponse>(
      `/api/object/${encodeURIComponent(name)}/view${suffix}`,
      signal,
    );
  }

  search(name: string, query: string, q: ViewQuery): Promise<SearchResponse> {
    const params = viewParams(q);
    params.set("q", query);
    return this.get<SearchResponse>(
      `/api/object/${encodeURIComponent(name)}/search?${params}`,
    );
  }

  async transform(
    name: string,
    op: string,
    n?: number,
    revision?: number,
  ): Promise<TransformResponse> {
    const body: Record<string, unknown> = { op };
    if (n !== undefined) body.n = n;
    if (revision !== undefined) body.revision = revision;
    const res = await fetch(
      this.base + `/api/proof/${encodeURIComponent(name)}/transform`,
      {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify(body),
      },
    );
    if (!res.ok) await fail(res);
    return res.json() as Promise<TransformResponse>;
  }

  exportUrl(name: string, format: string, n?: number): string {
    const params = new URLSearchParams({ format });
    if (n !== undefined) params.set("n", String(n));
    return this.base + `/api/object/${encodeURIComponent(name)}/export?${params}`;
  }
}
