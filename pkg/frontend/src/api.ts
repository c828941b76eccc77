/** Typed JSON client for the /api/v1 service.
 *
 * Every call goes through one request helper that attaches the bearer token,
 * serializes the body, raises `ApiError` with the server's error envelope on
 * non-2xx responses, and surfaces the `ETag`/`X-View-Status` headers that
 * carry version and cache information.
 */

import type {
  CirclesPayload,
  CoveragePayload,
  Concept,
  Dimension,
  ErrorEnvelope,
  LoginResult,
  Mapping,
  MatrixPayload,
  MergeReport,
  HierarchyPayload,
  PaperRecord,
  Relation,
  SuggestionReport,
  SurfacePayload,
  Tag,
  TaxonomyDetail,
  TaxonomyDocument,
  TaxonomySummary,
  Vote,
} from "./types";

export type FetchLike = (url: string, init: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  readonly status: number;
  readonly code: string;
  readonly details: Record<string, unknown>;

  constructor(status: number, envelope: ErrorEnvelope) {
    super(envelope.message);
    this.name = "ApiError";
    this.status = status;
    this.code = envelope.code;
    this.details = envelope.details ?? {};
  }
}

export interface Versioned<T> {
  payload: T;
  /** Taxonomy version parsed from the ETag header, if present. */
  version: number | null;
  /** View cache disposition: built | hit | stale (views only). */
  viewStatus: string | null;
}

export interface ViewQuery {
  dimensions?: string[];
  subtreeRoots?: string[];
  yearMin?: number;
  yearMax?: number;
  minVotes?: number;
  tag?: string;
  minCell?: number;
  stale?: boolean;
}

export interface RequestOptions {
  /** Send `If-Match: "<version>"` so the server rejects stale writes. */
  ifMatch?: number;
}

function parseEtag(value: string | null): number | null {
  if (!value) return null;
  const match = /^(?:W\/)?"?(\d+)"?$/.exec(value.trim());
  return match && match[1] !== undefined ? Number(match[1]) : null;
}

function viewParams(query: ViewQuery): URLSearchParams {
  const params = new URLSearchParams();
  if (query.dimensions?.length) params.set("dimensions", query.dimensions.join(","));
  if (query.subtreeRoots?.length) params.set("subtree_roots", query.subtreeRoots.join(","));
  if (query.yearMin !== undefined) params.set("year_min", String(query.yearMin));
  if (query.yearMax !== undefined) params.set("year_max", String(query.yearMax));
  if (query.minVotes !== undefined) params.set("min_votes", String(query.minVotes));
  if (query.tag !== undefined) params.set("tag", query.tag);
  if (query.minCell !== undefined) params.set("min_cell", String(query.minCell));
  if (query.stale) params.set("stale", "true");
  return params;
}

export class ApiClient {
  private token: string | null = null;

  constructor(
    private readonly baseUrl: string = "/api/v1",
    private readonly fetchLike: FetchLike = (url, init) => globalThis.fetch(url, init),
  ) {}

  setToken(token: string | null): void {
    this.token = token;
  }

  get authenticated(): boolean {
    return this.token !== null;
  }

  private async request<T>(
    method: string,
    path: string,
    body?: unknown,
    options: RequestOptions = {},
  ): Promise<Versioned<T>> {
    const headers: Record<string, string> = { Accept: "application/json" };
    if (body !== undefined) headers["Content-Type"] = "application/json";
    if (this.token) headers["Authorization"] = `Bearer ${this.token}`;
    if (options.ifMatch !== undefined) headers["If-Match"] = `"${options.ifMatch}"`;
    const response = await this.fetchLike(`${this.baseUrl}${path}`, {
      method,
      headers,
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const version = parseEtag(response.headers.get("ETag"));
    const viewStatus = response.headers.get("X-View-Status");
    if (!response.ok) {
      const envelope = (await response.json()) as ErrorEnvelope;
      throw new ApiError(response.status, envelope);
    }
    return { payload: (await response.json()) as T, version, viewStatus };
  }

  // -- auth ------------------------------------------------------------------

  async register(username: string, password: string): Promise<{ username: string }> {
    const r = await this.request<{ username: string }>("POST", "/auth/register", {
      username,
      password,
    });
    return r.payload;
  }

  async login(username: string, password: string): Promise<LoginResult> {
    const r = await this.request<LoginResult>("POST", "/auth/login", { username, password });
    this.token = r.payload.token;
    return r.payload;
  }

  async logout(): Promise<void> {
    await this.request("POST", "/auth/logout");
    this.token = null;
  }

  // -- taxonomy lifecycle ------------------------------------------------------

  async listTaxonomies(): Promise<TaxonomySummary[]> {
    const r = await this.request<{ taxonomies: TaxonomySummary[] }>("GET", "/taxonomies");
    return r.payload.taxonomies;
  }

  async createTaxonomy(name: string): Promise<TaxonomySummary> {
    const r = await this.request<TaxonomySummary>("POST", "/taxonomies", { name });
    return r.payload;
  }

  async getTaxonomy(id: string): Promise<Versioned<TaxonomyDetail>> {
    return this.request<TaxonomyDetail>("GET", `/taxonomies/${id}`);
  }

  async deleteTaxonomy(id: string): Promise<void> {
    await this.request("DELETE", `/taxonomies/${id}`);
  }

  async forkTaxonomy(id: string, name?: string): Promise<TaxonomySummary> {
    const r = await this.request<TaxonomySummary>("POST", `/taxonomies/${id}/fork`, {
      name: name ?? null,
    });
    return r.payload;
  }

  async mergeFork(
    id: string,
    forkId: string,
    options: RequestOptions = {},
  ): Promise<{ report: MergeReport; version: number }> {
    const r = await this.request<{ report: MergeReport; version: number }>(
      "POST",
      `/taxonomies/${id}/merge`,
      { fork_id: forkId },
      options,
    );
    return r.payload;
  }

  async setPublic(id: string, isPublic: boolean, options: RequestOptions = {}): Promise<number> {
    const r = await this.request<{ version: number }>(
      "POST",
      `/taxonomies/${id}/public`,
      { public: isPublic },
      options,
    );
    return r.payload.version;
  }

  async exportDocument(id: string): Promise<Versioned<TaxonomyDocument>> {
    return this.request<TaxonomyDocument>("GET", `/taxonomies/${id}/document`);
  }

  async importDocument(document: TaxonomyDocument, replace = false): Promise<TaxonomySummary> {
    const r = await this.request<TaxonomySummary>("POST", "/taxonomies/import", {
      document,
      replace,
    });
    return r.payload;
  }

  // -- structure ---------------------------------------------------------------

  async addDimension(
    id: string,
    name: string,
    options: RequestOptions = {},
  ): Promise<{ dimension: Dimension; version: number }> {
    const r = await this.request<{ dimension: Dimension; version: number }>(
      "POST",
      `/taxonomies/${id}/dimensions`,
      { name, description: "" },
      options,
    );
    return r.payload;
  }

  async addConcept(
    id: string,
    dimensionId: string,
    name: string,
    options: RequestOptions = {},
  ): Promise<{ concept: Concept; version: number }> {
    const r = await this.request<{ concept: Concept; version: number }>(
      "POST",
      `/taxonomies/${id}/concepts`,
      { dimension_id: dimensionId, name },
      options,
    );
    return r.payload;
  }

  async patchConcept(
    id: string,
    conceptId: string,
    patch: { name?: string; kind?: string; notes?: string },
    options: RequestOptions = {},
  ): Promise<{ concept: Concept; version: number }> {
    const r = await this.request<{ concept: Concept; version: number }>(
      "PATCH",
      `/taxonomies/${id}/concepts/${conceptId}`,
      patch,
      options,
    );
    return r.payload;
  }

  async removeConcept(
    id: string,
    conceptId: string,
    options: RequestOptions = {},
  ): Promise<number> {
    const r = await this.request<{ version: number }>(
      "DELETE",
      `/taxonomies/${id}/concepts/${conceptId}`,
      undefined,
      options,
    );
    return r.payload.version;
  }

  async addRelation(
    id: string,
    sourceId: string,
    targetId: string,
    relType = "unspecified",
    options: RequestOptions = {},
  ): Promise<{ relation: Relation; version: number }> {
    const r = await this.request<{ relation: Relation; version: number }>(
      "POST",
      `/taxonomies/${id}/relations`,
      { source_id: sourceId, target_id: targetId, rel_type: relType },
      options,
    );
    return r.payload;
  }

  async hierarchy(id: string): Promise<HierarchyPayload> {
    const r = await this.request<HierarchyPayload>("GET", `/taxonomies/${id}/hierarchy`);
    return r.payload;
  }

  async getLayout(id: string): Promise<Record<string, [number, number]>> {
    const r = await this.request<{ positions: Record<string, [number, number]> }>(
      "GET",
      `/taxonomies/${id}/layout`,
    );
    return r.payload.positions;
  }

  async putLayout(
    id: string,
    positions: Record<string, [number, number]>,
    options: RequestOptions = {},
  ): Promise<number> {
    const r = await this.request<{ version: number }>(
      "PUT",
      `/taxonomies/${id}/layout`,
      { positions },
      options,
    );
    return r.payload.version;
  }

  // -- papers and mappings --------------------------------------------------------

  async registerPaper(
    id: string,
    paper: Partial<PaperRecord> & { title: string },
    options: RequestOptions = {},
  ): Promise<{ paper: PaperRecord; version: number }> {
    const r = await this.request<{ paper: PaperRecord; version: number }>(
      "POST",
      `/taxonomies/${id}/papers`,
      paper,
      options,
    );
    return r.payload;
  }

  async mapPaper(
    id: string,
    paperId: string,
    conceptId: string,
    options: RequestOptions = {},
  ): Promise<{ mapping: Mapping; version: number }> {
    const r = await this.request<{ mapping: Mapping; version: number }>(
      "POST",
      `/taxonomies/${id}/mappings`,
      { paper_id: paperId, concept_id: conceptId },
      options,
    );
    return r.payload;
  }

  async suggest(
    id: string,
    body: {
      method?: string;
      threshold?: number;
      min_occurrences?: number;
      use_synonyms?: boolean;
      paper_ids?: string[];
      dry_run?: boolean;
    } = {},
    options: RequestOptions = {},
  ): Promise<SuggestionReport> {
    const r = await this.request<SuggestionReport>(
      "POST",
      `/taxonomies/${id}/suggestions`,
      body,
      options,
    );
    return r.payload;
  }

  // -- derived views -----------------------------------------------------------

  async matrixView(id: string, query: ViewQuery = {}): Promise<Versioned<MatrixPayload>> {
    const qs = viewParams(query).toString();
    const suffix = qs ? `?${qs}` : "";
    return this.request<MatrixPayload>("GET", `/taxonomies/${id}/views/matrix${suffix}`);
  }

  async surfaceView(
    id: string,
    z: string,
    query: ViewQuery = {},
  ): Promise<Versioned<SurfacePayload>> {
    const params = viewParams(query);
    params.set("z", z);
    return this.request<SurfacePayload>("GET", `/taxonomies/${id}/views/surface?${params}`);
  }

  async circlesView(id: string, stale = false): Promise<Versioned<CirclesPayload>> {
    const suffix = stale ? "?stale=true" : "";
    return this.request<CirclesPayload>("GET", `/taxonomies/${id}/views/circles${suffix}`);
  }

  async coverageView(id: string, stale = false): Promise<Versioned<CoveragePayload>> {
    const suffix = stale ? "?stale=true" : "";
    return this.request<CoveragePayload>("GET", `/taxonomies/${id}/views/coverage${suffix}`);
  }

  // -- review board -------------------------------------------------------------

  async listPapers(): Promise<PaperRecord[]> {
    const r = await this.request<{ papers: PaperRecord[] }>("GET", "/papers");
    return r.payload.papers;
  }

  async importPapers(
    records: Partial<PaperRecord>[],
  ): Promise<{ created: PaperRecord[]; rejections: { record: unknown; reason: string }[] }> {
    const r = await this.request<{
      created: PaperRecord[];
      rejections: { record: unknown; reason: string }[];
    }>("POST", "/papers", { records });
    return r.payload;
  }

  async importBibtex(text: string): Promise<{ created: PaperRecord[] }> {
    const r = await this.request<{ created: PaperRecord[] }>("POST", "/papers/bibtex", { text });
    return r.payload;
  }

  async shortlist(minVotes: number): Promise<PaperRecord[]> {
    const r = await this.request<{ papers: PaperRecord[] }>(
      "GET",
      `/papers/shortlist?min_votes=${minVotes}`,
    );
    return r.payload.papers;
  }

  async castVote(paperId: string, value: "include" | "exclude", note = ""): Promise<Vote> {
    const r = await this.request<{ vote: Vote }>("POST", `/papers/${paperId}/votes`, {
      value,
      note,
    });
    return r.payload.vote;
  }

  async tagPaper(paperId: string, keyword: string, note = ""): Promise<{ tag: Tag; created: boolean }> {
    const r = await this.request<{ tag: Tag; created: boolean }>(
      "POST",
      `/papers/${paperId}/tags`,
      { keyword, note },
    );
    return r.payload;
  }

  async untagPaper(paperId: string, keyword: string): Promise<void> {
    await this.request("DELETE", `/papers/${paperId}/tags/${encodeURIComponent(keyword)}`);
  }
}
