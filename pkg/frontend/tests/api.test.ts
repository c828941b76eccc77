/** ApiClient wire behaviour: headers, query serialization, error envelopes. */

import { describe, expect, it } from "vitest";

import { ApiClient, ApiError, type FetchLike } from "../src/api";
import type { MatrixPayload } from "../src/types";
import { FakeServer } from "./fakeServer";

interface Captured {
  url: string;
  init: RequestInit;
}

function capture(
  status = 200,
  body: unknown = {},
  headers: Record<string, string> = {},
): { calls: Captured[]; fetchLike: FetchLike } {
  const calls: Captured[] = [];
  const fetchLike: FetchLike = async (url, init) => {
    calls.push({ url, init });
    return new Response(JSON.stringify(body), {
      status,
      headers: { "Content-Type": "application/json", ...headers },
    });
  };
  return { calls, fetchLike };
}

const headersOf = (call: Captured): Record<string, string> =>
  call.init.headers as Record<string, string>;

const emptyMatrix: MatrixPayload = {
  axis: [],
  names: [],
  cells: [],
  axis_tree: { roots_by_dimension: {} },
  multi_parent: [],
};

describe("headers", () => {
  it("attaches the bearer token and drops it when cleared", async () => {
    const { calls, fetchLike } = capture(200, { taxonomies: [] });
    const client = new ApiClient("/api/v1", fetchLike);
    client.setToken("tok-abc");
    await client.listTaxonomies();
    expect(headersOf(calls[0]!)["Authorization"]).toBe("Bearer tok-abc");

    client.setToken(null);
    await client.listTaxonomies();
    expect(headersOf(calls[1]!)["Authorization"]).toBeUndefined();
  });

  it("sends If-Match as a quoted integer and a JSON content type", async () => {
    const { calls, fetchLike } = capture(201, { concept: {}, version: 8 });
    const client = new ApiClient("/api/v1", fetchLike);
    await client.addConcept("t1", "d1", "Guards", { ifMatch: 7 });
    const sent = headersOf(calls[0]!);
    expect(sent["If-Match"]).toBe('"7"');
    expect(sent["Content-Type"]).toBe("application/json");
    expect(JSON.parse(calls[0]!.init.body as string)).toEqual({
      dimension_id: "d1",
      name: "Guards",
    });
  });

  it("omits If-Match unless asked for", async () => {
    const { calls, fetchLike } = capture(200, { positions: {} });
    const client = new ApiClient("/api/v1", fetchLike);
    await client.getLayout("t1");
    expect("If-Match" in headersOf(calls[0]!)).toBe(false);
  });
});

describe("ETag and X-View-Status", () => {
  const variants: [string, number][] = [
    ['"3"', 3],
    ['W/"12"', 12],
    ["7", 7],
    [' "9" ', 9],
  ];
  for (const [raw, want] of variants) {
    it(`parses ETag ${JSON.stringify(raw)} as version ${want}`, async () => {
      const { fetchLike } = capture(200, {}, { ETag: raw });
      const client = new ApiClient("/api/v1", fetchLike);
      const r = await client.getTaxonomy("t1");
      expect(r.version).toBe(want);
    });
  }

  it("yields null for a missing or malformed ETag", async () => {
    const plain = new ApiClient("/api/v1", capture(200, {}).fetchLike);
    expect((await plain.getTaxonomy("t1")).version).toBeNull();
    const junk = new ApiClient("/api/v1", capture(200, {}, { ETag: "abc" }).fetchLike);
    expect((await junk.getTaxonomy("t1")).version).toBeNull();
  });

  it("surfaces the view cache disposition", async () => {
    const { fetchLike } = capture(200, emptyMatrix, { "X-View-Status": "stale" });
    const client = new ApiClient("/api/v1", fetchLike);
    const r = await client.matrixView("t1");
    expect(r.viewStatus).toBe("stale");
  });
});

describe("query serialization", () => {
  const lastUrl = async (run: (client: ApiClient) => Promise<unknown>): Promise<URL> => {
    const { calls, fetchLike } = capture(200, emptyMatrix);
    await run(new ApiClient("/api/v1", fetchLike));
    return new URL(calls[calls.length - 1]!.url, "http://local");
  };

  it("emits every filter with the server's parameter names", async () => {
    const url = await lastUrl((c) =>
      c.matrixView("t1", {
        dimensions: ["d1", "d2"],
        subtreeRoots: ["c9"],
        yearMin: 1995,
        yearMax: 2010,
        minVotes: 2,
        tag: "control flow",
        minCell: 3,
        stale: true,
      }),
    );
    expect(url.pathname).toBe("/api/v1/taxonomies/t1/views/matrix");
    const p = url.searchParams;
    expect(p.get("dimensions")).toBe("d1,d2");
    expect(p.get("subtree_roots")).toBe("c9");
    expect(p.get("year_min")).toBe("1995");
    expect(p.get("year_max")).toBe("2010");
    expect(p.get("min_votes")).toBe("2");
    expect(p.get("tag")).toBe("control flow");
    expect(p.get("min_cell")).toBe("3");
    expect(p.get("stale")).toBe("true");
  });

  it("sends no query string when no filters are set", async () => {
    const url = await lastUrl((c) => c.matrixView("t1"));
    expect(url.search).toBe("");
  });

  it("surface view always carries the z property", async () => {
    const url = await lastUrl((c) => c.surfaceView("t1", "citation_sum", { minCell: 1 }));
    expect(url.searchParams.get("z")).toBe("citation_sum");
    expect(url.searchParams.get("min_cell")).toBe("1");
  });

  it("percent-encodes path segments such as tag keywords", async () => {
    const { calls, fetchLike } = capture(200, {});
    await new ApiClient("/api/v1", fetchLike).untagPaper("p1", "control flow");
    expect(calls[0]!.url).toBe("/api/v1/papers/p1/tags/control%20flow");
    expect(calls[0]!.init.method).toBe("DELETE");
  });
});

describe("error envelopes", () => {
  it("raises ApiError carrying status, code, message, and details", async () => {
    const { fetchLike } = capture(409, {
      code: "version_conflict",
      message: "taxonomy changed since it was read",
      details: { expected_version: 1, current_version: 5 },
    });
    const client = new ApiClient("/api/v1", fetchLike);
    const failure = client.setPublic("t1", true, { ifMatch: 1 });
    await expect(failure).rejects.toBeInstanceOf(ApiError);
    const err = (await failure.catch((e) => e)) as ApiError;
    expect(err.status).toBe(409);
    expect(err.code).toBe("version_conflict");
    expect(err.message).toBe("taxonomy changed since it was read");
    expect(err.details).toEqual({ expected_version: 1, current_version: 5 });
  });

  it("defaults details to an empty object", async () => {
    const { fetchLike } = capture(404, { code: "not_found", message: "gone" });
    const client = new ApiClient("/api/v1", fetchLike);
    const err = (await client.getTaxonomy("zz").catch((e) => e)) as ApiError;
    expect(err.details).toEqual({});
  });
});

describe("against the fake server", () => {
  it("login stores the token; authenticated reads then succeed", async () => {
    const server = new FakeServer();
    const client = new ApiClient("/api/v1", server.fetch);
    await expect(client.getTaxonomy("tax-1")).rejects.toMatchObject({ code: "auth_required" });

    const login = await client.login("ada", "pw");
    expect(login.token).toMatch(/^token-/);
    expect(client.authenticated).toBe(true);

    const detail = await client.getTaxonomy("tax-1");
    expect(detail.version).toBe(1);
    expect(detail.payload.name).toBe("Fake");
    expect(server.requestLog).toContain("GET /taxonomies/tax-1");
  });

  it("vote and tag posts round-trip their payloads", async () => {
    const server = new FakeServer();
    server.addPaper({ id: "p1", title: "Watermarking" });
    const client = new ApiClient("/api/v1", server.fetch);
    await client.login("ada", "pw");

    const vote = await client.castVote("p1", "include", "solid evaluation");
    expect(vote).toEqual({ reviewer_id: "fake-user", value: "include", note: "solid evaluation" });

    const first = await client.tagPaper("p1", "watermarking");
    expect(first.created).toBe(true);
    const again = await client.tagPaper("p1", "Watermarking");
    expect(again.created).toBe(false);
  });
});
