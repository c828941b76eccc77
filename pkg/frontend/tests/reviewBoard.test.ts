/** Screening board view model against the fake /api/v1 server. */

import { beforeEach, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api";
import { ReviewBoardModel, toRow } from "../src/reviewBoard";
import type { PaperRecord } from "../src/types";
import { FakeServer } from "./fakeServer";

function paper(overrides: Partial<PaperRecord> & { id: string; title: string }): PaperRecord {
  return {
    abstract: "",
    authors: [],
    year: null,
    doi: null,
    citation_count: 0,
    body_text: "",
    tags: [],
    votes: [],
    ...overrides,
  };
}

describe("toRow", () => {
  it("counts include and exclude votes separately and lists keywords", () => {
    const row = toRow(
      paper({
        id: "p1",
        title: "Watermarking",
        votes: [
          { reviewer_id: "a", value: "include", note: "" },
          { reviewer_id: "b", value: "include", note: "" },
          { reviewer_id: "c", value: "exclude", note: "weak eval" },
        ],
        tags: [
          { keyword: "watermarking", note: "" },
          { keyword: "dynamic", note: "" },
        ],
      }),
    );
    expect(row.includeVotes).toBe(2);
    expect(row.excludeVotes).toBe(1);
    expect(row.keywords).toEqual(["watermarking", "dynamic"]);
  });
});

describe("ReviewBoardModel", () => {
  let server: FakeServer;
  let board: ReviewBoardModel;

  beforeEach(async () => {
    server = new FakeServer();
    server.addPaper({
      id: "p1",
      title: "Obfuscation survey",
      votes: [
        { reviewer_id: "a", value: "include", note: "" },
        { reviewer_id: "b", value: "include", note: "" },
      ],
      tags: [
        { keyword: "obfuscation", note: "" },
        { keyword: "Survey", note: "" },
      ],
    });
    server.addPaper({
      id: "p2",
      title: "Guards in practice",
      votes: [{ reviewer_id: "a", value: "include", note: "" }],
      tags: [{ keyword: "guards", note: "" }],
    });
    server.addPaper({
      id: "p3",
      title: "Off-topic essay",
      votes: [{ reviewer_id: "a", value: "exclude", note: "" }],
      tags: [{ keyword: "survey", note: "" }],
    });
    const client = new ApiClient("/api/v1", server.fetch);
    await client.login("ada", "pw");
    board = new ReviewBoardModel(client);
  });

  it("refresh lists every paper through the plain papers route", async () => {
    const rows = await board.refresh();
    expect(rows.map((r) => r.paper.id).sort()).toEqual(["p1", "p2", "p3"]);
    expect(server.requestLog).toContain("GET /papers");
    expect(server.requestLog.some((line) => line.includes("shortlist"))).toBe(false);
  });

  it("a positive threshold switches to the shortlist route and filters rows", async () => {
    const rows = await board.setThreshold(2);
    expect(server.requestLog).toContain("GET /papers/shortlist?min_votes=2");
    expect(rows.map((r) => r.paper.id)).toEqual(["p1"]);

    const relaxed = await board.setThreshold(1);
    expect(relaxed.map((r) => r.paper.id).sort()).toEqual(["p1", "p2"]);

    const everyone = await board.setThreshold(0);
    expect(everyone.length).toBe(3);
    // back to the unfiltered route, not shortlist?min_votes=0
    expect(server.requestLog[server.requestLog.length - 1]).toBe("GET /papers");
  });

  it("voting upserts per reviewer instead of stacking votes", async () => {
    await board.refresh();
    await board.vote("p2", "include");
    let row = board.rows.find((r) => r.paper.id === "p2")!;
    expect(row.includeVotes).toBe(2); // reviewer "a" + fake-user

    await board.vote("p2", "exclude");
    row = board.rows.find((r) => r.paper.id === "p2")!;
    expect(row.includeVotes).toBe(1);
    expect(row.excludeVotes).toBe(1);
  });

  it("tagging refreshes rows and the histogram folds case", async () => {
    await board.refresh();
    await board.tag("p2", "Survey");
    const histogram = board.keywordHistogram();
    expect(histogram[0]).toEqual(["survey", 3]);
    expect(histogram).toContainEqual(["guards", 1]);
    expect(histogram).toContainEqual(["obfuscation", 1]);
    // ties broken alphabetically
    const ones = histogram.filter(([, count]) => count === 1).map(([k]) => k);
    expect(ones).toEqual([...ones].sort());
  });

  it("importBibtex creates one paper per entry and refreshes", async () => {
    const text = [
      "@article{collberg1998,",
      "  title = {Manufacturing Cheap, Resilient, and Stealthy Opaque Constructs},",
      "  year = {1998}",
      "}",
      "@inproceedings{chang2001,",
      '  title = "Protecting Software Code by Guards",',
      "}",
    ].join("\n");
    const created = await board.importBibtex(text);
    expect(created).toBe(2);
    expect(board.rows.length).toBe(5);
    const titles = board.rows.map((r) => r.paper.title);
    expect(titles).toContain("Protecting Software Code by Guards");
  });
});
