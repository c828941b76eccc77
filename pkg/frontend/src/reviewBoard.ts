/** View model for the screening board: papers, votes, tags, shortlist. */

import { ApiClient } from "./api";
import type { PaperRecord } from "./types";

export interface PaperRow {
  paper: PaperRecord;
  includeVotes: number;
  excludeVotes: number;
  keywords: string[];
}

export function toRow(paper: PaperRecord): PaperRow {
  return {
    paper,
    includeVotes: paper.votes.filter((v) => v.value === "include").length,
    excludeVotes: paper.votes.filter((v) => v.value === "exclude").length,
    keywords: paper.tags.map((t) => t.keyword),
  };
}

export class ReviewBoardModel {
  rows: PaperRow[] = [];
  minVotes = 0;

  constructor(private readonly api: ApiClient) {}

  async refresh(): Promise<PaperRow[]> {
    const papers = this.minVotes > 0 ? await this.api.shortlist(this.minVotes) : await this.api.listPapers();
    this.rows = papers.map(toRow);
    return this.rows;
  }

  async setThreshold(minVotes: number): Promise<PaperRow[]> {
    this.minVotes = Math.max(0, minVotes);
    return this.refresh();
  }

  async vote(paperId: string, value: "include" | "exclude"): Promise<void> {
    await this.api.castVote(paperId, value);
    await this.refresh();
  }

  async tag(paperId: string, keyword: string): Promise<void> {
    await this.api.tagPaper(paperId, keyword);
    await this.refresh();
  }

  async importBibtex(text: string): Promise<number> {
    const result = await this.api.importBibtex(text);
    await this.refresh();
    return result.created.length;
  }

  /** Distinct keywords with usage counts, most frequent first. */
  keywordHistogram(): [string, number][] {
    const counts = new Map<string, number>();
    for (const row of this.rows) {
      for (const keyword of row.keywords) {
        const folded = keyword.toLowerCase();
        counts.set(folded, (counts.get(folded) ?? 0) + 1);
      }
    }
    return [...counts.entries()].sort((a, b) => b[1] - a[1] || a[0].localeCompare(b[0]));
  }
}
