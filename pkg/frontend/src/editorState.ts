/** Optimistic-concurrency editing session for one taxonomy.
 *
 * Every edit is sent with `If-Match` set to the version this tab last saw.
 * When another tab (or user) changed the taxonomy in between, the server
 * answers 409 version_conflict; the editor then parks the rejected edit and
 * surfaces a prompt instead of silently overwriting. The user chooses:
 *
 *  - `retryOnLatest()` — refresh to the server's current version and replay
 *    the parked edit on top of it, or
 *  - `discardPending()` — drop the parked edit and just refresh.
 *
 * Edits are serialized: while one is in flight the next ones queue.
 */

import { ApiClient, ApiError } from "./api";
import type { TaxonomyDetail } from "./types";

export type EditorPhase = "idle" | "loading" | "saving" | "conflict";

/** One queued edit: receives the at-save version to send as If-Match. */
export type Edit = (ifMatch: number) => Promise<{ version: number }>;

export interface ConflictPrompt {
  /** Version this tab based its edit on (what If-Match carried). */
  expectedVersion: number;
  /** Version the server actually holds now. */
  currentVersion: number;
  /** Human-readable label of the rejected edit. */
  label: string;
}

interface PendingEdit {
  run: Edit;
  label: string;
  resolve: (version: number) => void;
  reject: (error: unknown) => void;
}

export class TaxonomyEditor {
  phase: EditorPhase = "idle";
  detail: TaxonomyDetail | null = null;
  /** Set while phase === "conflict"; cleared by either resolution. */
  prompt: ConflictPrompt | null = null;

  private version = 0;
  private parked: PendingEdit | null = null;
  private queue: PendingEdit[] = [];
  private draining = false;
  private listeners: (() => void)[] = [];

  constructor(
    private readonly api: ApiClient,
    readonly taxonomyId: string,
  ) {}

  /** Version this tab believes the taxonomy is at. */
  get knownVersion(): number {
    return this.version;
  }

  onChange(listener: () => void): void {
    this.listeners.push(listener);
  }

  private notify(): void {
    for (const listener of this.listeners) listener();
  }

  async load(): Promise<TaxonomyDetail> {
    this.phase = "loading";
    this.notify();
    const { payload, version } = await this.api.getTaxonomy(this.taxonomyId);
    this.detail = payload;
    this.version = version ?? payload.version;
    this.phase = "idle";
    this.notify();
    return payload;
  }

  /**
   * Queue an edit. Resolves with the post-edit version once the server
   * accepts it; rejects if the edit is discarded at a conflict prompt or
   * fails for a non-conflict reason.
   */
  save(label: string, run: Edit): Promise<number> {
    return new Promise<number>((resolve, reject) => {
      this.queue.push({ run, label, resolve, reject });
      void this.drain();
    });
  }

  private async drain(): Promise<void> {
    if (this.draining) return;
    this.draining = true;
    try {
      while (this.queue.length > 0) {
        // attempt() mutates phase, so re-read it with its declared type each pass
        const phase: EditorPhase = this.phase;
        if (phase === "conflict") break;
        const edit = this.queue.shift()!;
        await this.attempt(edit);
      }
    } finally {
      this.draining = false;
    }
  }

  private async attempt(edit: PendingEdit): Promise<void> {
    this.phase = "saving";
    this.notify();
    try {
      const { version } = await edit.run(this.version);
      this.version = version;
      this.phase = "idle";
      this.notify();
      edit.resolve(version);
    } catch (error) {
      if (error instanceof ApiError && error.code === "version_conflict") {
        const details = error.details as {
          expected_version?: number;
          current_version?: number;
        };
        this.parked = edit;
        this.prompt = {
          expectedVersion: details.expected_version ?? this.version,
          currentVersion: details.current_version ?? this.version,
          label: edit.label,
        };
        this.phase = "conflict";
        this.notify();
        return;
      }
      this.phase = "idle";
      this.notify();
      edit.reject(error);
    }
  }

  /** Refresh to the server's version and replay the parked edit on top. */
  async retryOnLatest(): Promise<void> {
    const edit = this.takeParked();
    await this.reloadAfterConflict();
    await this.attempt(edit);
    void this.drain();
  }

  /** Drop the parked edit (its save() promise rejects) and refresh. */
  async discardPending(): Promise<void> {
    const edit = this.takeParked();
    await this.reloadAfterConflict();
    edit.reject(new Error(`discarded: ${edit.label}`));
    void this.drain();
  }

  private takeParked(): PendingEdit {
    if (this.phase !== "conflict" || this.parked === null) {
      throw new Error("no conflict to resolve");
    }
    const edit = this.parked;
    this.parked = null;
    this.prompt = null;
    return edit;
  }

  private async reloadAfterConflict(): Promise<void> {
    this.phase = "loading";
    this.notify();
    const { payload, version } = await this.api.getTaxonomy(this.taxonomyId);
    this.detail = payload;
    this.version = version ?? payload.version;
    this.phase = "idle";
    this.notify();
  }
}
