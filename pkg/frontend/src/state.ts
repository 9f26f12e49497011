// Session model and request plumbing. History entries are immutable
// snapshots of (request, raw response text); re-running one replays the
// stored request verbatim and reports whether the service answered with
// the exact same bytes.

import type { ApiClient } from "./api.js";
import type { LrReport, LrRequestBody } from "./types.js";

export interface HistoryEntry {
  readonly id: number;
  readonly request: Readonly<LrRequestBody>;
  readonly responseText: string;
  readonly createdAt: number;
}

export interface RerunOutcome {
  identical: boolean;
  responseText: string;
}

function deepFreeze<T>(value: T): T {
  if (value && typeof value === "object") {
    for (const key of Object.keys(value as object)) {
      deepFreeze((value as Record<string, unknown>)[key]);
    }
    Object.freeze(value);
  }
  return value;
}

/** Primary LR of a stored response, for list display only. */
export function displayedLr(responseText: string): number | null {
  const parsed = JSON.parse(responseText) as LrReport | LrReport[];
  if (Array.isArray(parsed)) {
    return parsed.length === 1 && parsed[0] ? parsed[0].lr : null;
  }
  return parsed.lr;
}

export class SessionModel {
  profileText = "";
  selectedSources: string[] = [];
  pool = false;
  rankPolicy: string | undefined;
  mode: string | undefined;
  allowFallback = true;
  tlhgOverride = "";
  /** Session id of an uploaded custom distribution, if any. */
  distributionSession: string | null = null;

  private nextId = 1;
  private readonly entries: HistoryEntry[] = [];

  get history(): readonly HistoryEntry[] {
    return this.entries;
  }

  /** The request body the current panel state translates to. */
  buildLrRequest(): LrRequestBody {
    const req: LrRequestBody = { profile: this.profileText.trim() };
    if (this.selectedSources.length > 0) {
      req.sources = [...this.selectedSources];
    }
    if (this.pool) req.pool = true;
    if (this.rankPolicy) req.rank_policy = this.rankPolicy;
    if (this.mode) req.mode = this.mode;
    if (!this.allowFallback) req.allow_fallback = false;
    if (this.tlhgOverride.trim()) req.tlhg_override = this.tlhgOverride.trim();
    if (this.distributionSession) req.session = this.distributionSession;
    return req;
  }

  addHistory(request: LrRequestBody, responseText: string): HistoryEntry {
    const entry: HistoryEntry = deepFreeze({
      id: this.nextId++,
      request: deepFreeze(structuredClone(request)),
      responseText,
      createdAt: Date.now(),
    });
    this.entries.push(entry);
    return entry;
  }

  /** Replay a snapshot against the service; never mutates the entry. */
  async rerun(entry: HistoryEntry, client: ApiClient): Promise<RerunOutcome> {
    const result = await client.lr(structuredClone(
      entry.request) as LrRequestBody);
    return {
      identical: result.raw === entry.responseText,
      responseText: result.raw,
    };
  }
}

export interface QueueOutcome<T> {
  /** True when a newer request was issued before this one settled. */
  stale: boolean;
  value?: T;
  error?: unknown;
}

/**
 * Serializes the requests of one panel and tags out-of-date results.
 * Jobs run strictly one after another; a result is stale when any newer
 * job was submitted before it settled, so the panel only renders the
 * response that matches its latest input.
 */
export class PanelQueue {
  private chain: Promise<void> = Promise.resolve();
  private latestToken = 0;

  submit<T>(job: () => Promise<T>): Promise<QueueOutcome<T>> {
    const token = ++this.latestToken;
    const run = this.chain.then(async (): Promise<QueueOutcome<T>> => {
      try {
        const value = await job();
        return { stale: token !== this.latestToken, value };
      } catch (error) {
        return { stale: token !== this.latestToken, error };
      }
    });
    this.chain = run.then(() => undefined);
    return run;
  }
}
