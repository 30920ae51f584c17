/**
 * Pure view-model logic: candidate ordering, score formatting, occurrence
 * excerpts, and the review-queue state machine. No DOM, no network.
 */

import type { Association, ConceptSummary } from "./api.js";

/** Descending by score; ties broken by concept IRI so order is total. */
export function sortCandidates(candidates: Association[]): Association[] {
  return [...candidates].sort((a, b) => {
    if (a.score !== b.score) {
      return b.score - a.score;
    }
    return a.concept < b.concept ? -1 : a.concept > b.concept ? 1 : 0;
  });
}

/** Scores render with exactly three decimal places, matching the API value. */
export function formatScore(score: number): string {
  return score.toFixed(3);
}

export function groupByResource(concepts: ConceptSummary[]): Map<string, ConceptSummary[]> {
  const groups = new Map<string, ConceptSummary[]>();
  for (const concept of concepts) {
    const bucket = groups.get(concept.resource);
    if (bucket) {
      bucket.push(concept);
    } else {
      groups.set(concept.resource, [concept]);
    }
  }
  return groups;
}

export interface Excerpt {
  before: string;
  match: string;
  after: string;
}

const WORD = /[\p{L}\p{N}_]+/gu;

/**
 * Split the transcription around the occurrence using only API offsets, then
 * clip each side to the given number of word tokens.
 */
export function excerptAround(text: string, start: number, end: number, window = 5): Excerpt {
  const clip = (side: string, keepTail: boolean): string => {
    const tokens = [...side.matchAll(WORD)];
    if (tokens.length <= window) {
      return side;
    }
    const kept = keepTail ? tokens.slice(-window) : tokens.slice(0, window);
    if (keepTail) {
      const first = kept[0]!;
      return side.slice(first.index!);
    }
    const last = kept[kept.length - 1]!;
    return side.slice(0, last.index! + last[0].length);
  };
  return {
    before: clip(text.slice(0, start), true),
    match: text.slice(start, end),
    after: clip(text.slice(end), false),
  };
}

/** One review item: an occurrence plus its ranked candidate senses. */
export interface ReviewItem {
  transcription: string;
  start: number;
  end: number;
  surfaceForm: string;
  candidates: Association[];
}

/** Group proposed associations into per-occurrence review items. */
export function buildQueue(proposed: Association[]): ReviewItem[] {
  const keyed = new Map<string, ReviewItem>();
  for (const a of proposed) {
    if (a.status !== "proposed") {
      continue;
    }
    const key = `${a.transcription}|${a.start}|${a.end}`;
    const item = keyed.get(key);
    if (item) {
      item.candidates.push(a);
    } else {
      keyed.set(key, {
        transcription: a.transcription,
        start: a.start,
        end: a.end,
        surfaceForm: a.surfaceForm,
        candidates: [a],
      });
    }
  }
  const items = [...keyed.values()];
  for (const item of items) {
    item.candidates = sortCandidates(item.candidates);
  }
  items.sort((x, y) =>
    x.transcription === y.transcription ? x.start - y.start
      : x.transcription < y.transcription ? -1 : 1);
  return items;
}

export type DecideFn = (
  id: string,
  verdict: "accepted" | "rejected",
) => Promise<Association>;

export interface DecisionOutcome {
  ok: boolean;
  conflict: boolean;
  message?: string;
}

/**
 * Review-queue state machine: decisions advance the queue only after the
 * server confirms; a 409 marks the item stale so the caller refreshes it.
 */
export class ReviewQueue {
  private items: ReviewItem[];

  constructor(proposed: Association[], private readonly decideFn: DecideFn) {
    this.items = buildQueue(proposed);
  }

  get length(): number {
    return this.items.length;
  }

  current(): ReviewItem | null {
    return this.items[0] ?? null;
  }

  async decide(candidateId: string, verdict: "accepted" | "rejected"): Promise<DecisionOutcome> {
    const item = this.current();
    if (!item || !item.candidates.some((c) => c.id === candidateId)) {
      return { ok: false, conflict: false, message: "no such candidate in the current item" };
    }
    try {
      await this.decideFn(candidateId, verdict);
    } catch (err: unknown) {
      const conflict = typeof err === "object" && err !== null
        && (err as { code?: number }).code === 409;
      return {
        ok: false,
        conflict,
        message: err instanceof Error ? err.message : String(err),
      };
    }
    this.items.shift();
    return { ok: true, conflict: false };
  }

  /** Replace a stale item's candidates after a 409 refresh. */
  refresh(proposed: Association[]): void {
    this.items = buildQueue(proposed);
  }
}
