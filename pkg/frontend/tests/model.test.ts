import { describe, expect, it } from "vitest";

import type { Association } from "../src/api.js";
import {
  ReviewQueue,
  buildQueue,
  excerptAround,
  formatScore,
  groupByResource,
  sortCandidates,
} from "../src/model.js";

function assoc(overrides: Partial<Association>): Association {
  return {
    id: "assoc:1",
    transcription: "http://sism.example/kb#tr1",
    start: 3,
    end: 12,
    surfaceForm: "phonation",
    concept: "http://sism.example/resource/t/concept/x",
    score: 0.5,
    status: "proposed",
    decidedBy: null,
    ...overrides,
  };
}

describe("sortCandidates", () => {
  it("orders by descending score", () => {
    const sorted = sortCandidates([
      assoc({ id: "a", score: 0.571 }),
      assoc({ id: "b", score: 0.871 }),
    ]);
    expect(sorted.map((c) => c.id)).toEqual(["b", "a"]);
  });

  it("breaks ties by concept IRI", () => {
    const sorted = sortCandidates([
      assoc({ id: "a", score: 0.5, concept: "http://x/b" }),
      assoc({ id: "b", score: 0.5, concept: "http://x/a" }),
    ]);
    expect(sorted.map((c) => c.concept)).toEqual(["http://x/a", "http://x/b"]);
  });

  it("does not mutate its input", () => {
    const input = [assoc({ id: "a", score: 0.1 }), assoc({ id: "b", score: 0.9 })];
    sortCandidates(input);
    expect(input[0]!.id).toBe("a");
  });
});

describe("formatScore", () => {
  it("renders exactly three decimal places", () => {
    expect(formatScore(0.8715)).toBe("0.872");
    expect(formatScore(0.5)).toBe("0.500");
    expect(formatScore(1)).toBe("1.000");
  });
});

describe("groupByResource", () => {
  it("buckets concepts per resource, preserving order", () => {
    const groups = groupByResource([
      { iri: "http://r1/a", resource: "http://r1", labels: [], entityKind: "k" },
      { iri: "http://r2/b", resource: "http://r2", labels: [], entityKind: "k" },
      { iri: "http://r1/c", resource: "http://r1", labels: [], entityKind: "k" },
    ]);
    expect([...groups.keys()]).toEqual(["http://r1", "http://r2"]);
    expect(groups.get("http://r1")!.map((c) => c.iri)).toEqual(["http://r1/a", "http://r1/c"]);
  });
});

describe("excerptAround", () => {
  it("splits on the exact offsets", () => {
    const excerpt = excerptAround("la phonation des sons", 3, 12);
    expect(excerpt).toEqual({ before: "la ", match: "phonation", after: " des sons" });
  });

  it("clips each side to the window", () => {
    const text = "un deux trois quatre cinq six sept mot huit neuf dix onze douze treize quatorze";
    const start = text.indexOf("mot");
    const excerpt = excerptAround(text, start, start + 3, 2);
    expect(excerpt.match).toBe("mot");
    expect(excerpt.before).toBe("six sept ");
    expect(excerpt.after).toBe(" huit neuf");
  });
});

describe("buildQueue", () => {
  it("groups candidates of one occurrence into one item", () => {
    const items = buildQueue([
      assoc({ id: "a", concept: "http://x/a", score: 0.571 }),
      assoc({ id: "b", concept: "http://x/b", score: 0.871 }),
    ]);
    expect(items).toHaveLength(1);
    expect(items[0]!.candidates.map((c) => c.id)).toEqual(["b", "a"]);
  });

  it("ignores decided associations", () => {
    expect(buildQueue([assoc({ status: "accepted" })])).toHaveLength(0);
  });
});

describe("ReviewQueue", () => {
  const proposed = [
    assoc({ id: "a", start: 3, end: 12, score: 0.871 }),
    assoc({ id: "b", start: 20, end: 24, surfaceForm: "mots", score: 0.4 }),
  ];

  it("advances only after the server confirms", async () => {
    const decided: string[] = [];
    const queue = new ReviewQueue(proposed, async (id, verdict) => {
      decided.push(`${id}:${verdict}`);
      return assoc({ id, status: verdict });
    });
    expect(queue.length).toBe(2);
    expect((await queue.decide("a", "accepted")).ok).toBe(true);
    expect((await queue.decide("b", "rejected")).ok).toBe(true);
    expect(queue.current()).toBeNull();
    expect(decided).toEqual(["a:accepted", "b:rejected"]);
  });

  it("keeps the item when the post fails", async () => {
    const queue = new ReviewQueue(proposed, async () => {
      throw new Error("network down");
    });
    const outcome = await queue.decide("a", "accepted");
    expect(outcome.ok).toBe(false);
    expect(outcome.conflict).toBe(false);
    expect(queue.length).toBe(2);
  });

  it("flags 409 conflicts for refresh", async () => {
    const queue = new ReviewQueue(proposed, async () => {
      const err = new Error("already decided") as Error & { code: number };
      err.code = 409;
      throw err;
    });
    const outcome = await queue.decide("a", "accepted");
    expect(outcome.conflict).toBe(true);
    queue.refresh([proposed[1]!]);
    expect(queue.length).toBe(1);
    expect(queue.current()!.surfaceForm).toBe("mots");
  });

  it("rejects ids outside the current item", async () => {
    const queue = new ReviewQueue(proposed, async (id) => assoc({ id }));
    const outcome = await queue.decide("b", "accepted");
    expect(outcome.ok).toBe(false);
    expect(queue.length).toBe(2);
  });
});
