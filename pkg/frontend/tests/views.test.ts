import { describe, expect, it } from "vitest";

import type { Association, ConceptDetail, TimelineView } from "../src/api.js";
import { buildQueue } from "../src/model.js";
import {
  escapeHtml,
  renderConceptCards,
  renderConceptDetail,
  renderError,
  renderReviewItem,
  renderTimeline,
} from "../src/views.js";

function assoc(overrides: Partial<Association>): Association {
  return {
    id: "assoc:1",
    transcription: "http://sism.example/kb#tr1",
    start: 3,
    end: 12,
    surfaceForm: "phonation",
    concept: "http://sism.example/resource/t/concept/x",
    score: 0.8715,
    status: "proposed",
    decidedBy: null,
    ...overrides,
  };
}

describe("escapeHtml", () => {
  it("escapes markup and quotes", () => {
    expect(escapeHtml(`<b a="x">&'`)).toBe("&lt;b a=&quot;x&quot;&gt;&amp;&#39;");
  });
});

describe("renderConceptCards", () => {
  it("renders one card per concept, grouped by resource", () => {
    const html = renderConceptCards([
      {
        iri: "http://r1/phonation", resource: "http://r1",
        labels: [{ value: "phonation", lang: null }], entityKind: "term",
        definition: "sens <physiologique>",
      },
      {
        iri: "http://r2/phonation", resource: "http://r2",
        labels: [{ value: "phonation", lang: null }], entityKind: "term",
      },
    ]);
    expect(html.match(/concept-card/g)).toHaveLength(2);
    expect(html.match(/resource-group/g)).toHaveLength(2);
    expect(html).toContain("sens &lt;physiologique&gt;");
  });
});

describe("renderConceptDetail", () => {
  it("shows contexts of use and correspondences", () => {
    const concept: ConceptDetail = {
      iri: "http://r1/phonation",
      resource: "http://r1",
      labels: [{ value: "phonation", lang: "fr" }],
      entityKind: "term",
      definition: "def",
      contextsOfUse: ["phonation des sons laryngés"],
      correspondences: [
        { entity1: "http://r1/phonation", entity2: "http://r2/x", relation: "related", confidence: 0.9 },
      ],
    };
    const html = renderConceptDetail(concept);
    expect(html).toContain("phonation des sons laryngés");
    expect(html).toContain("related");
    expect(html).toContain(encodeURIComponent("http://r2/x"));
  });
});

describe("renderReviewItem", () => {
  it("highlights the occurrence from offsets only and orders by score", () => {
    const items = buildQueue([
      assoc({ id: "low", concept: "http://x/b", score: 0.5715 }),
      assoc({ id: "high", concept: "http://x/a", score: 0.8715 }),
    ]);
    const html = renderReviewItem(items[0]!, "la phonation des sons");
    expect(html).toContain("<mark>phonation</mark>");
    expect(html.indexOf("0.872")).toBeGreaterThan(-1);
    expect(html.indexOf("0.872")).toBeLessThan(html.indexOf("0.572"));
    expect(html.indexOf('data-id="high"')).toBeLessThan(html.indexOf('data-id="low"'));
  });
});

describe("renderTimeline", () => {
  it("shows intervals and per-bound provenance", () => {
    const timeline: TimelineView = {
      manuscript: "http://sism.example/kb#m3",
      writingTime: null,
      inferredWritingTime: { begin: "1894-06-01", end: "1900-12-31" },
      effective: { begin: "1894-06-01", end: "1900-12-31" },
      effectiveSource: "inferred",
      bounds: [
        { kind: "notBefore", date: "1894-06-01", provenance: "cites-bound" },
        { kind: "notAfter", date: "1900-12-31", provenance: "asserted" },
      ],
    };
    const html = renderTimeline(timeline);
    expect(html).toContain("1894-06-01 … 1900-12-31");
    expect(html).toContain("cites-bound");
    expect(html).toContain("unknown");
  });
});

describe("renderError", () => {
  it("is an alert with escaped content", () => {
    const html = renderError("<script>alert(1)</script>");
    expect(html).toContain('role="alert"');
    expect(html).not.toContain("<script>");
  });
});
