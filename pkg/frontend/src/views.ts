/**
 * HTML-string renderers for the three screens. Pure functions of their data;
 * all interpolated text is escaped.
 */

import type { Association, ConceptDetail, ConceptSummary, ResourceSummary, TimelineView } from "./api.js";
import { excerptAround, formatScore, groupByResource, sortCandidates } from "./model.js";
import type { ReviewItem } from "./model.js";

export function escapeHtml(s: string): string {
  return s
    .replaceAll("&", "&amp;")
    .replaceAll("<", "&lt;")
    .replaceAll(">", "&gt;")
    .replaceAll('"', "&quot;")
    .replaceAll("'", "&#39;");
}

export function renderError(message: string): string {
  return `<div class="banner error" role="alert">${escapeHtml(message)}</div>`;
}

export function renderEmptyState(query: string): string {
  return `<p class="empty">No concepts match <strong>${escapeHtml(query)}</strong>.</p>`;
}

function conceptLabel(concept: ConceptSummary): string {
  const label = concept.labels[0];
  return label ? label.value : concept.iri;
}

export function renderResourceList(resources: ResourceSummary[]): string {
  const rows = resources.map((r) => `
    <li class="resource" data-resource="${escapeHtml(r.id)}">
      <span class="label">${escapeHtml(r.label || r.id)}</span>
      <span class="kind">${escapeHtml(r.kind)}</span>
      <span class="count">${r.entityCount}</span>
    </li>`);
  return `<ul class="resources">${rows.join("")}</ul>`;
}

export function renderConceptCards(concepts: ConceptSummary[]): string {
  const groups = groupByResource(concepts);
  const sections: string[] = [];
  for (const [resource, members] of groups) {
    const cards = members.map((c) => `
      <article class="card concept-card" data-iri="${escapeHtml(c.iri)}">
        <h3>${escapeHtml(conceptLabel(c))}</h3>
        ${c.definition ? `<p class="definition">${escapeHtml(c.definition)}</p>` : ""}
      </article>`);
    sections.push(`<section class="resource-group">
      <h2>${escapeHtml(resource)}</h2>${cards.join("")}
    </section>`);
  }
  return sections.join("");
}

export function renderConceptDetail(concept: ConceptDetail): string {
  const contexts = (concept.contextsOfUse ?? [])
    .map((c) => `<li class="context">${escapeHtml(c)}</li>`)
    .join("");
  const links = concept.correspondences
    .map((corr) => {
      const other = corr.entity1 === concept.iri ? corr.entity2 : corr.entity1;
      return `<li class="correspondence">${escapeHtml(corr.relation)} →
        <a href="#/concept/${encodeURIComponent(other)}">${escapeHtml(other)}</a>
        (${corr.confidence})</li>`;
    })
    .join("");
  return `<article class="concept-detail" data-iri="${escapeHtml(concept.iri)}">
    <h2>${escapeHtml(conceptLabel(concept))}</h2>
    <p class="resource">${escapeHtml(concept.resource)}</p>
    ${concept.definition ? `<p class="definition">${escapeHtml(concept.definition)}</p>` : ""}
    <h3>Contexts of use</h3>
    <ul class="contexts">${contexts}</ul>
    <h3>Correspondences</h3>
    <ul class="correspondences">${links}</ul>
  </article>`;
}

export function renderReviewItem(item: ReviewItem, transcriptionText: string, window = 5): string {
  const excerpt = excerptAround(transcriptionText, item.start, item.end, window);
  const candidates = sortCandidates(item.candidates)
    .map((c: Association) => `
      <li class="candidate" data-id="${escapeHtml(c.id)}">
        <span class="concept">${escapeHtml(c.concept)}</span>
        <span class="score">${formatScore(c.score)}</span>
        <button class="accept" data-id="${escapeHtml(c.id)}">Accept</button>
        <button class="reject" data-id="${escapeHtml(c.id)}">Reject</button>
      </li>`)
    .join("");
  return `<section class="review-item">
    <blockquote class="excerpt">${escapeHtml(excerpt.before)}<mark>${
      escapeHtml(excerpt.match)}</mark>${escapeHtml(excerpt.after)}</blockquote>
    <ol class="candidates">${candidates}</ol>
  </section>`;
}

export function renderQueueDone(): string {
  return `<p class="empty queue-done">Review queue is empty.</p>`;
}

function intervalText(interval: { begin: string; end: string } | null): string {
  return interval ? `${interval.begin} … ${interval.end}` : "unknown";
}

export function renderTimeline(timeline: TimelineView): string {
  const bounds = timeline.bounds
    .map((b) => `<li class="bound">${escapeHtml(b.kind)} ${escapeHtml(b.date)}
      <span class="provenance">${escapeHtml(b.provenance)}</span></li>`)
    .join("");
  return `<section class="timeline" data-manuscript="${escapeHtml(timeline.manuscript)}">
    <h2>${escapeHtml(timeline.manuscript)}</h2>
    <dl>
      <dt>Writing time</dt><dd class="explicit">${escapeHtml(intervalText(timeline.writingTime))}</dd>
      <dt>Inferred</dt><dd class="inferred">${escapeHtml(intervalText(timeline.inferredWritingTime))}</dd>
      <dt>Effective (${escapeHtml(timeline.effectiveSource ?? "none")})</dt>
      <dd class="effective">${escapeHtml(intervalText(timeline.effective))}</dd>
    </dl>
    <ul class="bounds">${bounds}</ul>
  </section>`;
}
