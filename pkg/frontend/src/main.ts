/**
 * Entry point: hash-routed shell with three screens (browse, review,
 * timeline) over the fluentkb API.
 */

import { ApiClient, ApiRequestError } from "./api.js";
import { ReviewQueue } from "./model.js";
import {
  renderConceptCards,
  renderConceptDetail,
  renderEmptyState,
  renderError,
  renderQueueDone,
  renderResourceList,
  renderReviewItem,
  renderTimeline,
} from "./views.js";

const DECIDER = "webui";

function apiBase(): string {
  const meta = document.querySelector('meta[name="fluentkb-api"]');
  return meta?.getAttribute("content") ?? "http://127.0.0.1:7341";
}

async function browseScreen(app: HTMLElement, client: ApiClient): Promise<void> {
  app.innerHTML = `
    <form id="search"><input name="lexical" placeholder="lexical form" autofocus>
      <button type="submit">Search</button></form>
    <div id="resources"></div>
    <div id="results"></div>`;
  const resources = app.querySelector("#resources")!;
  const results = app.querySelector("#results")!;
  try {
    resources.innerHTML = renderResourceList(await client.resources());
  } catch (err) {
    resources.innerHTML = renderError(`Cannot reach API: ${String(err)}`);
    return;
  }
  app.querySelector("#search")!.addEventListener("submit", async (event) => {
    event.preventDefault();
    const input = app.querySelector<HTMLInputElement>('input[name="lexical"]')!;
    const query = input.value.trim();
    if (!query) {
      return;
    }
    try {
      const concepts = await client.searchConcepts(query);
      results.innerHTML = concepts.length
        ? renderConceptCards(concepts)
        : renderEmptyState(query);
      for (const card of results.querySelectorAll<HTMLElement>(".concept-card")) {
        card.addEventListener("click", () => {
          location.hash = `#/concept/${encodeURIComponent(card.dataset.iri!)}`;
        });
      }
    } catch (err) {
      results.innerHTML = renderError(String(err));
    }
  });
}

async function conceptScreen(app: HTMLElement, client: ApiClient, iri: string): Promise<void> {
  try {
    app.innerHTML = renderConceptDetail(await client.concept(iri));
  } catch (err) {
    app.innerHTML = renderError(
      err instanceof ApiRequestError && err.code === 404
        ? `Unknown concept ${iri}`
        : String(err));
  }
}

async function reviewScreen(app: HTMLElement, client: ApiClient): Promise<void> {
  const proposed = await client.associations("proposed");
  const queue = new ReviewQueue(proposed, (id, verdict) => client.decide(id, verdict, DECIDER));
  const texts = new Map<string, string>();

  const show = async (): Promise<void> => {
    const item = queue.current();
    if (!item) {
      app.innerHTML = renderQueueDone();
      return;
    }
    if (!texts.has(item.transcription)) {
      texts.set(item.transcription, (await client.transcription(item.transcription)).text);
    }
    app.innerHTML = renderReviewItem(item, texts.get(item.transcription)!);
    for (const button of app.querySelectorAll<HTMLButtonElement>("button[data-id]")) {
      button.addEventListener("click", async () => {
        const verdict = button.classList.contains("accept") ? "accepted" : "rejected";
        const outcome = await queue.decide(button.dataset.id!, verdict);
        if (outcome.conflict) {
          queue.refresh(await client.associations("proposed"));
          app.insertAdjacentHTML("afterbegin",
            renderError("This item was decided elsewhere; queue refreshed."));
        } else if (!outcome.ok) {
          app.insertAdjacentHTML("afterbegin", renderError(outcome.message ?? "decision failed"));
          return;
        }
        await show();
      });
    }
  };
  await show();
}

async function timelineScreen(app: HTMLElement, client: ApiClient, manuscript: string): Promise<void> {
  try {
    app.innerHTML = renderTimeline(await client.timeline(manuscript));
  } catch (err) {
    app.innerHTML = renderError(String(err));
  }
}

async function route(): Promise<void> {
  const app = document.getElementById("app")!;
  const client = new ApiClient(apiBase());
  const hash = location.hash || "#/browse";
  if (hash.startsWith("#/concept/")) {
    await conceptScreen(app, client, decodeURIComponent(hash.slice("#/concept/".length)));
  } else if (hash.startsWith("#/timeline/")) {
    await timelineScreen(app, client, decodeURIComponent(hash.slice("#/timeline/".length)));
  } else if (hash === "#/review") {
    await reviewScreen(app, client);
  } else {
    await browseScreen(app, client);
  }
}

if (typeof window !== "undefined" && typeof document !== "undefined") {
  window.addEventListener("hashchange", () => void route());
  window.addEventListener("DOMContentLoaded", () => void route());
}
