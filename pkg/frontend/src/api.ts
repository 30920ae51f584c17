/**
 * Typed fetch client for the fluentkb JSON API.
 *
 * The client never touches the DOM and takes the fetch implementation as a
 * constructor argument so tests can stub the transport.
 */

export interface ResourceSummary {
  id: string;
  kind: string;
  label: string;
  entityCount: number;
}

export interface Label {
  value: string;
  lang: string | null;
}

export interface ConceptSummary {
  iri: string;
  resource: string;
  labels: Label[];
  entityKind: string;
  definition?: string;
  contextsOfUse?: string[];
}

export interface CorrespondenceView {
  entity1: string;
  entity2: string;
  relation: string;
  confidence: number;
}

export interface ConceptDetail extends ConceptSummary {
  correspondences: CorrespondenceView[];
}

export interface Association {
  id: string;
  transcription: string;
  start: number;
  end: number;
  surfaceForm: string;
  concept: string;
  score: number;
  status: "proposed" | "accepted" | "rejected";
  decidedBy: string | null;
}

export interface TranscriptionView {
  id: string;
  manuscript: string;
  surface: string;
  zone: string;
  seq: number;
  text: string;
  associations: Association[];
}

export interface IntervalView {
  begin: string;
  end: string;
}

export interface TimelineBound {
  kind: "notBefore" | "notAfter";
  date: string;
  provenance: string;
}

export interface TimelineView {
  manuscript: string;
  writingTime: IntervalView | null;
  inferredWritingTime: IntervalView | null;
  effective: IntervalView | null;
  effectiveSource: "explicit" | "inferred" | null;
  bounds: TimelineBound[];
}

export interface ApiError {
  code: number;
  message: string;
}

/** Raised for any non-2xx response; carries the server's {code, message}. */
export class ApiRequestError extends Error {
  readonly code: number;

  constructor(code: number, message: string) {
    super(message);
    this.code = code;
  }
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchImpl: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchImpl(this.baseUrl + path, init);
    const body = await response.json();
    if (!response.ok) {
      const err = body as ApiError;
      throw new ApiRequestError(err.code ?? response.status, err.message ?? "request failed");
    }
    return body as T;
  }

  health(): Promise<{ status: string; quads: number }> {
    return this.request("/health");
  }

  resources(): Promise<ResourceSummary[]> {
    return this.request("/resources");
  }

  searchConcepts(lexical: string): Promise<ConceptSummary[]> {
    return this.request(`/concepts?lexical=${encodeURIComponent(lexical)}`);
  }

  concept(iri: string): Promise<ConceptDetail> {
    return this.request(`/concepts/${encodeURIComponent(iri)}`);
  }

  resourceEntities(id: string): Promise<ConceptSummary[]> {
    return this.request(`/resources/${encodeURIComponent(id)}/entities`);
  }

  transcription(id: string): Promise<TranscriptionView> {
    return this.request(`/transcriptions/${encodeURIComponent(id)}`);
  }

  associations(status?: string): Promise<Association[]> {
    const query = status ? `?status=${encodeURIComponent(status)}` : "";
    return this.request(`/associations${query}`);
  }

  decide(id: string, verdict: "accepted" | "rejected", decider: string): Promise<Association> {
    return this.request(`/associations/${encodeURIComponent(id)}/decision`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ verdict, decider }),
    });
  }

  reindex(transcription?: string, theta?: number): Promise<{ proposed: number; associations: Association[] }> {
    return this.request("/actions/index", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ transcription, theta }),
    });
  }

  timeline(manuscript: string): Promise<TimelineView> {
    return this.request(`/manuscripts/${encodeURIComponent(manuscript)}/timeline`);
  }
}
