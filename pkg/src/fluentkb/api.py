"""JSON-over-HTTP service: navigation, review queue, engine actions.

Reads are lock-free over the in-memory store; every mutation funnels through
one writer lock and persists the snapshot atomically on success.
"""
from __future__ import annotations

import os
import threading
from dataclasses import dataclass
from urllib.parse import unquote

from fastapi import FastAPI, HTTPException, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from . import indexer, kres, rules, temporal
from .kb import KnowledgeBase
from .rules import manuscript_interval
from .terms import Iri, SkolemNode, TermError
from .vocab import KB


@dataclass
class ApiConfig:
    bind: str = "127.0.0.1"
    port: int = 7341
    snapshot_path: str = "fluentkb.nq"
    read_only: bool = False
    rules_path: str | None = None
    token: str | None = None

    def __post_init__(self):
        if not 1 <= self.port <= 65535:
            raise ValueError("port must be in [1, 65535]")


class DecisionBody(BaseModel):
    verdict: str
    decider: str


class IndexBody(BaseModel):
    transcription: str | None = None
    theta: float | None = None


def _err(status: int, message: str) -> HTTPException:
    return HTTPException(status_code=status, detail=message)


def _instant_json(i: temporal.Instant) -> str:
    return str(i)


def _interval_json(iv: temporal.Interval | None) -> dict | None:
    if iv is None:
        return None
    return {"begin": _instant_json(iv.begin), "end": _instant_json(iv.end)}


def _association_json(a: indexer.Association) -> dict:
    return {
        "id": a.id.id,
        "transcription": a.occurrence.transcription.value,
        "start": a.occurrence.start,
        "end": a.occurrence.end,
        "surfaceForm": a.occurrence.surface_form,
        "concept": a.concept.value,
        "score": a.score,
        "status": a.status,
        "decidedBy": a.decided_by,
    }


def _entity_json(e: kres.KnowledgeEntity, entry: kres.TermEntry | None) -> dict:
    out = {
        "iri": e.iri.value,
        "resource": e.resource.value,
        "labels": [{"value": v, "lang": lang} for v, lang in e.labels],
        "entityKind": e.entity_kind,
    }
    if entry is not None:
        out["definition"] = entry.definition
        out["contextsOfUse"] = list(entry.contexts_of_use)
    return out


def create_app(config: ApiConfig) -> FastAPI:
    if os.path.exists(config.snapshot_path):
        kb = KnowledgeBase.load(config.snapshot_path)
    else:
        kb = KnowledgeBase()

    loaded_rules: list[rules.Rule] = []
    if config.rules_path:
        with open(config.rules_path, encoding="utf-8") as f:
            loaded_rules = rules.compile_rules(f.read())

    app = FastAPI(title="fluentkb", version="0.1.0")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"],
    )
    writer = threading.Lock()
    app.state.kb = kb

    @app.exception_handler(HTTPException)
    async def http_error(request: Request, exc: HTTPException):
        return JSONResponse(status_code=exc.status_code,
                            content={"code": exc.status_code, "message": str(exc.detail)})

    @app.exception_handler(Exception)
    async def any_error(request: Request, exc: Exception):
        return JSONResponse(status_code=500, content={"code": 500, "message": str(exc)})

    from fastapi.exceptions import RequestValidationError

    @app.exception_handler(RequestValidationError)
    async def invalid_payload(request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=422,
                            content={"code": 422, "message": "invalid payload"})

    @app.middleware("http")
    async def bearer_guard(request: Request, call_next):
        if config.token and request.url.path != "/health":
            auth = request.headers.get("authorization", "")
            if auth != f"Bearer {config.token}":
                return JSONResponse(status_code=401,
                                    content={"code": 401, "message": "missing or bad token"})
        return await call_next(request)

    def persist():
        tmp = config.snapshot_path + ".tmp"
        kb.save(tmp)
        os.replace(tmp, config.snapshot_path)

    def mutation_guard():
        if config.read_only:
            raise _err(403, "service is read-only")

    def iri_param(raw: str) -> Iri:
        try:
            return Iri(unquote(raw))
        except TermError as exc:
            raise _err(422, str(exc))

    def paginate(items: list, limit: int | None, offset: int) -> list:
        if offset:
            items = items[offset:]
        if limit is not None:
            items = items[:limit]
        return items

    @app.get("/health")
    def health():
        return {"status": "ok", "quads": kb.dataset.size}

    @app.get("/resources")
    def resources():
        out = []
        for r in kres.list_resources(kb):
            out.append({
                "id": r.id.value,
                "kind": r.kind,
                "label": r.label,
                "entityCount": len(kres.resource_entities(kb, r.id)),
            })
        return out

    @app.get("/resources/{rid:path}/entities")
    def entities(rid: str, limit: int | None = None, offset: int = 0):
        resource = iri_param(rid)
        known = {r.id for r in kres.list_resources(kb)}
        if resource not in known:
            raise _err(404, f"unknown resource {resource.value}")
        items = kres.resource_entities(kb, resource)
        return [_entity_json(e, kres.get_term_entry(kb, e.iri))
                for e in paginate(items, limit, offset)]

    @app.get("/concepts")
    def concepts(lexical: str = ""):
        if not lexical:
            raise _err(422, "query parameter 'lexical' is required")
        return [_entity_json(e, entry) for e, _, entry in kres.find_entities(kb, lexical)]

    @app.get("/concepts/{iri:path}")
    def concept(iri: str):
        target = iri_param(iri)
        try:
            entity = kres.describe_entity(kb, target)
        except kres.KresError:
            raise _err(404, f"unknown concept {target.value}")
        body = _entity_json(entity, kres.get_term_entry(kb, target))
        body["correspondences"] = [
            {"entity1": c.entity1.value, "entity2": c.entity2.value,
             "relation": c.relation, "confidence": c.confidence}
            for c in kres.correspondences(kb)
            if target in (c.entity1, c.entity2)
        ]
        return body

    @app.get("/transcriptions/{tid:path}")
    def transcription(tid: str):
        target = iri_param(tid)
        t = indexer.get_transcription(kb, target)
        if t is None:
            raise _err(404, f"unknown transcription {target.value}")
        assocs = indexer.associations(kb, transcription=target)
        return {
            "id": t.id.value,
            "manuscript": t.manuscript.value,
            "surface": t.surface,
            "zone": t.zone,
            "seq": t.seq,
            "text": t.text,
            "associations": [_association_json(a) for a in assocs],
        }

    @app.get("/associations")
    def list_associations(status: str | None = None, limit: int | None = None,
                          offset: int = 0):
        if status is not None and status not in ("proposed", "accepted", "rejected"):
            raise _err(422, f"unknown status {status!r}")
        items = indexer.associations(kb, status=status)
        return [_association_json(a) for a in paginate(items, limit, offset)]

    @app.post("/associations/{aid}/decision")
    def post_decision(aid: str, body: DecisionBody):
        mutation_guard()
        if body.verdict not in ("accepted", "rejected"):
            raise _err(422, "verdict must be accepted or rejected")
        with writer:
            try:
                updated = indexer.decide(kb, SkolemNode(unquote(aid)),
                                         body.verdict, body.decider)
            except indexer.UnknownAssociation as exc:
                raise _err(404, str(exc))
            except indexer.AlreadyDecided as exc:
                raise _err(409, str(exc))
            except (indexer.IndexerError, TermError) as exc:
                raise _err(422, str(exc))
            persist()
        return _association_json(updated)

    @app.post("/actions/index")
    def action_index(body: IndexBody):
        mutation_guard()
        with writer:
            try:
                if body.transcription:
                    t = indexer.get_transcription(kb, iri_param(body.transcription))
                    if t is None:
                        raise _err(404, f"unknown transcription {body.transcription}")
                    proposed = indexer.index_transcription(kb, t, theta=body.theta)
                else:
                    proposed = indexer.index_all(kb, theta=body.theta)
            except indexer.IndexerError as exc:
                raise _err(422, str(exc))
            persist()
        return {"proposed": len(proposed),
                "associations": [_association_json(a) for a in proposed]}

    @app.post("/actions/saturate")
    def action_saturate():
        mutation_guard()
        with writer:
            static = [r for r in loaded_rules if r.kind == "static"]
            fluent = [r for r in loaded_rules if r.kind == "fluent_generating"]
            try:
                report = rules.saturate(kb, static, fluent)
            except rules.RoundCapExceeded as exc:
                raise _err(422, str(exc))
            wt = rules.infer_writing_times(kb)
            persist()
        return {
            "rounds": report.rounds,
            "newStaticTriples": report.new_static_triples,
            "newFluents": report.new_fluents,
            "blockedFluents": report.blocked_fluents,
            "inferredWritingTimes": wt.updated,
            "contradictions": [{"manuscript": m.value, "reason": r}
                               for m, r in wt.contradictions],
        }

    @app.get("/manuscripts/{mid:path}/timeline")
    def timeline(mid: str):
        m = iri_param(mid)
        explicit = inferred = None
        for q in kb.dataset.match(subject=m, predicate=KB.writingTime):
            explicit = temporal.resolve_interval(kb.dataset, q.object)
        for q in kb.dataset.match(subject=m, predicate=KB.inferredWritingTime):
            inferred = temporal.resolve_interval(kb.dataset, q.object)
        bounds = []
        for pred, kind in ((KB.notBefore, "notBefore"), (KB.notAfter, "notAfter")):
            for q in kb.dataset.match(subject=m, predicate=pred):
                instant = temporal.resolve_instant(kb.dataset, q.object)
                if instant is None:
                    continue
                bounds.append({
                    "kind": kind,
                    "date": _instant_json(instant),
                    "provenance": rules.bound_provenance(kb.dataset, m, pred, q.object)
                                  or "asserted",
                })
        if explicit is None and inferred is None and not bounds:
            known = kb.dataset.match(subject=m)
            if not known:
                raise _err(404, f"unknown manuscript {m.value}")
        interval, source = manuscript_interval(kb.dataset, m)
        return {
            "manuscript": m.value,
            "writingTime": _interval_json(explicit),
            "inferredWritingTime": _interval_json(inferred),
            "effective": _interval_json(interval),
            "effectiveSource": source,
            "bounds": bounds,
        }

    return app
