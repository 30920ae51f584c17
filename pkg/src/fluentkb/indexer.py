"""Semantic indexing: match transcription words against terminology entries,
score candidate senses, persist proposals, record expert decisions.

The score mixes a bag-of-words context similarity with a temporal plausibility
factor: senses from terminologies the author used at writing time rank higher.
"""
from __future__ import annotations

import hashlib
import json
import re
import unicodedata
from collections import Counter
from dataclasses import dataclass
from math import sqrt

from . import temporal
from .kb import KnowledgeBase
from .kres import TermEntry, get_term_entry
from .rules import manuscript_interval
from .store import Dataset
from .terms import XSD_DOUBLE, XSD_INTEGER, Iri, Literal, Quad, SkolemNode, Term
from .vocab import KB, RDF, SISM, SYS_DOCS, SYS_INDEX


class IndexerError(ValueError):
    pass


class UnknownAssociation(IndexerError):
    pass


class AlreadyDecided(IndexerError):
    pass


@dataclass(frozen=True)
class Transcription:
    id: Iri
    manuscript: Iri
    surface: str
    zone: str
    seq: int
    text: str


@dataclass(frozen=True)
class Occurrence:
    transcription: Iri
    start: int  # Unicode scalar offsets into the transcription text
    end: int
    surface_form: str


@dataclass(frozen=True)
class Association:
    id: SkolemNode
    occurrence: Occurrence
    concept: Iri
    score: float
    status: str  # proposed | accepted | rejected
    decided_by: str | None = None


@dataclass(frozen=True)
class Token:
    start: int
    end: int
    surface: str


_WORD_RE = re.compile(r"\w+", re.UNICODE)


def tokenize(text: str) -> list[Token]:
    """Unicode word tokens with scalar offsets; apostrophes and punctuation split."""
    return [Token(m.start(), m.end(), m.group(0)) for m in _WORD_RE.finditer(text)]


def _fold(s: str) -> str:
    return unicodedata.normalize("NFC", s).casefold()


# -- transcriptions -------------------------------------------------------------


def store_transcription(kb: KnowledgeBase, t: Transcription) -> None:
    """Insert (or replace) a transcription's quads in sys:docs."""
    for q in kb.dataset.match(subject=t.id, graph=SYS_DOCS):
        kb.dataset.remove(q)
    quads = [
        Quad(t.id, RDF.type, SISM.Transcription, SYS_DOCS),
        Quad(t.id, SISM.ofManuscript, t.manuscript, SYS_DOCS),
        Quad(t.id, SISM.surface, Literal(t.surface), SYS_DOCS),
        Quad(t.id, SISM.zone, Literal(t.zone), SYS_DOCS),
        Quad(t.id, SISM.sequenceIndex, Literal(str(t.seq), XSD_INTEGER), SYS_DOCS),
        Quad(t.id, SISM.text, Literal(t.text), SYS_DOCS),
    ]
    for q in quads:
        kb.dataset.insert(q)


def load_transcriptions_jsonl(kb: KnowledgeBase, text: str) -> list[Transcription]:
    """One JSON object per line: {id, manuscript, surface, zone, seq, text}."""
    loaded = []
    keyed: dict[tuple, Iri] = {}
    for t in transcriptions(kb):
        keyed[(t.manuscript.value, t.surface, t.zone)] = t.id
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
            t = Transcription(Iri(obj["id"]), Iri(obj["manuscript"]),
                              str(obj["surface"]), str(obj["zone"]),
                              int(obj["seq"]), str(obj["text"]))
        except (KeyError, ValueError, TypeError) as exc:
            raise IndexerError(f"line {lineno}: bad transcription record: {exc}") from exc
        key = (t.manuscript.value, t.surface, t.zone)
        if keyed.get(key) not in (None, t.id):
            raise IndexerError(
                f"line {lineno}: (manuscript, surface, zone) {key} already used by another id")
        keyed[key] = t.id
        store_transcription(kb, t)
        loaded.append(t)
    return loaded


def get_transcription(kb: KnowledgeBase, tid: Iri) -> Transcription | None:
    fields: dict[str, Term] = {}
    for q in kb.dataset.match(subject=tid, graph=SYS_DOCS):
        fields[q.predicate.value] = q.object
    if SISM.text.value not in fields:
        return None
    manuscript = fields.get(SISM.ofManuscript.value)
    if not isinstance(manuscript, Iri):
        return None

    def lex(pred: Iri, default: str = "") -> str:
        v = fields.get(pred.value)
        return v.lexical if isinstance(v, Literal) else default

    return Transcription(tid, manuscript, lex(SISM.surface), lex(SISM.zone),
                         int(lex(SISM.sequenceIndex, "0")), lex(SISM.text))


def transcriptions(kb: KnowledgeBase) -> list[Transcription]:
    out = []
    for q in kb.dataset.match(predicate=RDF.type, object=SISM.Transcription, graph=SYS_DOCS):
        if isinstance(q.subject, Iri):
            t = get_transcription(kb, q.subject)
            if t is not None:
                out.append(t)
    out.sort(key=lambda t: (t.manuscript.value, t.seq, t.id.value))
    return out


# -- candidate generation --------------------------------------------------------


def build_gazetteer(kb: KnowledgeBase) -> dict[tuple[str, ...], list[TermEntry]]:
    """Folded token sequences of every terminology lexical form → entries."""
    gaz: dict[tuple[str, ...], list[TermEntry]] = {}
    seen: set[str] = set()
    for q in kb.dataset.match(predicate=SISM.lexicalForm):
        if not isinstance(q.subject, Iri) or not isinstance(q.object, Literal):
            continue
        if q.subject.value in seen:
            continue
        seen.add(q.subject.value)
        entry = get_term_entry(kb, q.subject)
        if entry is None:
            continue
        key = tuple(_fold(tok.surface) for tok in tokenize(entry.lexical_form))
        if key:
            gaz.setdefault(key, []).append(entry)
    for entries in gaz.values():
        entries.sort(key=lambda e: e.concept.value)
    return gaz


def find_candidates(
    kb: KnowledgeBase, t: Transcription,
    gazetteer: dict[tuple[str, ...], list[TermEntry]] | None = None,
) -> list[tuple[Occurrence, list[TermEntry]]]:
    """Longest-match scan of the transcription tokens against all terminology
    lexical forms; multi-word entries match contiguous token runs."""
    gaz = gazetteer if gazetteer is not None else build_gazetteer(kb)
    if not gaz:
        return []
    max_len = max(len(k) for k in gaz)
    tokens = tokenize(t.text)
    folded = [_fold(tok.surface) for tok in tokens]
    out = []
    i = 0
    while i < len(tokens):
        matched = False
        for n in range(min(max_len, len(tokens) - i), 0, -1):
            key = tuple(folded[i:i + n])
            entries = gaz.get(key)
            if entries:
                start = tokens[i].start
                end = tokens[i + n - 1].end
                occ = Occurrence(t.id, start, end, t.text[start:end])
                out.append((occ, list(entries)))
                i += n
                matched = True
                break
        if not matched:
            i += 1
    return out


# -- scoring ---------------------------------------------------------------------


def _content_bag(tokens: list[str], stopwords: frozenset[str]) -> Counter:
    return Counter(tok for tok in tokens if tok not in stopwords)


def _cosine(a: Counter, b: Counter) -> float:
    if not a or not b:
        return 0.0
    dot = sum(count * b[tok] for tok, count in a.items())
    if dot == 0:
        return 0.0
    na = sqrt(sum(c * c for c in a.values()))
    nb = sqrt(sum(c * c for c in b.values()))
    return dot / (na * nb)


def context_similarity(
    kb: KnowledgeBase, text: str, occ: Occurrence, entry: TermEntry,
    window: int | None = None,
) -> float:
    """Max cosine between the occurrence's context bag and each context-of-use
    bag. The matched form itself is part of its own context."""
    w = window if window is not None else kb.config.context_window
    if w < 1:
        raise IndexerError("context window must be >= 1")
    tokens = tokenize(text)
    span = [i for i, tok in enumerate(tokens) if tok.end > occ.start and tok.start < occ.end]
    if not span:
        return 0.0
    lo = max(0, span[0] - w)
    hi = min(len(tokens), span[-1] + w + 1)
    bag_a = _content_bag([_fold(tok.surface) for tok in tokens[lo:hi]], kb.config.stopwords)
    best = 0.0
    for context in entry.contexts_of_use:
        bag_b = _content_bag([_fold(tok.surface) for tok in tokenize(context)],
                             kb.config.stopwords)
        best = max(best, _cosine(bag_a, bag_b))
    return best


def temporal_factor(kb: KnowledgeBase, entry: TermEntry, manuscript: Iri) -> float:
    """1 if the manuscript's writing time overlaps an interval during which its
    author uses the entry's terminology, 0 if all such intervals are disjoint,
    0.5 when either side is unknown."""
    writing, _ = manuscript_interval(kb.dataset, manuscript)
    if writing is None:
        return 0.5
    authors = [q.object for q in kb.dataset.match(subject=manuscript, predicate=KB.author)
               if isinstance(q.object, Iri)]
    if not authors:
        return 0.5
    usages = []
    for author in authors:
        usages.extend(temporal.fluents_for(kb.dataset, subject=author,
                                           property=SISM.uses, object=entry.terminology))
    if not usages:
        return 0.5
    return 1.0 if any(writing.overlaps(f.during) for f in usages) else 0.0


def score(
    kb: KnowledgeBase, similarity: float, entry: TermEntry, manuscript: Iri,
    lambda_: float | None = None,
) -> float:
    lam = lambda_ if lambda_ is not None else kb.config.score_lambda
    return (1.0 - lam) * similarity + lam * temporal_factor(kb, entry, manuscript)


# -- persistence and review --------------------------------------------------------


def _assoc_id(occ: Occurrence, concept: Iri) -> SkolemNode:
    key = f"{occ.transcription.value}|{occ.start}|{occ.end}|{concept.value}"
    return SkolemNode("assoc:" + hashlib.sha256(key.encode("utf-8")).hexdigest()[:16])


def _assoc_quads(a: Association) -> list[Quad]:
    node = a.id
    quads = [
        Quad(node, RDF.type, SISM.Association, SYS_INDEX),
        Quad(node, SISM.inTranscription, a.occurrence.transcription, SYS_INDEX),
        Quad(node, SISM.startOffset, Literal(str(a.occurrence.start), XSD_INTEGER), SYS_INDEX),
        Quad(node, SISM.endOffset, Literal(str(a.occurrence.end), XSD_INTEGER), SYS_INDEX),
        Quad(node, SISM.surfaceForm, Literal(a.occurrence.surface_form), SYS_INDEX),
        Quad(node, SISM.concept, a.concept, SYS_INDEX),
        Quad(node, SISM.score, Literal(repr(a.score), XSD_DOUBLE), SYS_INDEX),
        Quad(node, SISM.status, Literal(a.status), SYS_INDEX),
    ]
    if a.decided_by is not None:
        quads.append(Quad(node, SISM.decidedBy, Literal(a.decided_by), SYS_INDEX))
    return quads


def get_association(kb: KnowledgeBase, node: SkolemNode) -> Association | None:
    fields: dict[str, Term] = {}
    for q in kb.dataset.match(subject=node, graph=SYS_INDEX):
        fields[q.predicate.value] = q.object
    if SISM.concept.value not in fields:
        return None
    tid = fields.get(SISM.inTranscription.value)
    concept = fields.get(SISM.concept.value)
    if not isinstance(tid, Iri) or not isinstance(concept, Iri):
        return None

    def lex(pred: Iri, default: str = "") -> str:
        v = fields.get(pred.value)
        return v.lexical if isinstance(v, Literal) else default

    occ = Occurrence(tid, int(lex(SISM.startOffset, "0")), int(lex(SISM.endOffset, "0")),
                     lex(SISM.surfaceForm))
    decided = lex(SISM.decidedBy) or None
    return Association(node, occ, concept, float(lex(SISM.score, "0")),
                       lex(SISM.status, "proposed"), decided)


def associations(
    kb: KnowledgeBase, status: str | None = None, transcription: Iri | None = None,
) -> list[Association]:
    out = []
    for q in kb.dataset.match(predicate=RDF.type, object=SISM.Association, graph=SYS_INDEX):
        a = get_association(kb, q.subject)
        if a is None:
            continue
        if status is not None and a.status != status:
            continue
        if transcription is not None and a.occurrence.transcription != transcription:
            continue
        out.append(a)
    out.sort(key=lambda a: (a.occurrence.transcription.value, a.occurrence.start,
                            -a.score, a.concept.value))
    return out


def index_transcription(
    kb: KnowledgeBase, t: Transcription,
    theta: float | None = None, lambda_: float | None = None,
    gazetteer: dict[tuple[str, ...], list[TermEntry]] | None = None,
) -> list[Association]:
    """Score every candidate (occurrence, concept); keep those above the
    threshold as proposed associations. Re-indexing replaces prior proposals
    for the transcription but never touches decided ones."""
    th = theta if theta is not None else kb.config.score_theta
    if not 0.0 <= th <= 1.0:
        raise IndexerError("threshold must be in [0,1]")
    decided_ids = set()
    for a in associations(kb, transcription=t.id):
        if a.status == "proposed":
            for q in kb.dataset.match(subject=a.id, graph=SYS_INDEX):
                kb.dataset.remove(q)
        else:
            decided_ids.add(a.id)
    kept = []
    for occ, entries in find_candidates(kb, t, gazetteer):
        for entry in entries:
            sim = context_similarity(kb, t.text, occ, entry)
            s = score(kb, sim, entry, t.manuscript, lambda_=lambda_)
            if s > th:
                assoc = Association(_assoc_id(occ, entry.concept), occ, entry.concept,
                                    s, "proposed")
                if assoc.id in decided_ids:
                    continue
                for q in _assoc_quads(assoc):
                    kb.dataset.insert(q)
                kept.append(assoc)
    kept.sort(key=lambda a: (a.occurrence.start, -a.score, a.concept.value))
    return kept


def index_all(kb: KnowledgeBase, theta: float | None = None,
              lambda_: float | None = None) -> list[Association]:
    gaz = build_gazetteer(kb)
    out = []
    for t in transcriptions(kb):
        out.extend(index_transcription(kb, t, theta=theta, lambda_=lambda_, gazetteer=gaz))
    return out


def decide(kb: KnowledgeBase, assoc_id: SkolemNode, verdict: str, decider: str) -> Association:
    """proposed → accepted|rejected, once; immutable thereafter."""
    if verdict not in ("accepted", "rejected"):
        raise IndexerError(f"verdict must be accepted or rejected, not {verdict!r}")
    a = get_association(kb, assoc_id)
    if a is None:
        raise UnknownAssociation(f"no association {assoc_id.id}")
    if a.status != "proposed":
        raise AlreadyDecided(f"association {assoc_id.id} already {a.status}")
    for q in kb.dataset.match(subject=assoc_id, predicate=SISM.status, graph=SYS_INDEX):
        kb.dataset.remove(q)
    kb.dataset.insert(Quad(assoc_id, SISM.status, Literal(verdict), SYS_INDEX))
    kb.dataset.insert(Quad(assoc_id, SISM.decidedBy, Literal(decider), SYS_INDEX))
    return get_association(kb, assoc_id)
