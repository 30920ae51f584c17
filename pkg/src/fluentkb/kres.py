"""Multi-knowledge-resource layer: imports, alignments, consistency checking.

SKOS thesauri, OWL ontologies, and dated terminologies are unified under the
sism abstraction: native entities are typed sism:KnowledgeEntity and linked to
their sism:KnowledgeResource. The mapping tables live as data in sys:schema so
the rule engine can use them.
"""
from __future__ import annotations

import csv
import hashlib
import io
import re
import unicodedata
from dataclasses import dataclass, field

from .kb import KnowledgeBase
from .terms import XSD_DOUBLE, Iri, Literal, Quad, SkolemNode, Term
from .vocab import KB, OWL, RDF, RDFS, SISM, SKOS, SYS_ALIGNMENTS, SYS_SCHEMA

RESOURCE_KINDS = ("owl_ontology", "skos_thesaurus", "terminology")
CORRESPONDENCE_RELATIONS = ("equivalent", "subsumes", "subsumed_by", "related")

LABEL_PREDICATES = (RDFS.label, SKOS.prefLabel, SKOS.altLabel, SISM.lexicalForm)


class KresError(ValueError):
    """Raised on invalid imports, alignments, or lookups."""


@dataclass(frozen=True)
class KnowledgeResource:
    id: Iri
    kind: str
    label: str


@dataclass(frozen=True)
class KnowledgeEntity:
    iri: Iri
    resource: Iri
    labels: tuple[tuple[str, str | None], ...]
    entity_kind: str


@dataclass(frozen=True)
class Correspondence:
    entity1: Iri
    entity2: Iri
    relation: str
    confidence: float

    def __post_init__(self):
        if self.entity1 == self.entity2:
            raise KresError("correspondence must relate two distinct entities")
        if self.relation not in CORRESPONDENCE_RELATIONS:
            raise KresError(f"unknown correspondence relation {self.relation!r}")
        if not 0.0 <= self.confidence <= 1.0:
            raise KresError("correspondence confidence must be in [0,1]")


@dataclass(frozen=True)
class TermEntry:
    concept: Iri
    lexical_form: str
    definition: str
    contexts_of_use: tuple[str, ...]
    terminology: Iri


@dataclass(frozen=True, order=True)
class Clash:
    kind: str       # disjoint_types | different_from_equivalent | functional_conflict
    focus: str      # serialized focal term
    detail: str

    def describe(self) -> str:
        return f"{self.kind}: {self.focus} ({self.detail})"


@dataclass
class ImportReport:
    resource_id: Iri
    entity_count: int
    clashes: list[Clash] = field(default_factory=list)

    @property
    def accepted(self) -> bool:
        return not self.clashes


# The vocabulary mapping tables, stored as data so the schema rules make
# them effective at saturation time.
def _schema_quads() -> list[Quad]:
    rows = [
        # SKOS thesauri
        (SKOS.ConceptScheme, RDFS.subClassOf, SISM.KnowledgeResource),
        (SKOS.Concept, RDFS.subClassOf, SISM.KnowledgeEntity),
        (SKOS.inScheme, RDFS.subPropertyOf, SISM.inKnowledgeResource),
        (SKOS.Scheme, RDFS.subClassOf, SISM.KnowledgeResource),
        (SKOS.semanticRelation, RDFS.subPropertyOf, SISM.semanticRelation),
        # OWL ontologies
        (OWL.Ontology, RDFS.subClassOf, SISM.KnowledgeResource),
        (OWL.NamedIndividual, RDFS.subClassOf, SISM.KnowledgeEntity),
        (OWL.Class, RDFS.subClassOf, SISM.KnowledgeEntity),
        (OWL.ObjectProperty, RDFS.subClassOf, SISM.KnowledgeEntity),
        (OWL.DatatypeProperty, RDFS.subClassOf, SISM.KnowledgeEntity),
        (RDFS.subClassOf, RDFS.subPropertyOf, SISM.semanticRelation),
        # terminologies (analogous table for the TermEntry formalism)
        (SISM.Terminology, RDFS.subClassOf, SISM.KnowledgeResource),
        (SISM.TermEntry, RDFS.subClassOf, SISM.KnowledgeEntity),
    ]
    return [Quad(s, p, o, SYS_SCHEMA) for s, p, o in rows]


_NATIVE_ENTITY_CLASSES = {
    "skos_thesaurus": (SKOS.Concept,),
    "owl_ontology": (OWL.Class, OWL.NamedIndividual, OWL.ObjectProperty, OWL.DatatypeProperty),
    "terminology": (SISM.TermEntry,),
}

_SLUG_ALLOWED = set("abcdefghijklmnopqrstuvwxyz0123456789-")


def mint_uri(lexical_form: str, resource: Iri) -> Iri:
    """Deterministic concept IRI from a lexical form, namespaced per resource."""
    if not lexical_form:
        raise KresError("cannot mint an IRI from an empty lexical form")
    s = unicodedata.normalize("NFC", lexical_form).lower()
    s = re.sub(r"\s+", "-", s)
    out = []
    for b in s.encode("utf-8"):
        ch = chr(b)
        out.append(ch if ch in _SLUG_ALLOWED else "%%%02X" % b)
    return Iri(f"{resource.value}/concept/{''.join(out)}")


def resource_registered(kb: KnowledgeBase, resource_id: Iri) -> bool:
    return bool(kb.dataset.match(subject=resource_id, predicate=RDF.type,
                                 object=SISM.KnowledgeResource, graph=resource_id))


def import_resource(
    kb: KnowledgeBase,
    quads: list[Quad],
    kind: str,
    resource_id: Iri,
    label: str | None = None,
    replace: bool = False,
) -> ImportReport:
    """Three-step import: rewrite/augment (URI minting, typing, membership),
    consistency check, then atomic insert. A report with clashes leaves the
    store unmodified."""
    if kind not in RESOURCE_KINDS:
        raise KresError(f"unknown resource kind {kind!r}")
    if resource_registered(kb, resource_id) and not replace:
        raise KresError(f"resource {resource_id.value} already registered")

    # Step 1: normalize into the resource's graph.
    triples = [(q.subject, q.predicate, q.object) for q in quads]

    renames: dict[Term, Iri] = {}
    if kind == "terminology":
        entry_nodes = {s for (s, p, o) in triples if p == RDF.type and o == SISM.TermEntry}
        for node in sorted(entry_nodes, key=lambda t: t.nq()):
            forms = [o.lexical for (s, p, o) in triples
                     if s == node and p == SISM.lexicalForm and isinstance(o, Literal)]
            if not forms:
                raise KresError(f"term entry {node.nq()} has no sism:lexicalForm")
            renames[node] = mint_uri(forms[0], resource_id)
        triples = [(renames.get(s, s), p, renames.get(o, o)) for (s, p, o) in triples]

    entities = set()
    for native in _NATIVE_ENTITY_CLASSES[kind]:
        entities.update(s for (s, p, o) in triples if p == RDF.type and o == native)

    augmented = list(triples)
    for e in sorted(entities, key=lambda t: t.nq()):
        augmented.append((e, RDF.type, SISM.KnowledgeEntity))
        # membership is explicit via skos:inScheme for thesauri, by graph
        # membership otherwise; either way one canonical link to the resource
        augmented.append((e, SISM.inKnowledgeResource, resource_id))
    augmented.append((resource_id, RDF.type, SISM.KnowledgeResource))
    augmented.append((resource_id, SISM.resourceKind, Literal(kind)))
    if label is not None:
        augmented.append((resource_id, RDFS.label, Literal(label)))

    candidate = []
    seen = set()
    for t in augmented:
        if t not in seen:
            seen.add(t)
            candidate.append(Quad(t[0], t[1], t[2], resource_id))

    # Steps 2-3: consistency gate, then atomic insert.
    base = set(kb.dataset.quads())
    if replace:
        base = {q for q in base if q.graph != resource_id}
    schema = _schema_quads()
    base.update(schema)
    clashes = sorted(find_clashes(base | set(candidate), kb.config.alignment_trust)
                     - find_clashes(base, kb.config.alignment_trust))
    report = ImportReport(resource_id, len(entities), clashes)
    if clashes:
        return report
    if replace:
        kb.dataset.remove_graph(resource_id)
    for q in schema:
        kb.dataset.insert(q)
    for q in candidate:
        kb.dataset.insert(q)
    return report


# -- alignments ---------------------------------------------------------------


def _corr_node(c: Correspondence) -> SkolemNode:
    key = f"{c.entity1.nq()}|{c.entity2.nq()}|{c.relation}"
    return SkolemNode("corr:" + hashlib.sha256(key.encode("utf-8")).hexdigest()[:16])


def entity_exists(kb: KnowledgeBase, iri: Iri) -> bool:
    return kb.dataset.has_triple(iri, RDF.type, SISM.KnowledgeEntity)


def add_correspondence(kb: KnowledgeBase, c: Correspondence) -> bool:
    """Store (or update) a correspondence in sys:alignments; the
    (entity1, entity2, relation) key is upserted."""
    for e in (c.entity1, c.entity2):
        if not entity_exists(kb, e):
            raise KresError(f"unknown entity {e.value}")
    node = _corr_node(c)
    for q in kb.dataset.match(subject=node, predicate=SISM.confidence, graph=SYS_ALIGNMENTS):
        kb.dataset.remove(q)
    quads = [
        Quad(node, RDF.type, SISM.Correspondence, SYS_ALIGNMENTS),
        Quad(node, SISM.entity1, c.entity1, SYS_ALIGNMENTS),
        Quad(node, SISM.entity2, c.entity2, SYS_ALIGNMENTS),
        Quad(node, SISM.relation, Literal(c.relation), SYS_ALIGNMENTS),
        Quad(node, SISM.confidence, Literal(repr(c.confidence), XSD_DOUBLE), SYS_ALIGNMENTS),
    ]
    for q in quads:
        kb.dataset.insert(q)
    return True


def _correspondences_in(quads) -> list[Correspondence]:
    nodes: dict[Term, dict[str, Term]] = {}
    for q in quads:
        if q.predicate in (SISM.entity1, SISM.entity2, SISM.relation, SISM.confidence):
            nodes.setdefault(q.subject, {})[q.predicate.value] = q.object
    out = []
    for node, fields in sorted(nodes.items(), key=lambda kv: kv[0].nq()):
        e1 = fields.get(SISM.entity1.value)
        e2 = fields.get(SISM.entity2.value)
        rel = fields.get(SISM.relation.value)
        conf = fields.get(SISM.confidence.value)
        if not (isinstance(e1, Iri) and isinstance(e2, Iri)
                and isinstance(rel, Literal) and isinstance(conf, Literal)):
            continue
        try:
            out.append(Correspondence(e1, e2, rel.lexical, float(conf.lexical)))
        except (KresError, ValueError):
            continue
    return out


def correspondences(kb: KnowledgeBase) -> list[Correspondence]:
    return _correspondences_in(kb.dataset.match(graph=SYS_ALIGNMENTS))


def load_alignments_csv(kb: KnowledgeBase, text: str) -> int:
    """CSV with columns entity1,entity2,relation,confidence."""
    reader = csv.DictReader(io.StringIO(text))
    required = {"entity1", "entity2", "relation", "confidence"}
    if reader.fieldnames is None or not required.issubset(set(reader.fieldnames)):
        raise KresError("alignment CSV needs columns entity1,entity2,relation,confidence")
    n = 0
    for row in reader:
        c = Correspondence(Iri(row["entity1"]), Iri(row["entity2"]),
                           row["relation"].strip(), float(row["confidence"]))
        add_correspondence(kb, c)
        n += 1
    return n


# -- consistency ---------------------------------------------------------------


class _UnionFind:
    def __init__(self):
        self.parent: dict[Term, Term] = {}

    def find(self, x: Term) -> Term:
        self.parent.setdefault(x, x)
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: Term, b: Term):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[ra] = rb


def find_clashes(quads, trust: float = 0.8) -> set[Clash]:
    """All clashes reportable from the quad set under the closure of
    rdfs:subClassOf, owl:equivalentClass/sameAs, and trusted alignments."""
    by_pred: dict[Term, list[tuple[Term, Term]]] = {}
    for q in quads:
        by_pred.setdefault(q.predicate, []).append((q.subject, q.object))

    uf = _UnionFind()
    for p in (OWL.equivalentClass, OWL.sameAs):
        for s, o in by_pred.get(p, ()):
            uf.union(s, o)

    sub_edges: list[tuple[Term, Term]] = list(by_pred.get(RDFS.subClassOf, ()))
    for c in _correspondences_in(quads):
        if c.confidence < trust:
            continue
        if c.relation == "equivalent":
            uf.union(c.entity1, c.entity2)
        elif c.relation == "subsumes":
            sub_edges.append((c.entity2, c.entity1))
        elif c.relation == "subsumed_by":
            sub_edges.append((c.entity1, c.entity2))

    adj: dict[Term, set[Term]] = {}
    for sub, sup in sub_edges:
        adj.setdefault(uf.find(sub), set()).add(uf.find(sup))

    anc_cache: dict[Term, frozenset[Term]] = {}

    def ancestors(root: Term) -> frozenset[Term]:
        root = uf.find(root)
        if root in anc_cache:
            return anc_cache[root]
        seen = {root}
        stack = [root]
        while stack:
            cur = stack.pop()
            for nxt in adj.get(uf.find(cur), ()):
                nxt = uf.find(nxt)
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        result = frozenset(seen)
        anc_cache[root] = result
        return result

    clashes: set[Clash] = set()

    # (a) an individual typed into two disjoint classes under the closure
    disjoint = [(c, d) for c, d in by_pred.get(OWL.disjointWith, ())]
    if disjoint:
        type_anc: dict[Term, set[Term]] = {}
        for x, c in by_pred.get(RDF.type, ()):
            type_anc.setdefault(x, set()).update(ancestors(c))
        for x, ancs in type_anc.items():
            for c, d in disjoint:
                if uf.find(c) in ancs and uf.find(d) in ancs:
                    clashes.add(Clash("disjoint_types", x.nq(),
                                      f"typed into disjoint classes {c.nq()} and {d.nq()}"))

    # (b) entities declared different but aligned/declared equivalent
    for x, y in by_pred.get(OWL.differentFrom, ()):
        if uf.find(x) == uf.find(y):
            clashes.add(Clash("different_from_equivalent", x.nq(),
                              f"declared owl:differentFrom {y.nq()} but equivalent under closure"))

    # (c) a functional property with two non-equal literal values on one subject
    functional = {s for s, o in by_pred.get(RDF.type, ()) if o == OWL.FunctionalProperty}
    for p in functional:
        values: dict[Term, set[Literal]] = {}
        for s, o in by_pred.get(p, ()):
            if isinstance(o, Literal):
                values.setdefault(s, set()).add(o)
        for s, vals in values.items():
            ordered = sorted(vals, key=Literal.nq)
            for i in range(len(ordered)):
                for j in range(i + 1, len(ordered)):
                    clashes.add(Clash("functional_conflict", s.nq(),
                                      f"functional {p.nq()} has values "
                                      f"{ordered[i].nq()} and {ordered[j].nq()}"))
    return clashes


def check_consistency(kb: KnowledgeBase, candidate: list[Quad]) -> list[Clash]:
    """Clashes the candidate quads would introduce over the current store.
    An empty candidate set yields an empty clash list."""
    trust = kb.config.alignment_trust
    base = set(kb.dataset.quads()) | set(_schema_quads())
    return sorted(find_clashes(base | set(candidate), trust) - find_clashes(base, trust))


# -- navigation ----------------------------------------------------------------


def _norm(s: str) -> str:
    return unicodedata.normalize("NFC", s).casefold()


def list_resources(kb: KnowledgeBase) -> list[KnowledgeResource]:
    out = []
    for q in kb.dataset.match(predicate=RDF.type, object=SISM.KnowledgeResource):
        rid = q.subject
        if not isinstance(rid, Iri) or q.graph != rid:
            continue
        kind = ""
        for kq in kb.dataset.match(subject=rid, predicate=SISM.resourceKind):
            if isinstance(kq.object, Literal):
                kind = kq.object.lexical
        label = ""
        for lq in kb.dataset.match(subject=rid, predicate=RDFS.label):
            if isinstance(lq.object, Literal):
                label = lq.object.lexical
        out.append(KnowledgeResource(rid, kind, label))
    out.sort(key=lambda r: r.id.value)
    return out


def resource_entities(kb: KnowledgeBase, resource_id: Iri) -> list[KnowledgeEntity]:
    out = []
    for q in kb.dataset.match(predicate=SISM.inKnowledgeResource, object=resource_id,
                              graph=resource_id):
        if isinstance(q.subject, Iri):
            out.append(describe_entity(kb, q.subject, resource_id))
    out.sort(key=lambda e: e.iri.value)
    return out


def describe_entity(kb: KnowledgeBase, iri: Iri, resource_id: Iri | None = None) -> KnowledgeEntity:
    if resource_id is None:
        for q in kb.dataset.match(subject=iri, predicate=SISM.inKnowledgeResource):
            if isinstance(q.object, Iri):
                resource_id = q.object
        if resource_id is None:
            raise KresError(f"unknown entity {iri.value}")
    labels = []
    for pred in LABEL_PREDICATES:
        for q in kb.dataset.match(subject=iri, predicate=pred):
            if isinstance(q.object, Literal):
                labels.append((q.object.lexical, q.object.lang))
    kinds = [q.object.value for q in kb.dataset.match(subject=iri, predicate=RDF.type)
             if isinstance(q.object, Iri) and q.object != SISM.KnowledgeEntity]
    kind = sorted(kinds)[0] if kinds else SISM.KnowledgeEntity.value
    return KnowledgeEntity(iri, resource_id, tuple(sorted(set(labels))), kind)


def get_term_entry(kb: KnowledgeBase, concept: Iri) -> TermEntry | None:
    forms = [q.object.lexical for q in kb.dataset.match(subject=concept, predicate=SISM.lexicalForm)
             if isinstance(q.object, Literal)]
    if not forms:
        return None
    definition = ""
    for q in kb.dataset.match(subject=concept, predicate=SISM.definition):
        if isinstance(q.object, Literal):
            definition = q.object.lexical
    contexts = tuple(sorted(q.object.lexical for q in
                            kb.dataset.match(subject=concept, predicate=SISM.contextOfUse)
                            if isinstance(q.object, Literal)))
    terminology = concept
    for q in kb.dataset.match(subject=concept, predicate=SISM.inKnowledgeResource):
        if isinstance(q.object, Iri):
            terminology = q.object
    return TermEntry(concept, forms[0], definition, contexts, terminology)


def find_entities(kb: KnowledgeBase, lexical: str) -> list[tuple[KnowledgeEntity, Iri, TermEntry | None]]:
    """Case-insensitive exact match on labels and term lexical forms, across
    all resources, sorted by resource id."""
    target = _norm(lexical)
    hits: set[Iri] = set()
    for pred in LABEL_PREDICATES:
        for q in kb.dataset.match(predicate=pred):
            if isinstance(q.object, Literal) and isinstance(q.subject, Iri) \
                    and _norm(q.object.lexical) == target:
                if kb.dataset.has_triple(q.subject, RDF.type, SISM.KnowledgeEntity):
                    hits.add(q.subject)
    results = []
    for iri in hits:
        entity = describe_entity(kb, iri)
        results.append((entity, entity.resource, get_term_entry(kb, iri)))
    results.sort(key=lambda r: (r[1].value, r[0].iri.value))
    return results
