"""Vocabulary IRIs: standard namespaces, the sism abstraction layer, system graphs."""
from __future__ import annotations

from .terms import Iri

RDF_NS = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
RDFS_NS = "http://www.w3.org/2000/01/rdf-schema#"
OWL_NS = "http://www.w3.org/2002/07/owl#"
SKOS_NS = "http://www.w3.org/2004/02/skos/core#"
TIME_NS = "http://www.w3.org/2006/time#"
XSD_NS = "http://www.w3.org/2001/XMLSchema#"
SISM_NS = "http://sism.example/ns#"
KB_NS = "http://sism.example/kb#"


class RDF:
    type = Iri(RDF_NS + "type")


class RDFS:
    subClassOf = Iri(RDFS_NS + "subClassOf")
    subPropertyOf = Iri(RDFS_NS + "subPropertyOf")
    label = Iri(RDFS_NS + "label")


class OWL:
    Ontology = Iri(OWL_NS + "Ontology")
    Class = Iri(OWL_NS + "Class")
    NamedIndividual = Iri(OWL_NS + "NamedIndividual")
    ObjectProperty = Iri(OWL_NS + "ObjectProperty")
    DatatypeProperty = Iri(OWL_NS + "DatatypeProperty")
    FunctionalProperty = Iri(OWL_NS + "FunctionalProperty")
    equivalentClass = Iri(OWL_NS + "equivalentClass")
    sameAs = Iri(OWL_NS + "sameAs")
    differentFrom = Iri(OWL_NS + "differentFrom")
    disjointWith = Iri(OWL_NS + "disjointWith")


class SKOS:
    ConceptScheme = Iri(SKOS_NS + "ConceptScheme")
    Concept = Iri(SKOS_NS + "Concept")
    Scheme = Iri(SKOS_NS + "Scheme")
    inScheme = Iri(SKOS_NS + "inScheme")
    semanticRelation = Iri(SKOS_NS + "semanticRelation")
    prefLabel = Iri(SKOS_NS + "prefLabel")
    altLabel = Iri(SKOS_NS + "altLabel")


class TIME:
    Interval = Iri(TIME_NS + "Interval")
    Instant = Iri(TIME_NS + "Instant")
    hasBeginning = Iri(TIME_NS + "hasBeginning")
    hasEnd = Iri(TIME_NS + "hasEnd")
    inXSDDate = Iri(TIME_NS + "inXSDDate")


class SISM:
    KnowledgeResource = Iri(SISM_NS + "KnowledgeResource")
    KnowledgeEntity = Iri(SISM_NS + "KnowledgeEntity")
    inKnowledgeResource = Iri(SISM_NS + "inKnowledgeResource")
    semanticRelation = Iri(SISM_NS + "semanticRelation")
    resourceKind = Iri(SISM_NS + "resourceKind")
    Terminology = Iri(SISM_NS + "Terminology")
    TermEntry = Iri(SISM_NS + "TermEntry")
    lexicalForm = Iri(SISM_NS + "lexicalForm")
    definition = Iri(SISM_NS + "definition")
    contextOfUse = Iri(SISM_NS + "contextOfUse")
    Correspondence = Iri(SISM_NS + "Correspondence")
    entity1 = Iri(SISM_NS + "entity1")
    entity2 = Iri(SISM_NS + "entity2")
    relation = Iri(SISM_NS + "relation")
    confidence = Iri(SISM_NS + "confidence")
    uses = Iri(SISM_NS + "uses")
    fluentProperty = Iri(SISM_NS + "fluentProperty")
    derivedBy = Iri(SISM_NS + "derivedBy")
    initiatedBy = Iri(SISM_NS + "initiatedBy")
    terminatedBy = Iri(SISM_NS + "terminatedBy")
    Transcription = Iri(SISM_NS + "Transcription")
    ofManuscript = Iri(SISM_NS + "ofManuscript")
    surface = Iri(SISM_NS + "surface")
    zone = Iri(SISM_NS + "zone")
    sequenceIndex = Iri(SISM_NS + "sequenceIndex")
    text = Iri(SISM_NS + "text")
    Association = Iri(SISM_NS + "Association")
    inTranscription = Iri(SISM_NS + "inTranscription")
    startOffset = Iri(SISM_NS + "startOffset")
    endOffset = Iri(SISM_NS + "endOffset")
    surfaceForm = Iri(SISM_NS + "surfaceForm")
    concept = Iri(SISM_NS + "concept")
    score = Iri(SISM_NS + "score")
    status = Iri(SISM_NS + "status")
    decidedBy = Iri(SISM_NS + "decidedBy")
    provSubject = Iri(SISM_NS + "provSubject")
    provPredicate = Iri(SISM_NS + "provPredicate")
    provObject = Iri(SISM_NS + "provObject")


class KB:
    """Domain vocabulary for manuscripts and fluents (the default ':' prefix)."""

    FluentRelation = Iri(KB_NS + "FluentRelation")
    during = Iri(KB_NS + "during")
    knows = Iri(KB_NS + "knows")
    writingTime = Iri(KB_NS + "writingTime")
    inferredWritingTime = Iri(KB_NS + "inferredWritingTime")
    notBefore = Iri(KB_NS + "notBefore")
    notAfter = Iri(KB_NS + "notAfter")
    Letter = Iri(KB_NS + "Letter")
    Manuscript = Iri(KB_NS + "Manuscript")
    author = Iri(KB_NS + "author")
    to = Iri(KB_NS + "to")
    startOfConsideredPeriod = Iri(KB_NS + "start-of-considered-period")
    endOfConsideredPeriod = Iri(KB_NS + "end-of-considered-period")


# Reserved system graphs; data graphs are one per knowledge resource.
SYS_SCHEMA = Iri("sys:schema")
SYS_FLUENTS = Iri("sys:fluents")
SYS_INDEX = Iri("sys:index")
SYS_ALIGNMENTS = Iri("sys:alignments")
SYS_INFERRED = Iri("sys:inferred")
SYS_DOCS = Iri("sys:docs")

SYSTEM_GRAPHS = (SYS_SCHEMA, SYS_FLUENTS, SYS_INDEX, SYS_ALIGNMENTS, SYS_INFERRED, SYS_DOCS)

# Prefixes every parser/compiler understands out of the box.
BUILTIN_PREFIXES: dict[str, str] = {
    "rdf": RDF_NS,
    "rdfs": RDFS_NS,
    "owl": OWL_NS,
    "skos": SKOS_NS,
    "time": TIME_NS,
    "xsd": XSD_NS,
    "sism": SISM_NS,
    "": KB_NS,
}
