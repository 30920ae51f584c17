"""Day-granularity time model: instants, intervals, Allen relations, fluents.

A fluent is a relation that holds during an interval. It is reified in the
`sys:fluents` graph as a FluentRelation node linked to its interval, whose
endpoints are instant nodes carrying xsd:date values (sentinel endpoints are
the named start/end-of-considered-period individuals).
"""
from __future__ import annotations

import datetime as _dt
import enum
import hashlib
from dataclasses import dataclass
from functools import total_ordering

from .store import Dataset
from .terms import XSD_DATE, XSD_GYEAR, Iri, Literal, Quad, SkolemNode, Term, TermError
from .vocab import KB, RDF, SISM, SYS_FLUENTS, TIME


@total_ordering
@dataclass(frozen=True, slots=True)
class Instant:
    """A calendar day, or a sentinel bound of the considered period."""

    date: _dt.date | None = None
    sentinel: str | None = None  # "START" | "END" | None

    def __post_init__(self):
        if (self.date is None) == (self.sentinel is None):
            raise TermError("Instant is either a date or a sentinel")
        if self.sentinel not in (None, "START", "END"):
            raise TermError(f"unknown sentinel {self.sentinel!r}")

    def _rank(self) -> tuple:
        if self.sentinel == "START":
            return (0, _dt.date.min)
        if self.sentinel == "END":
            return (2, _dt.date.min)
        return (1, self.date)

    def __lt__(self, other: "Instant") -> bool:
        return self._rank() < other._rank()

    def __str__(self) -> str:
        return self.sentinel if self.sentinel else self.date.isoformat()


START = Instant(sentinel="START")
END = Instant(sentinel="END")


def instant_from_date(d: _dt.date) -> Instant:
    return Instant(date=d)


def parse_instant_literal(lit: Literal) -> Instant | None:
    """xsd:date → that day; xsd:gYear → January 1 of the year."""
    if lit.datatype == XSD_DATE:
        try:
            return Instant(date=_dt.date.fromisoformat(lit.lexical))
        except ValueError:
            return None
    if lit.datatype == XSD_GYEAR:
        try:
            return Instant(date=_dt.date(int(lit.lexical), 1, 1))
        except ValueError:
            return None
    return None


def year_interval(year: int) -> "Interval":
    """Year-only evidence expands to its Jan 1 - Dec 31 bounds."""
    return Interval(Instant(date=_dt.date(year, 1, 1)), Instant(date=_dt.date(year, 12, 31)))


@dataclass(frozen=True, slots=True)
class Interval:
    begin: Instant
    end: Instant

    def __post_init__(self):
        if self.begin > self.end:
            raise TermError(f"interval begin {self.begin} after end {self.end}")

    def __str__(self) -> str:
        return f"[{self.begin},{self.end}]"

    def contains(self, t: Instant) -> bool:
        return self.begin <= t <= self.end

    def overlaps(self, other: "Interval") -> bool:
        return self.begin <= other.end and other.begin <= self.end


class AllenRelation(enum.Enum):
    BEFORE = "before"
    AFTER = "after"
    MEETS = "meets"
    MET_BY = "met_by"
    OVERLAPS = "overlaps"
    OVERLAPPED_BY = "overlapped_by"
    STARTS = "starts"
    STARTED_BY = "started_by"
    DURING = "during"
    CONTAINS = "contains"
    FINISHES = "finishes"
    FINISHED_BY = "finished_by"
    EQUALS = "equals"


def interval_compare(i1: Interval, i2: Interval) -> AllenRelation:
    """The unique Allen relation between two closed day-granularity intervals."""
    b1, e1, b2, e2 = i1.begin, i1.end, i2.begin, i2.end
    if b1 == b2 and e1 == e2:
        return AllenRelation.EQUALS
    if e1 < b2:
        return AllenRelation.BEFORE
    if e2 < b1:
        return AllenRelation.AFTER
    if b1 == b2:
        return AllenRelation.STARTS if e1 < e2 else AllenRelation.STARTED_BY
    if e1 == e2:
        return AllenRelation.FINISHES if b1 > b2 else AllenRelation.FINISHED_BY
    if e1 == b2:
        return AllenRelation.MEETS
    if e2 == b1:
        return AllenRelation.MET_BY
    if b1 < b2:
        return AllenRelation.CONTAINS if e2 < e1 else AllenRelation.OVERLAPS
    return AllenRelation.DURING if e1 < e2 else AllenRelation.OVERLAPPED_BY


def subsumes(existing: Interval, candidate: Interval) -> bool:
    """existing covers candidate (equality counts)."""
    return existing.begin <= candidate.begin and candidate.end <= existing.end


# -- reification --------------------------------------------------------------


def instant_term(t: Instant) -> Term:
    if t.sentinel == "START":
        return KB.startOfConsideredPeriod
    if t.sentinel == "END":
        return KB.endOfConsideredPeriod
    return SkolemNode(f"instant:{t.date.isoformat()}")


def instant_quads(t: Instant) -> list[Quad]:
    node = instant_term(t)
    quads = [Quad(node, RDF.type, TIME.Instant, SYS_FLUENTS)]
    if t.date is not None:
        quads.append(Quad(node, TIME.inXSDDate, Literal(t.date.isoformat(), XSD_DATE), SYS_FLUENTS))
    return quads


def interval_node(iv: Interval) -> SkolemNode:
    return SkolemNode(f"interval:{iv.begin}:{iv.end}")


def interval_quads(iv: Interval) -> list[Quad]:
    node = interval_node(iv)
    return [
        Quad(node, RDF.type, TIME.Interval, SYS_FLUENTS),
        Quad(node, TIME.hasBeginning, instant_term(iv.begin), SYS_FLUENTS),
        Quad(node, TIME.hasEnd, instant_term(iv.end), SYS_FLUENTS),
        *instant_quads(iv.begin),
        *instant_quads(iv.end),
    ]


def resolve_instant(dataset: Dataset, term: Term) -> Instant | None:
    """Map a term to an Instant: date literal, sentinel individual, or a node
    carrying time:inXSDDate."""
    if isinstance(term, Literal):
        return parse_instant_literal(term)
    if term == KB.startOfConsideredPeriod:
        return START
    if term == KB.endOfConsideredPeriod:
        return END
    for q in dataset.match(subject=term, predicate=TIME.inXSDDate):
        if isinstance(q.object, Literal):
            got = parse_instant_literal(q.object)
            if got is not None:
                return got
    return None


def resolve_interval(dataset: Dataset, term: Term) -> Interval | None:
    """Read an interval node (time:hasBeginning/time:hasEnd). A missing end
    collapses to the begin day; a missing begin to the end day."""
    begin = end = None
    for q in dataset.match(subject=term, predicate=TIME.hasBeginning):
        begin = resolve_instant(dataset, q.object)
    for q in dataset.match(subject=term, predicate=TIME.hasEnd):
        end = resolve_instant(dataset, q.object)
    if begin is None and end is None:
        return None
    if begin is None:
        begin = end
    if end is None:
        end = begin
    if begin > end:
        return None
    return Interval(begin, end)


@dataclass(frozen=True)
class FluentRelation:
    node: SkolemNode
    subject: Term
    property: Iri
    object: Term
    during: Interval
    provenance: str = "asserted"
    initiated_by: Iri | None = None
    terminated_by: Iri | None = None


@dataclass(frozen=True)
class FluentOutcome:
    inserted: bool
    node: SkolemNode  # the new node, or the subsuming existing one


def _fluent_node_id(subject: Term, property: Iri, object: Term, during: Interval) -> str:
    key = f"{subject.nq()}|{property.nq()}|{object.nq()}|{during}"
    return "fluent:" + hashlib.sha256(key.encode("utf-8")).hexdigest()[:16]


def fluents_for(
    dataset: Dataset,
    subject: Term | None = None,
    property: Iri | None = None,
    object: Term | None = None,
) -> list[FluentRelation]:
    """All reified fluents matching the bound positions, in node order."""
    out = []
    for q in dataset.match(predicate=RDF.type, object=KB.FluentRelation, graph=SYS_FLUENTS):
        node = q.subject
        props = dataset.match(subject=node, predicate=SISM.fluentProperty)
        if not props or not isinstance(props[0].object, Iri):
            continue
        prop = props[0].object
        if property is not None and prop != property:
            continue
        objs = [x.object for x in dataset.match(subject=node, predicate=prop)]
        if not objs:
            continue
        obj = objs[0]
        if object is not None and obj != object:
            continue
        subs = [x.subject for x in dataset.match(predicate=prop, object=node)]
        if not subs:
            continue
        subj = subs[0]
        if subject is not None and subj != subject:
            continue
        iv = None
        for dq in dataset.match(subject=node, predicate=KB.during):
            iv = resolve_interval(dataset, dq.object)
        if iv is None:
            continue
        prov = "asserted"
        for pq in dataset.match(subject=node, predicate=SISM.derivedBy):
            if isinstance(pq.object, Literal):
                prov = pq.object.lexical
        initiated = terminated = None
        for eq in dataset.match(subject=node, predicate=SISM.initiatedBy):
            if isinstance(eq.object, Iri):
                initiated = eq.object
        for eq in dataset.match(subject=node, predicate=SISM.terminatedBy):
            if isinstance(eq.object, Iri):
                terminated = eq.object
        out.append(FluentRelation(node, subj, prop, obj, iv, prov, initiated, terminated))
    return out


def assert_fluent(
    dataset: Dataset,
    subject: Iri,
    property: Iri,
    object: Term,
    during: Interval,
    provenance: str = "asserted",
    initiated_by: Iri | None = None,
    terminated_by: Iri | None = None,
) -> FluentOutcome:
    """Insert a reified fluent unless an equal-or-wider one already relates the
    same subject/property/object. Node ids are deterministic, so re-asserting
    the same fluent is idempotent (it blocks on its earlier self)."""
    if not isinstance(subject, Iri) and not isinstance(subject, SkolemNode):
        raise TermError("fluent subject must be an IRI or skolem node")
    if not isinstance(property, Iri):
        raise TermError("fluent property must be an IRI")
    for existing in fluents_for(dataset, subject=subject, property=property, object=object):
        if subsumes(existing.during, during):
            return FluentOutcome(False, existing.node)
    node = SkolemNode(_fluent_node_id(subject, property, object, during))
    quads = [
        Quad(subject, property, node, SYS_FLUENTS),
        Quad(node, RDF.type, KB.FluentRelation, SYS_FLUENTS),
        Quad(node, SISM.fluentProperty, property, SYS_FLUENTS),
        Quad(node, property, object, SYS_FLUENTS),
        Quad(node, KB.during, interval_node(during), SYS_FLUENTS),
        Quad(node, SISM.derivedBy, Literal(provenance), SYS_FLUENTS),
        *interval_quads(during),
    ]
    if initiated_by is not None:
        quads.append(Quad(node, SISM.initiatedBy, initiated_by, SYS_FLUENTS))
    if terminated_by is not None:
        quads.append(Quad(node, SISM.terminatedBy, terminated_by, SYS_FLUENTS))
    for q in quads:
        dataset.insert(q)
    return FluentOutcome(True, node)


def holds_at(dataset: Dataset, subject: Term, property: Iri, object: Term, t: Instant) -> bool:
    """True iff some fluent on (subject, property, object) covers the instant."""
    for f in fluents_for(dataset, subject=subject, property=property, object=object):
        if f.during.contains(t):
            return True
    return False
