"""RDF terms and quads with canonical N-Quads serialization."""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Union

XSD = "http://www.w3.org/2001/XMLSchema#"
XSD_STRING = XSD + "string"
XSD_DATE = XSD + "date"
XSD_GYEAR = XSD + "gYear"
XSD_INTEGER = XSD + "integer"
XSD_DECIMAL = XSD + "decimal"
XSD_DOUBLE = XSD + "double"
XSD_BOOLEAN = XSD + "boolean"
RDF_LANGSTRING = "http://www.w3.org/1999/02/22-rdf-syntax-ns#langString"

SKOLEM_PREFIX = "urn:skolem:"

_SCHEME_RE = re.compile(r"^[A-Za-z][A-Za-z0-9+.\-]*:")


class TermError(ValueError):
    """Raised when a term or quad violates a structural invariant."""


@dataclass(frozen=True, slots=True)
class Iri:
    value: str

    def __post_init__(self):
        if not _SCHEME_RE.match(self.value):
            raise TermError(f"IRI must be absolute (scheme missing): {self.value!r}")

    def nq(self) -> str:
        return f"<{self.value}>"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True, slots=True)
class Literal:
    lexical: str
    datatype: str = XSD_STRING
    lang: str | None = None

    def __post_init__(self):
        if self.lang is not None and self.datatype != RDF_LANGSTRING:
            raise TermError("language tag requires the language-string datatype")
        if self.lang is None and self.datatype == RDF_LANGSTRING:
            raise TermError("language-string literal requires a language tag")

    def nq(self) -> str:
        body = f'"{escape_string(self.lexical)}"'
        if self.lang is not None:
            return f"{body}@{self.lang}"
        if self.datatype == XSD_STRING:
            return body
        return f"{body}^^<{self.datatype}>"


@dataclass(frozen=True, slots=True)
class SkolemNode:
    id: str

    def __post_init__(self):
        if not self.id:
            raise TermError("SkolemNode id must be nonempty")

    def nq(self) -> str:
        return f"<{SKOLEM_PREFIX}{self.id}>"


Term = Union[Iri, Literal, SkolemNode]


def escape_string(s: str) -> str:
    out = []
    for ch in s:
        if ch == "\\":
            out.append("\\\\")
        elif ch == '"':
            out.append('\\"')
        elif ch == "\n":
            out.append("\\n")
        elif ch == "\r":
            out.append("\\r")
        elif ch == "\t":
            out.append("\\t")
        elif ord(ch) < 0x20:
            out.append("\\u%04X" % ord(ch))
        else:
            out.append(ch)
    return "".join(out)


@dataclass(frozen=True, slots=True)
class Quad:
    subject: Term
    predicate: Term
    object: Term
    graph: Iri

    def __post_init__(self):
        if isinstance(self.subject, Literal):
            raise TermError("quad subject must not be a literal")
        if not isinstance(self.predicate, Iri):
            raise TermError("quad predicate must be an IRI")
        if not isinstance(self.graph, Iri):
            raise TermError("quad graph must be an IRI")

    def nq_line(self) -> str:
        return (
            f"{self.subject.nq()} {self.predicate.nq()} "
            f"{self.object.nq()} {self.graph.nq()} ."
        )

    def triple(self) -> tuple[Term, Term, Term]:
        return (self.subject, self.predicate, self.object)
