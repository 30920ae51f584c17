"""Turtle-subset parser and canonical N-Quads serialization.

The Turtle subset covers: @prefix/@base, the `a` keyword, absolute and
prefixed IRIs, string literals with `^^` and `@lang`, numeric and boolean
shorthand, `;`/`,` lists, anonymous `[ ... ]` property lists, labeled blank
nodes, and comments. Collections and quoted triples are rejected.

Blank nodes are skolemized to `doc<hash>:b<n>` ids so parsing the same text
always yields the same nodes.
"""
from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass, field

from .terms import (
    RDF_LANGSTRING,
    SKOLEM_PREFIX,
    XSD_BOOLEAN,
    XSD_DECIMAL,
    XSD_DOUBLE,
    XSD_INTEGER,
    XSD_STRING,
    Iri,
    Literal,
    Quad,
    SkolemNode,
    Term,
    TermError,
)
from .vocab import BUILTIN_PREFIXES, RDF

Diagnostic = tuple[int, int, str]


@dataclass
class ParseOutcome:
    quads: list[Quad] = field(default_factory=list)
    prefixes: dict[str, str] = field(default_factory=dict)
    diagnostics: list[Diagnostic] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.diagnostics


class _ParseError(Exception):
    def __init__(self, line: int, col: int, message: str):
        super().__init__(f"{line}:{col}: {message}")
        self.line = line
        self.col = col
        self.message = message


_PN_LOCAL = re.compile(r"(?:[A-Za-z0-9_\-\u00C0-\U0010FFFF]|\.(?=[A-Za-z0-9_\-\u00C0-\U0010FFFF]))*")
_PN_PREFIX = re.compile(r"[A-Za-z\u00C0-\U0010FFFF][A-Za-z0-9_\-\u00C0-\U0010FFFF]*")
_NUMBER = re.compile(r"[+-]?(?:\d+\.\d+(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?|\d+(?:[eE][+-]?\d+)?)")
_LANGTAG = re.compile(r"[A-Za-z]+(?:-[A-Za-z0-9]+)*")


class _TurtleParser:
    def __init__(self, text: str, target_graph: Iri):
        self.text = text
        self.graph = target_graph
        self.pos = 0
        self.line = 1
        self.col = 1
        self.prefixes: dict[str, str] = dict(BUILTIN_PREFIXES)
        self.base: str | None = None
        self.quads: list[Quad] = []
        self._doc_tag = "doc" + hashlib.sha256(text.encode("utf-8")).hexdigest()[:8]
        self._bnode_counter = 0
        self._bnode_labels: dict[str, SkolemNode] = {}

    # -- low-level scanning ------------------------------------------------

    def _err(self, msg: str, line: int | None = None, col: int | None = None):
        raise _ParseError(line or self.line, col or self.col, msg)

    def _advance(self, n: int = 1):
        for _ in range(n):
            if self.pos < len(self.text):
                if self.text[self.pos] == "\n":
                    self.line += 1
                    self.col = 1
                else:
                    self.col += 1
                self.pos += 1

    def _peek(self, k: int = 0) -> str:
        i = self.pos + k
        return self.text[i] if i < len(self.text) else ""

    def _skip_ws(self):
        while self.pos < len(self.text):
            ch = self.text[self.pos]
            if ch in " \t\r\n":
                self._advance()
            elif ch == "#":
                while self.pos < len(self.text) and self.text[self.pos] != "\n":
                    self._advance()
            else:
                break

    def _at_end(self) -> bool:
        self._skip_ws()
        return self.pos >= len(self.text)

    def _expect(self, s: str):
        self._skip_ws()
        if not self.text.startswith(s, self.pos):
            self._err(f"expected {s!r}")
        self._advance(len(s))

    def _match_re(self, pattern: re.Pattern) -> str | None:
        m = pattern.match(self.text, self.pos)
        if m is None or m.end() == self.pos and pattern is not _PN_LOCAL:
            return None
        s = m.group(0)
        self._advance(len(s))
        return s

    # -- term parsing --------------------------------------------------------

    def _fresh_bnode(self) -> SkolemNode:
        self._bnode_counter += 1
        return SkolemNode(f"{self._doc_tag}:b{self._bnode_counter}")

    def _labeled_bnode(self, label: str) -> SkolemNode:
        if label not in self._bnode_labels:
            self._bnode_labels[label] = self._fresh_bnode()
        return self._bnode_labels[label]

    def _resolve_iri(self, ref: str, line: int, col: int) -> Iri:
        if re.match(r"^[A-Za-z][A-Za-z0-9+.\-]*:", ref):
            return Iri(ref)
        if self.base is None:
            self._err(f"relative IRI {ref!r} with no @base", line, col)
        return Iri(self.base + ref)

    def _parse_iriref(self) -> Iri:
        line, col = self.line, self.col
        self._expect("<")
        out = []
        while True:
            ch = self._peek()
            if ch == "":
                self._err("unterminated IRI", line, col)
            if ch == ">":
                self._advance()
                break
            if ch in " \t\r\n":
                self._err("whitespace inside IRI", line, col)
            out.append(ch)
            self._advance()
        return self._resolve_iri("".join(out), line, col)

    def _parse_pname(self) -> Iri:
        line, col = self.line, self.col
        prefix = ""
        m = _PN_PREFIX.match(self.text, self.pos)
        if m:
            prefix = m.group(0)
            self._advance(len(prefix))
        if self._peek() != ":":
            self._err("expected ':' in prefixed name", line, col)
        self._advance()
        local = self._match_re(_PN_LOCAL) or ""
        if prefix not in self.prefixes:
            self._err(f"unknown prefix {prefix + ':'!r}", line, col)
        return Iri(self.prefixes[prefix] + local)

    def _parse_string(self) -> str:
        line, col = self.line, self.col
        quote = self._peek()
        self._advance()
        out = []
        while True:
            ch = self._peek()
            if ch == "":
                self._err("unterminated string", line, col)
            if ch == quote:
                self._advance()
                return "".join(out)
            if ch == "\n":
                self._err("newline in string (long strings unsupported)", line, col)
            if ch == "\\":
                self._advance()
                esc = self._peek()
                self._advance()
                mapping = {"n": "\n", "r": "\r", "t": "\t", "b": "\b", "f": "\f",
                           '"': '"', "'": "'", "\\": "\\"}
                if esc in mapping:
                    out.append(mapping[esc])
                elif esc == "u":
                    hexs = self.text[self.pos:self.pos + 4]
                    if len(hexs) < 4 or not re.fullmatch(r"[0-9A-Fa-f]{4}", hexs):
                        self._err("bad \\u escape", line, col)
                    self._advance(4)
                    out.append(chr(int(hexs, 16)))
                elif esc == "U":
                    hexs = self.text[self.pos:self.pos + 8]
                    if len(hexs) < 8 or not re.fullmatch(r"[0-9A-Fa-f]{8}", hexs):
                        self._err("bad \\U escape", line, col)
                    self._advance(8)
                    out.append(chr(int(hexs, 16)))
                else:
                    self._err(f"bad escape \\{esc}", line, col)
            else:
                out.append(ch)
                self._advance()

    def _parse_literal(self) -> Literal:
        value = self._parse_string()
        if self._peek() == "@":
            self._advance()
            tag = self._match_re(_LANGTAG)
            if not tag:
                self._err("expected language tag after '@'")
            return Literal(value, RDF_LANGSTRING, tag)
        if self._peek() == "^" and self._peek(1) == "^":
            self._advance(2)
            self._skip_ws()
            if self._peek() == "<":
                dt = self._parse_iriref()
            else:
                dt = self._parse_pname()
            if dt.value == RDF_LANGSTRING:
                self._err("langString literal requires a language tag")
            return Literal(value, dt.value)
        return Literal(value)

    def _parse_object(self) -> Term:
        self._skip_ws()
        ch = self._peek()
        if ch == "<":
            return self._parse_iriref()
        if ch in '"\'':
            return self._parse_literal()
        if ch == "[":
            return self._parse_bnode_property_list()
        if ch == "(":
            self._err("collections are not supported")
        if ch == "_" and self._peek(1) == ":":
            self._advance(2)
            label = self._match_re(_PN_LOCAL)
            if not label:
                self._err("expected blank node label")
            return self._labeled_bnode(label)
        num = _NUMBER.match(self.text, self.pos)
        if num and (ch.isdigit() or ch in "+-." ):
            s = num.group(0)
            self._advance(len(s))
            if "e" in s or "E" in s:
                dt = XSD_DOUBLE
            elif "." in s:
                dt = XSD_DECIMAL
            else:
                dt = XSD_INTEGER
            return Literal(s, dt)
        word = re.match(r"[A-Za-z\u00C0-\U0010FFFF][A-Za-z0-9_\-\u00C0-\U0010FFFF]*(?=\s|[;,.\])]|$)", self.text[self.pos:])
        if word and word.group(0) in ("true", "false"):
            self._advance(len(word.group(0)))
            return Literal(word.group(0), XSD_BOOLEAN)
        return self._parse_pname()

    def _parse_subject(self) -> Term:
        self._skip_ws()
        ch = self._peek()
        if ch == "<":
            return self._parse_iriref()
        if ch == "[":
            return self._parse_bnode_property_list()
        if ch == "(":
            self._err("collections are not supported")
        if ch == "_" and self._peek(1) == ":":
            self._advance(2)
            label = self._match_re(_PN_LOCAL)
            if not label:
                self._err("expected blank node label")
            return self._labeled_bnode(label)
        return self._parse_pname()

    def _parse_predicate(self) -> Iri:
        self._skip_ws()
        ch = self._peek()
        if ch == "<":
            return self._parse_iriref()
        if ch == "a" and (self._peek(1) in " \t\r\n<[\"" or self._peek(1) == ""):
            self._advance()
            return RDF.type
        return self._parse_pname()

    def _emit(self, s: Term, p: Iri, o: Term):
        try:
            self.quads.append(Quad(s, p, o, self.graph))
        except TermError as exc:
            self._err(str(exc))

    def _parse_bnode_property_list(self) -> SkolemNode:
        self._expect("[")
        node = self._fresh_bnode()
        self._skip_ws()
        if self._peek() == "]":
            self._advance()
            return node
        self._parse_predicate_object_list(node)
        self._skip_ws()
        self._expect("]")
        return node

    def _parse_predicate_object_list(self, subject: Term):
        while True:
            p = self._parse_predicate()
            while True:
                o = self._parse_object()
                self._emit(subject, p, o)
                self._skip_ws()
                if self._peek() == ",":
                    self._advance()
                    continue
                break
            self._skip_ws()
            if self._peek() == ";":
                self._advance()
                self._skip_ws()
                # allow trailing ';' before '.' or ']'
                if self._peek() in ".]":
                    return
                continue
            return

    def _parse_directive(self):
        if self.text.startswith("@prefix", self.pos):
            self._advance(len("@prefix"))
            self._skip_ws()
            m = _PN_PREFIX.match(self.text, self.pos)
            name = ""
            if m:
                name = m.group(0)
                self._advance(len(name))
            self._expect(":")
            self._skip_ws()
            iri = self._parse_iriref()
            self.prefixes[name] = iri.value
            self._expect(".")
        elif self.text.startswith("@base", self.pos):
            self._advance(len("@base"))
            self._skip_ws()
            iri = self._parse_iriref()
            self.base = iri.value
            self._expect(".")
        else:
            self._err("unknown directive")

    def parse(self) -> ParseOutcome:
        try:
            while not self._at_end():
                if self._peek() == "@":
                    self._parse_directive()
                    continue
                subject = self._parse_subject()
                self._skip_ws()
                if self._peek() != ".":
                    self._parse_predicate_object_list(subject)
                self._expect(".")
            user_prefixes = {k: v for k, v in self.prefixes.items()
                             if BUILTIN_PREFIXES.get(k) != v}
            return ParseOutcome(self.quads, user_prefixes, [])
        except _ParseError as exc:
            return ParseOutcome([], {}, [(exc.line, exc.col, exc.message)])


def parse_turtle(text: str, target_graph: Iri) -> ParseOutcome:
    """Parse the Turtle subset; all quads land in target_graph."""
    return _TurtleParser(text, target_graph).parse()


# -- canonical N-Quads -------------------------------------------------------


def serialize_nquads(quads) -> str:
    """Canonical snapshot text: sorted unique LF-terminated lines."""
    lines = sorted({q.nq_line() for q in quads})
    return "".join(line + "\n" for line in lines)


_NQ_TERM = re.compile(
    r"""\s*(?:
        <(?P<iri>[^>\s]*)>
      | "(?P<lit>(?:[^"\\]|\\.)*)"
        (?:@(?P<lang>[A-Za-z]+(?:-[A-Za-z0-9]+)*)|\^\^<(?P<dt>[^>\s]*)>)?
    )""",
    re.VERBOSE,
)

_UNESCAPE = {
    "\\\\": "\\", '\\"': '"', "\\n": "\n", "\\r": "\r", "\\t": "\t",
    "\\b": "\b", "\\f": "\f",
}


def _unescape(s: str) -> str:
    def repl(m: re.Match) -> str:
        esc = m.group(0)
        if esc in _UNESCAPE:
            return _UNESCAPE[esc]
        if esc.startswith("\\u"):
            return chr(int(esc[2:], 16))
        if esc.startswith("\\U"):
            return chr(int(esc[2:], 16))
        raise ValueError(f"bad escape {esc!r}")

    return re.sub(r"\\U[0-9A-Fa-f]{8}|\\u[0-9A-Fa-f]{4}|\\.", repl, s)


def _nq_node(raw_iri: str) -> Term:
    if raw_iri.startswith(SKOLEM_PREFIX):
        return SkolemNode(raw_iri[len(SKOLEM_PREFIX):])
    return Iri(raw_iri)


def parse_nquads(text: str) -> list[Quad]:
    """Parse snapshot text; `urn:skolem:` IRIs rehydrate as SkolemNodes."""
    quads: list[Quad] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        pos = 0
        terms: list[Term] = []
        for _ in range(4):
            m = _NQ_TERM.match(line, pos)
            if m is None:
                raise ValueError(f"line {lineno}: malformed N-Quads term at column {pos + 1}")
            pos = m.end()
            if m.group("iri") is not None:
                terms.append(_nq_node(m.group("iri")))
            else:
                lex = _unescape(m.group("lit"))
                if m.group("lang"):
                    terms.append(Literal(lex, RDF_LANGSTRING, m.group("lang")))
                elif m.group("dt"):
                    terms.append(Literal(lex, m.group("dt")))
                else:
                    terms.append(Literal(lex, XSD_STRING))
        rest = line[pos:].strip()
        if rest != ".":
            raise ValueError(f"line {lineno}: expected terminating '.'")
        s, p, o, g = terms
        if not isinstance(g, Iri):
            raise ValueError(f"line {lineno}: graph must be an IRI")
        quads.append(Quad(s, p, o, g))
    return quads
