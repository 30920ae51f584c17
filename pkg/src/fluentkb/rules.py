"""Rule DSL compiler and the alternating saturation engine.

Static rules derive plain triples (no fresh nodes); fluent-generating rules
produce reified FluentRelations guarded by interval subsumption. Saturation
alternates the two until a full round adds nothing. Also hosts the
writing-time bound aggregator.

DSL, one rule per block, `@prefix` lines allowed between rules:

    RULE <id>: WHEN <pattern> { . <pattern> }
        [ IF <operand> <op> <operand> ... ]
        THEN <pattern> { . <pattern> } .
    RULE <id>: WHEN ... THEN FLUENT ?s <propIri> ?o DURING [<expr>, <expr>] .

Patterns are Turtle-like triples with ?variables; interval-expression terms
are a variable bound to an instant, a bare date, START, or END.
"""
from __future__ import annotations

import datetime as _dt
import hashlib
import re
from dataclasses import dataclass, field
from typing import Union

from . import temporal
from .kb import KnowledgeBase
from .store import Dataset
from .temporal import END, START, Instant, Interval, assert_fluent, resolve_instant, resolve_interval
from .terms import (
    RDF_LANGSTRING,
    XSD_DATE,
    Iri,
    Literal,
    Quad,
    SkolemNode,
    Term,
    TermError,
)
from .vocab import BUILTIN_PREFIXES, KB, RDF, RDFS, SISM, SYS_INFERRED


class RuleSyntaxError(ValueError):
    def __init__(self, line: int, col: int, message: str):
        super().__init__(f"{line}:{col}: {message}")
        self.line = line
        self.col = col
        self.message = message


class RoundCapExceeded(RuntimeError):
    """The saturation round cap was hit; signals a non-conforming rule set."""


@dataclass(frozen=True, slots=True)
class Var:
    name: str

    def __str__(self) -> str:
        return f"?{self.name}"


PatternTerm = Union[Term, Var]
Operand = Union[Var, Instant]


@dataclass(frozen=True)
class Pattern:
    subject: PatternTerm
    predicate: PatternTerm
    object: PatternTerm

    def variables(self) -> set[Var]:
        return {t for t in (self.subject, self.predicate, self.object) if isinstance(t, Var)}


@dataclass(frozen=True)
class Condition:
    left: Operand
    op: str  # <= < = >= >
    right: Operand


@dataclass(frozen=True)
class FluentHead:
    subject: PatternTerm
    property: Iri
    object: PatternTerm
    begin: Operand
    end: Operand


@dataclass(frozen=True)
class Rule:
    id: str
    kind: str  # "static" | "fluent_generating"
    body: tuple[Pattern, ...]
    conditions: tuple[Condition, ...] = ()
    heads: tuple[Pattern, ...] = ()
    fluent: FluentHead | None = None


# -- compiler -----------------------------------------------------------------

_ID_RE = re.compile(r"[A-Za-z0-9_.\-]+")
_VAR_RE = re.compile(r"\?([A-Za-z_][A-Za-z0-9_]*)")
_DATE_RE = re.compile(r"\d{4}-\d{2}-\d{2}(?![0-9\-])")
_WORD_RE = re.compile(r"[A-Za-z][A-Za-z0-9_\-]*")
_PNAME_RE = re.compile(r"(?:[A-Za-z][A-Za-z0-9_\-]*)?:(?:[A-Za-z0-9_\-.%]*[A-Za-z0-9_\-%])?")
_OP_RE = re.compile(r"<=|>=|<|>|=")

_KEYWORDS = {"RULE", "WHEN", "IF", "THEN", "FLUENT", "DURING", "START", "END"}


class _RuleParser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.line = 1
        self.col = 1
        self.prefixes = dict(BUILTIN_PREFIXES)

    def _err(self, msg: str):
        raise RuleSyntaxError(self.line, self.col, msg)

    def _advance(self, n: int = 1):
        for _ in range(n):
            if self.pos < len(self.text):
                if self.text[self.pos] == "\n":
                    self.line += 1
                    self.col = 1
                else:
                    self.col += 1
                self.pos += 1

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

    def _peek_ch(self, k: int = 0) -> str:
        i = self.pos + k
        return self.text[i] if i < len(self.text) else ""

    def _take(self, pattern: re.Pattern) -> str | None:
        m = pattern.match(self.text, self.pos)
        if m is None or m.end() == self.pos:
            return None
        self._advance(m.end() - self.pos)
        return m.group(0)

    def _peek_keyword(self) -> str | None:
        self._skip_ws()
        m = _WORD_RE.match(self.text, self.pos)
        if m and m.group(0) in _KEYWORDS:
            return m.group(0)
        return None

    def _expect_keyword(self, kw: str):
        if self._peek_keyword() != kw:
            self._err(f"expected {kw}")
        self._advance(len(kw))

    def _expect(self, s: str):
        self._skip_ws()
        if not self.text.startswith(s, self.pos):
            self._err(f"expected {s!r}")
        self._advance(len(s))

    def _parse_iri_like(self) -> Iri:
        if self._peek_ch() == "<":
            self._advance()
            out = []
            while self._peek_ch() not in (">", "", " ", "\n", "\t"):
                out.append(self._peek_ch())
                self._advance()
            if self._peek_ch() != ">":
                self._err("unterminated IRI")
            self._advance()
            try:
                return Iri("".join(out))
            except TermError as exc:
                self._err(str(exc))
        pname = self._take(_PNAME_RE)
        if pname is None:
            self._err("expected an IRI or prefixed name")
        prefix, _, local = pname.partition(":")
        if prefix not in self.prefixes:
            self._err(f"unknown prefix {prefix + ':'!r}")
        return Iri(self.prefixes[prefix] + local)

    def _parse_literal(self) -> Literal:
        quote = self._peek_ch()
        self._advance()
        out = []
        while True:
            ch = self._peek_ch()
            if ch in ("", "\n"):
                self._err("unterminated string")
            if ch == quote:
                self._advance()
                break
            if ch == "\\":
                self._advance()
                esc = self._peek_ch()
                self._advance()
                mapping = {"n": "\n", "t": "\t", "r": "\r", '"': '"', "'": "'", "\\": "\\"}
                if esc not in mapping:
                    self._err(f"bad escape \\{esc}")
                out.append(mapping[esc])
            else:
                out.append(ch)
                self._advance()
        value = "".join(out)
        if self._peek_ch() == "@":
            self._advance()
            tag = self._take(re.compile(r"[A-Za-z]+(?:-[A-Za-z0-9]+)*"))
            if not tag:
                self._err("expected language tag")
            return Literal(value, RDF_LANGSTRING, tag)
        if self._peek_ch() == "^" and self._peek_ch(1) == "^":
            self._advance(2)
            dt = self._parse_iri_like()
            return Literal(value, dt.value)
        return Literal(value)

    def _parse_pattern_term(self, predicate_position: bool = False) -> PatternTerm:
        self._skip_ws()
        ch = self._peek_ch()
        if ch == "?":
            v = self._take(_VAR_RE)
            if v is None:
                self._err("expected variable name after '?'")
            return Var(v[1:])
        if ch in "\"'":
            return self._parse_literal()
        if ch == "[":
            self._err("fresh nodes are not allowed in rule patterns")
        if ch.isdigit():
            d = self._take(_DATE_RE)
            if d is not None:
                return Literal(d, XSD_DATE)
            num = self._take(re.compile(r"[+-]?\d+(?:\.\d+)?"))
            if num is not None:
                dt = "http://www.w3.org/2001/XMLSchema#" + ("decimal" if "." in num else "integer")
                return Literal(num, dt)
        if predicate_position and ch == "a":
            nxt = self._peek_ch(1)
            if nxt == "" or nxt in " \t\r\n?<\"":
                self._advance()
                return RDF.type
        return self._parse_iri_like()

    def _parse_pattern(self) -> Pattern:
        s = self._parse_pattern_term()
        p = self._parse_pattern_term(predicate_position=True)
        o = self._parse_pattern_term()
        return Pattern(s, p, o)

    def _parse_operand(self) -> Operand:
        self._skip_ws()
        kw = self._peek_keyword()
        if kw == "START":
            self._advance(len(kw))
            return START
        if kw == "END":
            self._advance(len(kw))
            return END
        ch = self._peek_ch()
        if ch == "?":
            v = self._take(_VAR_RE)
            if v is None:
                self._err("expected variable name after '?'")
            return Var(v[1:])
        if ch.isdigit():
            d = self._take(_DATE_RE)
            if d is not None:
                return Instant(date=_dt.date.fromisoformat(d))
        if ch in "\"'":
            lit = self._parse_literal()
            got = temporal.parse_instant_literal(
                lit if lit.datatype != "http://www.w3.org/2001/XMLSchema#string"
                else Literal(lit.lexical, XSD_DATE))
            if got is None:
                self._err(f"not a date: {lit.lexical!r}")
            return got
        self._err("expected a variable, date, START, or END")

    def _starts_operand(self) -> bool:
        self._skip_ws()
        ch = self._peek_ch()
        if ch == "?" or ch.isdigit() or ch in "\"'":
            return True
        return self._peek_keyword() in ("START", "END")

    def _parse_directive(self):
        self._expect("@prefix")
        self._skip_ws()
        name = self._take(re.compile(r"[A-Za-z][A-Za-z0-9_\-]*")) or ""
        self._expect(":")
        self._skip_ws()
        if self._peek_ch() != "<":
            self._err("expected IRI in @prefix")
        iri = self._parse_iri_like()
        self.prefixes[name] = iri.value
        self._expect(".")

    def _validate(self, rule: Rule) -> Rule:
        bound: set[Var] = set()
        for pat in rule.body:
            bound |= pat.variables()
        for cond in rule.conditions:
            for side in (cond.left, cond.right):
                if isinstance(side, Var) and side not in bound:
                    self._err(f"unbound condition variable ?{side.name}")
        if rule.kind == "static":
            for pat in rule.heads:
                for v in pat.variables():
                    if v not in bound:
                        self._err(f"unbound head variable ?{v.name}")
        else:
            fh = rule.fluent
            for t in (fh.subject, fh.object, fh.begin, fh.end):
                if isinstance(t, Var) and t not in bound:
                    self._err(f"unbound head variable ?{t.name}")
        return rule

    def _parse_rule(self) -> Rule:
        self._expect_keyword("RULE")
        self._skip_ws()
        rid = self._take(_ID_RE)
        if rid is None:
            self._err("expected rule id")
        self._expect(":")
        self._expect_keyword("WHEN")

        body: list[Pattern] = []
        while True:
            body.append(self._parse_pattern())
            self._skip_ws()
            if self._peek_ch() == ".":
                self._advance()
            kw = self._peek_keyword()
            if kw in ("IF", "THEN"):
                break
            if self._at_end():
                self._err("expected THEN")

        conditions: list[Condition] = []
        if self._peek_keyword() == "IF":
            self._advance(2)
            while True:
                left = self._parse_operand()
                self._skip_ws()
                op = self._take(_OP_RE)
                if op is None:
                    self._err("expected a comparison operator")
                right = self._parse_operand()
                conditions.append(Condition(left, op, right))
                if self._peek_keyword() == "THEN" or not self._starts_operand():
                    break

        self._expect_keyword("THEN")

        if self._peek_keyword() == "FLUENT":
            self._advance(len("FLUENT"))
            subj = self._parse_pattern_term()
            prop = self._parse_pattern_term(predicate_position=True)
            if not isinstance(prop, Iri):
                self._err("fluent property must be an IRI")
            obj = self._parse_pattern_term()
            self._expect_keyword("DURING")
            self._expect("[")
            begin = self._parse_operand()
            self._expect(",")
            end = self._parse_operand()
            self._expect("]")
            self._skip_ws()
            if self._peek_ch() == ".":
                self._advance()
            rule = Rule(rid, "fluent_generating", tuple(body), tuple(conditions),
                        fluent=FluentHead(subj, prop, obj, begin, end))
            return self._validate(rule)

        heads: list[Pattern] = []
        while True:
            heads.append(self._parse_pattern())
            self._skip_ws()
            if self._peek_ch() == ".":
                self._advance()
            if self._at_end() or self._peek_keyword() == "RULE":
                break
        rule = Rule(rid, "static", tuple(body), tuple(conditions), heads=tuple(heads))
        return self._validate(rule)

    def parse_all(self) -> list[Rule]:
        rules = []
        while not self._at_end():
            if self._peek_ch() == "@":
                self._parse_directive()
                continue
            rules.append(self._parse_rule())
        return rules


def compile_rules(text: str) -> list[Rule]:
    """Compile a whole `.rules` file."""
    return _RuleParser(text).parse_all()


def compile_rule(text: str) -> Rule:
    """Compile exactly one rule."""
    rules = compile_rules(text)
    if len(rules) != 1:
        raise RuleSyntaxError(1, 1, f"expected exactly one rule, found {len(rules)}")
    return rules[0]


# -- evaluation ----------------------------------------------------------------

Bindings = dict[Var, Term]


def _subst(t: PatternTerm, b: Bindings) -> PatternTerm:
    return b.get(t, t) if isinstance(t, Var) else t


def _binding_key(b: Bindings) -> tuple:
    return tuple(sorted((v.name, t.nq()) for v, t in b.items()))


def match_body(dataset: Dataset, rule: Rule) -> list[Bindings]:
    """All variable bindings satisfying the body patterns (graph-agnostic,
    triple-level) and the date comparison conditions, deterministically ordered."""
    bindings: list[Bindings] = [{}]
    for pat in rule.body:
        extended: list[Bindings] = []
        for b in bindings:
            s, p, o = _subst(pat.subject, b), _subst(pat.predicate, b), _subst(pat.object, b)
            quads = dataset.match(
                subject=None if isinstance(s, Var) else s,
                predicate=None if isinstance(p, Var) else p,
                object=None if isinstance(o, Var) else o,
            )
            seen_triples = set()
            for q in quads:
                trip = q.triple()
                if trip in seen_triples:
                    continue
                seen_triples.add(trip)
                b2 = dict(b)
                ok = True
                for patterm, value in ((pat.subject, q.subject), (pat.predicate, q.predicate),
                                       (pat.object, q.object)):
                    if isinstance(patterm, Var):
                        if patterm in b2 and b2[patterm] != value:
                            ok = False
                            break
                        b2[patterm] = value
                if ok:
                    extended.append(b2)
        bindings = extended

    out = []
    for b in bindings:
        if all(_eval_condition(dataset, c, b) for c in rule.conditions):
            out.append(b)
    unique = {_binding_key(b): b for b in out}
    return [unique[k] for k in sorted(unique)]


def _operand_instant(dataset: Dataset, operand: Operand, b: Bindings) -> Instant | None:
    if isinstance(operand, Instant):
        return operand
    term = b.get(operand)
    if term is None:
        return None
    return resolve_instant(dataset, term)


def _eval_condition(dataset: Dataset, cond: Condition, b: Bindings) -> bool:
    left = _operand_instant(dataset, cond.left, b)
    right = _operand_instant(dataset, cond.right, b)
    if left is None or right is None:
        return False
    if cond.op == "<=":
        return left <= right
    if cond.op == "<":
        return left < right
    if cond.op == "=":
        return left == right
    if cond.op == ">=":
        return left >= right
    return left > right


def _record_bound_provenance(dataset: Dataset, s: Term, p: Iri, o: Term, rule_id: str):
    key = f"{s.nq()}|{p.nq()}|{o.nq()}"
    node = SkolemNode("prov:" + hashlib.sha256(key.encode("utf-8")).hexdigest()[:16])
    for q in (
        Quad(node, SISM.provSubject, s, SYS_INFERRED),
        Quad(node, SISM.provPredicate, p, SYS_INFERRED),
        Quad(node, SISM.provObject, o, SYS_INFERRED),
        Quad(node, SISM.derivedBy, Literal(rule_id), SYS_INFERRED),
    ):
        dataset.insert(q)


def bound_provenance(dataset: Dataset, s: Term, p: Iri, o: Term) -> str | None:
    """Rule id recorded for a derived notBefore/notAfter bound, if any."""
    key = f"{s.nq()}|{p.nq()}|{o.nq()}"
    node = SkolemNode("prov:" + hashlib.sha256(key.encode("utf-8")).hexdigest()[:16])
    for q in dataset.match(subject=node, predicate=SISM.derivedBy, graph=SYS_INFERRED):
        if isinstance(q.object, Literal):
            return q.object.lexical
    return None


def _builtin_derivations(dataset: Dataset):
    """RDFS fragment: subClassOf/subPropertyOf transitivity and propagation."""
    derived = []
    sub = [(q.subject, q.object) for q in dataset.match(predicate=RDFS.subClassOf)]
    sup_of: dict[Term, list[Term]] = {}
    for a, c in sub:
        sup_of.setdefault(a, []).append(c)
    for a, c in sub:
        for d in sup_of.get(c, ()):
            derived.append((a, RDFS.subClassOf, d))
    for q in dataset.match(predicate=RDF.type):
        for d in sup_of.get(q.object, ()):
            derived.append((q.subject, RDF.type, d))
    subp = [(q.subject, q.object) for q in dataset.match(predicate=RDFS.subPropertyOf)]
    psup: dict[Term, list[Term]] = {}
    for a, c in subp:
        psup.setdefault(a, []).append(c)
    for a, c in subp:
        for d in psup.get(c, ()):
            derived.append((a, RDFS.subPropertyOf, d))
    for p, supers in psup.items():
        if not isinstance(p, Iri):
            continue
        for q in dataset.match(predicate=p):
            for sp in supers:
                if isinstance(sp, Iri):
                    derived.append((q.subject, sp, q.object))
    return derived


def apply_static_rules(kb: KnowledgeBase, rules: list[Rule]) -> int:
    """Least fixpoint of the static rules plus the built-in schema rules;
    derived triples land in sys:inferred. Returns the count of genuinely new
    triples (triple-level, across graphs)."""
    for r in rules:
        if r.kind != "static":
            raise ValueError(f"rule {r.id} is not static")
    dataset = kb.dataset
    total = 0
    while True:
        new_count = 0
        pending: list[tuple[Term, Iri, Term, str | None]] = []
        for s, p, o in _builtin_derivations(dataset):
            pending.append((s, p, o, None))
        for rule in rules:
            for b in match_body(dataset, rule):
                for head in rule.heads:
                    s = _subst(head.subject, b)
                    p = _subst(head.predicate, b)
                    o = _subst(head.object, b)
                    if isinstance(s, Literal) or not isinstance(p, Iri):
                        continue
                    pending.append((s, p, o, rule.id))
        for s, p, o, rid in pending:
            if dataset.has_triple(s, p, o):
                continue
            dataset.insert(Quad(s, p, o, SYS_INFERRED))
            if rid is not None and p in (KB.notBefore, KB.notAfter):
                _record_bound_provenance(dataset, s, p, o, rid)
            new_count += 1
        if new_count == 0:
            break
        total += new_count
    return total


@dataclass
class FluentApplication:
    new: int = 0
    blocked: int = 0
    diagnostics: list[str] = field(default_factory=list)


def apply_fluent_rules(kb: KnowledgeBase, rules: list[Rule]) -> FluentApplication:
    """One pass of every fluent-generating rule; the subsumption guard is
    applied implicitly via assert_fluent."""
    for r in rules:
        if r.kind != "fluent_generating":
            raise ValueError(f"rule {r.id} is not fluent-generating")
    dataset = kb.dataset
    result = FluentApplication()
    for rule in rules:
        fh = rule.fluent
        for b in match_body(dataset, rule):
            subj = _subst(fh.subject, b)
            obj = _subst(fh.object, b)
            if isinstance(subj, (Literal, Var)) or isinstance(obj, Var):
                continue
            begin = _operand_instant(dataset, fh.begin, b)
            end = _operand_instant(dataset, fh.end, b)
            if begin is None or end is None:
                result.diagnostics.append(
                    f"rule {rule.id}: interval endpoint did not resolve to an instant")
                continue
            if begin > end:
                result.diagnostics.append(
                    f"rule {rule.id}: interval begin {begin} after end {end}; match skipped")
                continue
            outcome = assert_fluent(dataset, subj, fh.property, obj,
                                    Interval(begin, end), provenance=rule.id)
            if outcome.inserted:
                result.new += 1
            else:
                result.blocked += 1
    return result


@dataclass
class SaturationReport:
    rounds: int = 0
    new_static_triples: int = 0
    new_fluents: int = 0
    blocked_fluents: int = 0
    diagnostics: list[str] = field(default_factory=list)


def saturate(
    kb: KnowledgeBase,
    static_rules: list[Rule],
    fluent_rules: list[Rule],
    round_cap: int | None = None,
) -> SaturationReport:
    """Alternate static fixpoint and fluent generation until one full round
    adds nothing. Terminates on valid input because static rules add no nodes
    and the store's finite date set yields finitely many distinct fluents."""
    cap = round_cap if round_cap is not None else kb.config.round_cap
    report = SaturationReport()
    while True:
        report.rounds += 1
        if report.rounds > cap:
            raise RoundCapExceeded(
                f"saturation did not quiesce within {cap} rounds; "
                "the rule set or data violates the engine's assumptions")
        new_static = apply_static_rules(kb, static_rules)
        fl = apply_fluent_rules(kb, fluent_rules)
        report.new_static_triples += new_static
        report.new_fluents += fl.new
        report.blocked_fluents += fl.blocked
        report.diagnostics.extend(fl.diagnostics)
        if new_static == 0 and fl.new == 0:
            break
    return report


# -- writing-time inference ------------------------------------------------------


@dataclass
class WritingTimeReport:
    updated: int = 0
    contradictions: list[tuple[Iri, str]] = field(default_factory=list)


def manuscript_interval(dataset: Dataset, manuscript: Term) -> tuple[Interval | None, str | None]:
    """The manuscript's writing interval: explicit :writingTime wins, else
    :inferredWritingTime. Returns (interval, "explicit"|"inferred"|None)."""
    for q in dataset.match(subject=manuscript, predicate=KB.writingTime):
        iv = resolve_interval(dataset, q.object)
        if iv is not None:
            return iv, "explicit"
    for q in dataset.match(subject=manuscript, predicate=KB.inferredWritingTime):
        iv = resolve_interval(dataset, q.object)
        if iv is not None:
            return iv, "inferred"
    return None, None


def infer_writing_times(kb: KnowledgeBase) -> WritingTimeReport:
    """Aggregate :notBefore/:notAfter evidence into :inferredWritingTime for
    manuscripts lacking an explicit :writingTime. Contradictory evidence is
    reported, not raised."""
    dataset = kb.dataset
    report = WritingTimeReport()
    manuscripts: set[Term] = set()
    for p in (KB.notBefore, KB.notAfter):
        manuscripts.update(q.subject for q in dataset.match(predicate=p))
    for m in sorted(manuscripts, key=lambda t: t.nq()):
        if dataset.match(subject=m, predicate=KB.writingTime):
            continue
        lowers = [resolve_instant(dataset, q.object)
                  for q in dataset.match(subject=m, predicate=KB.notBefore)]
        uppers = [resolve_instant(dataset, q.object)
                  for q in dataset.match(subject=m, predicate=KB.notAfter)]
        lowers = [x for x in lowers if x is not None]
        uppers = [x for x in uppers if x is not None]
        if not lowers and not uppers:
            continue
        begin = max(lowers) if lowers else START
        end = min(uppers) if uppers else END
        if begin > end:
            report.contradictions.append(
                (m, f"notBefore {begin} exceeds notAfter {end}"))
            continue
        iv = Interval(begin, end)
        for old in dataset.match(subject=m, predicate=KB.inferredWritingTime):
            dataset.remove(old)
        dataset.insert(Quad(m, KB.inferredWritingTime, temporal.interval_node(iv), SYS_INFERRED))
        for q in temporal.interval_quads(iv):
            dataset.insert(Quad(q.subject, q.predicate, q.object, SYS_INFERRED))
        report.updated += 1
    return report
