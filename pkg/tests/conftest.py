"""Shared fixtures: fresh stores and the fully imported desk corpus."""
from __future__ import annotations

import pathlib

import pytest

from fluentkb import KnowledgeBase
from fluentkb import kres, rdf_io, rules
from fluentkb.terms import Iri

FIXTURES = pathlib.Path(__file__).resolve().parent.parent / "fixtures"
RES = "http://sism.example/resource/"
KBNS = "http://sism.example/kb#"

T1896 = Iri(RES + "terminology-1896")
T1905 = Iri(RES + "terminology-1905")
LINGUISTICS = Iri(RES + "linguistics")
PHONATION_1896 = Iri(T1896.value + "/concept/phonation")
PHONATION_1905 = Iri(T1905.value + "/concept/phonation")


def parse_fixture(name: str, graph: str | Iri):
    g = graph if isinstance(graph, Iri) else Iri(graph)
    outcome = rdf_io.parse_turtle((FIXTURES / name).read_text(encoding="utf-8"), g)
    assert outcome.ok, outcome.diagnostics
    return outcome.quads


def import_fixture(kb, name, kind, rid, label=None):
    r = rid if isinstance(rid, Iri) else Iri(rid)
    report = kres.import_resource(kb, parse_fixture(name, r), kind, r, label=label)
    assert report.accepted, report.clashes
    return report


def corpus_rules():
    return rules.compile_rules((FIXTURES / "saussure.rules").read_text(encoding="utf-8"))


def split_rules(compiled):
    return ([r for r in compiled if r.kind == "static"],
            [r for r in compiled if r.kind == "fluent_generating"])


@pytest.fixture
def kb():
    return KnowledgeBase()


@pytest.fixture
def corpus_kb():
    """All five fixture resources imported, alignments loaded, nothing derived yet."""
    kb = KnowledgeBase()
    import_fixture(kb, "skos-linguistics.ttl", "skos_thesaurus", LINGUISTICS, "Linguistics")
    import_fixture(kb, "terminology-1896.ttl", "terminology", T1896, "Terminology 1896")
    import_fixture(kb, "terminology-1905.ttl", "terminology", T1905, "Terminology 1905")
    import_fixture(kb, "people.ttl", "owl_ontology", RES + "people", "People")
    import_fixture(kb, "letters.ttl", "owl_ontology", RES + "letters", "Letters")
    kres.load_alignments_csv(kb, (FIXTURES / "alignments.csv").read_text(encoding="utf-8"))
    return kb


@pytest.fixture
def saturated_kb(corpus_kb):
    """Corpus after rule saturation and writing-time inference."""
    static, fluent = split_rules(corpus_rules())
    rules.saturate(corpus_kb, static, fluent)
    rules.infer_writing_times(corpus_kb)
    return corpus_kb
