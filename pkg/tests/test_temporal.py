"""Instants, intervals, Allen comparison, and reified fluents."""
from __future__ import annotations

import datetime as dt
import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fluentkb import rdf_io, temporal
from fluentkb.store import Dataset
from fluentkb.temporal import (
    END,
    START,
    AllenRelation,
    Instant,
    Interval,
    assert_fluent,
    fluents_for,
    holds_at,
    instant_from_date,
    interval_compare,
    parse_instant_literal,
    subsumes,
    year_interval,
)
from fluentkb.terms import Iri, Literal, TermError, XSD_DATE, XSD_GYEAR
from fluentkb.vocab import SYS_FLUENTS

KB = "http://sism.example/kb#"
SAUSSURE = Iri(KB + "saussure")
LIVED_IN = Iri(KB + "livedIn")
GERMANY = Iri(KB + "Germany")


def day(y, m=1, d=1):
    return instant_from_date(dt.date(y, m, d))


def iv(y1, y2):
    return Interval(day(y1), day(y2, 12, 31))


class TestInstants:
    def test_total_order_with_sentinels(self):
        assert START < day(1800) < day(1900) < END
        assert not START < START and not END < END

    def test_parse_date_and_gyear_literals(self):
        assert parse_instant_literal(Literal("1894-01-04", XSD_DATE)) == day(1894, 1, 4)
        assert parse_instant_literal(Literal("1857", XSD_GYEAR)) == day(1857)
        assert parse_instant_literal(Literal("not a date", XSD_DATE)) is None

    def test_year_interval_spans_jan_to_dec(self):
        assert year_interval(1857) == Interval(day(1857, 1, 1), day(1857, 12, 31))


class TestIntervals:
    def test_begin_after_end_rejected(self):
        with pytest.raises((ValueError, TermError)):
            Interval(day(1900), day(1890))

    def test_allen_examples(self):
        assert interval_compare(iv(1876, 1881), iv(1876, 1881)) is AllenRelation.EQUALS
        assert interval_compare(iv(1876, 1881), iv(1878, 1879)) is AllenRelation.CONTAINS
        assert interval_compare(
            Interval(day(1876), day(1881)), Interval(day(1881), day(1890))
        ) is AllenRelation.MEETS

    def test_allen_exhaustive_and_exclusive(self):
        points = [START, day(1890), day(1894, 6, 1), day(1900), day(1905), day(1911), END]
        intervals = [Interval(a, b) for a, b in itertools.product(points, points) if a <= b]
        for i1 in intervals:
            for i2 in intervals:
                rel = interval_compare(i1, i2)
                assert isinstance(rel, AllenRelation)

    def test_allen_inverse_symmetry(self):
        inverse = {
            AllenRelation.BEFORE: AllenRelation.AFTER,
            AllenRelation.MEETS: AllenRelation.MET_BY,
            AllenRelation.OVERLAPS: AllenRelation.OVERLAPPED_BY,
            AllenRelation.STARTS: AllenRelation.STARTED_BY,
            AllenRelation.DURING: AllenRelation.CONTAINS,
            AllenRelation.FINISHES: AllenRelation.FINISHED_BY,
            AllenRelation.EQUALS: AllenRelation.EQUALS,
        }
        inverse.update({v: k for k, v in inverse.items()})
        points = [START, day(1890), day(1900), END]
        intervals = [Interval(a, b) for a, b in itertools.product(points, points) if a <= b]
        for i1 in intervals:
            for i2 in intervals:
                assert interval_compare(i2, i1) is inverse[interval_compare(i1, i2)]

    def test_subsumes_examples(self):
        assert subsumes(Interval(day(1870), END), Interval(day(1891), END))
        assert subsumes(iv(1876, 1881), iv(1876, 1881))
        assert not subsumes(iv(1876, 1881), Interval(day(1875), day(1881, 12, 31)))


_instants = st.sampled_from(
    [START, END] + [instant_from_date(dt.date(y, m, 1)) for y in (1890, 1900) for m in (1, 6)])


@st.composite
def _intervals(draw):
    a, b = draw(_instants), draw(_instants)
    return Interval(min(a, b), max(a, b))


@settings(max_examples=100)
@given(_intervals(), _intervals(), _intervals())
def test_subsumes_is_a_partial_order(a, b, c):
    assert subsumes(a, a)
    if subsumes(a, b) and subsumes(b, a):
        assert a == b
    if subsumes(a, b) and subsumes(b, c):
        assert subsumes(a, c)


class TestFluents:
    def test_assert_then_block(self):
        d = Dataset()
        first = assert_fluent(d, SAUSSURE, LIVED_IN, GERMANY, iv(1876, 1881))
        assert first.inserted
        again = assert_fluent(d, SAUSSURE, LIVED_IN, GERMANY, iv(1876, 1881))
        assert not again.inserted and again.node == first.node
        narrower = assert_fluent(d, SAUSSURE, LIVED_IN, GERMANY, iv(1877, 1880))
        assert not narrower.inserted

    def test_wider_fluent_still_inserts(self):
        d = Dataset()
        assert_fluent(d, SAUSSURE, LIVED_IN, GERMANY, iv(1877, 1880))
        wider = assert_fluent(d, SAUSSURE, LIVED_IN, GERMANY, iv(1876, 1881))
        assert wider.inserted
        assert len(fluents_for(d, subject=SAUSSURE)) == 2

    def test_holds_at(self):
        d = Dataset()
        assert not holds_at(d, SAUSSURE, LIVED_IN, GERMANY, day(1878))
        assert_fluent(d, SAUSSURE, LIVED_IN, GERMANY, iv(1876, 1881))
        assert holds_at(d, SAUSSURE, LIVED_IN, GERMANY, day(1878))
        assert not holds_at(d, SAUSSURE, LIVED_IN, GERMANY, day(1885))

    def test_holds_at_monotone_under_assertion(self):
        d = Dataset()
        assert_fluent(d, SAUSSURE, LIVED_IN, GERMANY, iv(1876, 1881))
        before = {y: holds_at(d, SAUSSURE, LIVED_IN, GERMANY, day(y))
                  for y in range(1870, 1895)}
        assert_fluent(d, SAUSSURE, LIVED_IN, GERMANY, iv(1885, 1890))
        after = {y: holds_at(d, SAUSSURE, LIVED_IN, GERMANY, day(y))
                 for y in range(1870, 1895)}
        for y in before:
            assert not (before[y] and not after[y])

    def test_skolem_determinism_across_runs(self):
        def build():
            d = Dataset()
            assert_fluent(d, SAUSSURE, LIVED_IN, GERMANY, iv(1876, 1881))
            assert_fluent(d, SAUSSURE, LIVED_IN, GERMANY, Interval(day(1890), END))
            return rdf_io.serialize_nquads(d.match(graph=SYS_FLUENTS))

        assert build() == build()

    def test_fluents_for_reads_back_fields(self):
        d = Dataset()
        assert_fluent(d, SAUSSURE, LIVED_IN, GERMANY, iv(1876, 1881), provenance="r1")
        (f,) = fluents_for(d)
        assert (f.subject, f.property, f.object) == (SAUSSURE, LIVED_IN, GERMANY)
        assert f.during == iv(1876, 1881)
        assert f.provenance == "r1"
