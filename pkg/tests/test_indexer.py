"""Semantic indexing: tokenization, candidates, scoring, review lifecycle."""
from __future__ import annotations

import math

import pytest

from fluentkb import indexer, kres
from fluentkb.indexer import (
    AlreadyDecided,
    Occurrence,
    Transcription,
    UnknownAssociation,
    associations,
    context_similarity,
    decide,
    find_candidates,
    index_all,
    index_transcription,
    load_transcriptions_jsonl,
    score,
    store_transcription,
    temporal_factor,
    tokenize,
)
from fluentkb.kres import TermEntry
from fluentkb.terms import Iri

from conftest import (
    FIXTURES,
    KBNS,
    PHONATION_1896,
    PHONATION_1905,
    T1896,
    corpus_rules,
    split_rules,
)

TR1 = Iri(KBNS + "tr1")
M2 = Iri(KBNS + "m2")

COS_2_OF_23 = 2 / math.sqrt(2 * 3)   # ≈ 0.816
COS_1_OF_23 = 1 / math.sqrt(2 * 3)   # ≈ 0.408


@pytest.fixture
def indexed_kb(saturated_kb):
    load_transcriptions_jsonl(
        saturated_kb, (FIXTURES / "transcriptions.jsonl").read_text(encoding="utf-8"))
    index_all(saturated_kb)
    return saturated_kb


class TestTokenize:
    def test_empty(self):
        assert tokenize("") == []

    def test_offsets(self):
        tokens = tokenize("la phonation des sons")
        assert [(t.start, t.end) for t in tokens] == [(0, 2), (3, 12), (13, 16), (17, 21)]

    def test_apostrophe_splits(self):
        surfaces = [t.surface for t in tokenize("l'arbitraire du signe")]
        assert surfaces == ["l", "arbitraire", "du", "signe"]


class TestCandidates:
    def test_two_terminologies_give_two_candidates(self, corpus_kb):
        t = Transcription(TR1, M2, "1r", "z1", 1, "la phonation des sons")
        candidates = find_candidates(corpus_kb, t)
        assert len(candidates) == 1
        occ, entries = candidates[0]
        assert (occ.start, occ.end, occ.surface_form) == (3, 12, "phonation")
        assert {e.concept for e in entries} == {PHONATION_1896, PHONATION_1905}

    def test_no_terminology_words(self, corpus_kb):
        t = Transcription(TR1, M2, "1r", "z1", 1, "rien à voir ici")
        assert find_candidates(corpus_kb, t) == []

    def test_multiword_longest_match(self, corpus_kb):
        t = Transcription(TR1, M2, "1r", "z1", 1, "la valeur linguistique du signe")
        candidates = find_candidates(corpus_kb, t)
        assert len(candidates) == 1
        occ, entries = candidates[0]
        assert occ.surface_form == "valeur linguistique"
        assert entries[0].concept == Iri(T1896.value + "/concept/valeur-linguistique")

    def test_matching_is_case_insensitive(self, corpus_kb):
        t = Transcription(TR1, M2, "1r", "z1", 1, "la Phonation des sons")
        (occ, _), = find_candidates(corpus_kb, t)
        assert occ.surface_form == "Phonation"


class TestSimilarity:
    def occurrence(self):
        return Occurrence(TR1, 3, 12, "phonation")

    def entry(self, *contexts):
        return TermEntry(PHONATION_1896, "phonation", "", tuple(contexts), T1896)

    def test_identical_window_and_context(self, kb):
        text = "la phonation des sons"
        sim = context_similarity(kb, text, self.occurrence(), self.entry(text))
        assert sim == pytest.approx(1.0)

    def test_hand_computed_cosine(self, kb):
        sim = context_similarity(kb, "la phonation des sons", self.occurrence(),
                                 self.entry("phonation des sons laryngés"))
        assert sim == pytest.approx(COS_2_OF_23, abs=1e-9)

    def test_single_overlap_cosine(self, kb):
        sim = context_similarity(kb, "la phonation des sons", self.occurrence(),
                                 self.entry("phonation comme acte psychique"))
        assert sim == pytest.approx(COS_1_OF_23, abs=1e-9)

    def test_max_over_contexts(self, kb):
        sim = context_similarity(
            kb, "la phonation des sons", self.occurrence(),
            self.entry("phonation comme acte psychique", "phonation des sons laryngés"))
        assert sim == pytest.approx(COS_2_OF_23, abs=1e-9)

    def test_no_contexts_scores_zero(self, kb):
        assert context_similarity(kb, "la phonation des sons",
                                  self.occurrence(), self.entry()) == 0.0

    def test_window_clips_distant_tokens(self, kb):
        far = " ".join(["mot"] * 10)
        text = f"{far} phonation {far}"
        occ = Occurrence(TR1, text.index("phonation"), text.index("phonation") + 9,
                         "phonation")
        sim = context_similarity(kb, text, occ, self.entry("phonation seule"))
        # window bag = 5×mot + phonation + 5×mot; cosine with {phonation, seule}
        expected = 1 / (math.sqrt(101) * math.sqrt(2))
        assert sim == pytest.approx(expected, abs=1e-9)


class TestTemporalFactorAndScore:
    def test_factor_values_on_corpus(self, saturated_kb):
        entry_1896 = kres.get_term_entry(saturated_kb, PHONATION_1896)
        entry_1905 = kres.get_term_entry(saturated_kb, PHONATION_1905)
        assert temporal_factor(saturated_kb, entry_1896, M2) == 1.0
        assert temporal_factor(saturated_kb, entry_1905, M2) == 0.0
        undated = Iri(KBNS + "m-unknown")
        assert temporal_factor(saturated_kb, entry_1896, undated) == 0.5

    def test_score_arithmetic(self, saturated_kb):
        entry_1896 = kres.get_term_entry(saturated_kb, PHONATION_1896)
        entry_1905 = kres.get_term_entry(saturated_kb, PHONATION_1905)
        assert score(saturated_kb, COS_2_OF_23, entry_1896, M2) == pytest.approx(
            0.7 * COS_2_OF_23 + 0.3, abs=1e-9)
        assert score(saturated_kb, COS_2_OF_23, entry_1905, M2) == pytest.approx(
            0.7 * COS_2_OF_23, abs=1e-9)
        undated = Iri(KBNS + "m-unknown")
        assert score(saturated_kb, 0.0, entry_1896, undated) == pytest.approx(0.15)


class TestIndexing:
    def test_fixture_scores_and_ranking(self, indexed_kb):
        got = associations(indexed_kb)
        assert len(got) == 2
        first, second = got
        assert first.concept == PHONATION_1896
        assert first.score == pytest.approx(0.871, abs=1e-3)
        assert second.concept == PHONATION_1905
        assert second.score == pytest.approx(0.571, abs=1e-3)
        assert first.score > second.score

    def test_threshold_filters(self, indexed_kb):
        t = indexer.get_transcription(indexed_kb, TR1)
        kept = index_transcription(indexed_kb, t, theta=0.6)
        assert [a.concept for a in kept] == [PHONATION_1896]
        with pytest.raises(indexer.IndexerError):
            index_transcription(indexed_kb, t, theta=1.5)

    def test_reindex_is_deterministic(self, indexed_kb):
        before = {(a.id, a.score) for a in associations(indexed_kb)}
        index_all(indexed_kb)
        assert {(a.id, a.score) for a in associations(indexed_kb)} == before

    def test_reindex_preserves_decisions(self, indexed_kb):
        target = associations(indexed_kb)[0]
        decide(indexed_kb, target.id, "accepted", "reviewer")
        index_all(indexed_kb)
        got = {a.id: a for a in associations(indexed_kb)}
        assert got[target.id].status == "accepted"
        assert sum(1 for a in got.values() if a.status == "proposed") == 1

    def test_no_candidates_no_associations(self, saturated_kb):
        t = Transcription(Iri(KBNS + "tr9"), M2, "2r", "z1", 2, "aucun terme connu")
        store_transcription(saturated_kb, t)
        assert index_transcription(saturated_kb, t) == []


class TestTranscriptions:
    def test_duplicate_position_rejected(self, kb):
        line = ('{"id": "%s", "manuscript": "%s", "surface": "1r", '
                '"zone": "z1", "seq": 1, "text": "x"}')
        load_transcriptions_jsonl(kb, line % (KBNS + "tr1", KBNS + "m2"))
        with pytest.raises(indexer.IndexerError, match="already used"):
            load_transcriptions_jsonl(kb, line % (KBNS + "tr2", KBNS + "m2"))

    def test_malformed_record_reports_line(self, kb):
        with pytest.raises(indexer.IndexerError, match="line 1"):
            load_transcriptions_jsonl(kb, '{"id": "x"}')

    def test_round_trip(self, kb):
        t = Transcription(TR1, M2, "1r", "z1", 3, "du texte")
        store_transcription(kb, t)
        assert indexer.get_transcription(kb, TR1) == t
        assert indexer.transcriptions(kb) == [t]


class TestDecisions:
    def test_lifecycle(self, indexed_kb):
        target = associations(indexed_kb, status="proposed")[0]
        updated = decide(indexed_kb, target.id, "rejected", "expert-1")
        assert updated.status == "rejected" and updated.decided_by == "expert-1"
        with pytest.raises(AlreadyDecided):
            decide(indexed_kb, target.id, "accepted", "expert-2")

    def test_unknown_association(self, indexed_kb):
        from fluentkb.terms import SkolemNode
        with pytest.raises(UnknownAssociation):
            decide(indexed_kb, SkolemNode("assoc:ffffffffffffffff"), "accepted", "x")

    def test_bad_verdict(self, indexed_kb):
        target = associations(indexed_kb)[0]
        with pytest.raises(indexer.IndexerError):
            decide(indexed_kb, target.id, "maybe", "x")
