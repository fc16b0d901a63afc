from __future__ import annotations

import pytest

from streamstab.errors import EmptyTranscriptError, ValidationError
from streamstab.metrics import corpus_stability, utterance_stability
from streamstab.stream import serialize_corpus
from streamstab.synth import (
    GenConfig,
    generate_corpus,
    generate_utterance,
    number_to_spoken,
    sample_transcripts,
    spoken_integer,
)
from streamstab.taxonomy import InstabilityType, default_lexicons, extract_events


class TestSpokenNumbers:
    @pytest.mark.parametrize(
        "n,expected",
        [
            (0, ["zero"]),
            (7, ["seven"]),
            (15, ["fifteen"]),
            (40, ["forty"]),
            (42, ["forty", "two"]),
            (800, ["eight", "hundred"]),
            (305, ["three", "hundred", "five"]),
            (999999, [
                "nine", "hundred", "ninety", "nine", "thousand",
                "nine", "hundred", "ninety", "nine",
            ]),
        ],
    )
    def test_spoken_integer(self, n, expected):
        assert spoken_integer(n) == expected

    def test_spoken_integer_out_of_range(self):
        with pytest.raises(ValueError):
            spoken_integer(1_000_000)

    def test_digit_reading_for_phone_numbers(self):
        assert number_to_spoken("800-123-1234") == [
            "eight", "zero", "zero", "one", "two", "three",
            "one", "two", "three", "four",
        ]

    def test_no_digits(self):
        assert number_to_spoken("hello") is None

    def test_all_spoken_words_in_lexicon(self):
        lex = default_lexicons()
        for n in (0, 13, 77, 800, 12345, 999999):
            assert all(w in lex.number_words for w in spoken_integer(n))


class TestGenConfig:
    def test_probability_bounds(self):
        with pytest.raises(ValidationError):
            GenConfig(p_capitalization=1.5)

    def test_pei_bound(self):
        with pytest.raises(ValidationError):
            GenConfig(raw_pei_ms=0)


class TestGenerateUtterance:
    def test_empty_transcript(self):
        with pytest.raises(EmptyTranscriptError):
            generate_utterance("   ", GenConfig())

    def test_zero_probabilities_give_pure_growth(self):
        config = GenConfig(
            seed=1,
            p_capitalization=0,
            p_numeral=0,
            p_punctuation_spoken_path=0,
            p_streaming_precursor=0,
            p_spacing=0,
        )
        ls = generate_utterance("Sailors prepared their boats, before 3 storms.", config)
        assert ls.truth_events == ()
        u = utterance_stability(ls.stream)
        assert u.unstable_word_total == 0
        assert u.unstable_segment_total == 0

    def test_determinism(self):
        config = GenConfig(seed=99)
        a = generate_utterance("Heavy rain delayed 12 evening flights.", config)
        b = generate_utterance("Heavy rain delayed 12 evening flights.", config)
        assert a == b

    def test_numeral_precursor_shape(self):
        config = GenConfig(
            seed=3,
            p_capitalization=0,
            p_numeral=1.0,
            p_punctuation_spoken_path=0,
            p_streaming_precursor=0,
            p_spacing=0,
        )
        ls = generate_utterance("Call 800", config)
        assert any(s.raw.endswith("eight hundred") for s in ls.stream.segments)
        assert ls.stream.final.raw == "Call 800"
        assert [k for _, k in ls.truth_events] == [InstabilityType.NUMERAL]
        events = extract_events(ls.stream)
        assert [(e.transition_index, e.kind) for e in events] == list(ls.truth_events)

    def test_final_equals_transcript(self):
        config = GenConfig(seed=8)
        for transcript in sample_transcripts(25, 2):
            ls = generate_utterance(transcript, config)
            assert ls.stream.final.raw == transcript

    def test_truth_events_match_unstable_segments(self):
        for seed, transcript in enumerate(sample_transcripts(25, 6)):
            ls = generate_utterance(transcript, GenConfig(seed=seed))
            u = utterance_stability(ls.stream)
            assert len(ls.truth_events) == u.unstable_segment_total
            for idx, _ in ls.truth_events:
                assert 1 <= idx < len(ls.stream.segments)

    def test_timestamps_on_tick_grid(self):
        config = GenConfig(seed=17, raw_pei_ms=50)
        ls = generate_utterance("Garden bloomed with purple flowers.", config)
        assert all(s.t_ms % 50 == 0 for s in ls.stream.segments)


class TestGenerateCorpus:
    def test_requires_transcripts(self):
        with pytest.raises(EmptyTranscriptError):
            generate_corpus([], GenConfig())

    def test_deterministic_serialization(self):
        transcripts = sample_transcripts(50, 42)
        c1, l1 = generate_corpus(transcripts, GenConfig(seed=42))
        c2, l2 = generate_corpus(transcripts, GenConfig(seed=42))
        assert serialize_corpus(c1) == serialize_corpus(c2)
        assert l1 == l2

    def test_unique_utterance_ids(self):
        corpus, _ = generate_corpus(sample_transcripts(20, 1), GenConfig(seed=1))
        ids = [s.utterance_id for s in corpus]
        assert len(set(ids)) == len(ids)

    def test_capitalization_only(self):
        config = GenConfig(
            seed=4,
            p_capitalization=1.0,
            p_numeral=0,
            p_punctuation_spoken_path=0,
            p_streaming_precursor=0,
            p_spacing=0,
        )
        _, labeled = generate_corpus(["Sailors prepared their boats"], config)
        kinds = {k for ls in labeled for _, k in ls.truth_events}
        assert kinds == {InstabilityType.CAPITALIZATION}

    def test_classifier_agreement_default_config(self):
        corpus, labeled = generate_corpus(sample_transcripts(80, 5), GenConfig(seed=5))
        agree = total = 0
        for ls in labeled:
            predicted = {e.transition_index: e.kind for e in extract_events(ls.stream)}
            for idx, kind in ls.truth_events:
                total += 1
                agree += predicted.get(idx) == kind
        assert total > 200
        assert agree / total >= 0.95

    def test_metrics_run_on_generated_corpus(self):
        corpus, _ = generate_corpus(sample_transcripts(20, 8), GenConfig(seed=8))
        cs = corpus_stability(corpus)
        assert cs.upwr > 0
        assert cs.upsr > 0
