from __future__ import annotations

import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from streamstab.errors import (
    DuplicateFinalError,
    FinalPlacementError,
    MalformedRecordError,
    NonMonotonicTimestampError,
)
from streamstab.stream import (
    is_punct_char,
    parse_corpus,
    serialize_corpus,
    tokenize,
    tokenize_with_spans,
)


def brute_force_tokenize(raw: str) -> list[str]:
    """Independent oracle: character scan that only strips boundary
    punctuation of whitespace-delimited chunks."""
    tokens = []
    for chunk in raw.split():
        lo, hi = 0, len(chunk)
        while lo < hi and is_punct_char(chunk[lo]):
            lo += 1
        while hi > lo and is_punct_char(chunk[hi - 1]):
            hi -= 1
        tokens.extend(chunk[:lo])
        if hi > lo:
            tokens.append(chunk[lo:hi])
        tokens.extend(chunk[hi:])
    return tokens


def test_tokenize_worked_final_hypothesis():
    toks = tokenize("Here, lived a man who sailed to sea")
    assert toks == ["Here", ",", "lived", "a", "man", "who", "sailed", "to", "sea"]
    assert len(toks) == 9


def test_tokenize_empty():
    assert tokenize("") == []


def test_tokenize_phone_number():
    assert tokenize("Call 800-123-1234.") == ["Call", "800-123-1234", "."]


@pytest.mark.parametrize(
    "raw",
    [
        "Here, lived a man who sailed to sea",
        "Call 800-123-1234.",
        "(hello) world!!",
        "don't stop... now",
        "{exclamation-mark} stays?",
        ",,leading and trailing,,",
        "...",
    ],
)
def test_tokenize_matches_brute_force(raw):
    assert tokenize(raw) == brute_force_tokenize(raw)


@given(st.text(max_size=60))
def test_tokenize_matches_brute_force_random(raw):
    assert tokenize(raw) == brute_force_tokenize(raw)


@given(st.text(max_size=60))
def test_tokenize_idempotent_under_single_space_rendering(raw):
    toks = tokenize(raw)
    assert tokenize(" ".join(toks)) == toks


@given(st.text(max_size=60))
def test_tokens_nonempty_and_whitespace_free(raw):
    for tok in tokenize(raw):
        assert tok
        assert not any(c.isspace() for c in tok)


@given(st.text(max_size=60))
def test_spans_point_at_surfaces(raw):
    for tok, start, end in tokenize_with_spans(raw):
        assert raw[start:end] == tok


def _record(utt, t_ms, text, final=False):
    return json.dumps({"utt": utt, "t_ms": t_ms, "text": text, "final": final})


def test_parse_corpus_worked_example():
    from conftest import WORKED_EXAMPLE_TEXTS

    lines = [
        _record("u1", 50 * (i + 1), text, i == 8)
        for i, text in enumerate(WORKED_EXAMPLE_TEXTS)
    ]
    corpus = parse_corpus(lines)
    assert len(corpus) == 1
    assert len(corpus.streams[0].segments) == 9


def test_parse_corpus_empty_input():
    assert len(parse_corpus([])) == 0


def test_parse_corpus_orders_by_t_ms():
    lines = [
        _record("u1", 300, "a b c", True),
        _record("u1", 100, "a"),
        _record("u1", 200, "a b"),
    ]
    corpus = parse_corpus(lines)
    assert [s.t_ms for s in corpus.streams[0].segments] == [100, 200, 300]


def test_parse_corpus_non_monotonic_timestamps():
    lines = [
        _record("u1", 100, "a"),
        _record("u1", 100, "a b"),
        _record("u1", 200, "a b c", True),
    ]
    with pytest.raises(NonMonotonicTimestampError):
        parse_corpus(lines)


def test_parse_corpus_missing_final():
    with pytest.raises(FinalPlacementError):
        parse_corpus([_record("u1", 100, "a")])


def test_parse_corpus_final_not_last():
    lines = [_record("u1", 100, "a", True), _record("u1", 200, "a b")]
    with pytest.raises(FinalPlacementError):
        parse_corpus(lines)


def test_parse_corpus_duplicate_final():
    lines = [_record("u1", 100, "a", True), _record("u1", 200, "a b", True)]
    with pytest.raises(DuplicateFinalError):
        parse_corpus(lines)


def test_parse_corpus_malformed_record_reports_line():
    lines = [_record("u1", 100, "a", True), "not json"]
    with pytest.raises(MalformedRecordError) as exc:
        parse_corpus(lines)
    assert exc.value.line_no == 2


def test_parse_corpus_missing_field():
    with pytest.raises(MalformedRecordError):
        parse_corpus(['{"utt": "u1", "t_ms": 100, "text": "a"}'])


def test_parse_corpus_wrong_type():
    with pytest.raises(MalformedRecordError):
        parse_corpus(['{"utt": "u1", "t_ms": "x", "text": "a", "final": true}'])


def test_round_trip(worked_corpus):
    text = serialize_corpus(worked_corpus)
    again = parse_corpus(text.splitlines())
    assert again == worked_corpus
    assert serialize_corpus(again) == text
