"""Partial-stream data model, tokenization, and corpus ingestion.

A *segment* is one partial (or final) hypothesis as displayed; a
*partial stream* is the chronological sequence of segments for one
utterance, ending in exactly one final segment.
"""

from __future__ import annotations

import json
import unicodedata
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .errors import (
    DuplicateFinalError,
    FinalPlacementError,
    MalformedRecordError,
    NonMonotonicTimestampError,
    ValidationError,
)

# Characters treated as punctuation by the tokenizer: every Unicode
# code point in a P* general category, plus these ASCII symbols (which
# Unicode files under S* but transcripts treat as punctuation).
ASCII_SYMBOL_PUNCT = frozenset("$+<=>^`|~")


def is_punct_char(ch: str) -> bool:
    return ch in ASCII_SYMBOL_PUNCT or unicodedata.category(ch).startswith("P")


def is_punct_token(token: str) -> bool:
    """True when every character of the token is a punctuation character."""
    return bool(token) and all(is_punct_char(c) for c in token)


def tokenize_with_spans(raw: str) -> list[tuple[str, int, int]]:
    """Tokenize, returning (surface, start, end) character spans into raw.

    Splits on whitespace, then strips leading and trailing punctuation
    characters of each chunk into their own single-character tokens.
    Interior punctuation (hyphens, apostrophes, ...) stays attached.
    """
    out: list[tuple[str, int, int]] = []
    i, n = 0, len(raw)
    while i < n:
        if raw[i].isspace():
            i += 1
            continue
        j = i
        while j < n and not raw[j].isspace():
            j += 1
        out.extend(_split_chunk(raw, i, j))
        i = j
    return out


def _split_chunk(raw: str, start: int, end: int) -> list[tuple[str, int, int]]:
    lead: list[tuple[str, int, int]] = []
    while start < end and is_punct_char(raw[start]):
        lead.append((raw[start], start, start + 1))
        start += 1
    trail: list[tuple[str, int, int]] = []
    while end > start and is_punct_char(raw[end - 1]):
        trail.append((raw[end - 1], end - 1, end))
        end -= 1
    mid = [(raw[start:end], start, end)] if end > start else []
    return lead + mid + trail[::-1]


def tokenize(raw: str) -> list[str]:
    """Token surfaces only; see tokenize_with_spans for the rules."""
    return [t for t, _, _ in tokenize_with_spans(raw)]


@dataclass(frozen=True)
class Segment:
    """One displayed hypothesis: emission time, raw text, derived tokens."""

    t_ms: int
    raw: str
    is_final: bool
    tokens: tuple[str, ...] = field(default=(), compare=False)
    spans: tuple[tuple[int, int], ...] = field(default=(), compare=False)

    @classmethod
    def make(cls, t_ms: int, raw: str, is_final: bool = False) -> "Segment":
        if t_ms < 0:
            raise ValidationError(f"segment timestamp must be >= 0, got {t_ms}")
        if is_final and raw == "":
            raise ValidationError("final segment must have non-empty text")
        toks = tokenize_with_spans(raw)
        return cls(
            t_ms=t_ms,
            raw=raw,
            is_final=is_final,
            tokens=tuple(t for t, _, _ in toks),
            spans=tuple((s, e) for _, s, e in toks),
        )

    def overlap_raw(self, k: int) -> str:
        """Raw rendering of the first k tokens, ignoring leading whitespace."""
        if k <= 0:
            return ""
        return self.raw[self.spans[0][0] : self.spans[k - 1][1]]


@dataclass(frozen=True)
class PartialStream:
    """Chronologically ordered partials plus one trailing final segment."""

    utterance_id: str
    segments: tuple[Segment, ...]

    def __post_init__(self):
        if not self.segments:
            raise ValidationError(f"{self.utterance_id}: stream has no segments")
        finals = [i for i, s in enumerate(self.segments) if s.is_final]
        if len(finals) > 1:
            raise DuplicateFinalError(f"{self.utterance_id}: multiple final segments")
        if not finals or finals[0] != len(self.segments) - 1:
            raise FinalPlacementError(
                f"{self.utterance_id}: final segment missing or not last"
            )
        for a, b in zip(self.segments, self.segments[1:]):
            if b.t_ms <= a.t_ms:
                raise NonMonotonicTimestampError(
                    f"{self.utterance_id}: t_ms {a.t_ms} -> {b.t_ms} not increasing"
                )

    @property
    def final(self) -> Segment:
        return self.segments[-1]


@dataclass(frozen=True)
class Corpus:
    streams: tuple[PartialStream, ...]

    def __post_init__(self):
        seen: set[str] = set()
        for s in self.streams:
            if s.utterance_id in seen:
                raise ValidationError(f"duplicate utterance_id {s.utterance_id!r}")
            seen.add(s.utterance_id)

    def __len__(self) -> int:
        return len(self.streams)

    def __iter__(self) -> Iterator[PartialStream]:
        return iter(self.streams)


def parse_corpus(lines: Iterable[str]) -> Corpus:
    """Parse a line-delimited stream file into a validated Corpus.

    Each line is a JSON object with fields utt (str), t_ms (int),
    text (str), final (bool). Records of one utterance need not be
    contiguous; they are ordered by t_ms. Utterances keep first-seen
    order.
    """
    records: dict[str, list[tuple[int, str, bool]]] = {}
    for line_no, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise MalformedRecordError(line_no, f"invalid JSON: {exc}") from exc
        if not isinstance(obj, dict):
            raise MalformedRecordError(line_no, "record is not an object")
        try:
            utt, t_ms, text, final = obj["utt"], obj["t_ms"], obj["text"], obj["final"]
        except KeyError as exc:
            raise MalformedRecordError(line_no, f"missing field {exc}") from exc
        if (
            not isinstance(utt, str)
            or not isinstance(t_ms, int)
            or isinstance(t_ms, bool)
            or not isinstance(text, str)
            or not isinstance(final, bool)
        ):
            raise MalformedRecordError(line_no, "field has wrong type")
        records.setdefault(utt, []).append((t_ms, text, final))

    streams = []
    for utt, recs in records.items():
        recs.sort(key=lambda r: r[0])
        segments = tuple(Segment.make(t, text, final) for t, text, final in recs)
        streams.append(PartialStream(utterance_id=utt, segments=segments))
    return Corpus(streams=tuple(streams))


def serialize_corpus(corpus: Corpus) -> str:
    """Render a Corpus back to the line-delimited stream file format."""
    lines = []
    for stream in corpus:
        for seg in stream.segments:
            lines.append(
                json.dumps(
                    {
                        "utt": stream.utterance_id,
                        "t_ms": seg.t_ms,
                        "text": seg.raw,
                        "final": seg.is_final,
                    },
                    ensure_ascii=False,
                )
            )
    return "\n".join(lines) + ("\n" if lines else "")


def read_corpus(path) -> Corpus:
    with open(path, encoding="utf-8") as fh:
        return parse_corpus(fh)
