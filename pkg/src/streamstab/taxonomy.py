"""Revision-event extraction and the five-way instability taxonomy."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Optional

from .metrics import segment_diff
from .stream import Corpus, PartialStream, is_punct_token


class InstabilityType(enum.Enum):
    PUNCTUATION = "punctuation"
    SPACING = "spacing"
    CAPITALIZATION = "capitalization"
    NUMERAL = "numeral"
    STREAMING = "streaming"


@dataclass(frozen=True)
class RevisionEvent:
    """One classified revision. transition_index i is the transition into
    segments[i] (0-based)."""

    utterance_id: str
    transition_index: int
    first_mismatch: int
    old_token: Optional[str]
    new_token: Optional[str]
    kind: InstabilityType


@dataclass(frozen=True)
class TaxonomyReport:
    counts: dict[InstabilityType, int]
    fractions: dict[InstabilityType, float]
    total: int
    zero_total: bool


def _read_lexicon_lines(path: Path) -> list[str]:
    entries = []
    for line in path.read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            entries.append(line)
    return entries


@dataclass(frozen=True)
class Lexicons:
    """Number words plus spoken punctuation phrases and their words."""

    number_words: frozenset[str]
    punct_phrases: tuple[tuple[str, ...], ...]
    punct_words: frozenset[str]

    @classmethod
    def from_dir(cls, directory: Path) -> "Lexicons":
        numbers = _read_lexicon_lines(directory / "number_words.txt")
        phrases = [
            tuple(p.split()) for p in _read_lexicon_lines(directory / "spoken_punctuation.txt")
        ]
        return cls(
            number_words=frozenset(w.lower() for w in numbers),
            punct_phrases=tuple(phrases),
            punct_words=frozenset(w.lower() for p in phrases for w in p),
        )


@lru_cache(maxsize=1)
def default_lexicons() -> Lexicons:
    data_dir = resources.files("streamstab").joinpath("data")
    return Lexicons.from_dir(Path(str(data_dir)))


def _has_digit(token: str) -> bool:
    return any(c.isdigit() for c in token)


def classify_pair(
    old: Optional[str], new: Optional[str], lexicons: Lexicons | None = None
) -> InstabilityType:
    """Classify the first differing token pair of a revision.

    Rules apply in priority order: capitalization (case-insensitive
    equality) > numeral (digits vs number words) > punctuation (symbol
    tokens or spoken punctuation words) > streaming (everything else,
    including one-sided pairs from truncation or growth).
    """
    if old is None and new is None:
        raise ValueError("classify_pair needs at least one token")
    lex = lexicons or default_lexicons()
    if old is not None and new is not None:
        if old.lower() == new.lower():
            return InstabilityType.CAPITALIZATION
        if (
            (_has_digit(old) and _has_digit(new))
            or (_has_digit(old) and new.lower() in lex.number_words)
            or (old.lower() in lex.number_words and _has_digit(new))
        ):
            return InstabilityType.NUMERAL
    for tok in (old, new):
        if tok is not None and (is_punct_token(tok) or tok.lower() in lex.punct_words):
            return InstabilityType.PUNCTUATION
    return InstabilityType.STREAMING


def extract_events(
    stream: PartialStream, lexicons: Lexicons | None = None
) -> list[RevisionEvent]:
    """One classified event per revision transition.

    Prefix-compatible transitions whose raw rendering changed are spacing
    events; all others are classified from the first mismatching tokens.
    """
    events = []
    segs = stream.segments
    for i in range(1, len(segs)):
        prev, nxt = segs[i - 1], segs[i]
        diff = segment_diff(prev, nxt)
        if not diff.is_revision:
            continue
        fm = diff.first_mismatch
        old = prev.tokens[fm] if fm < len(prev.tokens) else None
        new = nxt.tokens[fm] if fm < len(nxt.tokens) else None
        prefix_compatible = fm == min(len(prev.tokens), len(nxt.tokens)) and len(
            nxt.tokens
        ) >= len(prev.tokens)
        if prefix_compatible:
            kind = InstabilityType.SPACING
        else:
            kind = classify_pair(old, new, lexicons)
        events.append(
            RevisionEvent(
                utterance_id=stream.utterance_id,
                transition_index=i,
                first_mismatch=fm,
                old_token=old,
                new_token=new,
                kind=kind,
            )
        )
    return events


def taxonomy_report(corpus: Corpus, lexicons: Lexicons | None = None) -> TaxonomyReport:
    """Count revision events per instability type across a corpus."""
    counts = {kind: 0 for kind in InstabilityType}
    for stream in corpus:
        for event in extract_events(stream, lexicons):
            counts[event.kind] += 1
    total = sum(counts.values())
    fractions = {
        kind: (counts[kind] / total if total else 0.0) for kind in InstabilityType
    }
    return TaxonomyReport(
        counts=counts, fractions=fractions, total=total, zero_total=total == 0
    )


def report_dict(report: TaxonomyReport) -> dict:
    return {
        "counts": {k.value: v for k, v in report.counts.items()},
        "fractions": {k.value: v for k, v in report.fractions.items()},
        "total": report.total,
        "zero_total": report.zero_total,
    }
