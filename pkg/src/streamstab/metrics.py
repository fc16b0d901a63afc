"""Word- and segment-level instability metrics (UPWR, UPSR, partial delay).

UPWR = total unstable words / total final-hypothesis words.
UPSR = total revised segments / number of utterances.
Mean partial delay = average time until each final word is first shown.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import EmptyCorpusError, EmptyFinalError
from .stream import Corpus, PartialStream, Segment


@dataclass(frozen=True)
class TransitionDiff:
    """Comparison of one segment against its predecessor."""

    first_mismatch: int
    unstable_words: int
    is_revision: bool


@dataclass(frozen=True)
class UtteranceStability:
    utterance_id: str
    unstable_word_total: int
    unstable_segment_total: int
    final_word_count: int
    per_transition: tuple[TransitionDiff, ...]
    word_delays_ms: tuple[int, ...]


@dataclass(frozen=True)
class CorpusStability:
    upwr: float
    upsr: float
    mean_partial_delay_ms: float
    per_utterance: tuple[UtteranceStability, ...]


def segment_diff(prev: Segment, next: Segment) -> TransitionDiff:
    """Diff consecutive segments at token level.

    A transition is a revision when the previous token sequence is not a
    prefix of the next one, when tokens are truncated, or when the raw
    rendering of the shared prefix changed (spacing-only revision).
    Unstable words are the revised tokens inside the overlap of the two
    hypotheses; pure growth and pure truncation contribute none.
    """
    p, q = prev.tokens, next.tokens
    overlap = min(len(p), len(q))
    first_mismatch = overlap
    for i in range(overlap):
        if p[i] != q[i]:
            first_mismatch = i
            break
    if first_mismatch < overlap:
        return TransitionDiff(first_mismatch, overlap - first_mismatch, True)
    if len(q) < len(p):
        # Truncation: display changed but no token in the overlap did.
        return TransitionDiff(first_mismatch, 0, True)
    spacing_changed = prev.overlap_raw(len(p)) != next.overlap_raw(len(p))
    return TransitionDiff(first_mismatch, 0, spacing_changed)


def utterance_stability(stream: PartialStream) -> UtteranceStability:
    """Accumulate per-transition diffs and per-word first-shown delays."""
    segs = stream.segments
    diffs = tuple(segment_diff(a, b) for a, b in zip(segs, segs[1:]))
    final = stream.final
    delays = []
    for j, tok in enumerate(final.tokens):
        delays.append(
            min(s.t_ms for s in segs if len(s.tokens) > j and s.tokens[j] == tok)
        )
    return UtteranceStability(
        utterance_id=stream.utterance_id,
        unstable_word_total=sum(d.unstable_words for d in diffs),
        unstable_segment_total=sum(1 for d in diffs if d.is_revision),
        final_word_count=len(final.tokens),
        per_transition=diffs,
        word_delays_ms=tuple(delays),
    )


def corpus_stability(corpus: Corpus) -> CorpusStability:
    """Aggregate UPWR, UPSR, and mean partial delay over a corpus."""
    if len(corpus) == 0:
        raise EmptyCorpusError("corpus has no utterances")
    for stream in corpus:
        if not stream.final.tokens:
            raise EmptyFinalError(
                f"{stream.utterance_id}: final hypothesis has no tokens"
            )
    per_utt = tuple(utterance_stability(s) for s in corpus)
    total_words = sum(u.final_word_count for u in per_utt)
    all_delays = [d for u in per_utt for d in u.word_delays_ms]
    return CorpusStability(
        upwr=sum(u.unstable_word_total for u in per_utt) / total_words,
        upsr=sum(u.unstable_segment_total for u in per_utt) / len(per_utt),
        mean_partial_delay_ms=sum(all_delays) / len(all_delays),
        per_utterance=per_utt,
    )


def report_dict(stability: CorpusStability) -> dict:
    """Stability report in its file-format shape."""
    return {
        "upwr": stability.upwr,
        "upsr": stability.upsr,
        "mean_partial_delay_ms": stability.mean_partial_delay_ms,
        "n_utterances": len(stability.per_utterance),
        "n_final_words": sum(u.final_word_count for u in stability.per_utterance),
        "per_utterance": [
            {
                "utt": u.utterance_id,
                "unstable_words": u.unstable_word_total,
                "unstable_segments": u.unstable_segment_total,
                "final_words": u.final_word_count,
                "mean_delay_ms": sum(u.word_delays_ms) / len(u.word_delays_ms),
            }
            for u in stability.per_utterance
        ],
    }
