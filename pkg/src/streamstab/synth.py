"""Seeded generator of labeled synthetic partial streams.

Each utterance is emitted left to right on a tick grid; configured
probabilities inject one revision per token (wrong-case, spoken-number,
spoken-punctuation, truncated-word, or detached-punctuation precursors),
and every injected revision is recorded as a ground-truth event.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Mapping, Optional

from .errors import EmptyTranscriptError, ValidationError
from .normalize import default_bracket_table
from .stream import Corpus, PartialStream, Segment, is_punct_token, tokenize_with_spans
from .taxonomy import InstabilityType

_ONES = (
    "zero", "one", "two", "three", "four", "five", "six", "seven", "eight",
    "nine", "ten", "eleven", "twelve", "thirteen", "fourteen", "fifteen",
    "sixteen", "seventeen", "eighteen", "nineteen",
)
_TENS = (
    None, None, "twenty", "thirty", "forty", "fifty", "sixty", "seventy",
    "eighty", "ninety",
)

# Transcript vocabulary for sample corpora. Words are chosen so that no
# prefix collides with a spoken-punctuation word, keeping generator
# labels and classifier output in agreement.
SAMPLE_VOCAB = (
    "the", "weather", "station", "reported", "strong", "winds", "along",
    "coast", "sailors", "prepared", "their", "boats", "before", "storm",
    "arrived", "children", "walked", "toward", "school", "every", "morning",
    "vendors", "sold", "fresh", "apples", "oranges", "travel", "plans",
    "changed", "because", "heavy", "rain", "delayed", "evening", "flights",
    "doctor", "listened", "carefully", "while", "patient", "described",
    "symptoms", "engineers", "tested", "new", "bridge", "design", "under",
    "load", "singers", "practiced", "quiet", "songs", "backstage", "garden",
    "bloomed", "with", "purple", "flowers", "after", "spring", "showers",
)


def spoken_integer(n: int) -> list[str]:
    """Spoken form of an integer in [0, 999999]."""
    if not 0 <= n <= 999_999:
        raise ValueError(f"spoken_integer covers 0..999999, got {n}")
    if n < 20:
        return [_ONES[n]]
    if n < 100:
        tens, ones = divmod(n, 10)
        return [_TENS[tens]] + ([_ONES[ones]] if ones else [])
    if n < 1000:
        hundreds, rest = divmod(n, 100)
        return [_ONES[hundreds], "hundred"] + (spoken_integer(rest) if rest else [])
    thousands, rest = divmod(n, 1000)
    return spoken_integer(thousands) + ["thousand"] + (
        spoken_integer(rest) if rest else []
    )


def number_to_spoken(token: str) -> Optional[list[str]]:
    """Spoken precursor for a digit-bearing token.

    Plain integers up to 999999 are verbalized; longer or hyphenated
    sequences (phone numbers) fall back to digit-by-digit reading.
    Returns None when the token has no digits.
    """
    if token.isascii() and token.isdigit() and int(token) <= 999_999:
        return spoken_integer(int(token))
    words = [_ONES[int(c)] for c in token if c.isdigit() and c.isascii()]
    return words or None


@dataclass(frozen=True)
class GenConfig:
    raw_pei_ms: int = 50
    word_duration_ms: int = 240
    word_jitter_ms: int = 120
    p_capitalization: float = 0.15
    p_numeral: float = 0.8
    p_punctuation_spoken_path: float = 0.6
    p_streaming_precursor: float = 0.25
    p_spacing: float = 0.3
    confusion_table: Optional[Mapping[str, str]] = None
    seed: int = 0

    def __post_init__(self):
        if self.raw_pei_ms < 1:
            raise ValidationError("raw_pei_ms must be >= 1")
        for name in (
            "p_capitalization",
            "p_numeral",
            "p_punctuation_spoken_path",
            "p_streaming_precursor",
            "p_spacing",
        ):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise ValidationError(f"{name} must be in [0, 1], got {p}")


@dataclass(frozen=True)
class LabeledStream:
    stream: PartialStream
    truth_events: tuple[tuple[int, InstabilityType], ...]


def _flip_first_case(token: str) -> Optional[str]:
    for i, ch in enumerate(token):
        if ch.isalpha():
            flipped = ch.lower() if ch.isupper() else ch.upper()
            if len(flipped) == 1 and flipped != ch:
                return token[:i] + flipped + token[i + 1 :]
            return None
    return None


def _has_digit(token: str) -> bool:
    return any(c.isdigit() for c in token)


def generate_utterance(
    final_transcript: str, config: GenConfig, utterance_id: str = "utt-00000"
) -> LabeledStream:
    """Build one labeled stream whose final segment equals the transcript.

    Partials grow token by token as exact prefixes of the transcript, so
    every revision in the output is one that was deliberately injected.
    """
    toks = tokenize_with_spans(final_transcript)
    if not toks:
        raise EmptyTranscriptError("transcript has no tokens")
    rng = random.Random(config.seed)
    pei = config.raw_pei_ms
    symbol_spoken = {
        symbol: key[1:-1].split("-")
        for key, (symbol, _) in default_bracket_table().entries.items()
    }

    segments: list[tuple[int, str]] = []
    truth: list[tuple[int, InstabilityType]] = []
    t = 0
    for k, (tok, start, end) in enumerate(toks):
        jitter = (
            rng.randint(-config.word_jitter_ms, config.word_jitter_ms)
            if config.word_jitter_ms
            else 0
        )
        duration = max(pei, config.word_duration_ms + jitter)
        t_arrival = t + -(-duration // pei) * pei
        prefix = final_transcript[: toks[k - 1][2]] if k else ""
        committed = final_transcript[:end]

        def with_prefix(text: str) -> str:
            return prefix + " " + text if prefix else text

        injection: Optional[tuple[str, InstabilityType]] = None
        if _has_digit(tok):
            if rng.random() < config.p_numeral:
                spoken = number_to_spoken(tok)
                if spoken:
                    injection = (with_prefix(" ".join(spoken)), InstabilityType.NUMERAL)
        elif is_punct_token(tok):
            spoken_words = symbol_spoken.get(tok)
            attached = k > 0 and start == toks[k - 1][2]
            if spoken_words and rng.random() < config.p_punctuation_spoken_path:
                injection = (
                    with_prefix(" ".join(spoken_words)),
                    InstabilityType.PUNCTUATION,
                )
            elif attached and rng.random() < config.p_spacing:
                injection = (with_prefix(tok), InstabilityType.SPACING)
        else:
            flipped = _flip_first_case(tok)
            if flipped is not None and rng.random() < config.p_capitalization:
                injection = (with_prefix(flipped), InstabilityType.CAPITALIZATION)
            elif rng.random() < config.p_streaming_precursor:
                precursor = None
                if config.confusion_table and tok in config.confusion_table:
                    precursor = config.confusion_table[tok]
                elif len(tok) >= 2:
                    precursor = tok[: rng.randint(1, len(tok) - 1)]
                if precursor:
                    injection = (with_prefix(precursor), InstabilityType.STREAMING)

        if injection is not None:
            segments.append((t_arrival, injection[0]))
            t_arrival += pei
            segments.append((t_arrival, committed))
            truth.append((len(segments) - 1, injection[1]))
        else:
            segments.append((t_arrival, committed))
        t = t_arrival

    built = [Segment.make(tt, raw, False) for tt, raw in segments[:-1]]
    built.append(Segment.make(segments[-1][0], final_transcript, True))
    stream = PartialStream(utterance_id=utterance_id, segments=tuple(built))
    return LabeledStream(stream=stream, truth_events=tuple(truth))


def _sub_seed(master: int, index: int) -> int:
    # Documented mix: utterances are independent yet fully determined by
    # the master seed and their ordinal.
    return master * 1_048_573 + index


def generate_corpus(
    transcripts: list[str], config: GenConfig
) -> tuple[Corpus, list[LabeledStream]]:
    """Generate one labeled stream per transcript under derived sub-seeds."""
    if not transcripts:
        raise EmptyTranscriptError("no transcripts given")
    labeled = []
    for idx, transcript in enumerate(transcripts):
        sub = GenConfig(
            **{**config.__dict__, "seed": _sub_seed(config.seed, idx)}
        )
        labeled.append(
            generate_utterance(transcript, sub, utterance_id=f"utt-{idx:05d}")
        )
    corpus = Corpus(streams=tuple(ls.stream for ls in labeled))
    return corpus, labeled


def sample_transcripts(n: int, seed: int) -> list[str]:
    """Deterministic corpus of plausible dictation-style transcripts."""
    rng = random.Random(seed)
    out = []
    for _ in range(n):
        length = rng.randint(5, 11)
        words = [rng.choice(SAMPLE_VOCAB) for _ in range(length)]
        words[0] = words[0].capitalize()
        if rng.random() < 0.4:
            words[rng.randint(1, length - 1)] = str(rng.randint(2, 9999))
        if rng.random() < 0.5:
            pos = rng.randint(1, length - 2)
            words[pos] += ","
        out.append(" ".join(words) + ".")
    return out
