from __future__ import annotations

import pytest

from streamstab.stream import Corpus, PartialStream, Segment

# The contrived nine-segment utterance used throughout: final hypothesis
# "Here, lived a man who sailed to sea", 11 unstable words, 5 revisions.
WORKED_EXAMPLE_TEXTS = [
    "Here",
    "Here come",
    "Here comma",
    "Here,",
    "Here, Lived a man who",
    "Here, lived a man who sell",
    "Here, lived a man who sell two seeds",
    "Here, lived a man who sell 2 seeds",
    "Here, lived a man who sailed to sea",
]


def build_stream(texts, utt="utt-0", start_ms=50, step_ms=50) -> PartialStream:
    segments = tuple(
        Segment.make(start_ms + i * step_ms, text, i == len(texts) - 1)
        for i, text in enumerate(texts)
    )
    return PartialStream(utterance_id=utt, segments=segments)


@pytest.fixture
def worked_stream() -> PartialStream:
    return build_stream(WORKED_EXAMPLE_TEXTS)


@pytest.fixture
def worked_corpus(worked_stream) -> Corpus:
    return Corpus(streams=(worked_stream,))
