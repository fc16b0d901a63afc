"""Stability analysis and mitigation tooling for incremental ASR partials."""

__version__ = "0.1.0"

from .metrics import (
    CorpusStability,
    TransitionDiff,
    UtteranceStability,
    corpus_stability,
    segment_diff,
    utterance_stability,
)
from .stream import (
    Corpus,
    PartialStream,
    Segment,
    parse_corpus,
    serialize_corpus,
    tokenize,
)
from .taxonomy import (
    InstabilityType,
    RevisionEvent,
    TaxonomyReport,
    classify_pair,
    extract_events,
    taxonomy_report,
)

__all__ = [
    "Corpus",
    "CorpusStability",
    "InstabilityType",
    "PartialStream",
    "RevisionEvent",
    "Segment",
    "TaxonomyReport",
    "TransitionDiff",
    "UtteranceStability",
    "classify_pair",
    "corpus_stability",
    "extract_events",
    "parse_corpus",
    "segment_diff",
    "serialize_corpus",
    "taxonomy_report",
    "tokenize",
    "utterance_stability",
]
