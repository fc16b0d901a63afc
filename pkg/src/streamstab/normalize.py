"""Text-normalization stabilizers: lowercase folding, bracket punctuation
tokens, and spoken-punctuation annotation."""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path

from .errors import ValidationError
from .stream import PartialStream, Segment, is_punct_token
from .taxonomy import Lexicons, default_lexicons

# Symbol attachment when rendering token sequences: trailing symbols join
# the preceding word with no space; leading symbols join the following word.
TRAILING_ATTACH = frozenset(".,!?;:)]}”’…")
LEADING_ATTACH = frozenset("([{“‘")

_KEY_RE = re.compile(r"\{[a-z]+(-[a-z]+)*\}")


def render_tokens(tokens) -> str:
    """Join tokens with single spaces, applying symbol attachment."""
    out = ""
    glue_next = True
    for tok in tokens:
        attach_left = is_punct_token(tok) and tok[0] in TRAILING_ATTACH
        if glue_next or attach_left or not out:
            out += tok
        else:
            out += " " + tok
        glue_next = is_punct_token(tok) and tok[0] in LEADING_ATTACH
    return out


def lowercase_stream(stream: PartialStream) -> PartialStream:
    """Case-fold every segment, collapsing repaints that become identical.

    Within a run of identical folded texts only the earliest segment is
    kept; the final segment is always kept. Folding can only merge
    mismatches, so instability never increases.
    """
    folded = [
        Segment.make(s.t_ms, s.raw.lower(), s.is_final) for s in stream.segments
    ]
    kept: list[Segment] = []
    for seg in folded:
        if kept and not seg.is_final and seg.raw == kept[-1].raw:
            continue
        kept.append(seg)
    return PartialStream(utterance_id=stream.utterance_id, segments=tuple(kept))


@dataclass(frozen=True)
class BracketTokenTable:
    """Maps bracketed tokens like "{exclamation-mark}" to symbols.

    entries: key -> (symbol, attachment), attachment "L" joins the
    preceding word and "R" joins the following word.
    """

    entries: dict[str, tuple[str, str]]

    def __post_init__(self):
        symbols = set()
        for key, (symbol, attach) in self.entries.items():
            if not _KEY_RE.fullmatch(key):
                raise ValidationError(f"bad bracket key {key!r}")
            if not symbol or not all(is_punct_token(c) for c in symbol):
                raise ValidationError(f"bad symbol for {key!r}: {symbol!r}")
            if attach not in ("L", "R"):
                raise ValidationError(f"bad attachment for {key!r}: {attach!r}")
            if symbol in symbols:
                raise ValidationError(f"duplicate symbol {symbol!r}")
            symbols.add(symbol)

    @classmethod
    def from_file(cls, path: Path) -> "BracketTokenTable":
        entries = {}
        for line in Path(path).read_text(encoding="utf-8").splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, symbol, attach = line.split("\t")
            entries[key] = (symbol, attach)
        return cls(entries=entries)

    def symbol_to_key(self) -> dict[str, str]:
        return {symbol: key for key, (symbol, _) in self.entries.items()}


@lru_cache(maxsize=1)
def default_bracket_table() -> BracketTokenTable:
    data_dir = resources.files("streamstab").joinpath("data")
    return BracketTokenTable.from_file(Path(str(data_dir)) / "bracket_tokens.tsv")


def convert_bracket_tokens(
    raw: str, table: BracketTokenTable | None = None
) -> tuple[str, list[str]]:
    """Replace bracketed punctuation tokens with attached symbols.

    Returns (text, warnings); bracketed chunks not present in the table
    are passed through unchanged and reported in the warning list.
    """
    table = table or default_bracket_table()
    warnings: list[str] = []
    out = ""
    glue_next = True
    for chunk in raw.split():
        attach = None
        if chunk in table.entries:
            symbol, attach = table.entries[chunk]
            chunk = symbol
        elif chunk.startswith("{") and chunk.endswith("}"):
            warnings.append(chunk)
        if glue_next or attach == "L" or not out:
            out += chunk
        else:
            out += " " + chunk
        glue_next = attach == "R"
    return out, warnings


def annotate_spoken_punctuation(
    transcript: str, lexicons: Lexicons | None = None
) -> str:
    """Rewrite spoken punctuation phrases to bracketed tokens.

    Greedy longest match over the lexicon: "exclamation mark" becomes
    "{exclamation-mark}". Matching is unconditional; a literal use such
    as "a period of time" is rewritten too.
    """
    lex = lexicons or default_lexicons()
    by_length = sorted(lex.punct_phrases, key=len, reverse=True)
    words = transcript.split()
    out = []
    i = 0
    while i < len(words):
        for phrase in by_length:
            n = len(phrase)
            if tuple(w.lower() for w in words[i : i + n]) == phrase:
                out.append("{" + "-".join(phrase) + "}")
                i += n
                break
        else:
            out.append(words[i])
            i += 1
    return " ".join(out)
