"""Normalization, sentence segmentation, and tokenization for German reports.

The matching pipeline is token based, so these rules are frozen contract:

* Normalization: Unicode NFC, then lowercasing. German-aware means umlauts
  stay umlauts (no ae/oe/ue transliteration) and the sharp s stays itself
  (``str.lower`` never maps it to "ss", unlike ``str.casefold``).
* Sentence breaks: '.', '!', '?', ';' and newline. A period splits only when
  followed by whitespace plus an uppercase letter, or by end of text, and the
  word ending at the period is not a known abbreviation. This keeps
  "5.Rippe", decimals, and "V.a. Pneumonie" together.
* Tokens: maximal runs of word characters, hyphenated compounds kept whole
  ("CT-Thorax"), all other punctuation dropped. Character spans always point
  into the original text, never into a normalized copy.

Triggers never scope across a sentence break; the sentence structure produced
here is the scope boundary used downstream.
"""
from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass
from typing import Iterable

# Combining diacritics are not matched by \w, but decomposed input must not
# break a token apart (spans reference the original bytes, composed or not).
_WORD = r"[\ẁ-ͯ]+"
_TOKEN_RE = re.compile(rf"{_WORD}(?:-{_WORD})*", re.UNICODE)
_SENTENCE_BREAKERS = frozenset("!?;\n")

#: Abbreviations whose trailing period never ends a sentence. Stored
#: normalized (lowercase). Extendable via ``lexicon/abbreviations.txt``.
DEFAULT_ABBREVIATIONS: frozenset[str] = frozenset(
    {
        "bds.",
        "z.b.",
        "i.s.",
        "re.",
        "li.",
        "v.a.",
        "p.a.",
        "a.p.",
        "z.n.",
        "i.v.",
        "d.h.",
        "u.a.",
        "ggf.",
        "evtl.",
        "ca.",
        "max.",
        "min.",
        "vgl.",
        "bzw.",
        "inkl.",
        "sog.",
    }
)


def normalize_text(text: str) -> str:
    """Normalize for matching: NFC, lowercase, whitespace runs collapsed.

    Spans are never taken on normalized text; callers keep original offsets.
    """
    composed = unicodedata.normalize("NFC", text)
    return " ".join(composed.lower().split())


def _abbreviation_before(text: str, period_index: int) -> str:
    """The whitespace-delimited word ending at ``period_index``, normalized."""
    start = period_index
    while start > 0 and not text[start - 1].isspace():
        start -= 1
    word = text[start : period_index + 1]
    # Strip leading punctuation such as an opening parenthesis.
    word = re.sub(rf"^[^\ẁ-ͯ]+(?=[\ẁ-ͯ])", "", word)
    return normalize_text(word)


def _period_splits(text: str, i: int, abbreviations: frozenset[str]) -> bool:
    j = i + 1
    n = len(text)
    if j >= n:
        return True
    if not text[j].isspace():
        return False
    while j < n and text[j].isspace():
        j += 1
    if j >= n:
        return True
    if not text[j].isupper():
        return False
    return _abbreviation_before(text, i) not in abbreviations


def segment_sentences(
    text: str, abbreviations: frozenset[str] = DEFAULT_ABBREVIATIONS
) -> list[tuple[int, int]]:
    """Split ``text`` into sentence spans (character offsets, end exclusive).

    Whitespace-only segments are dropped; the empty text yields no sentences.
    """
    spans: list[tuple[int, int]] = []
    start = 0

    def push(end: int) -> None:
        nonlocal start
        lo, hi = start, end
        while lo < hi and text[lo].isspace():
            lo += 1
        while hi > lo and text[hi - 1].isspace():
            hi -= 1
        if hi > lo:
            spans.append((lo, hi))
        start = end

    for i, ch in enumerate(text):
        if ch in _SENTENCE_BREAKERS:
            push(i + 1)
        elif ch == "." and _period_splits(text, i, abbreviations):
            push(i + 1)
    push(len(text))
    return spans


@dataclass(frozen=True)
class Token:
    """One token of the original report text.

    ``char_span`` is a half-open (start, end) character-offset range into the
    original text, so ``text[start:end] == surface`` always holds.
    """

    surface: str
    normalized: str
    char_span: tuple[int, int]
    sentence_index: int


@dataclass(frozen=True)
class TokenizedReport:
    report_id: str
    original_text: str
    tokens: tuple[Token, ...]
    #: Per sentence, the half-open [first, last) token-index range.
    sentence_boundaries: tuple[tuple[int, int], ...]

    def sentence_tokens(self, sentence_index: int) -> tuple[Token, ...]:
        lo, hi = self.sentence_boundaries[sentence_index]
        return self.tokens[lo:hi]


def tokenize(text: str, span: tuple[int, int]) -> list[tuple[str, int, int]]:
    """Tokenize one sentence span of ``text`` into (surface, start, end)."""
    lo, hi = span
    return [
        (m.group(0), lo + m.start(), lo + m.end())
        for m in _TOKEN_RE.finditer(text[lo:hi])
    ]


def tokenize_report(
    report_id: str,
    text: str,
    abbreviations: frozenset[str] = DEFAULT_ABBREVIATIONS,
) -> TokenizedReport:
    """Segment and tokenize a full report deterministically."""
    tokens: list[Token] = []
    boundaries: list[tuple[int, int]] = []
    for sentence_index, span in enumerate(segment_sentences(text, abbreviations)):
        first = len(tokens)
        for surface, start, end in tokenize(text, span):
            tokens.append(
                Token(
                    surface=surface,
                    normalized=normalize_text(surface),
                    char_span=(start, end),
                    sentence_index=sentence_index,
                )
            )
        boundaries.append((first, len(tokens)))
    return TokenizedReport(
        report_id=report_id,
        original_text=text,
        tokens=tuple(tokens),
        sentence_boundaries=tuple(boundaries),
    )


def normalized_tokens(text: str) -> list[str]:
    """Normalized token sequence of ``text``, for phrase and trigger parsing."""
    return [normalize_text(m.group(0)) for m in _TOKEN_RE.finditer(text)]


def load_abbreviation_file(lines: Iterable[str]) -> frozenset[str]:
    """Parse abbreviation lines (one per line, ``#`` comments) into a set."""
    out = set(DEFAULT_ABBREVIATIONS)
    for raw in lines:
        entry = raw.split("#", 1)[0].strip()
        if entry:
            out.add(normalize_text(entry))
    return frozenset(out)
