"""Three-stage report labeling: mention extraction, classification, aggregation.

Stage 1 scans each sentence for phrase occurrences from the class-specific
lists. Stage 2 classifies each mention as positive, negative, or uncertain by
looking for negation/uncertainty triggers inside a token window (the cut-off
radius) around the mention, clipped to the sentence. Stage 3 aggregates all
mentions of one observation into a single label and derives "no finding".

Scoping rules, frozen here because they are load-bearing:

* Matching is greedy longest-match per (class, polarity) list: at a start
  token the longest phrase from that list wins and further matches from the
  same list cannot start inside it. Lists of different classes or polarities
  overlap freely.
* A mention from a negative or uncertain phrase list keeps that polarity as
  its classification regardless of nearby triggers; such phrases encode
  medical wordings that convey absence without any negation word.
* A PRE trigger qualifies when it ends within the ``radius`` tokens before
  the mention, a POST trigger when it starts within the ``radius`` tokens
  after it. Uncertainty outranks negation when both qualify.
* Triggers never scope across sentence boundaries, and a trigger occurrence
  whose token range exactly equals a phrase mention is discarded (phrases
  stored whole, such as a negated wording in a negative list, are not
  double-processed).
"""
from __future__ import annotations

from collections import defaultdict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Hashable, Iterable, Mapping, Sequence

from .errors import ConfigurationError
from .lexicon import (
    PhraseEntry,
    PhraseLexicon,
    TriggerEntry,
    TriggerKind,
    TriggerLexicon,
    TriggerPosition,
)
from .observations import (
    ALL_CLASSES,
    MentionClassification,
    ObservationClass,
    ObservationLabel,
    PATHOLOGY_CLASSES,
    PHRASE_CLASSES,
    Polarity,
)
from .textproc import DEFAULT_ABBREVIATIONS, Token, TokenizedReport, tokenize_report

#: Shipped default cut-off radius. Five is common practice for this family of
#: negation scopers, but six is the smallest radius that resolves a sentence
#: like "Keine pleurale Dehiszenz im Sinne eines Pneumothorax", where six
#: tokens separate the trigger from the mention. See README for sensitivity.
DEFAULT_RADIUS = 6


@dataclass(frozen=True)
class TriggerOccurrence:
    """One trigger found in a sentence; token_range is inclusive (first, last)."""

    entry: TriggerEntry
    token_range: tuple[int, int]
    char_span: tuple[int, int]
    sentence_index: int


@dataclass(frozen=True)
class Mention:
    """One matched phrase occurrence, before or after classification.

    ``token_range`` is inclusive (first, last) over the report token stream;
    ``char_span`` is the half-open character range in the original text.
    """

    observation: ObservationClass
    phrase: PhraseEntry
    token_range: tuple[int, int]
    char_span: tuple[int, int]
    sentence_index: int
    source_polarity: Polarity
    classification: MentionClassification | None = None
    cause: TriggerOccurrence | None = None


@dataclass(frozen=True)
class LabelVector:
    """The 14-observation output of the labeler, with mention provenance."""

    report_id: str
    labels: Mapping[ObservationClass, ObservationLabel]
    mentions: tuple[Mention, ...] = ()


class _TokenScanner:
    """Greedy longest-match scanner over normalized token sequences.

    Entries are grouped into streams; suppression applies per stream (a match
    blocks later starts inside its span for the same stream only). Phrase
    matching uses one stream per (class, polarity) list; trigger matching is
    a single stream. Only the final token of an entry may carry a prefix
    wildcard; single-token wildcard entries are checked per token, everything
    else through a first-token bucket.
    """

    def __init__(self) -> None:
        self._by_first: dict[str, list[tuple[Hashable, tuple[str, ...], bool, object]]] = {}
        self._single_prefix: list[tuple[Hashable, str, object]] = []

    def add(
        self, stream: Hashable, tokens: tuple[str, ...], wildcard: bool, payload: object
    ) -> None:
        if wildcard and len(tokens) == 1:
            self._single_prefix.append((stream, tokens[0], payload))
        else:
            self._by_first.setdefault(tokens[0], []).append(
                (stream, tokens, wildcard, payload)
            )

    def _matches_at(self, norms: Sequence[str], start: int):
        token = norms[start]
        for stream, prefix, payload in self._single_prefix:
            if token.startswith(prefix):
                yield stream, 1, payload
        for stream, tokens, wildcard, payload in self._by_first.get(token, ()):
            end = start + len(tokens)
            if end > len(norms):
                continue
            if any(norms[start + k] != tokens[k] for k in range(1, len(tokens) - 1)):
                continue
            if len(tokens) > 1:
                last, pattern = norms[end - 1], tokens[-1]
                if not (last.startswith(pattern) if wildcard else last == pattern):
                    continue
            yield stream, len(tokens), payload

    def scan(
        self, norms: Sequence[str], tiebreak, keep_ties: bool = False
    ) -> list[tuple[int, int, Hashable, object]]:
        """Greedy matches as (start, length, stream, payload).

        At one start within one stream the longest match wins; among equal
        lengths the smallest ``tiebreak(payload)`` wins, or all tie-winners
        are kept when ``keep_ties`` (used for triggers, where the same text
        may be registered under several kinds).
        """
        per_start: dict[Hashable, dict[int, list[tuple[int, object]]]] = defaultdict(dict)
        for start in range(len(norms)):
            for stream, length, payload in self._matches_at(norms, start):
                per_start[stream].setdefault(start, []).append((length, payload))
        out: list[tuple[int, int, Hashable, object]] = []
        for stream, starts in per_start.items():
            next_free = 0
            for start in sorted(starts):
                if start < next_free:
                    continue
                candidates = starts[start]
                best_len = max(length for length, _ in candidates)
                winners = sorted(
                    (payload for length, payload in candidates if length == best_len),
                    key=tiebreak,
                )
                if not keep_ties:
                    winners = winners[:1]
                for payload in winners:
                    out.append((start, best_len, stream, payload))
                next_free = start + best_len
        return out


def _phrase_tiebreak(entry: PhraseEntry):
    # Exact final token beats a wildcard; then lexicographic for determinism.
    return (entry.prefix_wildcard, entry.tokens)


def _trigger_tiebreak(entry: TriggerEntry):
    return (entry.tokens, entry.kind.value, entry.position.value)


def build_phrase_scanner(phrases: PhraseLexicon) -> _TokenScanner:
    scanner = _TokenScanner()
    for cls in PHRASE_CLASSES:
        for polarity in Polarity:
            for entry in phrases.phrases(cls, polarity):
                scanner.add((cls, polarity), entry.tokens, entry.prefix_wildcard, entry)
    return scanner


def build_trigger_scanner(triggers: TriggerLexicon) -> _TokenScanner:
    scanner = _TokenScanner()
    for entry in triggers.entries:
        scanner.add("triggers", entry.tokens, False, entry)
    return scanner


def _span_of(tokens: Sequence[Token], first: int, last: int) -> tuple[int, int]:
    return (tokens[first].char_span[0], tokens[last].char_span[1])


_CLASS_ORDER = {cls: i for i, cls in enumerate(ALL_CLASSES)}
_POLARITY_ORDER = {p: i for i, p in enumerate(Polarity)}


def extract_mentions(
    report: TokenizedReport,
    phrases: PhraseLexicon,
    scanner: _TokenScanner | None = None,
) -> list[Mention]:
    """Stage 1: every phrase occurrence, unclassified, ordered by (start, class)."""
    scanner = scanner or build_phrase_scanner(phrases)
    mentions: list[Mention] = []
    for sentence_index, (lo, hi) in enumerate(report.sentence_boundaries):
        sentence = report.tokens[lo:hi]
        if not sentence:
            continue
        norms = [t.normalized for t in sentence]
        for start, length, (cls, polarity), entry in scanner.scan(
            norms, _phrase_tiebreak
        ):
            first, last = lo + start, lo + start + length - 1
            mentions.append(
                Mention(
                    observation=cls,
                    phrase=entry,
                    token_range=(first, last),
                    char_span=_span_of(report.tokens, first, last),
                    sentence_index=sentence_index,
                    source_polarity=polarity,
                )
            )
    mentions.sort(
        key=lambda m: (
            m.token_range[0],
            _CLASS_ORDER[m.observation],
            _POLARITY_ORDER[m.source_polarity],
            m.token_range[1],
        )
    )
    return mentions


def find_triggers(
    report: TokenizedReport,
    triggers: TriggerLexicon,
    scanner: _TokenScanner | None = None,
) -> list[TriggerOccurrence]:
    """Longest-match trigger occurrences across the whole trigger lexicon.

    The same token span may yield several occurrences when one trigger text
    is registered under multiple kinds or positions.
    """
    scanner = scanner or build_trigger_scanner(triggers)
    found: list[TriggerOccurrence] = []
    for sentence_index, (lo, hi) in enumerate(report.sentence_boundaries):
        sentence = report.tokens[lo:hi]
        if not sentence:
            continue
        norms = [t.normalized for t in sentence]
        for start, length, _stream, entry in scanner.scan(
            norms, _trigger_tiebreak, keep_ties=True
        ):
            first, last = lo + start, lo + start + length - 1
            found.append(
                TriggerOccurrence(
                    entry=entry,
                    token_range=(first, last),
                    char_span=_span_of(report.tokens, first, last),
                    sentence_index=sentence_index,
                )
            )
    found.sort(key=lambda t: (t.token_range, _trigger_tiebreak(t.entry)))
    return found


def classify_mention(
    mention: Mention,
    triggers_in_sentence: Sequence[TriggerOccurrence],
    radius: int,
) -> Mention:
    """Stage 2: classify one mention against the triggers of its sentence.

    A mention whose source polarity is not positive keeps it. Otherwise a PRE
    trigger qualifies when it ends at most ``radius`` tokens before the
    mention's first token, a POST trigger when it starts at most ``radius``
    tokens after its last. No qualifying trigger means positive; a qualifying
    uncertainty trigger wins over negation; ``cause`` records the nearest
    qualifying trigger of the winning kind.
    """
    if radius < 1:
        raise ConfigurationError(f"cut-off radius must be >= 1, got {radius}")
    if mention.source_polarity is not Polarity.POSITIVE:
        return replace(
            mention, classification=mention.source_polarity, cause=None
        )
    first, last = mention.token_range
    qualifying: dict[TriggerKind, list[tuple[int, TriggerOccurrence]]] = {
        TriggerKind.NEGATION: [],
        TriggerKind.UNCERTAINTY: [],
    }
    for occurrence in triggers_in_sentence:
        t_first, t_last = occurrence.token_range
        if occurrence.entry.position is TriggerPosition.PRE:
            distance = first - t_last
            if 1 <= distance <= radius:
                qualifying[occurrence.entry.kind].append((distance, occurrence))
        else:
            distance = t_first - last
            if 1 <= distance <= radius:
                qualifying[occurrence.entry.kind].append((distance, occurrence))
    for kind, classification in (
        (TriggerKind.UNCERTAINTY, MentionClassification.UNCERTAIN),
        (TriggerKind.NEGATION, MentionClassification.NEGATIVE),
    ):
        if qualifying[kind]:
            _, cause = min(
                qualifying[kind],
                key=lambda item: (item[0], item[1].token_range),
            )
            return replace(mention, classification=classification, cause=cause)
    return replace(mention, classification=MentionClassification.POSITIVE, cause=None)


def aggregate(classifications: Iterable[MentionClassification]) -> ObservationLabel:
    """Stage 3 for one observation: positive > uncertain > negative > blank."""
    seen = set(classifications)
    if MentionClassification.POSITIVE in seen:
        return ObservationLabel.POSITIVE
    if MentionClassification.UNCERTAIN in seen:
        return ObservationLabel.UNCERTAIN
    if MentionClassification.NEGATIVE in seen:
        return ObservationLabel.NEGATIVE
    return ObservationLabel.BLANK


def derive_no_finding(
    labels: Mapping[ObservationClass, ObservationLabel]
) -> ObservationLabel:
    """Positive unless any pathology (support devices excluded) is positive
    or uncertain."""
    for cls in PATHOLOGY_CLASSES:
        if labels.get(cls) in (ObservationLabel.POSITIVE, ObservationLabel.UNCERTAIN):
            return ObservationLabel.NEGATIVE
    return ObservationLabel.POSITIVE


def label_report(
    text: str,
    view_position: str | None = None,
    *,
    report_id: str = "",
    phrases: PhraseLexicon,
    triggers: TriggerLexicon,
    radius: int = DEFAULT_RADIUS,
    abbreviations: frozenset[str] = DEFAULT_ABBREVIATIONS,
    _phrase_scanner: _TokenScanner | None = None,
    _trigger_scanner: _TokenScanner | None = None,
) -> LabelVector:
    """Run the full pipeline on one report.

    ``view_position`` is metadata only (displayed by the annotation tool); the
    labels are computed from ``text`` alone. Never fails on report content;
    only a bad configuration (radius < 1) raises.
    """
    del view_position
    if radius < 1:
        raise ConfigurationError(f"cut-off radius must be >= 1, got {radius}")
    report = tokenize_report(report_id, text, abbreviations)
    mentions = extract_mentions(report, phrases, scanner=_phrase_scanner)
    occurrences = find_triggers(report, triggers, scanner=_trigger_scanner)
    mention_ranges = {m.token_range for m in mentions}
    occurrences = [o for o in occurrences if o.token_range not in mention_ranges]
    by_sentence: dict[int, list[TriggerOccurrence]] = defaultdict(list)
    for occurrence in occurrences:
        by_sentence[occurrence.sentence_index].append(occurrence)
    classified = tuple(
        classify_mention(m, by_sentence.get(m.sentence_index, ()), radius)
        for m in mentions
    )
    labels: dict[ObservationClass, ObservationLabel] = {}
    for cls in PHRASE_CLASSES:
        labels[cls] = aggregate(
            m.classification for m in classified if m.observation is cls
        )
    labels[ObservationClass.NO_FINDING] = derive_no_finding(labels)
    ordered = {cls: labels[cls] for cls in ALL_CLASSES}
    return LabelVector(report_id=report_id, labels=ordered, mentions=classified)


def label_batch(
    reports: Sequence,
    *,
    phrases: PhraseLexicon,
    triggers: TriggerLexicon,
    radius: int = DEFAULT_RADIUS,
    abbreviations: frozenset[str] = DEFAULT_ABBREVIATIONS,
    worker_count: int = 1,
) -> list[LabelVector]:
    """Label many reports, preserving input order.

    Output is a pure function of (reports, lexicons, radius): worker_count
    only changes wall-clock time, never bytes. ``reports`` are corpus records
    with ``report_id``, ``view_position`` and ``text`` attributes.
    """
    if worker_count < 1:
        raise ConfigurationError(f"worker_count must be >= 1, got {worker_count}")
    phrase_scanner = build_phrase_scanner(phrases)
    trigger_scanner = build_trigger_scanner(triggers)

    def run(record) -> LabelVector:
        return label_report(
            record.text,
            record.view_position,
            report_id=record.report_id,
            phrases=phrases,
            triggers=triggers,
            radius=radius,
            abbreviations=abbreviations,
            _phrase_scanner=phrase_scanner,
            _trigger_scanner=trigger_scanner,
        )

    if worker_count == 1 or len(reports) <= 1:
        return [run(r) for r in reports]
    with ThreadPoolExecutor(max_workers=worker_count) as pool:
        return list(pool.map(run, reports))
