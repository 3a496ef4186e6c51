"""Phrase and trigger lexicons: loading, validation, persistence, mutation.

The lexicon directory is the labeler's entire domain knowledge and is meant to
be edited by radiologists, so the storage format is deliberately plain:

    lexicon/<class_snake_case>/{positive.txt, negative.txt, uncertain.txt}
    lexicon/triggers/{negation_pre.txt, negation_post.txt,
                      uncertainty_pre.txt, uncertainty_post.txt}
    lexicon/abbreviations.txt

One phrase per line, UTF-8, ``#`` starts a comment. A trailing ``*`` on the
final token of a phrase makes that token match by prefix, which covers German
inflection ("Infiltrat*" matches "Infiltrate"/"Infiltraten") without a
stemmer. Trigger files do not support the wildcard: a trigger is an exact
token sequence.

Loaded lexicons are immutable values. ``add_phrase`` returns a new value and
persists by writing a temp file and renaming it over the original, so readers
never observe a half-written file.
"""
from __future__ import annotations

import logging
import os
import tempfile
from dataclasses import dataclass, replace
from enum import Enum
from pathlib import Path
from typing import Iterable, Mapping

from .errors import DataError, LexiconFormatError
from .observations import ObservationClass, PHRASE_CLASSES, Polarity
from .textproc import DEFAULT_ABBREVIATIONS, load_abbreviation_file, normalized_tokens

logger = logging.getLogger(__name__)

TRIGGERS_DIR = "triggers"
ABBREVIATIONS_FILE = "abbreviations.txt"

_POLARITY_FILES = {
    Polarity.POSITIVE: "positive.txt",
    Polarity.NEGATIVE: "negative.txt",
    Polarity.UNCERTAIN: "uncertain.txt",
}


class TriggerKind(Enum):
    NEGATION = "negation"
    UNCERTAINTY = "uncertainty"


class TriggerPosition(Enum):
    """PRE triggers scope forward over following mentions, POST backward."""

    PRE = "pre"
    POST = "post"


_TRIGGER_FILES: dict[str, tuple[TriggerKind, TriggerPosition]] = {
    "negation_pre.txt": (TriggerKind.NEGATION, TriggerPosition.PRE),
    "negation_post.txt": (TriggerKind.NEGATION, TriggerPosition.POST),
    "uncertainty_pre.txt": (TriggerKind.UNCERTAINTY, TriggerPosition.PRE),
    "uncertainty_post.txt": (TriggerKind.UNCERTAINTY, TriggerPosition.POST),
}


@dataclass(frozen=True, order=True)
class PhraseEntry:
    """A normalized phrase: token sequence plus optional last-token prefix flag."""

    tokens: tuple[str, ...]
    prefix_wildcard: bool = False

    @property
    def text(self) -> str:
        return " ".join(self.tokens)

    def file_form(self) -> str:
        return self.text + ("*" if self.prefix_wildcard else "")


@dataclass(frozen=True)
class TriggerEntry:
    """Unique per (tokens, kind, position); enums prevent dataclass ordering."""

    tokens: tuple[str, ...]
    kind: TriggerKind
    position: TriggerPosition

    @property
    def text(self) -> str:
        return " ".join(self.tokens)


def _trigger_sort_key(entry: TriggerEntry) -> tuple:
    return (entry.kind.value, entry.position.value, entry.tokens)


@dataclass(frozen=True)
class PhraseLexicon:
    """Per-class, per-polarity phrase lists. NO_FINDING never has entries."""

    entries: Mapping[ObservationClass, Mapping[Polarity, tuple[PhraseEntry, ...]]]
    root: Path | None = None

    def phrases(self, cls: ObservationClass, polarity: Polarity) -> tuple[PhraseEntry, ...]:
        return self.entries[cls][polarity]

    @staticmethod
    def empty(root: Path | None = None) -> "PhraseLexicon":
        return PhraseLexicon(
            entries={c: {p: () for p in Polarity} for c in PHRASE_CLASSES},
            root=root,
        )


@dataclass(frozen=True)
class TriggerLexicon:
    entries: tuple[TriggerEntry, ...]

    def by_kind_position(
        self, kind: TriggerKind, position: TriggerPosition
    ) -> tuple[TriggerEntry, ...]:
        return tuple(
            e for e in self.entries if e.kind is kind and e.position is position
        )


def parse_phrase_line(path: Path | str, line_no: int, raw: str) -> PhraseEntry | None:
    """Parse one lexicon line; ``None`` for blank/comment lines.

    Raises :class:`LexiconFormatError` for lines with content that normalizes
    to nothing, or with a ``*`` anywhere but the end of the line.
    """
    content = raw.split("#", 1)[0].strip()
    if not content:
        return None
    wildcard = content.endswith("*")
    if wildcard:
        content = content[:-1].rstrip()
    if "*" in content:
        raise LexiconFormatError(
            path, line_no, "'*' is only allowed at the end of the final token"
        )
    tokens = tuple(normalized_tokens(content))
    if not tokens:
        raise LexiconFormatError(path, line_no, "line is empty after normalization")
    return PhraseEntry(tokens=tokens, prefix_wildcard=wildcard)


def _read_phrase_file(path: Path) -> tuple[PhraseEntry, ...]:
    if not path.is_file():
        return ()
    seen: dict[PhraseEntry, int] = {}
    with path.open(encoding="utf-8") as handle:
        for line_no, raw in enumerate(handle, start=1):
            entry = parse_phrase_line(path, line_no, raw)
            if entry is None:
                continue
            if entry in seen:
                logger.warning(
                    "%s:%d: duplicate phrase %r (first seen on line %d), keeping first",
                    path,
                    line_no,
                    entry.file_form(),
                    seen[entry],
                )
                continue
            seen[entry] = line_no
    return tuple(sorted(seen))


def _read_trigger_file(
    path: Path, kind: TriggerKind, position: TriggerPosition
) -> list[TriggerEntry]:
    if not path.is_file():
        return []
    out: dict[TriggerEntry, int] = {}
    with path.open(encoding="utf-8") as handle:
        for line_no, raw in enumerate(handle, start=1):
            parsed = parse_phrase_line(path, line_no, raw)
            if parsed is None:
                continue
            if parsed.prefix_wildcard:
                raise LexiconFormatError(
                    path, line_no, "triggers are exact token sequences; '*' not supported"
                )
            entry = TriggerEntry(tokens=parsed.tokens, kind=kind, position=position)
            if entry in out:
                logger.warning(
                    "%s:%d: duplicate trigger %r, keeping first", path, line_no, entry.text
                )
                continue
            out[entry] = line_no
    return list(out)


def load_lexicons(root: Path | str) -> tuple[PhraseLexicon, TriggerLexicon]:
    """Load the full lexicon directory.

    A missing root directory is fatal. Missing class directories or files are
    treated as empty lists so a freshly initialized lexicon keeps working.
    The resulting lexicons are sorted, deduplicated, and independent of file
    line order.
    """
    root = Path(root)
    if not root.is_dir():
        raise DataError(f"lexicon directory not found: {root}")
    entries: dict[ObservationClass, dict[Polarity, tuple[PhraseEntry, ...]]] = {}
    for cls in PHRASE_CLASSES:
        class_dir = root / cls.value
        entries[cls] = {
            polarity: _read_phrase_file(class_dir / filename)
            for polarity, filename in _POLARITY_FILES.items()
        }
    triggers: list[TriggerEntry] = []
    for filename, (kind, position) in _TRIGGER_FILES.items():
        triggers.extend(_read_trigger_file(root / TRIGGERS_DIR / filename, kind, position))
    unique: dict[tuple, TriggerEntry] = {}
    for entry in triggers:
        key = (entry.tokens, entry.kind, entry.position)
        if key in unique:
            logger.warning("duplicate trigger across files: %r, keeping first", entry.text)
            continue
        unique[key] = entry
    trigger_lexicon = TriggerLexicon(
        entries=tuple(sorted(unique.values(), key=_trigger_sort_key))
    )
    return PhraseLexicon(entries=entries, root=root), trigger_lexicon


def load_abbreviations(root: Path | str) -> frozenset[str]:
    """Abbreviation set from ``lexicon/abbreviations.txt`` plus the defaults."""
    path = Path(root) / ABBREVIATIONS_FILE
    if not path.is_file():
        return DEFAULT_ABBREVIATIONS
    with path.open(encoding="utf-8") as handle:
        return load_abbreviation_file(handle)


def _atomic_write(path: Path, content: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as tmp:
            tmp.write(content)
            tmp.flush()
            os.fsync(tmp.fileno())
        os.replace(tmp_name, path)
    except BaseException:
        try:
            os.unlink(tmp_name)
        except OSError:
            pass
        raise


def save_lexicons(
    phrases: PhraseLexicon, triggers: TriggerLexicon, root: Path | str
) -> None:
    """Write the complete directory layout (including empty files)."""
    root = Path(root)
    for cls in PHRASE_CLASSES:
        for polarity, filename in _POLARITY_FILES.items():
            lines = [e.file_form() for e in phrases.phrases(cls, polarity)]
            _atomic_write(root / cls.value / filename, "".join(l + "\n" for l in lines))
    for filename, (kind, position) in _TRIGGER_FILES.items():
        lines = [e.text for e in triggers.by_kind_position(kind, position)]
        _atomic_write(root / TRIGGERS_DIR / filename, "".join(l + "\n" for l in lines))


def add_phrase(
    lexicon: PhraseLexicon,
    cls: ObservationClass,
    polarity: Polarity,
    surface: str,
) -> tuple[PhraseLexicon, bool]:
    """Add a phrase to one list, persisting if the lexicon is file-backed.

    Returns ``(updated_lexicon, already_present)``. Adding to NO_FINDING is
    rejected: that label is derived, never matched. Persistence appends the
    surface line to the backing file via temp-file-and-rename, preserving any
    comments a human left there.
    """
    if cls is ObservationClass.NO_FINDING:
        raise DataError("no_finding has no phrase lists; its label is derived")
    entry = parse_phrase_line("<add_phrase>", 1, surface)
    if entry is None:
        raise DataError(f"phrase is empty after normalization: {surface!r}")
    current = lexicon.phrases(cls, polarity)
    if entry in current:
        return lexicon, True
    updated_class = dict(lexicon.entries[cls])
    updated_class[polarity] = tuple(sorted((*current, entry)))
    entries = dict(lexicon.entries)
    entries[cls] = updated_class
    updated = replace(lexicon, entries=entries)
    if lexicon.root is not None:
        path = Path(lexicon.root) / cls.value / _POLARITY_FILES[polarity]
        existing = path.read_text(encoding="utf-8") if path.is_file() else ""
        if existing and not existing.endswith("\n"):
            existing += "\n"
        _atomic_write(path, existing + surface.strip() + "\n")
    return updated, False


@dataclass(frozen=True)
class Diagnostic:
    """One validation finding. ``severity`` is 'warning' or 'info'."""

    severity: str
    message: str
    cls: ObservationClass | None = None
    polarity: Polarity | None = None


def validate_lexicons(
    phrases: PhraseLexicon, triggers: TriggerLexicon
) -> list[Diagnostic]:
    """Diagnostics only, never errors.

    Flags phrases colliding with trigger text, phrases shadowed by a longer
    phrase in the same list under longest-match, and classes whose three
    lists are all empty (the class can never be labeled).
    """
    diagnostics: list[Diagnostic] = []
    trigger_texts = {t.tokens for t in triggers.entries}
    if not triggers.entries:
        diagnostics.append(
            Diagnostic("warning", "trigger lexicon is empty; nothing can be negated")
        )
    for cls in PHRASE_CLASSES:
        if all(not phrases.phrases(cls, p) for p in Polarity):
            diagnostics.append(
                Diagnostic(
                    "info",
                    f"{cls.value}: all polarity lists are empty; class is never labeled",
                    cls=cls,
                )
            )
        for polarity in Polarity:
            plist = phrases.phrases(cls, polarity)
            for entry in plist:
                if entry.tokens in trigger_texts:
                    diagnostics.append(
                        Diagnostic(
                            "warning",
                            f"{cls.value}/{polarity.value}: phrase {entry.file_form()!r} "
                            "equals a trigger phrase",
                            cls=cls,
                            polarity=polarity,
                        )
                    )
            for short in plist:
                for long in plist:
                    if (
                        len(short.tokens) < len(long.tokens)
                        and long.tokens[: len(short.tokens)] == short.tokens
                    ):
                        diagnostics.append(
                            Diagnostic(
                                "warning",
                                f"{cls.value}/{polarity.value}: {short.file_form()!r} is a "
                                f"prefix of {long.file_form()!r} and is shadowed where the "
                                "longer phrase matches",
                                cls=cls,
                                polarity=polarity,
                            )
                        )
    return diagnostics


def phrase_lexicon_from_dict(
    spec: Mapping[ObservationClass, Mapping[Polarity, Iterable[str]]],
    root: Path | None = None,
) -> PhraseLexicon:
    """Build a lexicon from literal phrase strings (test and seed helper)."""
    entries: dict[ObservationClass, dict[Polarity, tuple[PhraseEntry, ...]]] = {
        c: {p: () for p in Polarity} for c in PHRASE_CLASSES
    }
    for cls, by_polarity in spec.items():
        if cls is ObservationClass.NO_FINDING:
            raise DataError("no_finding has no phrase lists")
        for polarity, surfaces in by_polarity.items():
            parsed = []
            for surface in surfaces:
                entry = parse_phrase_line("<literal>", 1, surface)
                if entry is not None:
                    parsed.append(entry)
            entries[cls][polarity] = tuple(sorted(set(parsed)))
    return PhraseLexicon(entries=entries, root=root)


def trigger_lexicon_from_dict(
    spec: Mapping[tuple[TriggerKind, TriggerPosition], Iterable[str]]
) -> TriggerLexicon:
    entries = []
    for (kind, position), surfaces in spec.items():
        for surface in surfaces:
            parsed = parse_phrase_line("<literal>", 1, surface)
            if parsed is None:
                continue
            entries.append(TriggerEntry(tokens=parsed.tokens, kind=kind, position=position))
    return TriggerLexicon(entries=tuple(sorted(set(entries), key=_trigger_sort_key)))
