"""Append-only annotation store with optimistic concurrency.

Every save appends one complete JSON line; nothing is ever rewritten, so the
history of an annotation is the sequence of its revisions and export is a
fold over the log. A save must carry revision = stored revision + 1; a lower
or equal revision is a stale save (the annotator was looking at an outdated
copy) and is rejected. Appends happen under a lock as a single buffered write
followed by flush+fsync, so a crash can at worst lose the final line, never
interleave or truncate an earlier one.

Phrase additions made through the annotation interface are logged to a
separate audit file with annotator and timestamp.
"""
from __future__ import annotations

import json
import logging
import os
import threading
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Mapping

from .errors import DataError, StaleRevisionError
from .observations import ALL_CLASSES, ObservationClass, Polarity

logger = logging.getLogger(__name__)

ANNOTATIONS_FILE = "annotations.jsonl"
PHRASE_LOG_FILE = "phrase_log.jsonl"

_LABEL_TO_JSON = {
    Polarity.POSITIVE: "positive",
    Polarity.NEGATIVE: "negative",
    Polarity.UNCERTAIN: "uncertain",
    None: "none",
}
_JSON_TO_LABEL: dict[str, Polarity | None] = {v: k for k, v in _LABEL_TO_JSON.items()}


def _utc_now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="milliseconds")


@dataclass(frozen=True)
class AnnotationRecord:
    """One saved annotation revision: a 4-way judgment for all 14 classes."""

    report_id: str
    annotator_id: str
    labels: Mapping[ObservationClass, Polarity | None]
    marked: bool = False
    comment: str | None = None
    revision: int = 1
    saved_at: str = ""

    def __post_init__(self) -> None:
        missing = [c.value for c in ALL_CLASSES if c not in self.labels]
        if missing:
            raise DataError(f"annotation record incomplete; missing classes: {missing}")

    def to_json(self) -> dict:
        return {
            "report_id": self.report_id,
            "annotator_id": self.annotator_id,
            "labels": {c.value: _LABEL_TO_JSON[self.labels[c]] for c in ALL_CLASSES},
            "marked": self.marked,
            "comment": self.comment,
            "revision": self.revision,
            "saved_at": self.saved_at,
        }

    @staticmethod
    def from_json(obj: dict) -> "AnnotationRecord":
        try:
            labels = {
                ObservationClass(name): _JSON_TO_LABEL[value]
                for name, value in obj["labels"].items()
            }
            return AnnotationRecord(
                report_id=obj["report_id"],
                annotator_id=obj["annotator_id"],
                labels=labels,
                marked=bool(obj.get("marked", False)),
                comment=obj.get("comment"),
                revision=int(obj["revision"]),
                saved_at=str(obj.get("saved_at", "")),
            )
        except (KeyError, ValueError) as exc:
            raise DataError(f"malformed annotation record: {exc}") from None


class AnnotationStore:
    """Append-only JSONL store under one directory; safe for threaded use."""

    def __init__(self, directory: Path | str):
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)
        self.path = self.directory / ANNOTATIONS_FILE
        self.phrase_log_path = self.directory / PHRASE_LOG_FILE
        self._lock = threading.Lock()
        self._latest: dict[tuple[str, str], AnnotationRecord] = {}
        self._replay()
        self._handle = self.path.open("a", encoding="utf-8")
        self._phrase_handle = self.phrase_log_path.open("a", encoding="utf-8")

    def _replay(self) -> None:
        if not self.path.is_file():
            return
        with self.path.open(encoding="utf-8") as handle:
            lines = handle.readlines()
        for line_no, raw in enumerate(lines, start=1):
            if not raw.strip():
                continue
            try:
                record = AnnotationRecord.from_json(json.loads(raw))
            except (json.JSONDecodeError, DataError) as exc:
                if line_no == len(lines):
                    # A torn final line is the one legal artifact of a crash
                    # mid-append; everything before it is intact.
                    logger.warning("%s:%d: dropping torn final line (%s)", self.path, line_no, exc)
                    continue
                raise DataError(f"{self.path}:{line_no}: corrupt record: {exc}") from None
            self._latest[(record.report_id, record.annotator_id)] = record

    def close(self) -> None:
        self._handle.close()
        self._phrase_handle.close()

    def stored_revision(self, report_id: str, annotator_id: str) -> int:
        record = self._latest.get((report_id, annotator_id))
        return record.revision if record else 0

    def append(self, record: AnnotationRecord) -> AnnotationRecord:
        """Validate the revision and durably append; returns the stored record."""
        with self._lock:
            stored = self.stored_revision(record.report_id, record.annotator_id)
            if record.revision <= stored:
                raise StaleRevisionError(stored)
            if record.revision != stored + 1:
                raise DataError(
                    f"revision must increment by 1 (stored {stored}, got {record.revision})"
                )
            final = AnnotationRecord(
                report_id=record.report_id,
                annotator_id=record.annotator_id,
                labels=record.labels,
                marked=record.marked,
                comment=record.comment,
                revision=record.revision,
                saved_at=_utc_now(),
            )
            self._handle.write(json.dumps(final.to_json(), ensure_ascii=False) + "\n")
            self._handle.flush()
            os.fsync(self._handle.fileno())
            self._latest[(final.report_id, final.annotator_id)] = final
            return final

    def latest(self, report_id: str, annotator_id: str) -> AnnotationRecord | None:
        return self._latest.get((report_id, annotator_id))

    def latest_by_annotator(self, annotator_id: str) -> dict[str, AnnotationRecord]:
        return {
            report_id: record
            for (report_id, annotator), record in self._latest.items()
            if annotator == annotator_id
        }

    def annotators(self) -> list[str]:
        return sorted({annotator for _, annotator in self._latest})

    def log_phrase_addition(
        self,
        annotator_id: str,
        cls: ObservationClass,
        polarity: Polarity,
        surface: str,
        already_present: bool,
    ) -> None:
        entry = {
            "at": _utc_now(),
            "annotator_id": annotator_id,
            "class": cls.value,
            "polarity": polarity.value,
            "surface": surface,
            "already_present": already_present,
        }
        with self._lock:
            self._phrase_handle.write(json.dumps(entry, ensure_ascii=False) + "\n")
            self._phrase_handle.flush()
