"""Corpus ingestion and label CSV serialization.

Reports arrive as JSON lines (one object per line with ``report_id``,
optional ``view_position``, and ``text``). Labels are written in the
CheXpert CSV convention: one column per observation class, cells encoded as
``1.0`` positive, ``0.0`` negative, ``-1.0`` uncertain, and the empty string
for "not mentioned". The same file format carries gold annotations, where the
empty cell means the annotator judged the class not mentioned.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .errors import DataError
from .observations import ALL_CLASSES, ObservationClass, ObservationLabel, Polarity

LABEL_HEADER: tuple[str, ...] = ("report_id",) + tuple(c.value for c in ALL_CLASSES)

_CELL_FROM_LABEL = {
    ObservationLabel.POSITIVE: "1.0",
    ObservationLabel.NEGATIVE: "0.0",
    ObservationLabel.UNCERTAIN: "-1.0",
    ObservationLabel.BLANK: "",
}

_VALUE_FROM_CELL: dict[str, Polarity | None] = {
    "1.0": Polarity.POSITIVE,
    "0.0": Polarity.NEGATIVE,
    "-1.0": Polarity.UNCERTAIN,
    "": None,
}

_CELL_FROM_VALUE = {v: k for k, v in _VALUE_FROM_CELL.items()}


@dataclass(frozen=True)
class ReportRecord:
    report_id: str
    text: str
    view_position: str | None = None


#: One parsed label table: report_id -> class -> Polarity or None (blank cell).
LabelTable = dict[str, dict[ObservationClass, Polarity | None]]


def read_corpus(path: Path | str) -> list[ReportRecord]:
    """Read a JSON-lines corpus, preserving order.

    Malformed lines and duplicate report ids are data errors that name the
    offending line.
    """
    path = Path(path)
    if not path.is_file():
        raise DataError(f"corpus file not found: {path}")
    records: list[ReportRecord] = []
    seen: set[str] = set()
    with path.open(encoding="utf-8", newline=None) as handle:
        for line_no, raw in enumerate(handle, start=1):
            if not raw.strip():
                continue
            try:
                obj = json.loads(raw)
            except json.JSONDecodeError as exc:
                raise DataError(f"{path}:{line_no}: invalid JSON: {exc.msg}") from None
            if not isinstance(obj, dict):
                raise DataError(f"{path}:{line_no}: expected a JSON object")
            for key in ("report_id", "text"):
                if key not in obj:
                    raise DataError(f"{path}:{line_no}: missing required key {key!r}")
            report_id = str(obj["report_id"])
            if report_id in seen:
                raise DataError(f"{path}:{line_no}: duplicate report_id {report_id!r}")
            seen.add(report_id)
            view = obj.get("view_position")
            records.append(
                ReportRecord(
                    report_id=report_id,
                    text=str(obj["text"]),
                    view_position=None if view is None else str(view),
                )
            )
    return records


def write_corpus(records: Iterable[ReportRecord], path: Path | str) -> None:
    with Path(path).open("w", encoding="utf-8") as handle:
        for record in records:
            obj = {"report_id": record.report_id, "text": record.text}
            if record.view_position is not None:
                obj["view_position"] = record.view_position
            handle.write(json.dumps(obj, ensure_ascii=False) + "\n")


def label_row(report_id: str, labels: Mapping[ObservationClass, ObservationLabel]) -> list[str]:
    return [report_id] + [_CELL_FROM_LABEL[labels[c]] for c in ALL_CLASSES]


def labels_to_csv(rows: Iterable[tuple[str, Mapping[ObservationClass, ObservationLabel]]]) -> str:
    """Serialize labeler output rows to CSV text (deterministic bytes)."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(LABEL_HEADER)
    for report_id, labels in rows:
        writer.writerow(label_row(report_id, labels))
    return buffer.getvalue()


def write_labels(
    rows: Iterable[tuple[str, Mapping[ObservationClass, ObservationLabel]]],
    path: Path | str,
) -> None:
    Path(path).write_text(labels_to_csv(rows), encoding="utf-8")


def values_to_csv(table: "LabelTable", order: Sequence[str] | None = None) -> str:
    """Serialize a polarity-or-none table (gold annotations) to CSV text."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(LABEL_HEADER)
    ids = order if order is not None else list(table)
    for report_id in ids:
        values = table[report_id]
        writer.writerow(
            [report_id] + [_CELL_FROM_VALUE[values.get(c)] for c in ALL_CLASSES]
        )
    return buffer.getvalue()


def parse_labels_csv(text: str, source: str = "<labels>") -> "LabelTable":
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise DataError(f"{source}: empty label CSV") from None
    if tuple(header) != LABEL_HEADER:
        raise DataError(
            f"{source}: unexpected header {header!r}; expected {list(LABEL_HEADER)!r}"
        )
    table: LabelTable = {}
    for line_no, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != len(LABEL_HEADER):
            raise DataError(
                f"{source}:{line_no}: expected {len(LABEL_HEADER)} cells, got {len(row)}"
            )
        report_id = row[0]
        if report_id in table:
            raise DataError(f"{source}:{line_no}: duplicate report_id {report_id!r}")
        values: dict[ObservationClass, Polarity | None] = {}
        for cls, cell in zip(ALL_CLASSES, row[1:]):
            if cell not in _VALUE_FROM_CELL:
                raise DataError(
                    f"{source}:{line_no}: cell {cell!r} for {cls.value} is not one of "
                    "1.0, 0.0, -1.0, or empty"
                )
            values[cls] = _VALUE_FROM_CELL[cell]
        table[report_id] = values
    return table


def read_labels(path: Path | str) -> "LabelTable":
    """Read a label or gold-annotation CSV; exact inverse of the writers."""
    path = Path(path)
    if not path.is_file():
        raise DataError(f"label CSV not found: {path}")
    return parse_labels_csv(path.read_text(encoding="utf-8"), source=str(path))


def label_to_value(label: ObservationLabel) -> Polarity | None:
    """Collapse a labeler output label to the CSV value domain."""
    return {
        ObservationLabel.POSITIVE: Polarity.POSITIVE,
        ObservationLabel.NEGATIVE: Polarity.NEGATIVE,
        ObservationLabel.UNCERTAIN: Polarity.UNCERTAIN,
        ObservationLabel.BLANK: None,
    }[label]
