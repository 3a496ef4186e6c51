"""Multi-user annotation backend: reports, highlights, conflict-checked saves.

The service owns three pieces of state: the report corpus (immutable), the
lexicon snapshot (swapped atomically when a phrase is added), and the
append-only annotation store. Labeling for highlights always runs against the
current snapshot, which is what closes the feedback loop: adding a phrase
through the interface immediately changes what gets highlighted and what the
save-time check recognizes.

Save is two-phase. An unconfirmed save first compares the annotation with the
labeler's view of the report and reports two kinds of conflicts:

* recognized_but_none: the labeler matched phrases for a class the annotator
  left at "none" (evidence carries the matched character spans),
* selected_but_unrecognized: the annotator selected a class the labeler has
  no mention for (the interface then prompts for a phrase).

A save with ``confirm`` set, or without conflicts, is appended to the store.
The derived "no finding" class is exempt from both conflict kinds since it
never has phrase mentions.

HTTP surface (JSON unless noted):

    GET  /api/progress?annotator=A
    GET  /api/reports?annotator=A          -> next unannotated report
    GET  /api/reports/{id}[?annotator=A]
    POST /api/reports/{id}/annotation      -> 200, or 409 with conflicts
    POST /api/phrases
    GET  /api/export.csv[?annotator=A]     -> text/csv
    /                                      -> static annotation UI
"""
import logging
import threading
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping

from .corpus import ReportRecord, values_to_csv
from .errors import DataError, StaleRevisionError
from .labeler import DEFAULT_RADIUS, LabelVector, label_report
from .lexicon import PhraseLexicon, TriggerLexicon, add_phrase, load_abbreviations, load_lexicons
from .observations import ObservationClass, Polarity
from .store import AnnotationRecord, AnnotationStore

logger = logging.getLogger(__name__)

RECOGNIZED_BUT_NONE = "recognized_but_none"
SELECTED_BUT_UNRECOGNIZED = "selected_but_unrecognized"


@dataclass(frozen=True)
class SaveConflict:
    kind: str
    cls: ObservationClass
    #: Matched character spans; non-empty exactly for recognized_but_none.
    evidence: tuple[tuple[int, int], ...]

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "class": self.cls.value,
            "evidence": [list(span) for span in self.evidence],
        }


class UnknownReportError(DataError):
    pass


class AnnotationService:
    """Application core; the HTTP layer below is a thin adapter over this."""

    def __init__(
        self,
        lexicon_root: Path | str,
        reports: list[ReportRecord],
        store: AnnotationStore,
        radius: int = DEFAULT_RADIUS,
    ):
        self.lexicon_root = Path(lexicon_root)
        self.reports = reports
        self.by_id = {r.report_id: r for r in reports}
        self.order = {r.report_id: i for i, r in enumerate(reports)}
        if len(self.by_id) != len(reports):
            raise DataError("corpus contains duplicate report ids")
        self.store = store
        self.radius = radius
        self._write_lock = threading.Lock()
        phrases, triggers = load_lexicons(self.lexicon_root)
        self._abbreviations = load_abbreviations(self.lexicon_root)
        self._snapshot: tuple[PhraseLexicon, TriggerLexicon] = (phrases, triggers)

    # -- lexicon ---------------------------------------------------------

    @property
    def lexicons(self) -> tuple[PhraseLexicon, TriggerLexicon]:
        return self._snapshot

    def add_phrase(
        self, cls: ObservationClass, polarity: Polarity, surface: str, annotator_id: str
    ) -> bool:
        """Add a phrase on behalf of an annotator; True if it already existed."""
        with self._write_lock:
            phrases, triggers = self._snapshot
            updated, already = add_phrase(phrases, cls, polarity, surface)
            self._snapshot = (updated, triggers)
        self.store.log_phrase_addition(annotator_id, cls, polarity, surface, already)
        return already

    # -- reports and highlights ------------------------------------------

    def _label(self, record: ReportRecord) -> LabelVector:
        phrases, triggers = self._snapshot
        return label_report(
            record.text,
            record.view_position,
            report_id=record.report_id,
            phrases=phrases,
            triggers=triggers,
            radius=self.radius,
            abbreviations=self._abbreviations,
        )

    def get_report(self, report_id: str, annotator_id: str | None = None) -> dict:
        record = self.by_id.get(report_id)
        if record is None:
            raise UnknownReportError(f"unknown report: {report_id}")
        vector = self._label(record)
        highlights = [
            {
                "class": m.observation.value,
                "classification": m.classification.value,
                "span": [m.char_span[0], m.char_span[1]],
                "phrase": m.phrase.text,
            }
            for m in vector.mentions
        ]
        index = self.order[report_id]
        payload = {
            "report_id": report_id,
            "view_position": record.view_position,
            "text": record.text,
            "highlights": highlights,
            "index": index,
            "prev_id": self.reports[index - 1].report_id if index > 0 else None,
            "next_id": self.reports[index + 1].report_id
            if index + 1 < len(self.reports)
            else None,
        }
        if annotator_id is not None:
            stored = self.store.latest(report_id, annotator_id)
            payload["annotation"] = stored.to_json() if stored else None
        return payload

    def next_unannotated(self, annotator_id: str) -> dict | None:
        done = self.store.latest_by_annotator(annotator_id)
        for record in self.reports:
            if record.report_id not in done:
                return self.get_report(record.report_id, annotator_id)
        return None

    def progress(self, annotator_id: str) -> tuple[int, int]:
        done = self.store.latest_by_annotator(annotator_id)
        completed = sum(1 for report_id in done if report_id in self.by_id)
        return completed, len(self.reports)

    # -- saving ------------------------------------------------------------

    def check_conflicts(self, record: AnnotationRecord) -> list[SaveConflict]:
        report = self.by_id.get(record.report_id)
        if report is None:
            raise UnknownReportError(f"unknown report: {record.report_id}")
        vector = self._label(report)
        spans_by_class: dict[ObservationClass, list[tuple[int, int]]] = {}
        for mention in vector.mentions:
            spans_by_class.setdefault(mention.observation, []).append(mention.char_span)
        conflicts: list[SaveConflict] = []
        for cls in ObservationClass:
            if cls is ObservationClass.NO_FINDING:
                continue  # derived label: never mentioned, never prompted for
            annotated = record.labels[cls]
            spans = spans_by_class.get(cls, [])
            if annotated is None and spans:
                conflicts.append(
                    SaveConflict(RECOGNIZED_BUT_NONE, cls, tuple(sorted(spans)))
                )
            elif annotated is not None and not spans:
                conflicts.append(SaveConflict(SELECTED_BUT_UNRECOGNIZED, cls, ()))
        return conflicts

    def save(
        self, record: AnnotationRecord, confirm: bool
    ) -> tuple[AnnotationRecord | None, list[SaveConflict]]:
        """Two-phase save; returns (stored record, conflicts).

        Without ``confirm``, conflicts abort the save and are returned for
        review. Stale revisions raise regardless of ``confirm``.
        """
        conflicts = self.check_conflicts(record)
        if conflicts and not confirm:
            return None, conflicts
        return self.store.append(record), conflicts

    # -- export ------------------------------------------------------------

    def export_csv(self, annotator_id: str) -> str:
        """Gold-annotation CSV of the latest revisions by one annotator."""
        latest = self.store.latest_by_annotator(annotator_id)
        table: dict[str, Mapping[ObservationClass, Polarity | None]] = {}
        ordered_ids = [r.report_id for r in self.reports if r.report_id in latest]
        for report_id in ordered_ids:
            table[report_id] = latest[report_id].labels
        return values_to_csv(table, order=ordered_ids)


# ---------------------------------------------------------------------------
# HTTP layer
# ---------------------------------------------------------------------------


def create_app(service: AnnotationService, static_dir: Path | str | None = None):
    """Build the FastAPI app over a service instance."""
    from fastapi import FastAPI, HTTPException, Query
    from fastapi.responses import HTMLResponse, JSONResponse, PlainTextResponse
    from fastapi.staticfiles import StaticFiles
    from pydantic import BaseModel, Field

    app = FastAPI(title="gerchex annotation service")

    class AnnotationIn(BaseModel):
        annotator_id: str = Field(min_length=1)
        labels: dict[str, str]
        marked: bool = False
        comment: str | None = None
        revision: int
        confirm: bool = False

    class PhraseIn(BaseModel):
        annotator_id: str = Field(min_length=1)
        cls: str = Field(alias="class")
        polarity: str
        surface: str

    def _parse_labels(labels: dict[str, str]) -> dict[ObservationClass, Polarity | None]:
        parsed: dict[ObservationClass, Polarity | None] = {}
        for name, value in labels.items():
            try:
                cls = ObservationClass(name)
            except ValueError:
                raise HTTPException(400, f"unknown class {name!r}") from None
            if value == "none":
                parsed[cls] = None
            else:
                try:
                    parsed[cls] = Polarity(value)
                except ValueError:
                    raise HTTPException(
                        400, f"label for {name} must be positive/negative/uncertain/none"
                    ) from None
        missing = [c.value for c in ObservationClass if c not in parsed]
        if missing:
            raise HTTPException(400, f"annotation incomplete; missing: {missing}")
        return parsed

    @app.get("/api/progress")
    def progress(annotator: str = Query(min_length=1)):
        completed, total = service.progress(annotator)
        return {"completed": completed, "total": total}

    @app.get("/api/reports")
    def next_report(annotator: str = Query(min_length=1)):
        payload = service.next_unannotated(annotator)
        if payload is None:
            raise HTTPException(404, "all reports annotated")
        return payload

    @app.get("/api/reports/{report_id}")
    def get_report(report_id: str, annotator: str | None = None):
        try:
            return service.get_report(report_id, annotator)
        except UnknownReportError as exc:
            raise HTTPException(404, str(exc)) from None

    @app.post("/api/reports/{report_id}/annotation")
    def save_annotation(report_id: str, body: AnnotationIn):
        record = AnnotationRecord(
            report_id=report_id,
            annotator_id=body.annotator_id,
            labels=_parse_labels(body.labels),
            marked=body.marked,
            comment=body.comment,
            revision=body.revision,
        )
        try:
            stored, conflicts = service.save(record, confirm=body.confirm)
        except UnknownReportError as exc:
            raise HTTPException(404, str(exc)) from None
        except StaleRevisionError as exc:
            return JSONResponse(
                status_code=409,
                content={"kind": "stale_revision", "stored_revision": exc.stored_revision},
            )
        except DataError as exc:
            raise HTTPException(400, str(exc)) from None
        if stored is None:
            return JSONResponse(
                status_code=409,
                content={
                    "kind": "save_conflicts",
                    "conflicts": [c.to_json() for c in conflicts],
                },
            )
        return {"status": "saved", "revision": stored.revision, "saved_at": stored.saved_at}

    @app.post("/api/phrases")
    def post_phrase(body: PhraseIn):
        try:
            cls = ObservationClass(body.cls)
            polarity = Polarity(body.polarity)
        except ValueError as exc:
            raise HTTPException(400, str(exc)) from None
        try:
            already = service.add_phrase(cls, polarity, body.surface, body.annotator_id)
        except DataError as exc:
            raise HTTPException(400, str(exc)) from None
        return {"status": "already_present" if already else "added"}

    @app.get("/api/export.csv")
    def export(annotator: str | None = None):
        if annotator is None:
            annotators = service.store.annotators()
            if len(annotators) == 1:
                annotator = annotators[0]
            elif not annotators:
                raise HTTPException(404, "no annotations saved yet")
            else:
                raise HTTPException(
                    400,
                    "multiple annotators present; pass ?annotator= one of: "
                    + ", ".join(annotators),
                )
        return PlainTextResponse(service.export_csv(annotator), media_type="text/csv")

    if static_dir is not None and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(static_dir), html=True), name="ui")
    else:

        @app.get("/", response_class=HTMLResponse)
        def placeholder():
            return (
                "<!doctype html><title>gerchex</title><h1>gerchex annotation service</h1>"
                "<p>The browser UI is not built. Build it with <code>npm run build</code> "
                "in <code>frontend/</code> and pass <code>--static frontend/dist</code>, "
                "or use the JSON API under <code>/api/</code>.</p>"
            )

    return app
