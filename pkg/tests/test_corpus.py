"""Corpus reading and label CSV round-trips."""
from __future__ import annotations

import random

import pytest

from gerchex.corpus import (
    LABEL_HEADER,
    ReportRecord,
    label_to_value,
    labels_to_csv,
    parse_labels_csv,
    read_corpus,
    read_labels,
    write_labels,
)
from gerchex.errors import DataError
from gerchex.observations import ALL_CLASSES, ObservationClass as OC, ObservationLabel as OL


class TestReadCorpus:
    def test_three_lines_in_order(self, tmp_path):
        path = tmp_path / "c.jsonl"
        path.write_text(
            '{"report_id": "a", "text": "A."}\n'
            '{"report_id": "b", "view_position": "Thorax im Liegen", "text": "B."}\n'
            '{"report_id": "c", "text": ""}\n',
            encoding="utf-8",
        )
        records = read_corpus(path)
        assert [r.report_id for r in records] == ["a", "b", "c"]
        assert records[1].view_position == "Thorax im Liegen"
        assert records[2].text == ""

    def test_missing_text_names_line(self, tmp_path):
        path = tmp_path / "c.jsonl"
        path.write_text('{"report_id": "a", "text": "A."}\n{"report_id": "b"}\n')
        with pytest.raises(DataError, match=r":2: missing required key 'text'"):
            read_corpus(path)

    def test_crlf_equals_lf(self, tmp_path):
        lf = tmp_path / "lf.jsonl"
        crlf = tmp_path / "crlf.jsonl"
        body = '{"report_id": "a", "text": "Zeile eins."}\n{"report_id": "b", "text": "Zwei."}\n'
        lf.write_bytes(body.encode())
        crlf.write_bytes(body.replace("\n", "\r\n").encode())
        assert read_corpus(lf) == read_corpus(crlf)

    def test_duplicate_id_rejected(self, tmp_path):
        path = tmp_path / "c.jsonl"
        path.write_text('{"report_id": "a", "text": "x"}\n{"report_id": "a", "text": "y"}\n')
        with pytest.raises(DataError, match="duplicate report_id"):
            read_corpus(path)

    def test_invalid_json_names_line(self, tmp_path):
        path = tmp_path / "c.jsonl"
        path.write_text('{"report_id": "a", "text": "x"}\nnot json\n')
        with pytest.raises(DataError, match=":2:"):
            read_corpus(path)


class TestLabelCsv:
    def test_support_devices_only_row(self):
        labels = {cls: OL.BLANK for cls in ALL_CLASSES}
        labels[OC.SUPPORT_DEVICES] = OL.POSITIVE
        labels[OC.NO_FINDING] = OL.POSITIVE
        csv_text = labels_to_csv([("id", labels)])
        assert csv_text.splitlines()[1] == "id,,,,,,,,,1.0,,,,,1.0"

    def test_uncertain_cell_encoding(self):
        labels = {cls: OL.BLANK for cls in ALL_CLASSES}
        labels[OC.PNEUMOTHORAX] = OL.UNCERTAIN
        labels[OC.NO_FINDING] = OL.NEGATIVE
        row = labels_to_csv([("x", labels)]).splitlines()[1]
        cells = row.split(",")
        assert cells[LABEL_HEADER.index("pneumothorax")] == "-1.0"
        assert cells[LABEL_HEADER.index("no_finding")] == "0.0"

    def test_round_trip_random_vectors(self, tmp_path):
        rng = random.Random(3)
        rows = []
        for i in range(50):
            labels = {cls: rng.choice(list(OL)) for cls in ALL_CLASSES}
            labels[OC.NO_FINDING] = rng.choice([OL.POSITIVE, OL.NEGATIVE])
            rows.append((f"r{i:02d}", labels))
        path = tmp_path / "labels.csv"
        write_labels(rows, path)
        table = read_labels(path)
        assert list(table) == [rid for rid, _ in rows]
        for rid, labels in rows:
            for cls in ALL_CLASSES:
                assert table[rid][cls] == label_to_value(labels[cls])

    def test_unknown_header_rejected(self):
        with pytest.raises(DataError, match="unexpected header"):
            parse_labels_csv("report_id,foo\nr1,1.0\n")

    def test_bad_cell_rejected(self):
        header = ",".join(LABEL_HEADER)
        row = "r1," + ",".join(["0.5"] + [""] * 13)
        with pytest.raises(DataError, match="0.5"):
            parse_labels_csv(f"{header}\n{row}\n")

    def test_header_column_order(self):
        assert LABEL_HEADER == (
            "report_id",
            "atelectasis",
            "cardiomegaly",
            "consolidation",
            "edema",
            "enlarged_cardiomediastinum",
            "fracture",
            "lung_lesion",
            "lung_opacity",
            "no_finding",
            "pleural_effusion",
            "pleural_other",
            "pneumonia",
            "pneumothorax",
            "support_devices",
        )
