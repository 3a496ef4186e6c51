#!/usr/bin/env python3
"""Generate the bundled synthetic German report corpus with gold labels.

Reports are composed from a fixed table of hand-traced sentence templates.
Each template carries the per-class effects it produces under the shipped
starter lexicon at the default cut-off radius; those traces were worked out
by hand against the matching and scoping rules, so the gold labels here are
independent of the labeler implementation. A report's gold label per class
folds its sentence effects with positive > uncertain > negative, untouched
classes stay blank, and "no finding" is positive exactly when no class other
than support devices is positive or uncertain.

Composition is sentence-based and each sentence is period-terminated, so
effects cannot leak between templates (triggers never scope across sentence
boundaries).

Run from the repository root:  python3 tools/make_synthetic_corpus.py
"""
from __future__ import annotations

import csv
import io
import json
import random
from pathlib import Path

OUT_DIR = Path(__file__).resolve().parent.parent / "src" / "gerchex" / "data" / "synthetic"

CLASSES = [
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
]

P, N, U = "positive", "negative", "uncertain"

FILLERS = [
    "Zwerchfellkuppen beidseits glatt abgrenzbar.",
    "Keine relevanten Voruntersuchungen zur Korrelation vorliegend.",
    "Ossäre Strukturen altersentsprechend.",
    "Zum Vergleich liegt eine Voraufnahme vom Vortag vor.",
    "Beurteilung im Liegen nur eingeschränkt möglich.",
    "Mittelständiges oberes Mediastinum.",
    "Stationäre Überwachung empfohlen.",
    "Im Übrigen unauffälliger Herz-Lungen-Befund.",
]

# template text -> list of (class, classification) effects, hand-traced.
TEMPLATES: dict[str, list[tuple[str, tuple[tuple[str, str], ...]]]] = {
    "atelectasis": [
        ("Plattenatelektasen links basal.", (("atelectasis", P),)),
        ("Zunehmende Minderbelüftung des rechten Unterlappens.", (("atelectasis", P),)),
        ("Keine Atelektasen.", (("atelectasis", N),)),
        ("Keine umschriebenen Atelektasen abgrenzbar.", (("atelectasis", N),)),
        ("Beide Lungen regelrecht belüftet.", (("atelectasis", N),)),
        ("Fragliche Dystelektase im Mittelfeld.", (("atelectasis", U),)),
    ],
    "cardiomegaly": [
        ("Deutliche Kardiomegalie.", (("cardiomegaly", P),)),
        ("Verbreiterte Herzsilhouette.", (("cardiomegaly", P),)),
        ("Keine Kardiomegalie.", (("cardiomegaly", N),)),
        ("Herz normal groß.", (("cardiomegaly", N),)),
        ("Herz nicht vergrößert.", (("cardiomegaly", N),)),
        ("V.a. Kardiomegalie.", (("cardiomegaly", U),)),
        ("Grenzwertige Herzgröße.", (("cardiomegaly", U),)),
    ],
    "consolidation": [
        ("Flächige Konsolidierung im rechten Unterfeld.", (("consolidation", P),)),
        ("Keine Konsolidierungen.", (("consolidation", N),)),
        ("Konsolidierungen können ausgeschlossen werden.", (("consolidation", N),)),
        ("Konsolidierung nicht sicher auszuschließen.", (("consolidation", U),)),
    ],
    "edema": [
        ("Geringe pulmonalvenöse Stauung.", (("edema", P),)),
        ("Zeichen des interstitiellen Lungenödems.", (("edema", P),)),
        ("Keine pulmonalvenöse Stauung.", (("edema", N),)),
        ("Keine Stauungszeichen.", (("edema", N),)),
        ("Kardiopulmonal kompensiert.", (("edema", N),)),
        ("Beginnende Stauung nicht auszuschließen.", (("edema", U),)),
    ],
    "enlarged_cardiomediastinum": [
        ("Mediastinalverbreiterung im Liegen.", (("enlarged_cardiomediastinum", P),)),
        ("Oberes Mediastinum verbreitert.", (("enlarged_cardiomediastinum", P),)),
        ("Kein verbreitertes Mediastinum.", (("enlarged_cardiomediastinum", N),)),
        ("Schlankes Mediastinum.", (("enlarged_cardiomediastinum", N),)),
        ("Verdacht auf Mediastinalverbreiterung.", (("enlarged_cardiomediastinum", U),)),
    ],
    "fracture": [
        ("Dislozierte Rippenfraktur rechts lateral.", (("fracture", P),)),
        ("Sinterung des zwölften Brustwirbelkörpers.", (("fracture", P),)),
        ("Keine frische Fraktur.", (("fracture", N),)),
        ("Keine frischen Frakturen abgrenzbar.", (("fracture", N),)),
        ("Fraglich ältere Rippenfraktur lateral.", (("fracture", U),)),
    ],
    "lung_lesion": [
        ("Rundherd im rechten Oberfeld.", (("lung_lesion", P),)),
        ("Größenprogrediente Raumforderung links zentral.", (("lung_lesion", P),)),
        ("Kein umschriebener Rundherd.", (("lung_lesion", N),)),
        ("Keine suspekten Läsionen.", (("lung_lesion", N),)),
        ("Fraglicher Rundherd retrokardial.", (("lung_lesion", U),)),
    ],
    "lung_opacity": [
        ("Neu aufgetretene Infiltrate beidseits.", (("lung_opacity", P), ("pneumonia", P))),
        ("Flächige Verschattung im linken Mittelfeld.", (("lung_opacity", P),)),
        ("Streifige Transparenzminderung rechts basal.", (("lung_opacity", P),)),
        ("Keine umschriebenen Infiltrate.", (("lung_opacity", N), ("pneumonia", N))),
        ("Keine flächigen Verschattungen.", (("lung_opacity", N),)),
        (
            "V.a. beginnendes Infiltrat im Unterlappen.",
            (("lung_opacity", U), ("pneumonia", U)),
        ),
    ],
    "pleural_effusion": [
        ("Pleuraerguss rechts.", (("pleural_effusion", P),)),
        ("Beidseitige Randwinkelergüsse.", (("pleural_effusion", P),)),
        ("Keine Pleuraergüsse.", (("pleural_effusion", N),)),
        ("Recessus beidseits frei.", (("pleural_effusion", N),)),
        ("Ergüsse können ausgeschlossen werden.", (("pleural_effusion", N),)),
        (
            "Geringer Pleuraerguss links nicht auszuschließen.",
            (("pleural_effusion", U),),
        ),
    ],
    "pleural_other": [
        ("Ausgedehnte Pleuraschwarte rechts apikal.", (("pleural_other", P),)),
        ("Pleuraverkalkungen links basal.", (("pleural_other", P),)),
        ("Keine Pleuraverdickung.", (("pleural_other", N),)),
        ("Fragliche Pleuraverdickung apikal.", (("pleural_other", U),)),
    ],
    "pneumonia": [
        ("Zeichen einer Pneumonie im linken Unterlappen.", (("pneumonia", P),)),
        ("Kein Anhalt für Pneumonie.", (("pneumonia", N),)),
        ("Pneumonie kann ausgeschlossen werden.", (("pneumonia", N),)),
        ("Pneumonie unwahrscheinlich.", (("pneumonia", U),)),
        ("Pneumonieverdacht links basal.", (("pneumonia", U),)),
    ],
    "pneumothorax": [
        ("Schmaler apikaler Pneumothorax rechts.", (("pneumothorax", P),)),
        ("Ausgedehnter Spannungspneumothorax links.", (("pneumothorax", P),)),
        (
            "Keine pleurale Dehiszenz im Sinne eines Pneumothorax.",
            (("pneumothorax", N),),
        ),
        ("Pneumothorax kann ausgeschlossen werden.", (("pneumothorax", N),)),
        ("Kein Anhalt für Pneu.", (("pneumothorax", N),)),
        ("Pneumothorax nicht sicher auszuschließen.", (("pneumothorax", U),)),
    ],
    "support_devices": [
        (
            "Herzschrittmacher links pektoral in unveränderter Lage.",
            (("support_devices", P),),
        ),
        ("ZVK von rechts, Spitze in der oberen Hohlvene.", (("support_devices", P),)),
        ("Magensonde in regelrechter Position.", (("support_devices", P),)),
        ("Liegende Thoraxdrainage links.", (("support_devices", P),)),
        ("Kein Tubus mehr nachweisbar.", (("support_devices", N),)),
        ("Keine Fremdmaterialien.", (("support_devices", N),)),
    ],
}

# Sentences combining several findings; traced like the rest.
MULTI_TEMPLATES: list[tuple[str, tuple[tuple[str, str], ...]]] = [
    (
        "Keine Infiltrate, keine Ergüsse.",
        (("lung_opacity", N), ("pneumonia", N), ("pleural_effusion", N)),
    ),
    (
        "Herzschrittmacher, kein Pneumothorax.",
        (("support_devices", P), ("pneumothorax", N)),
    ),
]

VIEWS = ["Thorax im Liegen", "Thorax p.a. stehend", "Thorax a.p. im Sitzen", None]

RANK = {P: 3, U: 2, N: 1}


def fold_effects(effects: list[tuple[str, str]]) -> dict[str, str | None]:
    gold: dict[str, str | None] = {c: None for c in CLASSES}
    for cls, value in effects:
        held = gold[cls]
        if held is None or RANK[value] > RANK[held]:
            gold[cls] = value
    pathological = any(
        gold[c] in (P, U)
        for c in CLASSES
        if c not in ("no_finding", "support_devices")
    )
    gold["no_finding"] = N if pathological else P
    return gold


CELL = {P: "1.0", N: "0.0", U: "-1.0", None: ""}


def main(n_reports: int = 140, seed: int = 20250809) -> None:
    rng = random.Random(seed)
    class_names = list(TEMPLATES)
    reports: list[dict] = []
    gold_rows: list[list[str]] = []
    for i in range(n_reports):
        report_id = f"syn-{i:04d}"
        sentences: list[str] = []
        effects: list[tuple[str, str]] = []
        if i == 0:
            text = ""  # the empty report belongs in the corpus too
        else:
            roll = rng.random()
            if roll < 0.08:
                # normal study: fillers only
                sentences = rng.sample(FILLERS, rng.randint(1, 3))
            else:
                chosen = rng.sample(class_names, rng.randint(2, 5))
                for cls in chosen:
                    sentence, effect = rng.choice(TEMPLATES[cls])
                    sentences.append(sentence)
                    effects.extend(effect)
                if rng.random() < 0.20:
                    # second sentence for one class: exercises aggregation
                    cls = rng.choice(chosen)
                    sentence, effect = rng.choice(TEMPLATES[cls])
                    if sentence not in sentences:
                        sentences.append(sentence)
                        effects.extend(effect)
                if rng.random() < 0.15:
                    sentence, effect = rng.choice(MULTI_TEMPLATES)
                    sentences.append(sentence)
                    effects.extend(effect)
                sentences.extend(rng.sample(FILLERS, rng.randint(0, 2)))
            rng.shuffle(sentences)
            joiner = "\n" if rng.random() < 0.25 else " "
            text = joiner.join(sentences)
        gold = fold_effects(effects)
        view = rng.choice(VIEWS)
        record = {"report_id": report_id, "text": text}
        if view is not None:
            record["view_position"] = view
        reports.append(record)
        gold_rows.append([report_id] + [CELL[gold[c]] for c in CLASSES])

    OUT_DIR.mkdir(parents=True, exist_ok=True)
    with (OUT_DIR / "reports.jsonl").open("w", encoding="utf-8") as handle:
        for record in reports:
            handle.write(json.dumps(record, ensure_ascii=False) + "\n")
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["report_id"] + CLASSES)
    writer.writerows(gold_rows)
    (OUT_DIR / "gold.csv").write_text(buffer.getvalue(), encoding="utf-8")
    print(f"wrote {len(reports)} reports and gold labels under {OUT_DIR}")


if __name__ == "__main__":
    main()
