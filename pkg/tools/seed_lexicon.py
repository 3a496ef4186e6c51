#!/usr/bin/env python3
"""Write the starter lexicon shipped under src/gerchex/data/lexicon/.

The lists are a reconstruction assembled from common German thoracic
reporting vocabulary; they are a starting point meant to be grown through the
annotation interface, not a published reference standard. Keep them free of
validate_lexicons diagnostics: no phrase equal to a trigger, no strict
token-prefix pairs inside one list, at least one phrase per class.

Run from the repository root:  python3 tools/seed_lexicon.py
"""
from __future__ import annotations

from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent / "src" / "gerchex" / "data" / "lexicon"

HEADER = (
    "# Starter list (reconstructed German thoracic vocabulary; extend freely).\n"
    "# One phrase per line. Trailing * on the final token matches by prefix.\n"
)

PHRASES: dict[str, dict[str, list[str]]] = {
    "atelectasis": {
        "positive": [
            "Atelektase*",
            "Dystelektase*",
            "Plattenatelektase*",
            "Teilatelektase*",
            "Minderbelüftung*",
            "Belüftungsstörung*",
        ],
        "negative": ["regelrecht belüftet"],
        "uncertain": [],
    },
    "cardiomegaly": {
        "positive": [
            "Kardiomegalie",
            "Herzvergrößerung",
            "vergrößertes Herz",
            "Herz vergrößert",
            "verbreiterte Herzsilhouette",
        ],
        "negative": [
            "Herz normal groß",
            "normale Herzgröße",
            "Herzgröße im Normbereich",
            "schlanke Herzsilhouette",
            "Herz nicht vergrößert",
        ],
        "uncertain": ["grenzwertige Herzgröße"],
    },
    "consolidation": {
        "positive": ["Konsolidierung*", "Konsolidation*"],
        "negative": [],
        "uncertain": [],
    },
    "edema": {
        "positive": [
            "Stauung",
            "Stauungszeichen",
            "Lungenödem*",
            "Überwässerung",
            "Dekompensation*",
        ],
        "negative": ["kompensiert"],
        "uncertain": [],
    },
    "enlarged_cardiomediastinum": {
        "positive": [
            "Mediastinalverbreiterung",
            "verbreitertes Mediastinum",
            "Mediastinum verbreitert",
            "Verbreiterung des Mediastinums",
        ],
        "negative": ["schlankes Mediastinum"],
        "uncertain": [],
    },
    "fracture": {
        "positive": [
            "Fraktur*",
            "Rippenfraktur*",
            "Rippenserienfraktur*",
            "Wirbelkörperfraktur*",
            "Sinterung*",
        ],
        "negative": [],
        "uncertain": [],
    },
    "lung_lesion": {
        "positive": ["Rundherd*", "Raumforderung*", "Läsion*", "Metastase*"],
        "negative": [],
        "uncertain": [],
    },
    "lung_opacity": {
        "positive": [
            "Verschattung*",
            "Infiltrat*",
            "Transparenzminderung*",
            "Verdichtung*",
        ],
        "negative": [],
        "uncertain": [],
    },
    "pleural_effusion": {
        "positive": ["Pleuraerg*", "Erguss*", "Ergüsse", "Randwinkelerg*"],
        "negative": ["Recessus beidseits frei", "Recessus frei"],
        "uncertain": [],
    },
    "pleural_other": {
        "positive": [
            "Pleuraverdickung*",
            "Pleuraschwarte*",
            "Pleuraverkalkung*",
            "Pleuraplaques",
        ],
        "negative": [],
        "uncertain": [],
    },
    "pneumonia": {
        "positive": [
            "Pneumonie",
            "Pneumonien",
            "Bronchopneumonie*",
            "Lobärpneumonie*",
            "pneumonisch*",
            "Infiltrat*",  # shared with lung_opacity by design
        ],
        "negative": [],
        "uncertain": ["Pneumonieverdacht"],
    },
    "pneumothorax": {
        "positive": [
            "Pneumothorax",
            "Spannungspneumothorax",
            "Mantelpneumothorax",
            "pleurale Dehiszenz",
            "Pneu",
        ],
        "negative": [],
        "uncertain": [],
    },
    "support_devices": {
        "positive": [
            "Herzschrittmacher",
            "Schrittmacher*",
            "ZVK",
            "Magensonde",
            "Tubus",
            "Trachealkanüle",
            "Thoraxdrainage*",
            "Drainage*",
            "Portkatheter",
            "Katheter*",
            "Sternalcerclagen",
            "Fremdmaterial*",
        ],
        "negative": [],
        "uncertain": [],
    },
}

TRIGGERS: dict[str, list[str]] = {
    "negation_pre": [
        "kein",
        "keine",
        "keinen",
        "keiner",
        "keinem",
        "keines",
        "nicht",
        "ohne",
        "kein Anhalt für",
        "kein Nachweis von",
        "kein Nachweis einer",
        "kein Nachweis eines",
        "keine Anzeichen für",
        "keine Hinweise auf",
        "kein Hinweis auf",
        "Ausschluss von",
        "Ausschluss einer",
        "Ausschluss eines",
        "frei von",
    ],
    "negation_post": [
        "kann ausgeschlossen werden",
        "können ausgeschlossen werden",
        "ausgeschlossen",
        "nicht nachweisbar",
        "nicht mehr nachweisbar",
        "nicht abgrenzbar",
        "nicht mehr abgrenzbar",
        "nicht erkennbar",
        "vollständig regredient",
    ],
    "uncertainty_pre": [
        "V.a.",
        "Verdacht auf",
        "fraglich",
        "fragliche",
        "fraglicher",
        "fragliches",
        "DD",
        "möglicherweise",
        "eventuell",
        "evtl.",
        "am ehesten",
        "a.e.",
    ],
    "uncertainty_post": [
        "unwahrscheinlich",
        "nicht sicher auszuschließen",
        "nicht auszuschließen",
        "nicht sicher abgrenzbar",
        "nicht eindeutig beurteilbar",
        "möglich",
        "denkbar",
        "fraglich",
    ],
}

ABBREVIATIONS = [
    "bds.",
    "z.B.",
    "i.S.",
    "re.",
    "li.",
    "V.a.",
    "p.a.",
    "a.p.",
    "a.e.",
    "Z.n.",
    "i.v.",
    "ggf.",
    "evtl.",
    "ca.",
    "bzw.",
    "u.U.",
    "s.o.",
    "m.E.",
    "Dr.",
    "Prof.",
]


def write(path: Path, lines: list[str], header: str = HEADER) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    body = "".join(line + "\n" for line in lines)
    path.write_text(header + body if lines else header, encoding="utf-8")


def main() -> None:
    for cls, by_polarity in PHRASES.items():
        for polarity in ("positive", "negative", "uncertain"):
            write(ROOT / cls / f"{polarity}.txt", by_polarity[polarity])
    for name, lines in TRIGGERS.items():
        write(
            ROOT / "triggers" / f"{name}.txt",
            lines,
            header="# Starter triggers (reconstruction); exact token sequences, no wildcard.\n",
        )
    write(
        ROOT / "abbreviations.txt",
        ABBREVIATIONS,
        header="# Abbreviations whose trailing period does not end a sentence.\n",
    )
    print(f"wrote lexicon under {ROOT}")


if __name__ == "__main__":
    main()
