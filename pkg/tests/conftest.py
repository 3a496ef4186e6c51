"""Shared fixtures: seeded lexicons, bundled data paths, acceptance reporting."""
from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))  # tests.oracles importable as `oracles`

from gerchex.lexicon import (
    TriggerKind,
    TriggerPosition,
    phrase_lexicon_from_dict,
    trigger_lexicon_from_dict,
)
from gerchex.observations import ObservationClass as OC
from gerchex.observations import Polarity as P

DATA_DIR = Path(__file__).parent.parent / "src" / "gerchex" / "data"


@pytest.fixture(scope="session")
def shipped_lexicon_dir() -> Path:
    return DATA_DIR / "lexicon"


@pytest.fixture(scope="session")
def synthetic_dir() -> Path:
    return DATA_DIR / "synthetic"


@pytest.fixture()
def seeded_phrases():
    """The miniature lexicon used by the documented full-pipeline trace."""
    return phrase_lexicon_from_dict(
        {
            OC.SUPPORT_DEVICES: {P.POSITIVE: ["Herzschrittmacher"]},
            OC.EDEMA: {P.POSITIVE: ["Stauung"]},
            OC.LUNG_OPACITY: {P.POSITIVE: ["Infiltrat*"]},
            OC.PNEUMONIA: {P.POSITIVE: ["Infiltrat*"]},
            OC.PNEUMOTHORAX: {P.POSITIVE: ["Pneumothorax", "pleurale Dehiszenz"]},
            OC.PLEURAL_EFFUSION: {P.POSITIVE: ["Pleuraerg*"]},
        }
    )


@pytest.fixture()
def seeded_triggers():
    return trigger_lexicon_from_dict(
        {(TriggerKind.NEGATION, TriggerPosition.PRE): ["keine"]}
    )


FIGURE_REPORT_TEXT = (
    "Keine relevanten Voruntersuchungen zur Korrelation vorliegend. "
    "Herzschrittmacher links präpektoral mit Sondenspitzen Lage im rechten "
    "Vorhof sowie im rechten Ventrikel. "
    "Recessus beidseits frei, Zwerchfellkuppen beidseits scharf abgrenzbar. "
    "Keine umschriebenen Infiltrate. "
    "Projektion von Herz und oberem Mediastinum im Liegen verbreitert. "
    "Geringe pulmonalvenöse Stauung. "
    "Keine pleurale Dehiszenz im Sinne eines Pneumothorax, soweit in "
    "Liegendaufnahme beurteilbar. "
    "Keine Pleuraergüsse. Keine umschriebenen Infiltrate. "
    "Geringe pulmonalvenöse Stauung."
)


@pytest.fixture()
def figure_report_text() -> str:
    return FIGURE_REPORT_TEXT


# -- acceptance criterion reporting -------------------------------------------

_acceptance_results: dict[str, str] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    if report.when == "call":
        _acceptance_results[name] = "PASS" if report.passed else "FAIL"
    elif report.when == "setup" and report.failed:
        _acceptance_results[name] = "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_results:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for name, outcome in _acceptance_results.items():
        label = name.removeprefix("test_").replace("_", " ")
        terminalreporter.write_line(f"ACCEPTANCE {label}: {outcome}")
