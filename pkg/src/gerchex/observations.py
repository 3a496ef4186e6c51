"""Observation classes and label value types shared across the package.

The 14 observation classes follow the CheXpert label schema. Two of them are
special: ``NO_FINDING`` carries no phrase lists (its label is derived from the
other classes) and ``SUPPORT_DEVICES`` is excluded when deriving "no finding".
"""
from __future__ import annotations

from enum import Enum


class ObservationClass(Enum):
    """One of the 14 CheXpert-style observation classes.

    Enum values double as the canonical snake_case names used for lexicon
    directories and CSV columns. Declaration order is the canonical column
    order.
    """

    ATELECTASIS = "atelectasis"
    CARDIOMEGALY = "cardiomegaly"
    CONSOLIDATION = "consolidation"
    EDEMA = "edema"
    ENLARGED_CARDIOMEDIASTINUM = "enlarged_cardiomediastinum"
    FRACTURE = "fracture"
    LUNG_LESION = "lung_lesion"
    LUNG_OPACITY = "lung_opacity"
    NO_FINDING = "no_finding"
    PLEURAL_EFFUSION = "pleural_effusion"
    PLEURAL_OTHER = "pleural_other"
    PNEUMONIA = "pneumonia"
    PNEUMOTHORAX = "pneumothorax"
    SUPPORT_DEVICES = "support_devices"

    @property
    def display_name(self) -> str:
        return _DISPLAY_NAMES[self]


_DISPLAY_NAMES = {
    ObservationClass.ATELECTASIS: "Atelectasis",
    ObservationClass.CARDIOMEGALY: "Cardiomegaly",
    ObservationClass.CONSOLIDATION: "Consolidation",
    ObservationClass.EDEMA: "Edema",
    ObservationClass.ENLARGED_CARDIOMEDIASTINUM: "Enlarged cardiomediastinum",
    ObservationClass.FRACTURE: "Fracture",
    ObservationClass.LUNG_LESION: "Lung lesion",
    ObservationClass.LUNG_OPACITY: "Lung opacity",
    ObservationClass.NO_FINDING: "No finding",
    ObservationClass.PLEURAL_EFFUSION: "Pleural effusion",
    ObservationClass.PLEURAL_OTHER: "Pleural other",
    ObservationClass.PNEUMONIA: "Pneumonia",
    ObservationClass.PNEUMOTHORAX: "Pneumothorax",
    ObservationClass.SUPPORT_DEVICES: "Support devices",
}

#: Canonical class order (declaration order; also the CSV column order).
ALL_CLASSES: tuple[ObservationClass, ...] = tuple(ObservationClass)

#: Classes that carry phrase lists (all except the derived "no finding").
PHRASE_CLASSES: tuple[ObservationClass, ...] = tuple(
    c for c in ObservationClass if c is not ObservationClass.NO_FINDING
)

#: Classes considered when deriving "no finding" (support devices excluded).
PATHOLOGY_CLASSES: tuple[ObservationClass, ...] = tuple(
    c
    for c in ObservationClass
    if c not in (ObservationClass.NO_FINDING, ObservationClass.SUPPORT_DEVICES)
)


class Polarity(Enum):
    """Polarity of a phrase list entry, and of a classified mention."""

    POSITIVE = "positive"
    NEGATIVE = "negative"
    UNCERTAIN = "uncertain"


#: A classified mention uses the same closed three-value set as phrase polarity.
MentionClassification = Polarity


class ObservationLabel(Enum):
    """Final per-observation label. BLANK means the class was not mentioned.

    Only labeler output uses BLANK; gold annotations represent "not mentioned"
    as ``None`` (see the evaluation module).
    """

    POSITIVE = "positive"
    NEGATIVE = "negative"
    UNCERTAIN = "uncertain"
    BLANK = "blank"


def class_by_name(name: str) -> ObservationClass:
    """Resolve a snake_case class name, raising ``ValueError`` on garbage."""
    try:
        return ObservationClass(name)
    except ValueError:
        raise ValueError(f"unknown observation class: {name!r}") from None
