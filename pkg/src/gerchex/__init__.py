"""gerchex: rule-based CheXpert-style labeling of German thoracic radiology reports.

The package converts free-text German chest X-ray reports into the 14
observation labels via phrase lists and windowed negation/uncertainty
triggers, scores labeler output against gold annotations with bootstrap
confidence intervals, and serves a multi-user annotation workflow that feeds
newly collected phrases back into the lexicon.
"""
from .corpus import ReportRecord, read_corpus, read_labels, write_labels
from .errors import ConfigurationError, DataError, GerchexError, LexiconFormatError
from .evaluation import (
    ClassMetrics,
    ConfusionCounts,
    Task,
    binarize,
    bootstrap_ci,
    compute_metrics,
    evaluate,
    reduce_task,
    result_to_json,
)
from .labeler import (
    DEFAULT_RADIUS,
    LabelVector,
    Mention,
    TriggerOccurrence,
    aggregate,
    classify_mention,
    derive_no_finding,
    extract_mentions,
    find_triggers,
    label_batch,
    label_report,
)
from .lexicon import (
    Diagnostic,
    PhraseEntry,
    PhraseLexicon,
    TriggerEntry,
    TriggerKind,
    TriggerLexicon,
    TriggerPosition,
    add_phrase,
    load_abbreviations,
    load_lexicons,
    save_lexicons,
    validate_lexicons,
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
from .textproc import (
    DEFAULT_ABBREVIATIONS,
    Token,
    TokenizedReport,
    normalize_text,
    segment_sentences,
    tokenize,
    tokenize_report,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
