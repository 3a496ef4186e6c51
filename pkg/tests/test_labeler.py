"""Pipeline stages: extraction, trigger finding, classification, aggregation."""
from __future__ import annotations

import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from oracles import aggregate_order_oracle, naive_classify, no_finding_oracle

from gerchex.errors import ConfigurationError
from gerchex.labeler import (
    DEFAULT_RADIUS,
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
from gerchex.lexicon import (
    PhraseEntry,
    TriggerEntry,
    TriggerKind,
    TriggerPosition,
    phrase_lexicon_from_dict,
    trigger_lexicon_from_dict,
)
from gerchex.observations import (
    MentionClassification as MC,
    ObservationClass as OC,
    ObservationLabel as OL,
    Polarity as P,
)
from gerchex.corpus import ReportRecord
from gerchex.textproc import tokenize_report


def lex(spec):
    return phrase_lexicon_from_dict(spec)


def trig(spec):
    return trigger_lexicon_from_dict(spec)


KEINE_PRE = trig({(TriggerKind.NEGATION, TriggerPosition.PRE): ["keine", "kein"]})


class TestExtractMentions:
    def test_wildcard_match(self):
        phrases = lex({OC.PLEURAL_EFFUSION: {P.POSITIVE: ["Pleuraerguss*"]}})
        report = tokenize_report("r", "Keine Pleuraergüsse.")
        # The umlaut plural is not a prefix match of "pleuraerguss"; use the stem.
        phrases2 = lex({OC.PLEURAL_EFFUSION: {P.POSITIVE: ["Pleuraerg*"]}})
        assert extract_mentions(report, phrases) == []
        mentions = extract_mentions(report, phrases2)
        assert len(mentions) == 1
        assert mentions[0].observation is OC.PLEURAL_EFFUSION
        assert report.original_text[slice(*mentions[0].char_span)] == "Pleuraergüsse"

    def test_shared_phrase_two_classes_same_span(self):
        phrases = lex(
            {
                OC.LUNG_OPACITY: {P.POSITIVE: ["Infiltrat*"]},
                OC.PNEUMONIA: {P.POSITIVE: ["Infiltrat*"]},
            }
        )
        report = tokenize_report("r", "Keine umschriebenen Infiltrate.")
        mentions = extract_mentions(report, phrases)
        assert [m.observation for m in mentions] == [OC.LUNG_OPACITY, OC.PNEUMONIA]
        assert mentions[0].char_span == mentions[1].char_span

    def test_no_phrase_no_mentions(self):
        phrases = lex({OC.EDEMA: {P.POSITIVE: ["Stauung"]}})
        report = tokenize_report("r", "Unauffälliger Befund.")
        assert extract_mentions(report, phrases) == []

    def test_longest_match_wins_within_list(self):
        phrases = lex(
            {OC.PNEUMOTHORAX: {P.POSITIVE: ["Pneumothorax", "Pneumothorax rechts"]}}
        )
        report = tokenize_report("r", "Pneumothorax rechts apikal.")
        mentions = extract_mentions(report, phrases)
        assert len(mentions) == 1
        assert mentions[0].phrase.tokens == ("pneumothorax", "rechts")

    def test_shorter_overlapping_match_suppressed_same_list(self):
        phrases = lex({OC.PLEURAL_EFFUSION: {P.POSITIVE: ["Erguss beidseits", "beidseits"]}})
        report = tokenize_report("r", "Erguss beidseits nachweisbar.")
        mentions = extract_mentions(report, phrases)
        assert len(mentions) == 1
        assert mentions[0].phrase.tokens == ("erguss", "beidseits")

    def test_different_lists_overlap_freely(self):
        phrases = lex(
            {
                OC.PLEURAL_EFFUSION: {P.POSITIVE: ["Erguss beidseits"]},
                OC.ATELECTASIS: {P.POSITIVE: ["beidseits"]},
            }
        )
        report = tokenize_report("r", "Erguss beidseits.")
        mentions = extract_mentions(report, phrases)
        assert {m.observation for m in mentions} == {OC.PLEURAL_EFFUSION, OC.ATELECTASIS}

    def test_mentions_never_cross_sentences(self):
        phrases = lex({OC.PLEURAL_EFFUSION: {P.POSITIVE: ["Erguss rechts"]}})
        report = tokenize_report("r", "Kein Erguss. Rechts unauffällig.")
        assert extract_mentions(report, phrases) == []

    def test_exact_beats_wildcard_for_provenance(self):
        phrases = lex({OC.PLEURAL_EFFUSION: {P.POSITIVE: ["Erguss", "Ergu*"]}})
        report = tokenize_report("r", "Erguss links.")
        mentions = extract_mentions(report, phrases)
        assert len(mentions) == 1
        assert not mentions[0].phrase.prefix_wildcard


class TestFindTriggers:
    def test_multi_token_post_negation(self):
        triggers = trig(
            {(TriggerKind.NEGATION, TriggerPosition.POST): ["kann ausgeschlossen werden"]}
        )
        report = tokenize_report("r", "Pneumothorax kann ausgeschlossen werden.")
        found = find_triggers(report, triggers)
        assert len(found) == 1
        assert found[0].token_range == (1, 3)
        assert found[0].entry.position is TriggerPosition.POST

    def test_no_triggers(self):
        report = tokenize_report("r", "Unauffälliger Befund.")
        assert find_triggers(report, KEINE_PRE) == []

    def test_repeated_triggers(self):
        report = tokenize_report("r", "Keine Ergüsse und kein Infiltrat.")
        found = find_triggers(report, KEINE_PRE)
        assert [o.token_range for o in found] == [(0, 0), (3, 3)]

    def test_longest_match_suppresses_contained_trigger(self):
        triggers = trig(
            {
                (TriggerKind.NEGATION, TriggerPosition.PRE): ["nicht"],
                (TriggerKind.UNCERTAINTY, TriggerPosition.POST): [
                    "nicht sicher auszuschließen"
                ],
            }
        )
        report = tokenize_report("r", "Pneumothorax nicht sicher auszuschließen.")
        found = find_triggers(report, triggers)
        assert len(found) == 1
        assert found[0].entry.kind is TriggerKind.UNCERTAINTY
        assert found[0].token_range == (1, 3)

    def test_same_text_multiple_kinds_all_emitted(self):
        triggers = trig(
            {
                (TriggerKind.UNCERTAINTY, TriggerPosition.PRE): ["fraglich"],
                (TriggerKind.UNCERTAINTY, TriggerPosition.POST): ["fraglich"],
            }
        )
        report = tokenize_report("r", "Erguss fraglich.")
        found = find_triggers(report, triggers)
        assert len(found) == 2
        assert {o.entry.position for o in found} == {
            TriggerPosition.PRE,
            TriggerPosition.POST,
        }


def make_mention(first, last, source=P.POSITIVE, sentence=0):
    return Mention(
        observation=OC.PNEUMOTHORAX,
        phrase=PhraseEntry(("pneumothorax",)),
        token_range=(first, last),
        char_span=(0, 1),
        sentence_index=sentence,
        source_polarity=source,
    )


def make_occurrence(first, last, kind, position, sentence=0):
    return TriggerOccurrence(
        entry=TriggerEntry(("t",) * (last - first + 1), kind, position),
        token_range=(first, last),
        char_span=(0, 1),
        sentence_index=sentence,
    )


class TestClassifyMention:
    def test_figure_sentence_negated_at_radius_six(self, seeded_phrases, seeded_triggers):
        text = "Keine pleurale Dehiszenz im Sinne eines Pneumothorax"
        report = tokenize_report("r", text)
        mentions = extract_mentions(report, seeded_phrases)
        occurrences = find_triggers(report, seeded_triggers)
        span_mention = [m for m in mentions if m.phrase.tokens == ("pneumothorax",)][0]
        classified = classify_mention(span_mention, occurrences, radius=6)
        assert classified.classification is MC.NEGATIVE
        assert classified.cause.entry.text == "keine"
        # the gap is exactly six tokens: radius 5 leaves the mention positive
        assert classify_mention(span_mention, occurrences, 5).classification is MC.POSITIVE

    def test_uncertainty_post_trigger(self):
        mention = make_mention(0, 0)
        occurrence = make_occurrence(1, 1, TriggerKind.UNCERTAINTY, TriggerPosition.POST)
        out = classify_mention(mention, [occurrence], radius=3)
        assert out.classification is MC.UNCERTAIN
        assert out.cause is occurrence

    def test_no_trigger_defaults_positive(self):
        out = classify_mention(make_mention(2, 2), [], radius=5)
        assert out.classification is MC.POSITIVE
        assert out.cause is None

    @pytest.mark.parametrize("radius", [1, 2, 3, 5])
    def test_window_edge_offsets(self, radius):
        # mention at distance d after a pre-trigger: negative iff d <= radius
        for distance in range(1, radius + 3):
            trigger_end = 0
            mention = make_mention(trigger_end + distance, trigger_end + distance)
            occurrence = make_occurrence(
                0, 0, TriggerKind.NEGATION, TriggerPosition.PRE
            )
            expected = MC.NEGATIVE if distance <= radius else MC.POSITIVE
            got = classify_mention(mention, [occurrence], radius).classification
            assert got is expected, (distance, radius)

    def test_source_polarity_override(self):
        occurrence = make_occurrence(0, 0, TriggerKind.NEGATION, TriggerPosition.PRE)
        negative = classify_mention(make_mention(2, 2, P.NEGATIVE), [occurrence], 5)
        uncertain = classify_mention(make_mention(2, 2, P.UNCERTAIN), [occurrence], 5)
        assert negative.classification is MC.NEGATIVE and negative.cause is None
        assert uncertain.classification is MC.UNCERTAIN and uncertain.cause is None

    def test_uncertainty_outranks_negation(self):
        mention = make_mention(2, 2)
        negation = make_occurrence(1, 1, TriggerKind.NEGATION, TriggerPosition.PRE)
        uncertainty = make_occurrence(3, 3, TriggerKind.UNCERTAINTY, TriggerPosition.POST)
        out = classify_mention(mention, [negation, uncertainty], radius=4)
        assert out.classification is MC.UNCERTAIN

    def test_nearest_cause_recorded(self):
        mention = make_mention(5, 5)
        far = make_occurrence(0, 0, TriggerKind.NEGATION, TriggerPosition.PRE)
        near = make_occurrence(3, 3, TriggerKind.NEGATION, TriggerPosition.PRE)
        out = classify_mention(mention, [far, near], radius=6)
        assert out.cause is near

    def test_pre_trigger_after_mention_ignored(self):
        mention = make_mention(0, 0)
        occurrence = make_occurrence(1, 1, TriggerKind.NEGATION, TriggerPosition.PRE)
        assert classify_mention(mention, [occurrence], 5).classification is MC.POSITIVE

    def test_radius_below_one_rejected(self):
        with pytest.raises(ConfigurationError):
            classify_mention(make_mention(0, 0), [], 0)

    def test_radius_monotonicity_random(self):
        rng = random.Random(7)
        kinds = [TriggerKind.NEGATION, TriggerKind.UNCERTAINTY]
        positions = [TriggerPosition.PRE, TriggerPosition.POST]
        for _ in range(500):
            n = rng.randint(1, 12)
            first = rng.randrange(n)
            last = min(n - 1, first + rng.randint(0, 2))
            mention = make_mention(first, last)
            occurrences = []
            for _ in range(rng.randint(0, 3)):
                t_first = rng.randrange(n)
                t_last = min(n - 1, t_first + rng.randint(0, 2))
                occurrences.append(
                    make_occurrence(t_first, t_last, rng.choice(kinds), rng.choice(positions))
                )
            previous = None
            for radius in range(1, 10):
                got = classify_mention(mention, occurrences, radius).classification
                if previous in (MC.NEGATIVE, MC.UNCERTAIN):
                    assert got is not MC.POSITIVE
                previous = got


class TestAggregate:
    def test_positive_beats_negative(self):
        assert aggregate([MC.POSITIVE, MC.NEGATIVE]) is OL.POSITIVE

    def test_uncertain_beats_negative(self):
        assert aggregate([MC.UNCERTAIN, MC.NEGATIVE]) is OL.UNCERTAIN

    def test_all_negative(self):
        assert aggregate([MC.NEGATIVE, MC.NEGATIVE]) is OL.NEGATIVE

    def test_empty_is_blank(self):
        assert aggregate([]) is OL.BLANK

    def test_exhaustive_multisets_up_to_four(self):
        values = [MC.POSITIVE, MC.UNCERTAIN, MC.NEGATIVE]
        cases = 0
        for size in range(0, 5):
            for combo in itertools.combinations_with_replacement(values, size):
                expected = aggregate_order_oracle([c.value for c in combo])
                assert aggregate(combo).value == expected
                cases += 1
        assert cases == 35


class TestDeriveNoFinding:
    def build(self, **overrides):
        labels = {cls: OL.BLANK for cls in OC if cls is not OC.NO_FINDING}
        for name, value in overrides.items():
            labels[OC(name)] = value
        return labels

    def test_all_blank_positive(self):
        assert derive_no_finding(self.build()) is OL.POSITIVE

    def test_support_devices_only_stays_positive(self):
        labels = self.build(support_devices=OL.POSITIVE)
        assert derive_no_finding(labels) is OL.POSITIVE

    def test_uncertain_pathology_negative(self):
        labels = self.build(pneumothorax=OL.UNCERTAIN)
        assert derive_no_finding(labels) is OL.NEGATIVE

    def test_all_explicitly_negated_positive(self):
        labels = {
            cls: OL.NEGATIVE for cls in OC if cls is not OC.NO_FINDING
        }
        assert derive_no_finding(labels) is OL.POSITIVE

    @given(
        st.dictionaries(
            st.sampled_from([c for c in OC if c is not OC.NO_FINDING]),
            st.sampled_from(list(OL)),
            min_size=13,
            max_size=13,
        )
    )
    def test_matches_oracle(self, labels):
        expected = no_finding_oracle({c.value: l.value for c, l in labels.items()})
        assert derive_no_finding(labels).value == expected


class TestLabelReport:
    def test_figure_trace(self, seeded_phrases, seeded_triggers, figure_report_text):
        vec = label_report(
            figure_report_text,
            "Thorax im Liegen",
            report_id="fig",
            phrases=seeded_phrases,
            triggers=seeded_triggers,
            radius=6,
        )
        expected = {
            OC.SUPPORT_DEVICES: OL.POSITIVE,
            OC.EDEMA: OL.POSITIVE,
            OC.LUNG_OPACITY: OL.NEGATIVE,
            OC.PNEUMONIA: OL.NEGATIVE,
            OC.PNEUMOTHORAX: OL.NEGATIVE,
            OC.PLEURAL_EFFUSION: OL.NEGATIVE,
            OC.NO_FINDING: OL.NEGATIVE,
        }
        for cls in OC:
            assert vec.labels[cls] is expected.get(cls, OL.BLANK), cls

    def test_empty_text(self, seeded_phrases, seeded_triggers):
        vec = label_report("", phrases=seeded_phrases, triggers=seeded_triggers)
        assert vec.labels[OC.NO_FINDING] is OL.POSITIVE
        assert all(
            vec.labels[c] is OL.BLANK for c in OC if c is not OC.NO_FINDING
        )

    def test_single_positive_phrase(self, seeded_phrases, seeded_triggers):
        vec = label_report(
            "Pneumothorax", phrases=seeded_phrases, triggers=seeded_triggers
        )
        assert vec.labels[OC.PNEUMOTHORAX] is OL.POSITIVE
        assert vec.labels[OC.NO_FINDING] is OL.NEGATIVE

    def test_phrase_match_suppresses_identical_trigger_span(self):
        phrases = lex({OC.PLEURAL_EFFUSION: {P.NEGATIVE: ["kein Anhalt für Erguss"]}})
        triggers = trig(
            {(TriggerKind.NEGATION, TriggerPosition.PRE): ["kein Anhalt für Erguss"]}
        )
        vec = label_report(
            "Kein Anhalt für Erguss.", phrases=phrases, triggers=triggers
        )
        assert vec.labels[OC.PLEURAL_EFFUSION] is OL.NEGATIVE
        assert vec.mentions[0].cause is None

    def test_triggers_do_not_cross_sentences(self):
        phrases = lex({OC.PNEUMOTHORAX: {P.POSITIVE: ["Pneumothorax"]}})
        vec = label_report(
            "Keine Voraufnahmen. Pneumothorax rechts.",
            phrases=phrases,
            triggers=KEINE_PRE,
        )
        assert vec.labels[OC.PNEUMOTHORAX] is OL.POSITIVE


class TestLabelBatch:
    def records(self):
        texts = [
            "Pneumothorax rechts.",
            "Keine Pleuraergüsse.",
            "Geringe Stauung.",
            "",
        ]
        return [ReportRecord(report_id=f"r{i}", text=t) for i, t in enumerate(texts)]

    def test_order_preserved_and_thread_invariant(self, seeded_phrases, seeded_triggers):
        records = self.records()
        one = label_batch(
            records, phrases=seeded_phrases, triggers=seeded_triggers, worker_count=1
        )
        many = label_batch(
            records, phrases=seeded_phrases, triggers=seeded_triggers, worker_count=12
        )
        assert [v.report_id for v in one] == [r.report_id for r in records]
        assert one == many

    def test_empty_batch(self, seeded_phrases, seeded_triggers):
        assert label_batch([], phrases=seeded_phrases, triggers=seeded_triggers) == []
