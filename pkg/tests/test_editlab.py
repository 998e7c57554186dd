"""Alignment, edit classification, and error features.

The golden pairs below were aligned by hand over `segment()` token
streams; spans are half-open token index ranges into the full stream
(punctuation included).
"""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kirjand.editlab import (
    ALIGNMENT_KINDS,
    ERROR_FEATURE_NAMES,
    Edit,
    EditKind,
    EditSet,
    SpellCorrection,
    align_tokens,
    alignment_cost,
    build_edit_set,
    error_features,
    read_spell_tsv,
)
from kirjand.errors import ValidationError
from kirjand.textproc import Token, segment

# (orig, corr, spell corrections, expected edits).  Alignment edits come
# out sorted by span; spelling edits follow in sidecar order.
GOLDEN_PAIRS = [
    ("identity", "Ma lähen koju.", "Ma lähen koju.", [], []),
    (
        "replaced",
        "Ma lähen kooli.",
        "Ma lähen koju.",
        [],
        [("word_replaced", (2, 3), (2, 3))],
    ),
    (
        "missing",
        "Ma lähen koju.",
        "Ma lähen kohe koju.",
        [],
        [("word_missing", (2, 2), (2, 3))],
    ),
    (
        "unnecessary",
        "Ma lähen kohe koju.",
        "Ma lähen koju.",
        [],
        [("word_unnecessary", (2, 3), (2, 2))],
    ),
    (
        "punct_replaced",
        "Tule siia!",
        "Tule siia.",
        [],
        [("punct_replaced", (2, 3), (2, 3))],
    ),
    (
        "punct_missing",
        "Ma tean et sa tuled.",
        "Ma tean, et sa tuled.",
        [],
        [("punct_missing", (2, 2), (2, 3))],
    ),
    (
        "punct_unnecessary",
        "Ma tean, et sa tuled.",
        "Ma tean et sa tuled.",
        [],
        [("punct_unnecessary", (2, 3), (2, 2))],
    ),
    (
        "whitespace_join",
        "Ta käib iga päev tööl.",
        "Ta käib igapäev tööl.",
        [],
        [("whitespace", (2, 4), (2, 3))],
    ),
    (
        "whitespace_split",
        "Ta tuli ükskõik.",
        "Ta tuli üks kõik.",
        [],
        [("whitespace", (2, 3), (2, 4))],
    ),
    (
        "word_order",
        "Kiiresti jooksis ta.",
        "Ta jooksis kiiresti.",
        [],
        [("word_order", (0, 3), (0, 3))],
    ),
    (
        "mixed_cross_class",
        "Ta läks ära kiiresti.",
        "Ta läks, kuid kiiresti.",
        [],
        [("mixed", (2, 3), (2, 4))],
    ),
    (
        "spelling_only",
        "Ma sõidan linna.",
        "Ma sõidan linna.",
        [SpellCorrection(1, "söidan", "sõidan")],
        [("spelling", (1, 2), (1, 2))],
    ),
    (
        "comma_and_agreement",
        "Ma arvan et ta tulevad.",
        "Ma arvan, et ta tuleb.",
        [],
        [("punct_missing", (2, 2), (2, 3)), ("word_replaced", (4, 5), (5, 6))],
    ),
    (
        "adjacent_subs_merge",
        "Ta oli väga suur.",
        "Ta on liiga suur.",
        [],
        [("word_replaced", (1, 3), (1, 3))],
    ),
    (
        "two_sentences",
        "Ma tulen homme. Sina tuled täna.",
        "Ma tulen kohe. Sina tuled ka täna.",
        [],
        [("word_replaced", (2, 3), (2, 3)), ("word_missing", (6, 6), (6, 7))],
    ),
    (
        # the moved word crosses a sentence boundary, so order folding
        # must not fire; it decomposes into a deletion plus an insertion
        "no_cross_sentence_order",
        "Ma käisin eile tööl. Sõber jäi koju.",
        "Ma käisin tööl. Sõber jäi eile koju.",
        [],
        [("word_unnecessary", (2, 3), (2, 2)), ("word_missing", (7, 7), (6, 7))],
    ),
    (
        "inflection_is_replacement",
        "Ta luges raamatut.",
        "Ta luges raamatud.",
        [],
        [("word_replaced", (2, 3), (2, 3))],
    ),
    (
        # duplicated word: backtrack keeps the later copy aligned
        "duplicate_word",
        "Ta ütles tere tere kõigile.",
        "Ta ütles tere kõigile.",
        [],
        [("word_unnecessary", (2, 3), (2, 2))],
    ),
    (
        # swap folds to word_order; the second sentence's half-matched
        # substitution pair is impure and stays mixed
        "order_plus_mixed",
        "Me läksime kiiresti poodi. Seal ostsime palju head toitu.",
        "Me läksime poodi kiiresti. Seal ostsime väga palju toitu.",
        [],
        [("word_order", (2, 4), (2, 4)), ("mixed", (7, 9), (7, 9))],
    ),
    (
        "deletion_plus_spelling",
        "Ma lähen õhtul kinno sõpradega.",
        "Ma lähen kinno sõpradega.",
        [SpellCorrection(4, "söpradega", "sõpradega")],
        [("word_unnecessary", (2, 3), (2, 2)), ("spelling", (4, 5), (4, 5))],
    ),
]


@pytest.mark.parametrize(
    "orig,corr,spell,expected",
    [p[1:] for p in GOLDEN_PAIRS],
    ids=[p[0] for p in GOLDEN_PAIRS],
)
def test_golden_pairs(orig, corr, spell, expected):
    es = build_edit_set(segment(orig), segment(corr), spell)
    got = [(e.kind.value, e.orig_span, e.corr_span) for e in es.edits]
    assert got == expected


def test_all_kinds_covered_by_goldens():
    seen = {kind for p in GOLDEN_PAIRS for kind, _, _ in p[4]}
    assert seen == {k.value for k in EditKind}


def test_edit_set_counts():
    es = build_edit_set(
        segment("Ma lähen õhtul kinno sõpradega."),
        segment("Ma lähen kinno sõpradega."),
        [SpellCorrection(4, "söpradega", "sõpradega")],
    )
    assert es.word_count == 5
    assert es.sentence_count == 1
    assert es.total_edit_count == 1  # spelling does not count
    assert es.spell_corrected_words == 1


def test_spell_invariant_raises():
    with pytest.raises(ValidationError, match="more distinct tokens"):
        build_edit_set(
            segment("Tere."),
            segment("Tere."),
            [SpellCorrection(i, "a", "b") for i in range(3)],
        )


def test_read_spell_tsv(tmp_path):
    p = tmp_path / "s.tsv"
    p.write_text("0\tillus\tilus\n\n3\tvääga\tväga\n", encoding="utf-8")
    assert read_spell_tsv(p) == [
        SpellCorrection(0, "illus", "ilus"),
        SpellCorrection(3, "vääga", "väga"),
    ]
    p.write_text("0\tonly-two\n", encoding="utf-8")
    with pytest.raises(ValidationError, match="3 tab-separated"):
        read_spell_tsv(p)
    p.write_text("x\ta\tb\n", encoding="utf-8")
    with pytest.raises(ValidationError, match="bad token index"):
        read_spell_tsv(p)
    p.write_text("-1\ta\tb\n", encoding="utf-8")
    with pytest.raises(ValidationError, match="negative"):
        read_spell_tsv(p)


def test_error_features_empty():
    feats = error_features(EditSet([], word_count=10, sentence_count=2))
    assert tuple(feats) == ERROR_FEATURE_NAMES
    assert len(feats) == 23
    assert all(v == 0.0 for v in feats.values())


def test_error_features_one_of_each():
    edits = [Edit(kind, (0, 1), (0, 1)) for kind in ALIGNMENT_KINDS]
    feats = error_features(EditSet(edits, word_count=18, sentence_count=3))
    assert feats["total_edit_count"] == 9.0
    for kind in ALIGNMENT_KINDS:
        assert feats[f"{kind.value}_count"] == 1.0
        assert feats[f"{kind.value}_ratio"] == pytest.approx(1 / 9)
    assert feats["edits_per_word"] == pytest.approx(0.5)
    assert feats["edits_per_sentence"] == pytest.approx(3.0)


def test_error_features_ratio_denominator():
    # ratios are shares of the total edit count, not per word
    edits = [
        Edit(EditKind.PUNCT_MISSING, (1, 1), (1, 2)),
        Edit(EditKind.PUNCT_MISSING, (4, 4), (5, 6)),
        Edit(EditKind.WORD_REPLACED, (6, 7), (8, 9)),
        Edit(EditKind.WORD_REPLACED, (9, 10), (11, 12)),
    ]
    feats = error_features(EditSet(edits, word_count=100, sentence_count=5))
    assert feats["punct_missing_ratio"] == 0.5
    assert feats["word_replaced_ratio"] == 0.5
    assert feats["whitespace_ratio"] == 0.0


def test_error_features_spelling_side():
    es = EditSet(
        [Edit(EditKind.WORD_ORDER, (0, 2), (0, 2))],
        word_count=20,
        sentence_count=2,
        spell_corrections=[
            SpellCorrection(3, "a", "b"),
            SpellCorrection(3, "a", "c"),
            SpellCorrection(7, "d", "e"),
        ],
    )
    feats = error_features(es)
    assert feats["spelling_correction_count"] == 3.0
    # the ratio counts distinct corrected tokens over words
    assert feats["spell_corrected_word_ratio"] == pytest.approx(2 / 20)
    assert feats["total_edit_count"] == 1.0


# --- alignment properties ----------------------------------------------


def _tok(surface: str) -> Token:
    punct = not any(c.isalnum() for c in surface)
    return Token(surface, surface, "PUNCT" if punct else "X", (), 0, len(surface))


token_stream = st.lists(
    st.sampled_from([_tok(s) for s in ["aa", "bb", "cc", "dd", ".", ","]]),
    max_size=12,
)


@given(token_stream)
def test_alignment_identity(stream):
    assert alignment_cost(stream, stream) == 0
    assert all(op.op == "eq" for op in align_tokens(stream, stream))


@settings(max_examples=200)
@given(token_stream, token_stream)
def test_alignment_metric_and_coverage(a, b):
    cost = alignment_cost(a, b)
    assert alignment_cost(b, a) == cost
    assert abs(len(a) - len(b)) <= cost <= len(a) + len(b)
    ops = align_tokens(a, b)
    # every op sequence consumes both streams exactly once, in order
    assert [op.i for op in ops if op.op in ("eq", "sub", "del")] == list(range(len(a)))
    assert [op.j for op in ops if op.op in ("eq", "sub", "ins")] == list(range(len(b)))
    for op in ops:
        if op.op == "sub":
            assert a[op.i].is_word == b[op.j].is_word
        if op.op == "eq":
            assert a[op.i].surface == b[op.j].surface


@settings(max_examples=60)
@given(token_stream, token_stream, token_stream)
def test_alignment_triangle(a, b, c):
    assert alignment_cost(a, c) <= alignment_cost(a, b) + alignment_cost(b, c)
