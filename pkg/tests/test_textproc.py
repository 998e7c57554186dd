"""Segmentation heuristics, CoNLL-U parsing, syllable counting."""

import pytest
from hypothesis import given
from hypothesis import strategies as st

from kirjand.errors import ConlluError
from kirjand.textproc import count_syllables, parse_conllu, segment

from conftest import FIXTURES


def surfaces(annotated):
    return [t.surface for t in annotated.tokens()]


def test_blank_line_splits_paragraphs():
    doc = segment("A.\n\nB.")
    assert len(doc.paragraphs) == 2
    assert [len(p.sentences) for p in doc.paragraphs] == [1, 1]
    doc = segment("A.\n   \t\nB.\nC.")
    # whitespace-only lines separate; a bare newline does not
    assert len(doc.paragraphs) == 2
    assert len(doc.paragraphs[1].sentences) == 2


def test_sentence_boundary_needs_uppercase_or_digit():
    doc = segment("Ta tuli. Siis läks.")
    assert len(list(doc.sentences())) == 2
    doc = segment("Ta tuli jne. ja läks koju.")
    assert len(list(doc.sentences())) == 1
    doc = segment("Aasta oli 1991. aasta sügis.")
    assert len(list(doc.sentences())) == 1
    doc = segment("Sõda lõppes 1945. Siis tuli rahu.")
    assert len(list(doc.sentences())) == 2
    doc = segment("Kell oli 18.00. 19 inimest ootas.")
    assert len(list(doc.sentences())) == 2
    doc = segment("Kas tõesti? Jah!")
    assert len(list(doc.sentences())) == 2


def test_punctuation_detachment():
    doc = segment('Ta ütles: "Tere, sõber!"')
    assert surfaces(doc) == ["Ta", "ütles", ":", '"', "Tere", ",", "sõber", "!", '"']
    flags = [t.is_word for t in doc.tokens()]
    assert flags == [True, True, False, False, True, False, True, False, False]


def test_interior_punctuation_stays_attached():
    doc = segment("Nii-öelda e-kiri jõudis 21. sajandisse.")
    assert "Nii-öelda" in surfaces(doc)
    assert "e-kiri" in surfaces(doc)
    # trailing period of an ordinal is still detached
    assert "21" in surfaces(doc)


def test_segment_spans_match_text():
    text = "  Esimene   lause siin!  \n\nTeine  (sulgudes) lõik...\n"
    doc = segment(text)
    doc.check_spans()
    for t in doc.tokens():
        assert text[t.start : t.end] == t.surface


def test_segment_empty_and_whitespace():
    assert segment("").paragraphs == ()
    assert segment("  \n \n\t").paragraphs == ()


def test_parse_conllu_fixture_shape():
    doc = parse_conllu(FIXTURES / "essay_fixture.conllu")
    assert len(doc.paragraphs) == 2
    assert len(list(doc.sentences())) == 6
    assert [len(p.sentences) for p in doc.paragraphs] == [3, 3]
    assert len(list(doc.tokens())) == 42
    assert len(list(doc.words())) == 36
    doc.check_spans()


def test_parse_conllu_reconstruction():
    doc = parse_conllu(FIXTURES / "essay_fixture.conllu")
    expected = (FIXTURES / "essay_fixture.txt").read_text(encoding="utf-8")
    assert doc.text == expected.rstrip("\n")
    # terminal punctuation carries SpaceAfter=No on its predecessor
    first = next(doc.sentences())
    assert first.tokens[-1].surface == "."
    assert doc.text[first.tokens[-2].end] == "."


def test_parse_conllu_morphology():
    doc = parse_conllu(FIXTURES / "essay_fixture.conllu")
    by_surface = {t.surface: t for t in doc.tokens()}
    assert by_surface["koolis"].lemma == "kool"
    assert by_surface["koolis"].pos == "NOUN"
    assert by_surface["koolis"].feats_dict["Case"] == "Ine"
    assert by_surface["käisin"].feats_dict["Tense"] == "Past"


def test_parse_conllu_literal_and_skips():
    block = (
        "# sent_id = 1\n"
        "1-2\tpole\t_\t_\t_\t_\t_\t_\t_\t_\n"
        "1\tei\tei\tAUX\t_\tPolarity=Neg\t0\troot\t_\t_\n"
        "2\tole\tolema\tAUX\t_\t_\t1\taux\t_\tSpaceAfter=No\n"
        "2.1\tghost\t_\t_\t_\t_\t_\t_\t_\t_\n"
        "3\t.\t.\tPUNCT\t_\t_\t1\tpunct\t_\t_\n"
    )
    doc = parse_conllu(block)
    assert surfaces(doc) == ["ei", "ole", "."]
    assert doc.text == "ei ole."


def test_parse_conllu_errors():
    with pytest.raises(ConlluError, match="10 columns"):
        parse_conllu("1\tword\tword\n")
    with pytest.raises(ConlluError, match="bad token id"):
        parse_conllu("x1\tw\tw\tX\t_\t_\t_\t_\t_\t_\n")
    with pytest.raises(ConlluError, match="malformed feature"):
        parse_conllu("1\tw\tw\tX\t_\tCase\t_\t_\t_\t_\n")


@pytest.mark.parametrize(
    "word,expected",
    [
        ("kool", 1),
        ("meie", 1),
        ("maa", 1),
        ("au", 1),
        ("ilus", 2),
        ("isa", 2),
        ("ao", 2),
        ("kirjutama", 4),
        ("tüdruk", 2),
        ("õueaed", 2),
        ("krt", 1),
        ("TAEVAS", 2),
        ("all-maa", 2),
    ],
)
def test_count_syllables_cases(word, expected):
    assert count_syllables(word) == expected


def test_count_syllables_needs_letters():
    with pytest.raises(ValueError):
        count_syllables("123")
    with pytest.raises(ValueError):
        count_syllables("...")
    with pytest.raises(ValueError):
        count_syllables("")


@given(st.text(alphabet="aeiouõäöüklmnprst-", min_size=1).filter(lambda w: any(c.isalpha() for c in w)))
def test_count_syllables_bounds(word):
    n = count_syllables(word)
    vowels = sum(c in "aeiouõäöü" for c in word)
    assert 1 <= n <= max(1, vowels)
