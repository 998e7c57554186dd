"""Corpus data model and JSONL I/O."""

import json
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kirjand.corpus import (
    ASPECTS,
    LANGUAGE_ASPECTS,
    MAX_TOTAL,
    AspectScores,
    EssayRecord,
    RubricAspect,
    consensus,
    dump_corpus,
    load_corpus,
    weighted_total_12,
)
from kirjand.errors import CorpusError


def test_aspect_order_and_values():
    assert [a.value for a in ASPECTS] == [
        "TitleIntro",
        "ArgumentDevelopment",
        "SourceUse",
        "Conclusion",
        "Vocabulary",
        "Syntax",
        "Orthography",
        "Punctuation",
        "Structuring",
    ]
    assert [a.index for a in ASPECTS] == list(range(9))
    assert LANGUAGE_ASPECTS == ASPECTS[4:]
    assert MAX_TOTAL == 27


def _scores(values):
    return AspectScores(tuple(values))


def test_aspect_scores_validation():
    with pytest.raises(CorpusError):
        _scores([1] * 8)
    with pytest.raises(CorpusError):
        _scores([1] * 8 + [4])
    with pytest.raises(CorpusError):
        _scores([1] * 8 + [-1])
    with pytest.raises(CorpusError):
        _scores([1] * 8 + [True])
    with pytest.raises(CorpusError):
        _scores([1] * 8 + [1.0])
    s = _scores([0, 1, 2, 3, 0, 1, 2, 3, 0])
    assert s.total == 12
    assert s[RubricAspect.CONCLUSION] == 3


def test_from_mapping_exact_keys():
    m = {a.value: 2 for a in ASPECTS}
    s = AspectScores.from_mapping(m)
    assert s.values == (2,) * 9
    assert s.to_mapping() == m
    with pytest.raises(CorpusError, match="missing aspect"):
        AspectScores.from_mapping({k: v for k, v in m.items() if k != "Syntax"})
    with pytest.raises(CorpusError, match="unknown aspect"):
        AspectScores.from_mapping({**m, "syntax": 1})


def test_record_validation():
    s = _scores([1] * 9)
    with pytest.raises(CorpusError):
        EssayRecord("e1", 10, "t", s, s)
    with pytest.raises(CorpusError):
        EssayRecord("", 9, "t", s, s)


def test_consensus_is_exact():
    r = EssayRecord(
        "e1", 9, "t", _scores([0, 1, 2, 3, 0, 1, 2, 3, 0]), _scores([1, 1, 3, 3, 1, 0, 2, 2, 1])
    )
    c = consensus(r)
    assert c[RubricAspect.TITLE_INTRO] == Fraction(1, 2)
    assert c[RubricAspect.SOURCE_USE] == Fraction(5, 2)
    assert isinstance(c.total, Fraction)
    assert c.total == Fraction(r.scores_g1.total + r.scores_g2.total, 2)


def test_jsonl_round_trip(tmp_path):
    r1 = EssayRecord("a", 9, "Tere,\nkirjand.", _scores([1] * 9), _scores([2] * 9))
    r2 = EssayRecord("b", 12, "Teine.", _scores([0] * 9), _scores([3] * 9), {"year": 2019})
    out = tmp_path / "corpus.jsonl"
    dump_corpus([r1, r2], out)
    lines = out.read_text(encoding="utf-8").splitlines()
    assert len(lines) == 2
    d = json.loads(lines[0])
    # field names are part of the file contract
    assert set(d) == {"id", "grade", "text", "scores_g1", "scores_g2"}
    assert set(d["scores_g1"]) == {a.value for a in ASPECTS}
    d2 = json.loads(lines[1])
    assert d2["meta"] == {"year": 2019}
    res = load_corpus(out)
    assert res.skipped == []
    assert res.records == [r1, r2]


def test_load_skips_and_reports(tmp_path):
    good = EssayRecord("ok", 9, "t", _scores([1] * 9), _scores([1] * 9)).to_json_dict()
    single_grader = dict(good, id="solo")
    del single_grader["scores_g2"]
    bad_score = dict(good, id="hi", scores_g2={a.value: 4 for a in ASPECTS})
    lines = [
        json.dumps(good),
        "{not json",
        '"just a string"',
        json.dumps(single_grader),
        json.dumps(bad_score),
        "",
    ]
    path = tmp_path / "c.jsonl"
    path.write_text("\n".join(lines), encoding="utf-8")
    res = load_corpus(path)
    assert [r.essay_id for r in res.records] == ["ok"]
    assert res.skip_count == 4
    reasons = {(s.line_no, s.essay_id): s.reason for s in res.skipped}
    assert "bad json" in reasons[(2, None)]
    assert "scores_g2" in reasons[(4, "solo")]
    assert "out of range" in reasons[(5, "hi")]


def test_load_duplicate_id_is_fatal(tmp_path):
    r = EssayRecord("dup", 9, "t", _scores([1] * 9), _scores([1] * 9))
    path = tmp_path / "c.jsonl"
    dump_corpus([r, r], path)
    with pytest.raises(CorpusError, match="duplicate essay id"):
        load_corpus(path)


def test_load_grade_filter(tmp_path):
    r9 = EssayRecord("a", 9, "t", _scores([1] * 9), _scores([1] * 9))
    r12 = EssayRecord("b", 12, "t", _scores([1] * 9), _scores([1] * 9))
    path = tmp_path / "c.jsonl"
    dump_corpus([r9, r12], path)
    res = load_corpus(path, grade_level=12)
    assert [r.essay_id for r in res.records] == ["b"]
    assert res.skipped[0].essay_id == "a"
    assert "filtered" in res.skipped[0].reason


def test_weighted_total_12():
    assert weighted_total_12({"content": 1, "language": 1, "style": 1, "structure": 1}) == 12
    assert weighted_total_12({"content": 5, "language": 5, "style": 5, "structure": 5}) == 60
    assert weighted_total_12({"content": 3, "language": 2, "style": 4, "structure": 1}) == 32
    with pytest.raises(CorpusError, match="missing component"):
        weighted_total_12({"content": 3})
    with pytest.raises(CorpusError, match="unknown component"):
        weighted_total_12(
            {"content": 1, "language": 1, "style": 1, "structure": 1, "bonus": 1}
        )
    with pytest.raises(CorpusError):
        weighted_total_12({"content": 0, "language": 1, "style": 1, "structure": 1})
    with pytest.raises(CorpusError):
        weighted_total_12({"content": True, "language": 1, "style": 1, "structure": 1})


score_sheet = st.lists(st.integers(0, 3), min_size=9, max_size=9).map(
    lambda v: AspectScores(tuple(v))
)
record_strategy = st.builds(
    EssayRecord,
    essay_id=st.uuids().map(str),
    grade_level=st.sampled_from([9, 12]),
    text=st.text(
        alphabet=st.characters(blacklist_categories=("Cs",)),
        max_size=200,
    ),
    scores_g1=score_sheet,
    scores_g2=score_sheet,
)


@settings(max_examples=50, deadline=None)
@given(st.lists(record_strategy, max_size=8, unique_by=lambda r: r.essay_id))
def test_round_trip_property(tmp_path_factory, records):
    # newlines inside text must survive the line-oriented container
    path = tmp_path_factory.mktemp("rt") / "c.jsonl"
    dump_corpus(records, path)
    res = load_corpus(path)
    assert res.skipped == []
    assert res.records == records


@given(record_strategy)
def test_consensus_total_property(record):
    c = consensus(record)
    assert 2 * c.total == record.scores_g1.total + record.scores_g2.total
    for a in ASPECTS:
        assert 0 <= c[a] <= 3
        assert c[a].denominator in (1, 2)
