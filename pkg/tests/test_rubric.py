"""Rubric loading, prompt assembly, grade parsing."""

import pytest

from kirjand.corpus import ASPECTS, RubricAspect
from kirjand.errors import ConfigError
from kirjand.llmgrade.rubric import (
    AspectRubric,
    RubricConfig,
    aspect_label,
    build_prompt,
    build_user_text,
    load_bundled_rubric,
    load_rubric,
    parse_grade,
)


def _rubric_toml(grade_level=9, skip_aspect=None, rename_to=None, drop_descriptor=None):
    lines = [
        f"grade_level = {grade_level}",
        'preface = "Grade the essay. Here you will ONLY grade this aspect:"',
        'grading_instructions = "Use the ladder below."',
        'output_instructions = "End with Hinne: N. Essay text begins below:"',
        "",
    ]
    for a in ASPECTS:
        if a is skip_aspect:
            continue
        section = rename_to if rename_to and a is ASPECTS[0] else a.value
        lines.append(f"[aspects.{section}]")
        lines.append(f'name = "Aspekt {a.value}"')
        for g in (3, 2, 1, 0):
            if drop_descriptor == (a, g):
                continue
            lines.append(f'descriptor_{g} = "tase {g}"')
        lines.append("")
    return "\n".join(lines)


def test_load_bundled_rubrics():
    for level in (9, 12):
        config = load_bundled_rubric(level)
        assert config.grade_level == level
        assert set(config.aspects) == set(ASPECTS)
        for ar in config.aspects.values():
            assert ar.name
            assert len(ar.descriptors) == 4
            assert all(d.strip() for d in ar.descriptors)
    with pytest.raises(ConfigError, match="no bundled rubric"):
        load_bundled_rubric(10)


def test_load_rubric_file(tmp_path):
    p = tmp_path / "rubric.toml"
    p.write_text(_rubric_toml(), encoding="utf-8")
    config = load_rubric(p)
    assert config.grade_level == 9
    assert config.aspects[RubricAspect.SYNTAX].name == "Aspekt Syntax"
    assert config.aspects[RubricAspect.SYNTAX].descriptors == (
        "tase 3",
        "tase 2",
        "tase 1",
        "tase 0",
    )


@pytest.mark.parametrize(
    "toml_text,message",
    [
        (_rubric_toml(skip_aspect=RubricAspect.CONCLUSION), "missing aspects: Conclusion"),
        (_rubric_toml(rename_to="Hallucinated"), "unknown aspect"),
        (_rubric_toml(drop_descriptor=(ASPECTS[0], 2)), "missing descriptor_2"),
        (_rubric_toml(grade_level=10), "grade_level must be 9 or 12"),
        ("preface = 'x'", "missing 'grade_level'"),
        ("{bad", "not valid TOML"),
    ],
)
def test_load_rubric_rejects(tmp_path, toml_text, message):
    p = tmp_path / "rubric.toml"
    p.write_text(toml_text, encoding="utf-8")
    with pytest.raises(ConfigError, match=message):
        load_rubric(p)


def test_rubric_config_requires_all_aspects():
    ar = AspectRubric(ASPECTS[0], "Nimi", ("a", "b", "c", "d"))
    with pytest.raises(ConfigError, match="missing aspects"):
        RubricConfig(9, "p", "g", "o", {ASPECTS[0]: ar})


def test_prompt_layout(tmp_path):
    p = tmp_path / "rubric.toml"
    p.write_text(_rubric_toml(), encoding="utf-8")
    config = load_rubric(p)
    prompt = build_prompt(config, RubricAspect.VOCABULARY)
    blocks = prompt.split("\n\n")
    assert blocks[0].endswith("ONLY grade this aspect:")
    # the aspect line directly follows the preface so a grader reading
    # top down knows its single target before any ladder text
    assert blocks[1] == aspect_label(config, RubricAspect.VOCABULARY)
    assert blocks[1] == "Aspekt Vocabulary."
    assert blocks[2] == "Use the ladder below."
    assert blocks[3].splitlines() == [
        "3 if: tase 3",
        "2 if: tase 2",
        "1 if: tase 1",
        "0 if: tase 0",
    ]
    assert prompt.endswith("Essay text begins below:")
    assert build_prompt(config, RubricAspect.VOCABULARY) == prompt  # stable


def test_prompt_optional_blocks():
    config = load_bundled_rubric(9)
    base = build_prompt(config, RubricAspect.TITLE_INTRO)
    ar = config.aspects[RubricAspect.TITLE_INTRO]
    enriched = RubricConfig(
        config.grade_level,
        config.preface,
        config.grading_instructions,
        config.output_instructions,
        {
            **config.aspects,
            RubricAspect.TITLE_INTRO: AspectRubric(
                ar.aspect,
                ar.name,
                ar.descriptors,
                extra_notes="NB! Lisamärkus.",
                source_summaries=("Alustekst 1 kokkuvõte.", "Alustekst 2 kokkuvõte."),
            ),
        },
    )
    prompt = build_prompt(enriched, RubricAspect.TITLE_INTRO)
    assert "Alustekst 1 kokkuvõte.\n\nAlustekst 2 kokkuvõte.\n\n3 if:" in prompt
    assert "NB! Lisamärkus." in prompt
    assert len(prompt) > len(base)


def test_build_user_text():
    assert build_user_text("Tere\nkirjand.") == '"""Tere\nkirjand."""'


def test_parse_grade_happy_paths():
    assert parse_grade("Seletus: laused: selged. Hinne: 2").score == 2
    assert parse_grade("hinne : 3").score == 3  # case and spacing tolerant
    assert parse_grade("Hinne: 1 oli enne. Hinne: 0").score == 0  # last marker wins
    for n in range(4):
        parsed = parse_grade(f"Hinne: {n}")
        assert parsed.ok and parsed.score == n and parsed.failure is None


def test_parse_grade_failures():
    assert parse_grade("Tubli töö!").failure == "no_marker"
    assert parse_grade("Hinne: pole teada").failure == "no_integer"
    assert parse_grade("Hinne: 4").failure == "out_of_range"
    assert parse_grade("Hinne: -1").failure == "out_of_range"
    parsed = parse_grade("Hinne: 7")
    assert not parsed.ok and parsed.score is None
    assert parsed.raw == "Hinne: 7"
