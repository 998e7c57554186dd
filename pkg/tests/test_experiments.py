"""Injection and generation experiments against the mock grader."""

import pytest

from kirjand.errors import TransportError, ValidationError
from kirjand.experiments import (
    DEFAULT_PAYLOAD,
    DeltaReport,
    DeltaRow,
    InjectionConfig,
    build_generation_prompt,
    generate_essays,
    inject_payload,
    run_injection,
    sample_records,
)
from kirjand.llmgrade.providers import MockProvider, ProviderResponse
from kirjand.llmgrade.rubric import aspect_label, load_bundled_rubric

from conftest import mock_endpoint, synth_corpus


def test_injection_config_validation():
    InjectionConfig()  # defaults are valid
    with pytest.raises(ValidationError, match="position must be"):
        InjectionConfig(position="append_to_prompt")
    with pytest.raises(ValidationError, match="non-empty"):
        InjectionConfig(payload="   ")


def test_inject_payload_lands_after_prose():
    config = InjectionConfig(payload="<<override>>")
    assert inject_payload("Essee sisu.", config) == "Essee sisu.\n\n<<override>>"
    assert DEFAULT_PAYLOAD in inject_payload("x", InjectionConfig())


def test_sample_records():
    records = synth_corpus(30)
    assert sample_records(records, None, 0) == records
    assert sample_records(records, 30, 0) == records
    assert sample_records(records, 99, 0) == records
    a = sample_records(records, 10, seed=1)
    assert len(a) == 10
    assert a == sample_records(records, 10, seed=1)  # seeded
    assert a != sample_records(records, 10, seed=2)
    # sampled records keep original corpus order
    positions = [records.index(r) for r in a]
    assert positions == sorted(positions)
    with pytest.raises(ValidationError, match="must be positive"):
        sample_records(records, 0, 0)


def test_delta_report_stats():
    rows = [DeltaRow("a", 10, 19), DeltaRow("b", 5, 5), DeltaRow("c", 20, 24)]
    report = DeltaReport(rows)
    assert report.mean_delta == pytest.approx(13 / 3)
    assert report.min_delta == 0
    assert report.max_delta == 9
    with pytest.raises(ValidationError, match="no complete"):
        DeltaReport([]).mean_delta


def test_run_injection_boost_moves_every_aspect(tmp_path):
    records = synth_corpus(6)
    config = mock_endpoint()
    result = run_injection(
        records,
        load_bundled_rubric(9),
        config,
        tmp_path / "cache",
        InjectionConfig(sample_size=4, seed=1),
    )
    assert len(result.sampled_ids) == 4
    assert result.report.excluded == []
    # the default payload carries the mock's boost marker: +1 on each of
    # the nine aspects, and baseline scores never sit at the cap
    assert result.report.mean_delta == 9.0
    assert result.report.min_delta == 9
    assert result.report.max_delta == 9
    assert result.baseline.ledger.requests == 36
    assert result.injected.ledger.requests == 36


def test_run_injection_neutral_payload(tmp_path):
    # a payload without the boost marker just perturbs the mock's hash:
    # both runs score as plain text, so totals match expected_score sums
    records = synth_corpus(3)
    config = mock_endpoint()
    injection = InjectionConfig(payload="<<neutraalne vahemärkus>>")
    rubric = load_bundled_rubric(9)
    result = run_injection(records, rubric, config, tmp_path / "cache", injection)
    provider = MockProvider(config)
    labels = [aspect_label(rubric, a) for a in rubric.aspects]
    for record, row in zip(records, result.report.rows):
        assert row.baseline_total == sum(
            provider.expected_score(record.text, lab) for lab in labels
        )
        injected = inject_payload(record.text, injection)
        assert row.injected_total == sum(
            provider.expected_score(injected, lab) for lab in labels
        )


def test_run_injection_excludes_incomplete_sheets(tmp_path):
    records = synth_corpus(3)
    config = mock_endpoint(max_retries=0)
    sentinel = records[0].text[:20]

    class SelectiveMumbler(MockProvider):
        def complete(self, instructions, user_text, temperature, attempt=1):
            if (
                DEFAULT_PAYLOAD in user_text
                and sentinel in user_text
                and "Pealkiri" in instructions
            ):
                return ProviderResponse("segane vastus", 1, 1)
            return super().complete(instructions, user_text, temperature, attempt)

    result = run_injection(
        records,
        load_bundled_rubric(9),
        config,
        tmp_path / "cache",
        provider=SelectiveMumbler(config),
    )
    assert result.report.excluded == [records[0].essay_id]
    assert [r.essay_id for r in result.report.rows] == [r.essay_id for r in records[1:]]
    assert all(r.delta == 9 for r in result.report.rows)


def test_build_generation_prompt_drops_blanks():
    prompt = build_generation_prompt("Ülesanne.", "  ", ["Allikas 1.", "", "Allikas 2."])
    assert prompt == "Ülesanne.\n\nAllikas 1.\n\nAllikas 2."


def test_generate_essays_mock(tmp_path):
    result = generate_essays(
        "Ülesanne: kirjuta kirjand.",
        "Juhised: 200 sõna.",
        ["Allikas A.", "Allikas B."],
        n=5,
        endpoint=mock_endpoint(),
        cache_dir=tmp_path / "cache",
    )
    assert [e.essay_id for e in result.essays] == [f"gen-{i:03d}" for i in range(1, 6)]
    assert result.duplicates == []
    assert result.ledger.requests == 5
    texts = [e.text for e in result.essays]
    assert len(set(texts)) == 5  # per-variant user messages keep calls distinct
    m = result.manifest
    assert (m["n_requested"], m["n_generated"], m["failed"]) == (5, 5, [])
    assert len(m["essays"]) == 5
    assert all(e["chars"] > 0 for e in m["essays"])

    rerun = generate_essays(
        "Ülesanne: kirjuta kirjand.",
        "Juhised: 200 sõna.",
        ["Allikas A.", "Allikas B."],
        n=5,
        endpoint=mock_endpoint(),
        cache_dir=tmp_path / "cache",
    )
    assert rerun.ledger.cache_hits == 5
    assert [e.text for e in rerun.essays] == texts

    with pytest.raises(ValidationError, match="must be positive"):
        generate_essays("t", "g", [], n=0, endpoint=mock_endpoint(), cache_dir=tmp_path / "c2")


def test_generate_essays_flags_duplicates(tmp_path):
    config = mock_endpoint()

    class OneTrickPony(MockProvider):
        def complete(self, instructions, user_text, temperature, attempt=1):
            return ProviderResponse("Sama tekst iga kord.", 1, 1)

    result = generate_essays(
        "t", "g", [], n=4, endpoint=config, cache_dir=tmp_path / "cache",
        provider=OneTrickPony(config),
    )
    assert result.duplicates == ["gen-002", "gen-003", "gen-004"]
    assert result.manifest["duplicates"] == result.duplicates


def test_generate_essays_records_failures(tmp_path):
    config = mock_endpoint(max_retries=0)

    class FlakyThird(MockProvider):
        def complete(self, instructions, user_text, temperature, attempt=1):
            if "Variant 3." in user_text:
                raise TransportError("HTTP 400: bad request")
            return super().complete(instructions, user_text, temperature, attempt)

    result = generate_essays(
        "t", "g", [], n=4, endpoint=config, cache_dir=tmp_path / "cache",
        provider=FlakyThird(config),
    )
    assert result.manifest["failed"] == ["gen-003"]
    assert [e.essay_id for e in result.essays] == ["gen-001", "gen-002", "gen-004"]
