import importlib.util
import random
from pathlib import Path

import pytest

from kirjand.corpus import ASPECTS, AspectScores, EssayRecord
from kirjand.llmgrade.providers import EndpointConfig

FIXTURES = Path(__file__).parent / "fixtures"
REPO_ROOT = Path(__file__).resolve().parents[1]

# Vocabulary for synthetic essay bodies; variety matters only so the
# mock grader's hash-derived scores spread over the scale.
_WORDS = (
    "elu mets linn aeg inimene kool raamat tee meri taevas "
    "mõte sõna päev öö valgus vari küsimus vastus algus lõpp"
).split()


def load_script(name: str):
    """Import a file from scripts/ (they are not an installed package)."""
    path = REPO_ROOT / "scripts" / f"{name}.py"
    spec = importlib.util.spec_from_file_location(name, path)
    module = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(module)
    return module


@pytest.fixture(scope="session")
def feature_oracle():
    return load_script("feature_oracle")


@pytest.fixture(scope="session")
def lexicon_dir(tmp_path_factory, feature_oracle):
    """Frequency list and abstractness lexicon matching the oracle's
    rank and rating literals."""
    out = tmp_path_factory.mktemp("lexicons")
    placed = {i + 1: lemma for i, lemma in enumerate(feature_oracle.TOP_LEMMAS)}
    placed.update({1500: "sõber", 2500: "raamat", 3500: "kirjutama", 4500: "ütlema"})
    lines = [placed.get(rank, f"filler{rank:05d}") for rank in range(1, 4601)]
    (out / "freq.txt").write_text("\n".join(lines) + "\n", encoding="utf-8")
    (out / "abstr.tsv").write_text(
        "".join(f"{k}\t{v}\n" for k, v in feature_oracle.ABSTRACTNESS.items()),
        encoding="utf-8",
    )
    return out


def synth_text(rng: random.Random, n_words: int = 40) -> str:
    words = [rng.choice(_WORDS) for _ in range(n_words)]
    half = len(words) // 2
    first = " ".join(words[:half]).capitalize() + "."
    second = " ".join(words[half:]).capitalize() + "."
    return f"{first}\n\n{second}"


def synth_corpus(n: int, seed: int = 0, grade_level: int = 9) -> list[EssayRecord]:
    rng = random.Random(seed)
    records = []
    for i in range(n):
        records.append(
            EssayRecord(
                essay_id=f"e{i:03d}",
                grade_level=grade_level,
                text=synth_text(rng),
                scores_g1=AspectScores.from_mapping(
                    {a.value: rng.randint(0, 3) for a in ASPECTS}
                ),
                scores_g2=AspectScores.from_mapping(
                    {a.value: rng.randint(0, 3) for a in ASPECTS}
                ),
            )
        )
    return records


def mock_endpoint(**overrides) -> EndpointConfig:
    defaults = dict(
        kind="mock",
        model_id="mock-test",
        retry_base_s=0.0,
        concurrency_limit=4,
    )
    defaults.update(overrides)
    return EndpointConfig(**defaults)
