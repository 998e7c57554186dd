"""Surface features: word/sentence length, readability, paragraph shape."""

from __future__ import annotations

import math

from ..textproc import AnnotatedText, count_syllables


def _syllables(surface: str) -> int:
    # Tokens without letters (numbers, symbols) count as one syllable.
    if not any(ch.isalpha() for ch in surface):
        return 1
    return count_syllables(surface)


def _mean(xs: list[float]) -> float:
    return sum(xs) / len(xs) if xs else 0.0


def _pop_sd(xs: list[float]) -> float:
    if not xs:
        return 0.0
    mu = _mean(xs)
    return math.sqrt(sum((x - mu) ** 2 for x in xs) / len(xs))


def surface_features(annotated: AnnotatedText) -> dict[str, float]:
    words = [t for t in annotated.tokens() if t.is_word]
    n_words = len(words)
    n_sents = sum(1 for _ in annotated.sentences())

    mean_word_length = _mean([float(len(t.surface)) for t in words])
    mean_sentence_length = n_words / n_sents if n_sents else 0.0

    long_words = sum(1 for t in words if len(t.surface) > 6)
    lix = (n_words / n_sents + 100.0 * long_words / n_words) if n_words and n_sents else 0.0

    syllable_counts = [_syllables(t.surface) for t in words]
    polysyllables = sum(1 for c in syllable_counts if c >= 3)
    smog = 1.043 * math.sqrt(polysyllables * 30.0 / n_sents) + 3.1291 if n_sents else 0.0
    fkgl = (
        0.39 * (n_words / n_sents) + 11.8 * (sum(syllable_counts) / n_words) - 15.59
        if n_words and n_sents
        else 0.0
    )

    para_words: list[float] = []
    para_sents: list[float] = []
    for p in annotated.paragraphs:
        para_sents.append(float(len(p.sentences)))
        para_words.append(float(sum(len(s.words) for s in p.sentences)))

    def spread(xs: list[float]) -> float:
        return max(xs) - min(xs) if xs else 0.0

    return {
        "mean_word_length": mean_word_length,
        "mean_sentence_length": mean_sentence_length,
        "lix_index": lix,
        "smog_index": smog,
        "flesch_kincaid_grade": fkgl,
        "paragraph_count": float(len(annotated.paragraphs)),
        "mean_paragraph_word_count": _mean(para_words),
        "sd_paragraph_word_count": _pop_sd(para_words),
        "max_diff_paragraph_word_count": spread(para_words),
        "mean_paragraph_sentence_count": _mean(para_sents),
        "sd_paragraph_sentence_count": _pop_sd(para_sents),
        "max_diff_paragraph_sentence_count": spread(para_sents),
    }
