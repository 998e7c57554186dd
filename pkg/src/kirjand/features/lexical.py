"""Lexical diversity and word-choice features.

Type counting is lemma-based and casefolded throughout, so inflected
forms of one word do not inflate diversity.  Texts need at least two
word tokens; the log-based indices are undefined below that.
"""

from __future__ import annotations

import math
from pathlib import Path

from ..errors import ValidationError
from ..textproc import AnnotatedText, Token

MTLD_THRESHOLD = 0.72
#: Stand-in denominator when log N == log V makes the Uber index blow up.
UBER_EPSILON = 1e-12

RARE_TIERS = (1000, 2000, 3000, 4000, 5000)

NOUN_POS = {"NOUN", "PROPN"}
VERB_POS = {"VERB", "AUX"}
CONTENT_POS = NOUN_POS | VERB_POS | {"ADJ", "ADV"}


def load_frequency_list(path: str | Path) -> dict[str, int]:
    """One lemma per line, most frequent first; returns lemma -> 1-based rank."""
    ranks: dict[str, int] = {}
    rank = 0
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        lemma = line.strip().casefold()
        if not lemma:
            continue
        rank += 1
        ranks.setdefault(lemma, rank)
    if not ranks:
        raise ValidationError(f"frequency list {path} is empty")
    return ranks


def load_abstractness(path: str | Path) -> dict[str, float]:
    """TSV of lemma<TAB>rating with ratings on a 1..3 scale."""
    table: dict[str, float] = {}
    for line_no, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise ValidationError(f"{path}:{line_no}: expected lemma<TAB>rating")
        try:
            rating = float(parts[1])
        except ValueError as exc:
            raise ValidationError(f"{path}:{line_no}: bad rating {parts[1]!r}") from exc
        if not 1.0 <= rating <= 3.0:
            raise ValidationError(f"{path}:{line_no}: rating {rating} outside 1..3")
        table[parts[0].strip().casefold()] = rating
    if not table:
        raise ValidationError(f"abstractness lexicon {path} is empty")
    return table


def _mtld_factors(seq: list[str]) -> float:
    """Factor count for one direction of the MTLD walk.

    A factor completes whenever the running type-token ratio of the
    current stretch drops below the threshold; the leftover stretch adds
    a partial factor proportional to how far its ratio has fallen."""
    factors = 0.0
    types: set[str] = set()
    tokens = 0
    for item in seq:
        tokens += 1
        types.add(item)
        if len(types) / tokens < MTLD_THRESHOLD:
            factors += 1.0
            types = set()
            tokens = 0
    if tokens:
        ttr = len(types) / tokens
        factors += (1.0 - ttr) / (1.0 - MTLD_THRESHOLD)
    return factors


def mtld(seq: list[str]) -> float:
    """Bidirectional measure of textual lexical diversity.

    Both passes yielding zero factors means every token was distinct;
    diversity is then capped at the sequence length itself."""
    if not seq:
        return 0.0
    fwd = _mtld_factors(seq)
    bwd = _mtld_factors(list(reversed(seq)))
    mean_factors = (fwd + bwd) / 2.0
    if mean_factors == 0.0:
        return float(len(seq))
    return len(seq) / mean_factors


def _type_token(tokens: list[Token]) -> tuple[int, int]:
    return len({t.lemma.casefold() for t in tokens}), len(tokens)


def lexical_features(
    annotated: AnnotatedText,
    freq_ranks: dict[str, int],
    abstractness: dict[str, float],
) -> tuple[dict[str, float], list[str]]:
    """Compute the 20 lexical features plus data-quality flags.

    Flags mark values that are sentinels rather than measurements:
    a saturated Uber index (all lemmas distinct) and an abstractness
    mean with no lexicon matches."""
    words = [t for t in annotated.tokens() if t.is_word]
    n = len(words)
    if n < 2:
        raise ValidationError(f"need at least 2 word tokens, got {n}")
    flags: list[str] = []

    lemmas = [t.lemma.casefold() for t in words]
    v = len(set(lemmas))
    log_n = math.log(n)
    log_v = math.log(v)

    ttr = v / n
    rttr = v / math.sqrt(n)
    cttr = v / math.sqrt(2 * n)
    herdan_c = log_v / log_n
    maas = (log_n - log_v) / (log_n * log_n)
    if v == n:
        uber = (log_n * log_n) / UBER_EPSILON
        flags.append("uber_index_saturated")
    else:
        uber = (log_n * log_n) / (log_n - log_v)

    verbs = [t for t in words if t.pos in VERB_POS]
    v_verb, n_verb = _type_token(verbs)
    cvv = v_verb / math.sqrt(2 * n_verb) if n_verb else 0.0

    def pos_ttr(pos_set: set[str]) -> float:
        toks = [t for t in words if t.pos in pos_set]
        vv, nn = _type_token(toks)
        return vv / nn if nn else 0.0

    rare: dict[str, float] = {}
    for tier in RARE_TIERS:
        hits = sum(1 for lem in lemmas if freq_ranks.get(lem, tier + 1) > tier)
        rare[f"rare_word_ratio_{tier}"] = hits / n

    noun_ratings = [
        abstractness[t.lemma.casefold()]
        for t in words
        if t.pos in NOUN_POS and t.lemma.casefold() in abstractness
    ]
    if noun_ratings:
        mean_abstr = sum(noun_ratings) / len(noun_ratings)
    else:
        mean_abstr = 0.0
        flags.append("no_abstractness_matches")

    density = sum(1 for t in words if t.pos in CONTENT_POS) / n

    feats = {
        "lemma_count": float(v),
        "ttr": ttr,
        "rttr": rttr,
        "cttr": cttr,
        "herdan_c": herdan_c,
        "maas_index": maas,
        "uber_index": uber,
        "mtld": mtld(lemmas),
        "cvv": cvv,
        "noun_ttr": pos_ttr(NOUN_POS),
        "verb_ttr": pos_ttr(VERB_POS),
        "adjective_ttr": pos_ttr({"ADJ"}),
        "adverb_ttr": pos_ttr({"ADV"}),
        **rare,
        "mean_noun_abstractness": mean_abstr,
        "lexical_density": density,
    }
    return feats, flags
