"""Grammatical features from universal POS tags and morphological feats.

Class conventions: nouns include proper nouns, verbs include
auxiliaries, conjunctions cover both coordinating and subordinating
tags.  Subtype ratios use their parent class as denominator (pronoun
subtypes over pronouns, moods over verbs, cases over nominals); any
ratio with an empty denominator is 0.
"""

from __future__ import annotations

from ..textproc import AnnotatedText, Token

NOUN_POS = {"NOUN", "PROPN"}
VERB_POS = {"VERB", "AUX"}
CONJ_POS = {"CCONJ", "SCONJ"}
NOMINAL_POS = NOUN_POS | {"PRON", "ADJ"}

#: The fourteen Estonian cases, in traditional order.  `Add` (the short
#: "aditiiv" form) is folded into the illative, which it realises.
CASES = (
    ("nominative", "Nom"),
    ("genitive", "Gen"),
    ("partitive", "Par"),
    ("illative", "Ill"),
    ("inessive", "Ine"),
    ("elative", "Ela"),
    ("allative", "All"),
    ("adessive", "Ade"),
    ("ablative", "Abl"),
    ("translative", "Tra"),
    ("terminative", "Ter"),
    ("essive", "Ess"),
    ("abessive", "Abe"),
    ("comitative", "Com"),
)
_CASE_FOLD = {"Add": "Ill"}


def _feat(token: Token, key: str) -> str | None:
    for k, v in token.feats:
        if k == key:
            return v
    return None


def _case_of(token: Token) -> str | None:
    raw = _feat(token, "Case")
    if raw is None:
        return None
    return _CASE_FOLD.get(raw, raw)


def _ratio(num: float, den: float) -> float:
    return num / den if den else 0.0


def grammatical_features(annotated: AnnotatedText) -> dict[str, float]:
    words = [t for t in annotated.tokens() if t.is_word]
    n = len(words)

    nouns = [t for t in words if t.pos in NOUN_POS]
    pronouns = [t for t in words if t.pos == "PRON"]
    adjectives = [t for t in words if t.pos == "ADJ"]
    verbs = [t for t in words if t.pos in VERB_POS]
    adverbs = [t for t in words if t.pos == "ADV"]
    conjunctions = [t for t in words if t.pos in CONJ_POS]
    adpositions = [t for t in words if t.pos == "ADP"]
    interjections = [t for t in words if t.pos == "INTJ"]
    nominals = [t for t in words if t.pos in NOMINAL_POS]

    feats: dict[str, float] = {
        "noun_ratio": _ratio(len(nouns), n),
        "pronoun_ratio": _ratio(len(pronouns), n),
        "adjective_ratio": _ratio(len(adjectives), n),
        "verb_ratio": _ratio(len(verbs), n),
        "adverb_ratio": _ratio(len(adverbs), n),
        "conjunction_ratio": _ratio(len(conjunctions), n),
        "adposition_ratio": _ratio(len(adpositions), n),
        "interjection_ratio": _ratio(len(interjections), n),
    }

    def prontype(token: Token) -> str | None:
        return _feat(token, "PronType")

    feats["personal_pronoun_ratio"] = _ratio(
        sum(1 for t in pronouns if prontype(t) == "Prs" and _feat(t, "Reflex") != "Yes"),
        len(pronouns),
    )
    feats["reflexive_pronoun_ratio"] = _ratio(
        sum(1 for t in pronouns if _feat(t, "Reflex") == "Yes"), len(pronouns)
    )
    feats["interrogative_relative_pronoun_ratio"] = _ratio(
        sum(1 for t in pronouns if prontype(t) in ("Int", "Rel")), len(pronouns)
    )
    feats["demonstrative_pronoun_ratio"] = _ratio(
        sum(1 for t in pronouns if prontype(t) == "Dem"), len(pronouns)
    )
    feats["indefinite_pronoun_ratio"] = _ratio(
        sum(1 for t in pronouns if prontype(t) == "Ind"), len(pronouns)
    )
    feats["subordinating_conjunction_ratio"] = _ratio(
        sum(1 for t in conjunctions if t.pos == "SCONJ"), len(conjunctions)
    )
    feats["coordinating_conjunction_ratio"] = _ratio(
        sum(1 for t in conjunctions if t.pos == "CCONJ"), len(conjunctions)
    )
    feats["preposition_ratio"] = _ratio(
        sum(1 for t in adpositions if _feat(t, "AdpType") == "Prep"), len(adpositions)
    )
    feats["postposition_ratio"] = _ratio(
        sum(1 for t in adpositions if _feat(t, "AdpType") == "Post"), len(adpositions)
    )
    feats["noun_verb_ratio"] = _ratio(len(nouns), len(verbs))

    def pct(count: int) -> float:
        return _ratio(100.0 * count, n)

    feats["formality_score"] = (
        pct(len(nouns))
        + pct(len(adjectives))
        + pct(len(adpositions))
        - pct(len(pronouns))
        - pct(len(verbs))
        - pct(len(adverbs))
        - pct(len(interjections))
        + 100.0
    ) / 2.0

    def case_form_count(toks: list[Token]) -> float:
        return float(len({_case_of(t) for t in toks if _case_of(t) is not None}))

    feats["noun_case_form_count"] = case_form_count(nouns)
    feats["pronoun_case_form_count"] = case_form_count(pronouns)
    feats["adjective_case_form_count"] = case_form_count(adjectives)
    feats["nominal_case_form_count"] = case_form_count(nominals)

    def plural_ratio(toks: list[Token]) -> float:
        return _ratio(sum(1 for t in toks if _feat(t, "Number") == "Plur"), len(toks))

    feats["nominal_plural_ratio"] = plural_ratio(nominals)
    feats["noun_plural_ratio"] = plural_ratio(nouns)
    feats["pronoun_plural_ratio"] = plural_ratio(pronouns)
    feats["adjective_plural_ratio"] = plural_ratio(adjectives)

    for case_name, code in CASES:
        feats[f"{case_name}_case_ratio"] = _ratio(
            sum(1 for t in nominals if _case_of(t) == code), len(nominals)
        )

    def verb_ratio(pred) -> float:
        return _ratio(sum(1 for t in verbs if pred(t)), len(verbs))

    feats["finite_verb_ratio"] = verb_ratio(lambda t: _feat(t, "VerbForm") == "Fin")
    feats["indicative_mood_ratio"] = verb_ratio(lambda t: _feat(t, "Mood") == "Ind")
    feats["conditional_mood_ratio"] = verb_ratio(lambda t: _feat(t, "Mood") == "Cnd")
    feats["imperative_mood_ratio"] = verb_ratio(lambda t: _feat(t, "Mood") == "Imp")
    feats["infinitive_ratio"] = verb_ratio(lambda t: _feat(t, "VerbForm") == "Inf")
    feats["participle_ratio"] = verb_ratio(lambda t: _feat(t, "VerbForm") == "Part")
    feats["gerund_ratio"] = verb_ratio(lambda t: _feat(t, "VerbForm") in ("Conv", "Ger"))
    feats["past_tense_ratio"] = verb_ratio(lambda t: _feat(t, "Tense") == "Past")
    feats["plural_verb_ratio"] = verb_ratio(lambda t: _feat(t, "Number") == "Plur")
    feats["passive_voice_ratio"] = verb_ratio(lambda t: _feat(t, "Voice") == "Pass")
    feats["verb_negation_ratio"] = verb_ratio(lambda t: _feat(t, "Polarity") == "Neg")
    feats["second_person_verb_ratio"] = verb_ratio(lambda t: _feat(t, "Person") == "2")
    return feats
