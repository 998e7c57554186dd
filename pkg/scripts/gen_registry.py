"""Regenerate the bundled feature registry file.

Usage: python scripts/gen_registry.py

The registry pins the full feature inventory: 108 features split into
Surface (12), Lexical (20), Grammatical (53), and Error (23) categories,
each associated with the language aspects it is allowed to predict.
Association counts per aspect are part of the contract: Punctuation 6,
Orthography 11, Structuring 11, Vocabulary 52, Syntax 62.
"""

from pathlib import Path

V, S, O, P, ST = "Vocabulary", "Syntax", "Orthography", "Punctuation", "Structuring"

SURFACE = [
    ("mean_word_length", [V, S]),
    ("mean_sentence_length", [V, S]),
    ("lix_index", [S]),
    ("smog_index", [S]),
    ("flesch_kincaid_grade", [S]),
    ("paragraph_count", [ST]),
    ("mean_paragraph_word_count", [ST]),
    ("sd_paragraph_word_count", [ST]),
    ("max_diff_paragraph_word_count", [ST]),
    ("mean_paragraph_sentence_count", [ST]),
    ("sd_paragraph_sentence_count", [ST]),
    ("max_diff_paragraph_sentence_count", [ST]),
]

LEXICAL = [
    ("lemma_count", [V]),
    ("ttr", [V]),
    ("rttr", [V]),
    ("cttr", [V]),
    ("herdan_c", [V]),
    ("maas_index", [V]),
    ("uber_index", [V]),
    ("mtld", [V]),
    ("cvv", [V]),
    ("noun_ttr", [V]),
    ("verb_ttr", [V]),
    ("adjective_ttr", [V]),
    ("adverb_ttr", [V]),
    ("rare_word_ratio_1000", [V, S]),
    ("rare_word_ratio_2000", [V, S]),
    ("rare_word_ratio_3000", [V, S]),
    ("rare_word_ratio_4000", [V, S]),
    ("rare_word_ratio_5000", [V, S]),
    ("mean_noun_abstractness", [V, S]),
    ("lexical_density", [V, S]),
]

GRAMMATICAL = [
    # part-of-speech distribution
    ("noun_ratio", [V, S]),
    ("pronoun_ratio", [V, S]),
    ("adjective_ratio", [V, S]),
    ("verb_ratio", [V, S]),
    ("adverb_ratio", [V, S]),
    ("conjunction_ratio", [V, S]),
    ("adposition_ratio", [V, S]),
    ("interjection_ratio", [V]),
    ("personal_pronoun_ratio", [V]),
    ("reflexive_pronoun_ratio", [V]),
    ("interrogative_relative_pronoun_ratio", [V]),
    ("demonstrative_pronoun_ratio", [V]),
    ("indefinite_pronoun_ratio", [V]),
    ("subordinating_conjunction_ratio", [V]),
    ("coordinating_conjunction_ratio", [V]),
    ("preposition_ratio", [V]),
    ("postposition_ratio", [V]),
    ("noun_verb_ratio", [V]),
    ("formality_score", [V, S]),
    # nominal morphology
    ("noun_case_form_count", [S]),
    ("pronoun_case_form_count", [S]),
    ("adjective_case_form_count", [S]),
    ("nominal_case_form_count", [S]),
    ("nominal_plural_ratio", [S]),
    ("noun_plural_ratio", [S]),
    ("pronoun_plural_ratio", [S]),
    ("adjective_plural_ratio", [S]),
    ("nominative_case_ratio", [S]),
    ("genitive_case_ratio", [S]),
    ("partitive_case_ratio", [S]),
    ("illative_case_ratio", [S]),
    ("inessive_case_ratio", [S]),
    ("elative_case_ratio", [S]),
    ("allative_case_ratio", [S]),
    ("adessive_case_ratio", [S]),
    ("ablative_case_ratio", [S]),
    ("translative_case_ratio", [S]),
    ("terminative_case_ratio", [S]),
    ("essive_case_ratio", [S]),
    ("abessive_case_ratio", [S]),
    ("comitative_case_ratio", [S]),
    # verb morphology
    ("finite_verb_ratio", [S]),
    ("indicative_mood_ratio", [S]),
    ("conditional_mood_ratio", [S]),
    ("imperative_mood_ratio", [S]),
    ("infinitive_ratio", [S]),
    ("participle_ratio", [S]),
    ("gerund_ratio", [S]),
    ("past_tense_ratio", [S]),
    ("plural_verb_ratio", [S]),
    ("passive_voice_ratio", [S]),
    ("verb_negation_ratio", [S]),
    ("second_person_verb_ratio", [V, S]),
]

ERROR = [
    ("word_replaced_count", [V, O, ST]),
    ("word_replaced_ratio", [V, O, ST]),
    ("word_missing_count", [V, S]),
    ("word_missing_ratio", [V, S]),
    ("word_unnecessary_count", [V, S]),
    ("word_unnecessary_ratio", [V, S]),
    ("punct_replaced_count", [P]),
    ("punct_replaced_ratio", [P]),
    ("punct_missing_count", [P]),
    ("punct_missing_ratio", [P]),
    ("punct_unnecessary_count", [P]),
    ("punct_unnecessary_ratio", [P]),
    ("whitespace_count", [O]),
    ("whitespace_ratio", [O]),
    ("word_order_count", [V, S]),
    ("word_order_ratio", [V, S]),
    ("spelling_correction_count", [O, ST]),
    ("spell_corrected_word_ratio", [O, ST]),
    ("mixed_count", [V, S, O]),
    ("mixed_ratio", [V, S, O]),
    ("total_edit_count", [O]),
    ("edits_per_word", [O]),
    ("edits_per_sentence", [O]),
]


def main() -> None:
    out = Path(__file__).resolve().parents[1] / "src" / "kirjand" / "data" / "feature_registry.toml"
    lines = ["# Feature registry: 108 features, categories 12/20/53/23,",
             "# aspect associations Punctuation 6, Orthography 11, Structuring 11,",
             "# Vocabulary 52, Syntax 62.  Regenerate with scripts/gen_registry.py.",
             ""]
    for category, table in (
        ("Surface", SURFACE),
        ("Lexical", LEXICAL),
        ("Grammatical", GRAMMATICAL),
        ("Error", ERROR),
    ):
        for name, aspects in table:
            lines.append("[[feature]]")
            lines.append(f'name = "{name}"')
            lines.append(f'category = "{category}"')
            lines.append("aspects = [" + ", ".join(f'"{a}"' for a in aspects) + "]")
            lines.append("")
    out.write_text("\n".join(lines), encoding="utf-8")

    counts = {V: 0, S: 0, O: 0, P: 0, ST: 0}
    total = 0
    for table in (SURFACE, LEXICAL, GRAMMATICAL, ERROR):
        for _, aspects in table:
            total += 1
            for a in aspects:
                counts[a] += 1
    print(f"wrote {out}")
    print(f"total={total} categories={[len(t) for t in (SURFACE, LEXICAL, GRAMMATICAL, ERROR)]}")
    print(f"aspect counts: {counts}")


if __name__ == "__main__":
    main()
