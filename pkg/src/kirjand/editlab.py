"""Edit extraction: align an essay against its corrected version and
classify what changed.

Alignment is a unit-cost Levenshtein DP over tokens where substitution
is only allowed within a token class (word for word, punctuation for
punctuation).  Contiguous runs of non-equal operations form groups;
groups are then classified, with a folding pass that recognises word
order changes (the same words deleted in one place and inserted in
another within a sentence).

Spelling corrections never come out of the alignment.  They are applied
upstream of the corrected text and arrive as a separate per-essay
sidecar, so the aligner sees spell-fixed words as equal.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ValidationError
from .textproc import AnnotatedText, Token


class EditKind(enum.Enum):
    WORD_REPLACED = "word_replaced"
    WORD_MISSING = "word_missing"
    WORD_UNNECESSARY = "word_unnecessary"
    PUNCT_REPLACED = "punct_replaced"
    PUNCT_MISSING = "punct_missing"
    PUNCT_UNNECESSARY = "punct_unnecessary"
    WHITESPACE = "whitespace"
    WORD_ORDER = "word_order"
    SPELLING = "spelling"
    MIXED = "mixed"


#: Kinds produced by alignment classification (everything but spelling).
ALIGNMENT_KINDS = tuple(k for k in EditKind if k is not EditKind.SPELLING)


@dataclass(frozen=True)
class Edit:
    """One classified edit; spans are half-open token index ranges."""

    kind: EditKind
    orig_span: tuple[int, int]
    corr_span: tuple[int, int]


@dataclass(frozen=True)
class SpellCorrection:
    token_index: int
    original: str
    corrected: str


@dataclass
class EditSet:
    edits: list[Edit]
    word_count: int
    sentence_count: int
    spell_corrections: list[SpellCorrection] = field(default_factory=list)

    @property
    def total_edit_count(self) -> int:
        # Spelling is tracked separately and does not count here.
        return sum(1 for e in self.edits if e.kind is not EditKind.SPELLING)

    @property
    def spell_corrected_words(self) -> int:
        return len({c.token_index for c in self.spell_corrections})


# --- alignment ---------------------------------------------------------

EQ = "eq"
SUB = "sub"
DEL = "del"
INS = "ins"


@dataclass(frozen=True)
class Op:
    op: str
    i: int  # position in the original token sequence
    j: int  # position in the corrected token sequence


def _same_class(a: Token, b: Token) -> bool:
    return a.is_word == b.is_word


def align_tokens(orig: list[Token], corr: list[Token]) -> list[Op]:
    """Minimal-cost alignment with a deterministic backtrack.

    Ties are broken in the order substitution, deletion, insertion, so
    reruns always produce the same operation sequence.
    """
    n, m = len(orig), len(corr)
    inf = n + m + 1
    cost = [[0] * (m + 1) for _ in range(n + 1)]
    for i in range(1, n + 1):
        cost[i][0] = i
    for j in range(1, m + 1):
        cost[0][j] = j
    for i in range(1, n + 1):
        for j in range(1, m + 1):
            a, b = orig[i - 1], corr[j - 1]
            if a.surface == b.surface:
                diag = cost[i - 1][j - 1]
            elif _same_class(a, b):
                diag = cost[i - 1][j - 1] + 1
            else:
                diag = inf
            cost[i][j] = min(diag, cost[i - 1][j] + 1, cost[i][j - 1] + 1)

    ops: list[Op] = []
    i, j = n, m
    while i > 0 or j > 0:
        if i > 0 and j > 0:
            a, b = orig[i - 1], corr[j - 1]
            if a.surface == b.surface and cost[i][j] == cost[i - 1][j - 1]:
                ops.append(Op(EQ, i - 1, j - 1))
                i, j = i - 1, j - 1
                continue
            if _same_class(a, b) and cost[i][j] == cost[i - 1][j - 1] + 1:
                ops.append(Op(SUB, i - 1, j - 1))
                i, j = i - 1, j - 1
                continue
        if i > 0 and cost[i][j] == cost[i - 1][j] + 1:
            ops.append(Op(DEL, i - 1, j))
            i -= 1
            continue
        ops.append(Op(INS, i, j - 1))
        j -= 1
    ops.reverse()
    return ops


def alignment_cost(orig: list[Token], corr: list[Token]) -> int:
    return sum(1 for op in align_tokens(orig, corr) if op.op != EQ)


# --- grouping and classification ---------------------------------------


@dataclass
class _Group:
    ops: list[Op]

    @property
    def orig_span(self) -> tuple[int, int]:
        touched = [op.i for op in self.ops if op.op in (SUB, DEL)]
        if touched:
            return (min(touched), max(touched) + 1)
        anchor = self.ops[0].i
        return (anchor, anchor)

    @property
    def corr_span(self) -> tuple[int, int]:
        touched = [op.j for op in self.ops if op.op in (SUB, INS)]
        if touched:
            return (min(touched), max(touched) + 1)
        anchor = self.ops[0].j
        return (anchor, anchor)


def _groups_from_ops(ops: list[Op]) -> list[_Group]:
    groups: list[_Group] = []
    run: list[Op] = []
    for op in ops:
        if op.op == EQ:
            if run:
                groups.append(_Group(run))
                run = []
        else:
            run.append(op)
    if run:
        groups.append(_Group(run))
    return groups


@dataclass(frozen=True)
class _Item:
    """A word removed from or added to the text, up for order matching."""

    group_idx: int
    op_idx: int  # index of the op inside its group
    token: Token
    is_sub: bool


def _sentence_ranges(annotated: AnnotatedText) -> list[tuple[int, int]]:
    ranges = []
    start = 0
    for sent in annotated.sentences():
        ranges.append((start, start + len(sent.tokens)))
        start += len(sent.tokens)
    return ranges


def _sentence_of(pos: int, ranges: list[tuple[int, int]]) -> int:
    for idx, (lo, hi) in enumerate(ranges):
        if lo <= pos < hi:
            return idx
    return max(len(ranges) - 1, 0)


def _classify_plain(group: _Group, orig: list[Token], corr: list[Token]) -> EditKind:
    """Classify a group that did not participate in word-order folding."""
    op_kinds = {op.op for op in group.ops}
    classes = set()
    for op in group.ops:
        if op.op in (SUB, DEL):
            classes.add(orig[op.i].is_word)
        if op.op in (SUB, INS):
            classes.add(corr[op.j].is_word)

    if classes == {True}:
        orig_concat = "".join(orig[op.i].surface for op in group.ops if op.op in (SUB, DEL))
        corr_concat = "".join(corr[op.j].surface for op in group.ops if op.op in (SUB, INS))
        n_orig = sum(1 for op in group.ops if op.op in (SUB, DEL))
        n_corr = sum(1 for op in group.ops if op.op in (SUB, INS))
        if orig_concat == corr_concat and n_orig != n_corr:
            return EditKind.WHITESPACE
        if op_kinds == {INS}:
            return EditKind.WORD_MISSING
        if op_kinds == {DEL}:
            return EditKind.WORD_UNNECESSARY
        return EditKind.WORD_REPLACED
    if classes == {False}:
        if op_kinds == {INS}:
            return EditKind.PUNCT_MISSING
        if op_kinds == {DEL}:
            return EditKind.PUNCT_UNNECESSARY
        return EditKind.PUNCT_REPLACED
    return EditKind.MIXED


def classify_edits(orig: AnnotatedText, corr: AnnotatedText) -> list[Edit]:
    """Align two texts and turn the operation groups into typed edits."""
    orig_tokens = list(orig.tokens())
    corr_tokens = list(corr.tokens())
    ops = align_tokens(orig_tokens, corr_tokens)
    groups = _groups_from_ops(ops)
    if not groups:
        return []

    sent_ranges = _sentence_ranges(orig)

    # Word-order folding: within each original-side sentence, greedily
    # match removed words to added words by casefolded surface or lemma.
    # A substitution's own two sides must not match each other, else
    # every inflection change would look like a move.
    del_items: dict[int, list[_Item]] = {}
    ins_items: dict[int, list[_Item]] = {}
    group_sentence: list[int] = []
    for g_idx, group in enumerate(groups):
        s_idx = _sentence_of(group.ops[0].i, sent_ranges) if sent_ranges else 0
        group_sentence.append(s_idx)
        for o_idx, op in enumerate(group.ops):
            if op.op in (SUB, DEL) and orig_tokens[op.i].is_word:
                del_items.setdefault(s_idx, []).append(
                    _Item(g_idx, o_idx, orig_tokens[op.i], op.op == SUB)
                )
            if op.op in (SUB, INS) and corr_tokens[op.j].is_word:
                ins_items.setdefault(s_idx, []).append(
                    _Item(g_idx, o_idx, corr_tokens[op.j], op.op == SUB)
                )

    def compatible(d: _Item, a: _Item) -> bool:
        if d.is_sub and a.is_sub and d.group_idx == a.group_idx and d.op_idx == a.op_idx:
            return False
        return (
            d.token.surface.casefold() == a.token.surface.casefold()
            or d.token.lemma == a.token.lemma
        )

    parent = list(range(len(groups)))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x: int, y: int) -> None:
        parent[find(x)] = find(y)

    matched_del: set[tuple[int, int]] = set()
    matched_ins: set[tuple[int, int]] = set()
    any_match: set[int] = set()
    for s_idx, dels in del_items.items():
        adds = ins_items.get(s_idx, [])
        for d in dels:
            for a in adds:
                key_a = (a.group_idx, a.op_idx)
                if key_a in matched_ins or not compatible(d, a):
                    continue
                matched_del.add((d.group_idx, d.op_idx))
                matched_ins.add(key_a)
                union(d.group_idx, a.group_idx)
                any_match.update((d.group_idx, a.group_idx))
                break

    components: dict[int, list[int]] = {}
    for g_idx in range(len(groups)):
        if g_idx in any_match:
            components.setdefault(find(g_idx), []).append(g_idx)

    edits: list[Edit] = []
    folded: set[int] = set()
    for members in components.values():
        folded.update(members)
        pure = True
        for g_idx in members:
            for o_idx, op in enumerate(groups[g_idx].ops):
                if op.op in (SUB, DEL):
                    if not orig_tokens[op.i].is_word:
                        pure = False
                    elif (g_idx, o_idx) not in matched_del:
                        pure = False
                if op.op in (SUB, INS):
                    if not corr_tokens[op.j].is_word:
                        pure = False
                    elif (g_idx, o_idx) not in matched_ins:
                        pure = False
        spans_o = [groups[g].orig_span for g in members]
        spans_c = [groups[g].corr_span for g in members]
        edits.append(
            Edit(
                kind=EditKind.WORD_ORDER if pure else EditKind.MIXED,
                orig_span=(min(s[0] for s in spans_o), max(s[1] for s in spans_o)),
                corr_span=(min(s[0] for s in spans_c), max(s[1] for s in spans_c)),
            )
        )

    for g_idx, group in enumerate(groups):
        if g_idx in folded:
            continue
        kind = _classify_plain(group, orig_tokens, corr_tokens)
        edits.append(Edit(kind, group.orig_span, group.corr_span))

    edits.sort(key=lambda e: (e.orig_span, e.corr_span, e.kind.value))
    return edits


def build_edit_set(
    orig: AnnotatedText,
    corr: AnnotatedText,
    spell_corrections: list[SpellCorrection] | None = None,
) -> EditSet:
    spell = list(spell_corrections or [])
    edits = classify_edits(orig, corr)
    for sc in spell:
        edits.append(
            Edit(EditKind.SPELLING, (sc.token_index, sc.token_index + 1),
                 (sc.token_index, sc.token_index + 1))
        )
    word_count = sum(1 for t in orig.tokens() if t.is_word)
    if len({sc.token_index for sc in spell}) > word_count:
        raise ValidationError(
            "spell sidecar corrects more distinct tokens than the essay has words"
        )
    return EditSet(
        edits=edits,
        word_count=word_count,
        sentence_count=sum(1 for _ in orig.sentences()),
        spell_corrections=spell,
    )


def read_spell_tsv(path: str | Path) -> list[SpellCorrection]:
    """Parse a spelling sidecar: token_index<TAB>original<TAB>corrected."""
    rows: list[SpellCorrection] = []
    for line_no, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise ValidationError(f"{path}:{line_no}: expected 3 tab-separated fields")
        try:
            idx = int(parts[0])
        except ValueError as exc:
            raise ValidationError(f"{path}:{line_no}: bad token index {parts[0]!r}") from exc
        if idx < 0:
            raise ValidationError(f"{path}:{line_no}: negative token index")
        rows.append(SpellCorrection(idx, parts[1], parts[2]))
    return rows


# --- error features ----------------------------------------------------

ERROR_FEATURE_NAMES: tuple[str, ...] = tuple(
    name
    for kind in ALIGNMENT_KINDS
    for name in (f"{kind.value}_count", f"{kind.value}_ratio")
) + (
    "spelling_correction_count",
    "spell_corrected_word_ratio",
    "total_edit_count",
    "edits_per_word",
    "edits_per_sentence",
)


def error_features(edit_set: EditSet) -> dict[str, float]:
    """The 23 error-derived features.

    Per-kind ratios are shares of the total (non-spelling) edit count;
    the spelling ratio is over the word count.  Every ratio is 0 when
    its denominator is 0 so empty texts still produce finite rows.
    """
    words = edit_set.word_count
    sents = edit_set.sentence_count

    def ratio(num: float, den: float) -> float:
        return num / den if den else 0.0

    counts = {kind: 0 for kind in ALIGNMENT_KINDS}
    for e in edit_set.edits:
        if e.kind is not EditKind.SPELLING:
            counts[e.kind] += 1
    total = edit_set.total_edit_count
    feats: dict[str, float] = {}
    for kind in ALIGNMENT_KINDS:
        feats[f"{kind.value}_count"] = float(counts[kind])
        feats[f"{kind.value}_ratio"] = ratio(counts[kind], total)
    feats["spelling_correction_count"] = float(len(edit_set.spell_corrections))
    feats["spell_corrected_word_ratio"] = ratio(edit_set.spell_corrected_words, words)
    feats["total_edit_count"] = float(total)
    feats["edits_per_word"] = ratio(total, words)
    feats["edits_per_sentence"] = ratio(total, sents)
    assert tuple(feats) == ERROR_FEATURE_NAMES
    return feats
