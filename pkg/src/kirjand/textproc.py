"""Text structure: tokens, sentences, paragraphs, and two ways to get them.

`segment` applies light heuristics to raw essay text (no morphology);
`parse_conllu` reads morphologically annotated files in the standard
ten-column CoNLL-U format.  Both produce the same `AnnotatedText`
shape so downstream feature code does not care where tokens came from.
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator

from .errors import ConlluError, InvariantError

#: Universal POS tag used for punctuation tokens.
PUNCT = "PUNCT"
#: Placeholder POS for tokens produced without morphological analysis.
UNKNOWN_POS = "X"

VOWELS = set("aeiouõäöü")
#: A vowel that continues the preceding vowel's syllable when it differs
#: from it (the second element of Estonian diphthongs).
DIPHTHONG_TAILS = set("eiu")
SENTENCE_TERMINATORS = set(".!?…")


@dataclass(frozen=True, eq=True)
class Token:
    surface: str
    lemma: str
    pos: str
    feats: tuple[tuple[str, str], ...]
    start: int
    end: int

    @property
    def is_word(self) -> bool:
        return self.pos != PUNCT

    @property
    def char_span(self) -> tuple[int, int]:
        return (self.start, self.end)

    @property
    def feats_dict(self) -> dict[str, str]:
        return dict(self.feats)


@dataclass(frozen=True)
class Sentence:
    tokens: tuple[Token, ...]

    @property
    def words(self) -> tuple[Token, ...]:
        return tuple(t for t in self.tokens if t.is_word)


@dataclass(frozen=True)
class Paragraph:
    sentences: tuple[Sentence, ...]


@dataclass(frozen=True)
class AnnotatedText:
    text: str
    paragraphs: tuple[Paragraph, ...]

    def sentences(self) -> Iterator[Sentence]:
        for p in self.paragraphs:
            yield from p.sentences

    def tokens(self) -> Iterator[Token]:
        for s in self.sentences():
            yield from s.tokens

    def words(self) -> Iterator[Token]:
        return (t for t in self.tokens() if t.is_word)

    def check_spans(self) -> None:
        """Spans must be in order, non-overlapping, and match the text."""
        prev_end = 0
        for t in self.tokens():
            if t.start < prev_end or t.end < t.start:
                raise InvariantError(
                    f"token span {t.char_span} overlaps or is reversed at {t.surface!r}"
                )
            if self.text[t.start : t.end] != t.surface:
                raise InvariantError(
                    f"span {t.char_span} reads "
                    f"{self.text[t.start:t.end]!r}, token says {t.surface!r}"
                )
            prev_end = t.end


def _is_punct_char(ch: str) -> bool:
    return unicodedata.category(ch).startswith("P")


def _mk_token(surface: str, start: int, punct: bool) -> Token:
    return Token(
        surface=surface,
        lemma=surface,
        pos=PUNCT if punct else UNKNOWN_POS,
        feats=(),
        start=start,
        end=start + len(surface),
    )


def _split_chunk(chunk: str, offset: int) -> list[Token]:
    """Detach leading and trailing punctuation characters from a chunk.

    Interior punctuation (compound hyphens, apostrophes) stays attached
    to the word.  Chunks that are punctuation throughout become one
    punctuation token per character.
    """
    left = 0
    right = len(chunk)
    while left < right and _is_punct_char(chunk[left]):
        left += 1
    while right > left and _is_punct_char(chunk[right - 1]):
        right -= 1
    tokens: list[Token] = []
    for i in range(left):
        tokens.append(_mk_token(chunk[i], offset + i, punct=True))
    if right > left:
        tokens.append(_mk_token(chunk[left:right], offset + left, punct=False))
    for i in range(right, len(chunk)):
        tokens.append(_mk_token(chunk[i], offset + i, punct=True))
    return tokens


def _paragraph_blocks(text: str) -> list[tuple[int, int]]:
    """Offsets of maximal runs of lines that contain non-whitespace."""
    blocks: list[tuple[int, int]] = []
    start: int | None = None
    pos = 0
    for line in text.splitlines(keepends=True):
        stripped = line.rstrip("\n\r")
        if stripped.strip():
            if start is None:
                start = pos
            end = pos + len(stripped)
        else:
            if start is not None:
                blocks.append((start, end))
                start = None
        pos += len(line)
    if start is not None:
        blocks.append((start, end))
    return blocks


def segment(text: str) -> AnnotatedText:
    """Split raw text into paragraphs, sentences, and tokens.

    Paragraphs are separated by blank lines.  Tokens are whitespace-
    delimited chunks with edge punctuation detached.  A sentence ends
    after a terminal mark (. ! ? …) that is followed by whitespace and
    then an uppercase letter or a digit, and always at paragraph end.
    """
    paragraphs: list[Paragraph] = []
    for pstart, pend in _paragraph_blocks(text):
        block = text[pstart:pend]
        chunks = [(m.group(), pstart + m.start()) for m in re.finditer(r"\S+", block)]
        sentences: list[Sentence] = []
        current: list[Token] = []
        for i, (chunk, offset) in enumerate(chunks):
            current.extend(_split_chunk(chunk, offset))
            if i + 1 < len(chunks):
                nxt = chunks[i + 1][0][0]
                boundary = (
                    chunk[-1] in SENTENCE_TERMINATORS
                    and (nxt.isupper() or nxt.isdigit())
                )
            else:
                boundary = True
            if boundary and current:
                sentences.append(Sentence(tuple(current)))
                current = []
        if sentences:
            paragraphs.append(Paragraph(tuple(sentences)))
    return AnnotatedText(text=text, paragraphs=tuple(paragraphs))


_RANGE_ID = re.compile(r"^\d+-\d+$")
_EMPTY_ID = re.compile(r"^\d+\.\d+$")
_PLAIN_ID = re.compile(r"^\d+$")


def _parse_feats(raw: str) -> tuple[tuple[str, str], ...]:
    if raw in ("_", ""):
        return ()
    pairs: list[tuple[str, str]] = []
    for item in raw.split("|"):
        key, sep, value = item.partition("=")
        if not sep:
            raise ConlluError(f"malformed feature item {item!r}")
        pairs.append((key, value))
    return tuple(pairs)


def parse_conllu(source: str | Path) -> AnnotatedText:
    """Read a CoNLL-U file (or literal text containing newlines).

    Sentences are blank-line separated blocks of ten tab-separated
    columns; `# newpar` comments open a new paragraph.  Multiword range
    lines (id `1-2`) and empty nodes (id `1.1`) are skipped.  The
    surface text is reconstructed from token forms honouring
    `SpaceAfter=No`, and spans index into that reconstruction.
    """
    if isinstance(source, Path) or "\n" not in str(source):
        raw = Path(source).read_text(encoding="utf-8")
    else:
        raw = str(source)

    para_sentences: list[list[list[tuple[str, str, str, tuple, bool]]]] = [[]]
    sent: list[tuple[str, str, str, tuple, bool]] = []
    new_par_pending = False

    def close_sentence() -> None:
        nonlocal sent, new_par_pending
        if sent:
            if new_par_pending and para_sentences[-1]:
                para_sentences.append([])
            new_par_pending = False
            para_sentences[-1].append(sent)
            sent = []

    for line_no, line in enumerate(raw.splitlines(), start=1):
        if not line.strip():
            close_sentence()
            continue
        if line.startswith("#"):
            comment = line[1:].strip()
            if comment == "newpar" or comment.startswith("newpar "):
                new_par_pending = True
            continue
        cols = line.split("\t")
        if len(cols) != 10:
            raise ConlluError(f"line {line_no}: expected 10 columns, got {len(cols)}")
        tok_id, form, lemma, upos, _xpos, feats, _head, _deprel, _deps, misc = cols
        if _RANGE_ID.match(tok_id) or _EMPTY_ID.match(tok_id):
            continue
        if not _PLAIN_ID.match(tok_id):
            raise ConlluError(f"line {line_no}: bad token id {tok_id!r}")
        space_after = "SpaceAfter=No" not in misc.split("|")
        sent.append((form, lemma if lemma != "_" else form, upos, _parse_feats(feats), space_after))
    close_sentence()

    text_parts: list[str] = []
    cursor = 0
    paragraphs: list[Paragraph] = []
    for psents in para_sentences:
        if not psents:
            continue
        if paragraphs:
            text_parts.append("\n\n")
            cursor += 2
        sentences: list[Sentence] = []
        pending_space = False
        for stoks in psents:
            tokens: list[Token] = []
            for form, lemma, upos, feats, space_after in stoks:
                if pending_space:
                    text_parts.append(" ")
                    cursor += 1
                tokens.append(
                    Token(
                        surface=form,
                        lemma=lemma,
                        pos=upos,
                        feats=feats,
                        start=cursor,
                        end=cursor + len(form),
                    )
                )
                text_parts.append(form)
                cursor += len(form)
                pending_space = space_after
            sentences.append(Sentence(tuple(tokens)))
        paragraphs.append(Paragraph(tuple(sentences)))

    annotated = AnnotatedText(text="".join(text_parts), paragraphs=tuple(paragraphs))
    annotated.check_spans()
    return annotated


def count_syllables(word: str) -> int:
    """Count syllables of an Estonian word from its vowel structure.

    Maximal vowel runs are found first; inside a run a new syllable
    starts at a vowel that can neither extend a long vowel (it differs
    from its predecessor) nor close a diphthong (it is not e, i, or u).
    Words with letters but no vowels still count as one syllable.
    """
    letters = [ch.casefold() for ch in word if ch.isalpha()]
    if not letters:
        raise ValueError(f"no letters in {word!r}")
    syllables = 0
    prev_vowel: str | None = None
    for ch in letters:
        if ch in VOWELS:
            if prev_vowel is None:
                syllables += 1
            elif ch != prev_vowel and ch not in DIPHTHONG_TAILS:
                syllables += 1
            prev_vowel = ch
        else:
            prev_vowel = None
    return max(syllables, 1)
