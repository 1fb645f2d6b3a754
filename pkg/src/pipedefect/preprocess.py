"""Text normalization, sentence splitting, tokenization, spelling, negation.

The sentence splitter is a deterministic rule-based replacement for a full
statistical parser: it splits on ``. ! ?`` followed by whitespace and a
capital letter (or end of text), with an abbreviation exception list.
Negation marking follows the classic trigger/scope recipe: a pre-trigger
phrase opens a scope that runs to the first scope terminator, a fixed
token window, or the sentence end, whichever comes first.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace

from .corpus import Sentence, Token

SENTENCE_TERMINATORS = ".!?"

DEFAULT_NEGATION_WINDOW = 5


@dataclass(frozen=True)
class NegationTriggerSet:
    pre_triggers: tuple[str, ...]
    scope_terminators: tuple[str, ...]
    window: int = DEFAULT_NEGATION_WINDOW

    def __post_init__(self):
        for phrase in self.pre_triggers + self.scope_terminators:
            if not phrase or phrase != phrase.lower():
                raise ValueError(f"trigger phrase must be non-empty lowercase: {phrase!r}")


@dataclass(frozen=True)
class SpellVocabulary:
    known_terms: frozenset[str]
    max_edit_distance: int = 2

    def __post_init__(self):
        if self.max_edit_distance not in (1, 2):
            raise ValueError("max_edit_distance must be 1 or 2")


def load_phrase_file(path) -> tuple[str, ...]:
    """One phrase per line, '#' starts a comment."""
    phrases = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if line:
                phrases.append(line.lower())
    return tuple(phrases)


def normalize_text(raw: str) -> str:
    return _normalize_with_map(raw)[0]


def _normalize_with_map(raw: str) -> tuple[str, list[int]]:
    """Normalize and keep, per output char, its source index in ``raw``.

    Characters outside letters/digits/whitespace/sentence punctuation are
    replaced by a space; whitespace runs collapse to a single space;
    leading/trailing whitespace is dropped.  Case is preserved.
    """
    out: list[str] = []
    idx: list[int] = []
    prev_space = True
    for i, ch in enumerate(raw):
        if ch.isalnum() or ch in SENTENCE_TERMINATORS:
            out.append(ch)
            idx.append(i)
            prev_space = False
        else:  # whitespace and special characters both become one space
            if not prev_space:
                out.append(" ")
                idx.append(i)
                prev_space = True
    if out and out[-1] == " ":
        out.pop()
        idx.pop()
    return "".join(out), idx


def split_sentences(text: str, abbreviations: tuple[str, ...] = ()) -> list[str]:
    return [text[s:e] for s, e in split_sentence_spans(text, abbreviations)]


def split_sentence_spans(
    text: str, abbreviations: tuple[str, ...] = ()
) -> list[tuple[int, int]]:
    """Sentence spans over normalized text.

    A terminator splits when followed by whitespace and a capital letter,
    or at end of text.  A terminator ending an abbreviation from the
    exception list (matched with its dot, e.g. "ft.") never splits except
    at end of text.
    """
    abbrev = {a.lower() for a in abbreviations}
    spans: list[tuple[int, int]] = []
    n = len(text)
    start = 0
    i = 0
    while i < n:
        if text[i] in SENTENCE_TERMINATORS:
            j = i
            while j > start and not text[j - 1].isspace():
                j -= 1
            word = text[j : i + 1].lower()
            if word in abbrev and i + 1 < n:
                i += 1
                continue
            k = i + 1
            while k < n and text[k].isspace():
                k += 1
            if k == n or (k > i + 1 and text[k].isupper()):
                spans.append((start, i + 1))
                start = k
                i = k
                continue
        i += 1
    if start < n:
        spans.append((start, n))
    return spans


_CHUNK_RE = re.compile(r"\S+")


def tokenize(sentence: str) -> list[Token]:
    """Whitespace tokenization; a trailing sentence terminator becomes its
    own token."""
    chunks = [(m.group(), m.start(), m.end()) for m in _CHUNK_RE.finditer(sentence)]
    if chunks:
        surf, s, e = chunks[-1]
        if len(surf) > 1 and surf[-1] in SENTENCE_TERMINATORS:
            chunks[-1] = (surf[:-1], s, e - 1)
            chunks.append((surf[-1], e - 1, e))
    return [
        Token(surface=surf, normalized=surf.lower(), char_span=(s, e))
        for surf, s, e in chunks
    ]


def edit_distance(a: str, b: str, cap: int | None = None) -> int:
    """Levenshtein distance with an optional early-exit cap."""
    if a == b:
        return 0
    if cap is not None and abs(len(a) - len(b)) > cap:
        return cap + 1
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        cur = [i]
        for j, cb in enumerate(b, start=1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (ca != cb)))
        if cap is not None and min(cur) > cap:
            return cap + 1
        prev = cur
    return prev[-1]


def correct_spelling(token: Token, vocab: SpellVocabulary) -> Token:
    """Replace ``normalized`` by the closest vocabulary term within the
    edit-distance budget; ties break lexicographically.

    Tokens without letters (numbers, punctuation) and tokens shorter than
    three characters are left alone: correcting them is far more likely to
    corrupt measurements ("10") and stopwords ("a") than to fix typos.
    """
    word = token.normalized
    if word in vocab.known_terms:
        return token
    if len(word) < 3 or not any(ch.isalpha() for ch in word):
        return token
    best: str | None = None
    best_dist = vocab.max_edit_distance + 1
    for term in vocab.known_terms:
        d = edit_distance(word, term, cap=vocab.max_edit_distance)
        if d < best_dist or (d == best_dist and (best is None or term < best)):
            best = term
            best_dist = d
    if best is None or best_dist > vocab.max_edit_distance:
        return token
    return replace(token, normalized=best)


def _match_phrase(words: list[str], i: int, phrases: tuple[str, ...]) -> int:
    """Length in tokens of the longest phrase matching at position i, or 0."""
    best = 0
    for phrase in phrases:
        parts = phrase.split()
        if len(parts) > best and words[i : i + len(parts)] == parts:
            best = len(parts)
    return best


def detect_negation(
    tokens: list[Token], triggers: NegationTriggerSet
) -> list[tuple[int, int]]:
    """Token-index scopes (start, end exclusive), sorted and merged."""
    words = [t.normalized for t in tokens]
    n = len(words)
    scopes: list[tuple[int, int]] = []
    i = 0
    while i < n:
        tlen = _match_phrase(words, i, triggers.pre_triggers)
        if tlen:
            start = i + tlen
            end = min(start + triggers.window, n)
            j = start
            while j < end:
                if _match_phrase(words, j, triggers.scope_terminators):
                    end = j
                    break
                j += 1
            if end > start:
                scopes.append((start, end))
            i = start
        else:
            i += 1
    merged: list[tuple[int, int]] = []
    for s, e in sorted(scopes):
        if merged and s < merged[-1][1]:
            merged[-1] = (merged[-1][0], max(merged[-1][1], e))
        else:
            merged.append((s, e))
    return merged


def preprocess_section(
    body: str,
    section: str,
    body_offset: int,
    spell_vocab: SpellVocabulary | None,
    triggers: NegationTriggerSet,
    abbreviations: tuple[str, ...] = (),
) -> list[Sentence]:
    """Full per-section pipeline; token raw spans point into the document."""
    norm, char_map = _normalize_with_map(body)
    sentences: list[Sentence] = []
    for s, e in split_sentence_spans(norm, abbreviations):
        toks = tokenize(norm[s:e])
        fixed: list[Token] = []
        for tok in toks:
            raw_start = body_offset + char_map[s + tok.char_span[0]]
            raw_end = body_offset + char_map[s + tok.char_span[1] - 1] + 1
            tok = replace(tok, raw_span=(raw_start, raw_end))
            if spell_vocab is not None:
                tok = correct_spelling(tok, spell_vocab)
            fixed.append(tok)
        scopes = detect_negation(fixed, triggers)
        sentences.append(
            Sentence(text=norm[s:e], tokens=fixed, negation_scopes=scopes, section=section)
        )
    return sentences
