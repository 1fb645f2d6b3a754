"""Token tagging (dictionary and Bi-LSTM paths) and entity assembly.

The tag scheme is IO with four indices: O plus one tag per keyword entity
category.  Numeric size/distance mentions ("10 feet") are not taggable in
this scheme; a pattern table turns number+unit token pairs into
SizeOfDefect or distance-style LocationOfDefect entities instead.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import IntEnum

import numpy as np

from .corpus import Sentence
from .errors import LexiconFormatError
from .lexicon import Lexicon
from .network import TaggerModel, sentence_logits


class Tag(IntEnum):
    O = 0
    DEFECT = 1
    LOCATION = 2
    FREQUENCY = 3


CATEGORY_TO_TAG = {"Defect": Tag.DEFECT, "Location": Tag.LOCATION, "Frequency": Tag.FREQUENCY}

TAG_TO_ENTITY_TYPE = {
    Tag.DEFECT: "Defect",
    Tag.LOCATION: "LocationOfDefect",
    Tag.FREQUENCY: "FrequencyOfDefects",
}


@dataclass(frozen=True)
class Entity:
    entity_type: str
    token_range: tuple[int, int]  # end-exclusive token indices
    negated: bool
    matched_lexicon_term: str | None = None
    seed_root: str | None = None


@dataclass
class EntityFrame:
    defects: list[Entity] = field(default_factory=list)
    sizes: list[Entity] = field(default_factory=list)
    locations: list[Entity] = field(default_factory=list)
    frequencies: list[Entity] = field(default_factory=list)

    def all_entities(self) -> list[Entity]:
        return self.defects + self.sizes + self.locations + self.frequencies

    def append(self, entity: Entity) -> None:
        bucket = {
            "Defect": self.defects,
            "SizeOfDefect": self.sizes,
            "LocationOfDefect": self.locations,
            "FrequencyOfDefects": self.frequencies,
        }[entity.entity_type]
        bucket.append(entity)


@dataclass(frozen=True)
class PatternTable:
    """Unit vocabularies for number+unit entity patterns."""

    size_units: frozenset[str]
    distance_units: frozenset[str]

    @classmethod
    def load(cls, path) -> "PatternTable":
        kinds: dict[str, set[str]] = {"size": set(), "distance": set()}
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                line = line.split("#", 1)[0].strip()
                if not line:
                    continue
                parts = line.split("\t")
                if len(parts) != 2 or parts[0] not in kinds:
                    raise LexiconFormatError(f"{path}:{lineno}: expected 'size|distance<TAB>units'")
                kinds[parts[0]].update(u.strip().lower() for u in parts[1].split(","))
        return cls(frozenset(kinds["size"]), frozenset(kinds["distance"]))


_NUMBER_RE = re.compile(r"^\d+(\.\d+)?$")


def dictionary_tag(sentence: Sentence, lexicon: Lexicon) -> list[Tag]:
    tags = [Tag.O] * len(sentence.tokens)
    words = [t.normalized for t in sentence.tokens]
    for (start, end), entry in lexicon.lookup(words):
        for i in range(start, end):
            tags[i] = CATEGORY_TO_TAG[entry.category]
    return tags


def dict_features(sentence: Sentence, lexicon: Lexicon) -> list[int]:
    """Per-token lexicon-category feature indices (0 = no match)."""
    return [int(tag) for tag in dictionary_tag(sentence, lexicon)]


def predict_tags(sentence: Sentence, lexicon: Lexicon, model: TaggerModel) -> list[Tag]:
    """Argmax over the per-token softmax; ties break to the lowest index."""
    if not sentence.tokens:
        return []
    model.check_finite()
    ids = [model.token_index(t.normalized) for t in sentence.tokens]
    feats = dict_features(sentence, lexicon)
    logits = sentence_logits(ids, feats, model)
    return [Tag(int(i)) for i in np.argmax(logits, axis=1)]


def _intersects(span: tuple[int, int], scopes: list[tuple[int, int]]) -> bool:
    return any(span[0] < e and s < span[1] for s, e in scopes)


def extract_entities(
    sentence: Sentence,
    tags: list[Tag],
    patterns: PatternTable | None = None,
    lexicon: Lexicon | None = None,
) -> EntityFrame:
    """Maximal same-tag runs plus number+unit pattern matches.

    Pattern matches only claim tokens tagged O so the two sources never
    overlap.  Entities crossing a negation scope are flagged negated.
    """
    tokens = sentence.tokens
    scopes = sentence.negation_scopes
    frame = EntityFrame()
    i = 0
    n = len(tags)
    while i < n:
        if tags[i] == Tag.O:
            i += 1
            continue
        j = i
        while j < n and tags[j] == tags[i]:
            j += 1
        term = None
        root = None
        if lexicon is not None:
            text = " ".join(t.normalized for t in tokens[i:j])
            entry = lexicon.entries.get(text)
            if entry is None:
                # a run can cover several adjacent matches; keep the first
                hits = lexicon.lookup([t.normalized for t in tokens[i:j]])
                entry = hits[0][1] if hits else None
            if entry is not None:
                term = entry.term
                root = entry.seed_root
        frame.append(
            Entity(
                entity_type=TAG_TO_ENTITY_TYPE[tags[i]],
                token_range=(i, j),
                negated=_intersects((i, j), scopes),
                matched_lexicon_term=term,
                seed_root=root,
            )
        )
        i = j
    if patterns is not None:
        for i in range(n - 1):
            if tags[i] != Tag.O or tags[i + 1] != Tag.O:
                continue
            if not _NUMBER_RE.match(tokens[i].normalized):
                continue
            unit = tokens[i + 1].normalized.rstrip(".")
            if unit in patterns.distance_units:
                etype = "LocationOfDefect"
            elif unit in patterns.size_units:
                etype = "SizeOfDefect"
            else:
                continue
            frame.append(
                Entity(
                    entity_type=etype,
                    token_range=(i, i + 2),
                    negated=_intersects((i, i + 2), scopes),
                    matched_lexicon_term=None,
                    seed_root=None,
                )
            )
    return frame


def entity_text(sentence: Sentence, entity: Entity) -> str:
    return " ".join(t.normalized for t in sentence.tokens[slice(*entity.token_range)])


_ENTITY_TYPE_TO_TAG = {
    "Defect": Tag.DEFECT,
    "LocationOfDefect": Tag.LOCATION,
    "FrequencyOfDefects": Tag.FREQUENCY,
    # SizeOfDefect has no tag in the IO scheme; sizes are pattern-matched.
    "SizeOfDefect": Tag.O,
}


def tags_from_gold_spans(sentences, gold_entities) -> list[list[Tag]]:
    """Gold tag sequences for preprocessed sentences, from raw-text spans."""
    out = []
    for sentence in sentences:
        tags = []
        for tok in sentence.tokens:
            tag = Tag.O
            for ge in gold_entities:
                s, e = ge.span
                if tok.raw_span[0] < e and s < tok.raw_span[1]:
                    tag = _ENTITY_TYPE_TO_TAG[ge.entity_type]
                    break
            tags.append(tag)
        out.append(tags)
    return out
