"""End-to-end document pipeline: preprocess -> tag -> extract -> rate."""

from __future__ import annotations

from dataclasses import dataclass

from .corpus import Document, Sentence
from .lexicon import Lexicon
from .network import TaggerModel
from .preprocess import (
    NegationTriggerSet,
    SpellVocabulary,
    preprocess_section,
)
from .rating import DEFAULT_FREQUENCY_BANDS, RatingReport, rate_frames
from .tagger import (
    EntityFrame,
    PatternTable,
    dictionary_tag,
    entity_text,
    extract_entities,
    predict_tags,
)

DICT_TAGGER = "dict"
BILSTM_TAGGER = "bilstm"


@dataclass
class PipelineResources:
    lexicon: Lexicon
    triggers: NegationTriggerSet
    abbreviations: tuple[str, ...]
    spell_vocab: SpellVocabulary
    patterns: PatternTable
    frequency_bands: dict[str, float] = None

    def __post_init__(self):
        if self.frequency_bands is None:
            self.frequency_bands = dict(DEFAULT_FREQUENCY_BANDS)


def build_spell_vocabulary(
    lexicon: Lexicon, base_words: set[str], max_edit_distance: int = 2
) -> SpellVocabulary:
    return SpellVocabulary(
        known_terms=frozenset(lexicon.vocabulary() | {w.lower() for w in base_words}),
        max_edit_distance=max_edit_distance,
    )


def preprocess_document(doc: Document, resources: PipelineResources) -> Document:
    """Fill doc.sentences from all section bodies (in document order)."""
    sentences: list[Sentence] = []
    for name, (start, _end) in sorted(doc.section_spans.items(), key=lambda kv: kv[1]):
        sentences.extend(
            preprocess_section(
                doc.sections[name],
                section=name,
                body_offset=start,
                spell_vocab=resources.spell_vocab,
                triggers=resources.triggers,
                abbreviations=resources.abbreviations,
            )
        )
    doc.sentences = sentences
    return doc


def tag_document(
    doc: Document,
    resources: PipelineResources,
    tagger: str = DICT_TAGGER,
    model: TaggerModel | None = None,
) -> list[EntityFrame]:
    """Per-sentence entity frames for a preprocessed document."""
    frames = []
    for sentence in doc.sentences:
        if tagger == BILSTM_TAGGER:
            if model is None:
                raise ValueError("bilstm tagger requires a trained model")
            tags = predict_tags(sentence, resources.lexicon, model)
        elif tagger == DICT_TAGGER:
            tags = dictionary_tag(sentence, resources.lexicon)
        else:
            raise ValueError(f"unknown tagger {tagger!r}")
        frames.append(
            extract_entities(sentence, tags, patterns=resources.patterns, lexicon=resources.lexicon)
        )
    return frames


def rate_document(
    doc: Document,
    resources: PipelineResources,
    tagger: str = DICT_TAGGER,
    model: TaggerModel | None = None,
) -> RatingReport:
    if not doc.sentences:
        preprocess_document(doc, resources)
    frames = tag_document(doc, resources, tagger=tagger, model=model)
    report = rate_frames(doc.id, frames, bands=resources.frequency_bands)
    for sent_idx, (sentence, frame) in enumerate(zip(doc.sentences, frames)):
        for entity in frame.all_entities():
            start_tok = sentence.tokens[entity.token_range[0]]
            end_tok = sentence.tokens[entity.token_range[1] - 1]
            report.entities.append(
                {
                    "type": entity.entity_type,
                    "sentence": sent_idx,
                    "token_start": entity.token_range[0],
                    "token_end": entity.token_range[1],
                    "raw_span": [start_tok.raw_span[0], end_tok.raw_span[1]],
                    "text": entity_text(sentence, entity),
                    "negated": entity.negated,
                    "matched_term": entity.matched_lexicon_term,
                    "seed_root": entity.seed_root,
                }
            )
    return report
