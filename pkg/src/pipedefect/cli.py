"""Command-line interface: build-lexicon, generate, train, rate, evaluate.

Exit codes: 0 success, 1 partial failure, 2 usage or configuration error.
All randomness derives from the single config/flag seed.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from pathlib import Path

from . import config as config_mod
from .corpus import parse_document, parse_gold, split_corpus
from .errors import ConfigError, PipeDefectError
from .evaluation import (
    evaluate_entities,
    evaluate_ratings,
    write_metric_reports,
)
from .generate import GeneratorConfig, generate_synthetic_corpus
from .lexicon import save_lexicon
from .network import load_model, save_model
from .pipeline import (
    BILSTM_TAGGER,
    DICT_TAGGER,
    preprocess_document,
    rate_document,
)
from .tagger import Entity, EntityFrame, tags_from_gold_spans
from .training import train

log = logging.getLogger("pipedefect")


def _load_corpus_documents(corpus_dir: Path) -> dict[str, str]:
    if not corpus_dir.is_dir():
        raise ConfigError(f"corpus directory {corpus_dir} does not exist")
    return {p.stem: p.read_text(encoding="utf-8") for p in sorted(corpus_dir.glob("*.txt"))}


def cmd_build_lexicon(cfg) -> int:
    lexicon = config_mod.build_default_lexicon(cfg)
    Path(cfg.lexicon).parent.mkdir(parents=True, exist_ok=True)
    save_lexicon(lexicon, cfg.lexicon)
    counts: dict[str, int] = {}
    for entry in lexicon.entries.values():
        counts[entry.category] = counts.get(entry.category, 0) + 1
    for category in sorted(counts):
        print(f"{category}: {counts[category]} terms")
    print(f"wrote {len(lexicon)} entries to {cfg.lexicon}")
    return 0


def cmd_generate(cfg, n: int) -> int:
    if n <= 0:
        raise ConfigError(f"generate needs n > 0, got {n}")
    resources = config_mod.load_resources(cfg, require_lexicon=False)
    gen_cfg = GeneratorConfig(n_documents=n, lexicon=resources.lexicon)
    docs, golds = generate_synthetic_corpus(gen_cfg, seed=cfg.seed)
    corpus_dir = Path(cfg.corpus_dir)
    corpus_dir.mkdir(parents=True, exist_ok=True)
    for doc in docs:
        (corpus_dir / f"{doc.id}.txt").write_text(doc.raw, encoding="utf-8")
    from .corpus import format_gold

    Path(cfg.gold_file).parent.mkdir(parents=True, exist_ok=True)
    Path(cfg.gold_file).write_text(format_gold(golds), encoding="utf-8")
    print(f"wrote {len(docs)} documents to {corpus_dir} and gold to {cfg.gold_file}")
    return 0


def cmd_train(cfg) -> int:
    resources = config_mod.load_resources(cfg)
    raw_docs = _load_corpus_documents(Path(cfg.corpus_dir))
    gold = {r.document_id: r for r in parse_gold(Path(cfg.gold_file).read_text(encoding="utf-8"))}
    ids = sorted(set(raw_docs) & set(gold))
    if len(ids) < 2:
        raise ConfigError("train needs at least 2 documents with gold records")
    split = split_corpus(ids, cfg.split_ratio, cfg.seed)
    corpus = []
    for doc_id in split.train:
        doc = preprocess_document(parse_document(raw_docs[doc_id], doc_id), resources)
        for sentence, tags in zip(
            doc.sentences, tags_from_gold_spans(doc.sentences, gold[doc_id].entities)
        ):
            corpus.append((sentence, tags))
    if not corpus:
        raise ConfigError("empty training set")
    log.info("training on %d sentences from %d documents", len(corpus), len(split.train))
    result = train(corpus, resources.lexicon, cfg.training, seed=cfg.seed)
    Path(cfg.model).parent.mkdir(parents=True, exist_ok=True)
    save_model(result.model, cfg.model)
    with open(cfg.loss_log, "w", encoding="utf-8") as fh:
        for epoch, loss in enumerate(result.epoch_losses, start=1):
            fh.write(f"{epoch}\t{loss:.10f}\n")
    print(f"wrote model to {cfg.model}; final loss {result.epoch_losses[-1]:.6f}")
    return 0


def _report_to_json(report) -> dict:
    return {
        "document_id": report.document_id,
        "weights": {
            "frequencies": report.weights.frequencies,
            "location": report.weights.location,
            "defect": report.weights.defect,
        },
        "rating": report.rating.value,
        "action_text": report.rating.action_text,
        "gap_row": report.rating.gap_row,
        "entities": report.entities,
        "notes": report.notes,
    }


def cmd_rate(cfg, input_path: Path, tagger: str) -> int:
    resources = config_mod.load_resources(cfg)
    model = None
    if tagger == BILSTM_TAGGER:
        if not Path(cfg.model).exists():
            raise ConfigError(f"missing model file {cfg.model} (run train)")
        model = load_model(cfg.model)
    if input_path.is_dir():
        files = sorted(input_path.glob("*.txt"))
    elif input_path.exists():
        files = [input_path]
    else:
        raise ConfigError(f"input path {input_path} does not exist")
    out_dir = Path(cfg.output_dir)
    reports_dir = out_dir / "reports"
    reports_dir.mkdir(parents=True, exist_ok=True)
    rows = []
    failures = 0
    for path in files:
        doc_id = path.stem
        try:
            raw = path.read_text(encoding="utf-8")
            doc = parse_document(raw, doc_id)
            report = rate_document(doc, resources, tagger=tagger, model=model)
            payload = _report_to_json(report)
            rows.append((doc_id, report.rating.value))
        except PipeDefectError as exc:
            failures += 1
            payload = {"document_id": doc_id, "error": str(exc)}
            log.error("failed to rate %s: %s", doc_id, exc)
        with open(reports_dir / f"{doc_id}.json", "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")
    with open(out_dir / "summary.csv", "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["doc_id", "rating"])
        for doc_id, rating in sorted(rows):
            writer.writerow([doc_id, rating])
    print(f"rated {len(rows)} documents ({failures} failures) -> {out_dir}")
    return 1 if files and failures == len(files) else 0


def _frames_from_report(payload: dict, n_sentences: int) -> list[EntityFrame]:
    frames = [EntityFrame() for _ in range(n_sentences)]
    for ent in payload.get("entities", []):
        frames[ent["sentence"]].append(
            Entity(
                entity_type=ent["type"],
                token_range=(ent["token_start"], ent["token_end"]),
                negated=ent["negated"],
                matched_lexicon_term=ent.get("matched_term"),
                seed_root=ent.get("seed_root"),
            )
        )
    return frames


def cmd_evaluate(cfg, pred_path: Path, gold_path: Path) -> int:
    resources = config_mod.load_resources(cfg)
    gold = {r.document_id: r for r in parse_gold(gold_path.read_text(encoding="utf-8"))}
    reports_dir = pred_path / "reports" if (pred_path / "reports").is_dir() else pred_path
    payloads = {}
    for path in sorted(reports_dir.glob("*.json")):
        with open(path, encoding="utf-8") as fh:
            payload = json.load(fh)
        payloads[payload["document_id"]] = payload
    missing = sorted(set(payloads) - set(gold))
    if missing:
        raise ConfigError(f"no gold records for predicted ids: {', '.join(missing)}")
    raw_docs = _load_corpus_documents(Path(cfg.corpus_dir))
    docs = {}
    pred_frames = {}
    pred_ratings = {}
    for doc_id, payload in payloads.items():
        if "error" in payload:
            continue
        doc = preprocess_document(parse_document(raw_docs[doc_id], doc_id), resources)
        docs[doc_id] = doc
        pred_frames[doc_id] = _frames_from_report(payload, len(doc.sentences))
        pred_ratings[doc_id] = payload["rating"]
    entity_rows = evaluate_entities(pred_frames, gold, docs)
    rating_rows = evaluate_ratings(pred_ratings, {i: g.rating for i, g in gold.items()})
    out_dir = Path(cfg.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    write_metric_reports(entity_rows, out_dir / "entity_metrics.csv", out_dir / "entity_metrics.json")
    write_metric_reports(rating_rows, out_dir / "rating_metrics.csv", out_dir / "rating_metrics.json")
    for row in entity_rows + rating_rows:
        acc = "NA" if row.accuracy is None else f"{100 * row.accuracy:.1f}"
        print(f"{row.label}: accuracy {acc}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pipedefect",
        description="Defect entity extraction and severity rating for pipe inspection text",
    )
    parser.add_argument("--config", type=Path, help="INI config file")
    parser.add_argument("--seed", type=int, help="override the config seed")
    parser.add_argument("--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("build-lexicon", help="expand seeds into the lexicon file")
    p = sub.add_parser("generate", help="write a synthetic corpus and gold file")
    p.add_argument("--n", type=int, default=500)
    sub.add_parser("train", help="train the Bi-LSTM tagger on the train split")
    p = sub.add_parser("rate", help="rate documents and write reports")
    p.add_argument("input", type=Path, help="document file or directory")
    p.add_argument("--tagger", choices=[DICT_TAGGER, BILSTM_TAGGER], default=DICT_TAGGER)
    p = sub.add_parser("evaluate", help="score predictions against gold annotations")
    p.add_argument("pred", type=Path, help="rate output directory")
    p.add_argument("gold", type=Path, help="gold annotation file")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    try:
        cfg = config_mod.load_config(args.config) if args.config else config_mod.PipelineConfig()
        if args.seed is not None:
            cfg.seed = args.seed
        if args.command == "build-lexicon":
            return cmd_build_lexicon(cfg)
        if args.command == "generate":
            return cmd_generate(cfg, args.n)
        if args.command == "train":
            return cmd_train(cfg)
        if args.command == "rate":
            return cmd_rate(cfg, args.input, args.tagger)
        if args.command == "evaluate":
            return cmd_evaluate(cfg, args.pred, args.gold)
        raise ConfigError(f"unknown command {args.command!r}")
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except PipeDefectError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
