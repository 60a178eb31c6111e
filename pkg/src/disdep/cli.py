"""Command-line interface.

Subcommands: validate, stats, agreement, train, parse, eval, render.
Hyper-parameter defaults follow the benchmark settings (C1=1.5,
C2=0.5, 10 perceptron epochs); a flat key=value config file can
override defaults and is itself overridden by explicit flags.
"""

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path

from . import analysis, corpus, metrics
from .bundle import load_bundle, save_bundle
from .graph import train_graph
from .render import render_tree
from .transition import train_two_stage, train_vanilla

# Published human agreement on this benchmark's dev/test splits,
# printed for context next to parser scores (not software-reproducible).
HUMAN_REFERENCE = {"dev": (0.806, 0.627), "test": (0.802, 0.622)}

PARSER_KINDS = ("vanilla", "two-stage", "graph")


@dataclass
class RunConfig:
    corpus_root: str = None
    parser: str = "vanilla"
    c1: float = 1.5
    c2: float = 0.5
    epochs: int = 10
    svm_epochs: int = 20
    lr: float = 1.0
    seed: int = 0
    labels: str = "fine"
    split: str = "test"
    fmt: str = "text"


_CASTS = {
    "c1": float,
    "c2": float,
    "lr": float,
    "epochs": int,
    "svm_epochs": int,
    "seed": int,
}


def read_config_file(path):
    """Flat key=value lines; '#' starts a comment."""
    values = {}
    for raw in Path(path).read_text(encoding="utf-8").splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise SystemExit("config %s: expected key=value, got %r" % (path, raw))
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.replace("-", "_")
        values[key] = _CASTS.get(key, str)(value)
    return values


def resolve_config(args):
    """Defaults < config file < explicit flags."""
    cfg = RunConfig()
    file_values = read_config_file(args.config) if getattr(args, "config", None) else {}
    for key, value in file_values.items():
        field = "corpus_root" if key == "corpus" else ("fmt" if key == "format" else key)
        if hasattr(cfg, field):
            setattr(cfg, field, value)
    for field, attr in (
        ("corpus_root", "corpus"),
        ("parser", "parser"),
        ("c1", "c1"),
        ("c2", "c2"),
        ("epochs", "epochs"),
        ("svm_epochs", "svm_epochs"),
        ("lr", "lr"),
        ("seed", "seed"),
        ("labels", "labels"),
        ("split", "split"),
        ("fmt", "format"),
    ):
        value = getattr(args, attr, None)
        if value is not None:
            setattr(cfg, field, value)
    return cfg


def _require(value, name):
    if value is None:
        raise SystemExit("missing required option: --%s" % name)
    return value


def cmd_validate(args):
    root = Path(_require(args.corpus, "corpus"))
    if not root.is_dir():
        raise SystemExit("corpus root %s is not a directory" % root)
    dirs = []
    for part in corpus.PARTITIONS:
        dirs.extend(corpus._partition_dirs(root, part))
    if not dirs:
        dirs = [(".", root)]
    failures = 0
    n_files = 0
    loaded = []
    for source, directory in dirs:
        for path in corpus.iter_document_paths(directory):
            n_files += 1
            rel = path.relative_to(root)
            try:
                loaded.append(corpus.load_document(path, source=source))
                print("ok   %s" % rel)
            except corpus.TreebankError as exc:
                failures += 1
                print("FAIL %s: %s" % (rel, exc))
    unique = len({t.doc_id for t in loaded})
    print("files: %d  failed: %d  unique docs: %d" % (n_files, failures, unique))
    if n_files == 0:
        print("warning: no documents found under %s" % root)
    return 1 if failures else 0


def _histogram_lines(hist, fmt):
    lines = []
    if fmt == "csv":
        lines.append("bucket,count,percentage")
        for label, _lo, _hi in analysis.DISTANCE_BUCKETS:
            count, frac = hist.buckets[label]
            lines.append("%s,%d,%.2f" % (label, count, 100.0 * frac))
        lines.append("Total,%d,100.00" % hist.total)
    else:
        lines.append("%-10s %10s %12s" % ("distance", "relations", "percentage"))
        for label, _lo, _hi in analysis.DISTANCE_BUCKETS:
            count, frac = hist.buckets[label]
            lines.append("%-10s %10d %11.2f%%" % (label, count, 100.0 * frac))
        lines.append("%-10s %10d %11.2f%%" % ("total", hist.total, 100.0 if hist.total else 0.0))
    return lines


def cmd_stats(args):
    cfg = resolve_config(args)
    root = _require(cfg.corpus_root, "corpus")
    all_copies = corpus.load_all_annotations(root)
    unique = corpus.designated_gold(all_copies)
    selection = all_copies if args.selection == "all" else unique

    print("documents: %d annotation copies, %d unique" % (len(all_copies), len(unique)))
    print(
        "relations: %d over all copies, %d over unique gold"
        % (corpus.count_relations(all_copies), corpus.count_relations(unique))
    )
    print("histogram selection: %s" % args.selection)
    hist = analysis.distance_histogram(selection)
    for line in _histogram_lines(hist, cfg.fmt):
        print(line)
    if hist.total:
        print("share beyond distance 5: %.2f%%" % (100.0 * hist.fraction_beyond(5)))
    nonproj = analysis.count_non_projective(unique)
    pct = 100.0 * nonproj / len(unique) if unique else 0.0
    print("non-projective trees (unique gold): %d (%.1f%%)" % (nonproj, pct))
    top = analysis.long_range_relation_profile(selection, min_distance=5)[:5]
    print("top long-range relations (distance > 5):")
    for label, count in top:
        print("  %-14s %d" % (label, count))
    return 0


def cmd_agreement(args):
    cfg = resolve_config(args)
    root = _require(cfg.corpus_root, "corpus")
    pairs = corpus.discover_double_annotations(root)
    if not pairs:
        print("no double annotations discovered under %s" % root)
        return 0
    rows = metrics.agreement_report(pairs, labels=cfg.labels)
    if cfg.fmt == "csv":
        print("pair,docs,uas,las,kappa")
        for row in rows:
            if row.report is None:
                print("%s,%d,,," % (row.pair, row.n_docs))
            else:
                r = row.report
                print("%s,%d,%.3f,%.3f,%.3f" % (row.pair, row.n_docs, r.uas, r.las, r.kappa))
    else:
        print("%-28s %6s %7s %7s %7s" % ("pair", "docs", "UAS", "LAS", "Kappa"))
        for row in rows:
            if row.report is None:
                print("%-28s %6d  skipped: %s" % (row.pair, row.n_docs, row.error))
            else:
                r = row.report
                print(
                    "%-28s %6d %7.3f %7.3f %7.3f"
                    % (row.pair, row.n_docs, r.uas, r.las, r.kappa)
                )
    return 0


def _parse_split(bundle_parser, trees):
    return [bundle_parser.parse(t.texts, doc_id=t.doc_id) for t in trees]


def _report_eval(pred, gold, labels, fmt, split_name):
    uas = metrics.uas(pred, gold)
    las = metrics.las(pred, gold, labels=labels)
    try:
        kap = "%.3f" % metrics.kappa(pred, gold, labels=labels)
    except metrics.DegenerateError:
        kap = "n/a"
    n_edus = sum(len(t) for t in gold)
    if fmt == "csv":
        print("split,docs,edus,uas,las,kappa")
        print("%s,%d,%d,%.4f,%.4f,%s" % (split_name, len(gold), n_edus, uas, las, kap))
    else:
        print("split: %s  docs: %d  EDUs: %d" % (split_name, len(gold), n_edus))
        print("UAS: %.4f" % uas)
        print("LAS (%s): %.4f" % (labels, las))
        print("Kappa (%s): %s" % (labels, kap))
        if split_name in HUMAN_REFERENCE:
            h_uas, h_las = HUMAN_REFERENCE[split_name]
            print(
                "reference human agreement (%s): UAS %.3f / LAS %.3f"
                % (split_name, h_uas, h_las)
            )
    return uas, las


def cmd_train(args):
    cfg = resolve_config(args)
    root = _require(cfg.corpus_root, "corpus")
    model_path = _require(args.model, "model")
    if cfg.parser not in PARSER_KINDS:
        raise SystemExit("unknown parser kind %r (choose from %s)" % (cfg.parser, ", ".join(PARSER_KINDS)))
    split = corpus.load_split(root)
    print(
        "loaded split: %d train / %d dev / %d test"
        % (len(split.train), len(split.dev), len(split.test))
    )
    if not split.train:
        raise SystemExit("no training documents under %s" % root)

    if cfg.parser == "graph":

        def after_epoch(epoch, parser):
            if not split.dev:
                return
            parser.dictionary.frozen = True
            pred = _parse_split(parser, split.dev)
            parser.dictionary.frozen = False
            print(
                "epoch %2d  dev UAS %.4f  dev LAS %.4f"
                % (
                    epoch + 1,
                    metrics.uas(pred, split.dev),
                    metrics.las(pred, split.dev, labels=cfg.labels),
                )
            )

        parser = train_graph(
            split.train, epochs=cfg.epochs, learning_rate=cfg.lr, after_epoch=after_epoch
        )
    elif cfg.parser == "vanilla":
        parser, skipped = train_vanilla(
            split.train, C=cfg.c1, epochs=cfg.svm_epochs, seed=cfg.seed
        )
        if skipped:
            print("skipped %d non-projective training docs" % len(skipped))
    else:
        parser, skipped = train_two_stage(
            split.train, c1=cfg.c1, c2=cfg.c2, epochs=cfg.svm_epochs, seed=cfg.seed
        )
        if skipped:
            print("skipped %d non-projective training docs" % len(skipped))

    if split.dev:
        pred = _parse_split(parser, split.dev)
        _report_eval(pred, split.dev, cfg.labels, cfg.fmt, "dev")

    hyper = {
        "parser": cfg.parser,
        "c1": cfg.c1,
        "c2": cfg.c2,
        "epochs": cfg.epochs,
        "svm_epochs": cfg.svm_epochs,
        "lr": cfg.lr,
        "seed": cfg.seed,
    }
    save_bundle(parser, model_path, hyper=hyper)
    print("model written to %s" % model_path)
    return 0


def _select_partition(split, name):
    try:
        return getattr(split, name)
    except AttributeError:
        raise SystemExit("unknown split %r (train/dev/test)" % name)


def cmd_eval(args):
    cfg = resolve_config(args)
    root = _require(cfg.corpus_root, "corpus")
    parser = load_bundle(_require(args.model, "model"))
    gold = _select_partition(corpus.load_split(root), cfg.split)
    if not gold:
        raise SystemExit("split %r is empty under %s" % (cfg.split, root))
    pred = _parse_split(parser, gold)
    for tree in pred:
        corpus.validate_edus(tree.doc_id, tree.edus)
    _report_eval(pred, gold, cfg.labels, cfg.fmt, cfg.split)
    if parser.dictionary.lookups:
        print("feature OOV rate: %.4f" % parser.dictionary.oov_rate)
    return 0


def cmd_parse(args):
    cfg = resolve_config(args)
    parser = load_bundle(_require(args.model, "model"))
    out_dir = Path(_require(args.out, "out"))
    out_dir.mkdir(parents=True, exist_ok=True)
    if args.files:
        docs = [corpus.load_document(p) for p in args.files]
    else:
        root = _require(cfg.corpus_root, "corpus")
        docs = _select_partition(corpus.load_split(root), cfg.split)
    for doc in docs:
        pred = parser.parse(doc.texts, doc_id=doc.doc_id)
        corpus.save_document(pred, out_dir / (doc.doc_id + ".dep"))
    print("parsed %d documents into %s" % (len(docs), out_dir))
    return 0


def cmd_render(args):
    tree = corpus.load_document(args.file)
    text = render_tree(tree)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def build_arg_parser():
    ap = argparse.ArgumentParser(
        prog="disdep",
        description="Discourse dependency treebank toolkit: validation, "
        "statistics, agreement, and baseline parsers.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, config=True):
        p.add_argument("--corpus", help="corpus root (train/dev/test directories)")
        p.add_argument("--format", choices=("text", "csv"), default=None)
        if config:
            p.add_argument("--config", help="flat key=value config file")

    p = sub.add_parser("validate", help="check every document against the tree invariants")
    p.add_argument("--corpus", required=False)
    p.add_argument("corpus_pos", nargs="?", help="corpus root (positional alternative)")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("stats", help="corpus statistics: relations, distances, projectivity")
    common(p)
    p.add_argument("--selection", choices=("all", "unique"), default="all",
                   help="annotation copies used for distance statistics")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("agreement", help="inter-annotator agreement over double annotations")
    common(p)
    p.add_argument("--labels", choices=("fine", "coarse"), default=None)
    p.set_defaults(func=cmd_agreement)

    p = sub.add_parser("train", help="train a baseline parser")
    common(p)
    p.add_argument("--parser", choices=PARSER_KINDS, default=None)
    p.add_argument("--model", help="output model file (.json or .json.gz)")
    p.add_argument("--c1", type=float, default=None, help="margin C for the action classifier")
    p.add_argument("--c2", type=float, default=None, help="margin C for the stage-two labeler")
    p.add_argument("--epochs", type=int, default=None, help="perceptron epochs (graph parser)")
    p.add_argument("--svm-epochs", dest="svm_epochs", type=int, default=None)
    p.add_argument("--lr", type=float, default=None, help="perceptron learning rate")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--labels", choices=("fine", "coarse"), default=None)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("eval", help="parse a partition and score against gold")
    common(p)
    p.add_argument("--model", help="trained model bundle")
    p.add_argument("--split", choices=("train", "dev", "test"), default=None)
    p.add_argument("--labels", choices=("fine", "coarse"), default=None)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("parse", help="parse documents and write predicted trees")
    common(p)
    p.add_argument("--model", help="trained model bundle")
    p.add_argument("--split", choices=("train", "dev", "test"), default=None)
    p.add_argument("--out", help="output directory for predicted trees")
    p.add_argument("files", nargs="*", help="document files (instead of --corpus/--split)")
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("render", help="draw a document's tree as a text arc diagram")
    p.add_argument("file", help="document file")
    p.add_argument("--out", help="output file (default: stdout)")
    p.set_defaults(func=cmd_render)

    return ap


def main(argv=None):
    ap = build_arg_parser()
    args = ap.parse_args(argv)
    if args.command == "validate" and args.corpus is None:
        args.corpus = args.corpus_pos
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
