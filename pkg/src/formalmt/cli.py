"""Command-line front end.

Every command prints exactly one JSON report to stdout; diagnostics go to
stderr.  Exit codes: 0 success, 1 domain findings (validation violations,
no matched segments), 2 input or usage errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from pathlib import Path

from . import __version__
from .corpus import Split, load_corpus, validate_corpus, write_violations
from .errors import FormalMTError, NoMatchedSegments
from .matcher import BoundaryMode, CaseMode, MatchOptions, Normalization, classify_corpus
from .metrics import (
    Tokenization,
    alpha_from_coincidences,
    coincidence_matrix,
    matched_accuracy,
    overlap_report,
    phrase_statistics,
    read_ratings_tsv,
)
from .pipeline import (
    BlocklistMode,
    FIRST_PERSON,
    PrepConfig,
    SelectionConfig,
    prepare_training_data,
    select_sources,
    upsample_sweep_manifest,
)
from .rules import balanced_sample, default_rules, format_labeled, label_bitext, load_rules

log = logging.getLogger("formalmt")

EXIT_OK, EXIT_FINDINGS, EXIT_ERROR = 0, 1, 2


class UsageError(FormalMTError):
    pass


def _read_lines(path) -> list[str]:
    with open(path, encoding="utf-8") as fh:
        return [line.rstrip("\r\n") for line in fh]


def _load(args, split=None):
    return load_corpus(args.corpus, format=args.format, language_pair=args.lang,
                       split=split or args.split)


def _auto_tokenization(args, corpus) -> Tokenization:
    if args.tokenize != "auto":
        return Tokenization(args.tokenize)
    unsegmented = MatchOptions.for_language(corpus.language_pair).boundary_mode is BoundaryMode.SUBSTRING
    return Tokenization.CHARACTER if unsegmented else Tokenization.WHITESPACE


def cmd_validate(args):
    corpus = _load(args)
    violations = validate_corpus(corpus)
    if args.violations:
        with open(args.violations, "w", encoding="utf-8") as fh:
            write_violations(violations, fh)
    result = {
        "language_pair": corpus.language_pair,
        "split": corpus.split.value,
        "n_segments": len(corpus),
        "n_violations": len(violations),
        "violations": [v.to_dict() for v in violations],
    }
    return result, EXIT_FINDINGS if violations else EXIT_OK


def cmd_evaluate(args):
    corpus = _load(args)
    hyps = _read_lines(args.hyp)
    options = MatchOptions.for_language(corpus.language_pair)
    overrides = {
        "case_mode": CaseMode(args.case),
        "unicode_normalization": Normalization(args.normalization),
    }
    if args.match_mode != "auto":
        overrides["boundary_mode"] = BoundaryMode(args.match_mode)
    options = MatchOptions(**{**options.__dict__, **overrides})
    results = classify_corpus(hyps, corpus, options)
    if args.per_segment:
        with open(args.per_segment, "w", encoding="utf-8", newline="\n") as fh:
            for seg, res in zip(corpus, results):
                fh.write(f"{seg.id}\t{res.label.value}\t{res.evidence()}\n")
    code = EXIT_OK
    try:
        report = matched_accuracy(results, args.formality)
    except NoMatchedSegments as exc:
        log.warning("%s", exc)
        report = exc.report
        code = EXIT_FINDINGS
    result = {"match_options": options.to_dict(), **report.to_dict()}
    return result, code


def cmd_agreement(args):
    ratings = read_ratings_tsv(args.ratings, id_column=args.id_column)
    o, labels = coincidence_matrix(ratings)
    alpha = alpha_from_coincidences(o)
    result = {
        "alpha": alpha,
        "n_units": len(ratings.rows),
        "n_raters": ratings.n_raters,
        "n_pairable": float(o.sum()),
        "labels": [str(lab) for lab in labels],
        "coincidence_matrix": o.tolist(),
    }
    return result, EXIT_OK


def cmd_overlap(args):
    corpus = _load(args)
    tok = _auto_tokenization(args, corpus)
    score = overlap_report(corpus, tok, smooth=args.smooth)
    return {"tokenization": tok.value, "bleu": score.to_dict()}, EXIT_OK


def cmd_stats(args):
    corpus = _load(args)
    tok = _auto_tokenization(args, corpus)
    stats = phrase_statistics(corpus, args.level, tok)
    return {"level": args.level, "tokenization": tok.value, **stats.to_dict()}, EXIT_OK


def cmd_rules_label(args):
    if args.rules:
        rules = load_rules(args.rules, args.lang)
    elif args.lang:
        rules = default_rules(args.lang)
    else:
        raise UsageError("either --lang or --rules is required")
    if args.balanced is not None and args.seed is None:
        raise UsageError("--balanced requires an explicit --seed")
    counts: dict[str, int] = {}
    labeled = []
    for pair, label in label_bitext(args.src, args.trg, rules):
        counts[label.label.value] = counts.get(label.label.value, 0) + 1
        labeled.append((pair, label))
    if args.balanced is not None:
        rows = balanced_sample(labeled, args.balanced, args.seed)
    else:
        rows = [(pair, label.label) for pair, label in labeled]
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            for pair, kind in rows:
                fh.write(format_labeled(pair, kind))
    result = {
        "ruleset": rules.to_dict(),
        "counts": counts,
        "n_lines": len(labeled),
        "n_output": len(rows),
        "labels": [lab.label.value for _, lab in labeled] if args.show_labels else None,
    }
    return result, EXIT_OK


def cmd_select(args):
    segments = _read_lines(args.segments)
    config = SelectionConfig(
        min_words=args.min_words,
        max_words=args.max_words,
        first_person_pronouns=FIRST_PERSON if args.first_person else None,
        require_position=args.require_position,
        blocklist_mode=BlocklistMode(args.blocklist_mode),
    )
    decisions = select_sources(segments, config)
    if args.decisions:
        with open(args.decisions, "w", encoding="utf-8", newline="\n") as fh:
            for d in decisions:
                fh.write(json.dumps(d.to_dict(), ensure_ascii=False) + "\n")
    if args.accepted:
        with open(args.accepted, "w", encoding="utf-8", newline="\n") as fh:
            for d, text in zip(decisions, segments):
                if d.accepted:
                    fh.write(text + "\n")
    n_acc = sum(d.accepted for d in decisions)
    result = {
        "config": config.to_dict(),
        "n_segments": len(decisions),
        "n_accepted": n_acc,
        "n_rejected": len(decisions) - n_acc,
    }
    return result, EXIT_OK


def _prep_config(args, k=None) -> PrepConfig:
    return PrepConfig(
        seed=args.seed,
        upsample_k=k if k is not None else args.k,
        formal_token=args.formal_token,
        informal_token=args.informal_token,
        gender_choice=args.gender,
        strict_gender=args.strict_gender,
        shuffle=not args.no_shuffle,
    )


def cmd_prepare(args):
    corpus = _load(args, split=Split.TRAIN)
    manifest = prepare_training_data(corpus, args.generic_src, args.generic_trg,
                                     _prep_config(args), args.out_prefix)
    return {"manifest": manifest}, EXIT_OK


def cmd_sweep(args):
    try:
        k_values = [int(k) for k in args.k_values.split(",") if k.strip()]
    except ValueError as exc:
        raise UsageError(f"bad --k-values: {exc}") from exc
    corpus = _load(args, split=Split.TRAIN)
    config = _prep_config(args, k=k_values[0] if k_values else 1)
    manifests = upsample_sweep_manifest(corpus, args.generic_src, args.generic_trg,
                                        k_values, config, args.out_dir)
    return {"manifests": manifests}, EXIT_OK


def _corpus_args(p, split_default="test"):
    p.add_argument("corpus", help="annotated corpus file")
    p.add_argument("--format", choices=["tsv", "jsonl"], default="tsv")
    p.add_argument("--lang", default=None, help="language pair, e.g. en-de (default: from file name)")
    p.add_argument("--split", choices=[s.value for s in Split], default=split_default)


def _prep_args(p):
    p.add_argument("generic_src")
    p.add_argument("generic_trg")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--formal-token", default="<formal>")
    p.add_argument("--informal-token", default="<informal>")
    p.add_argument("--gender", choices=["as_is", "masculine", "feminine"], default="as_is")
    p.add_argument("--strict-gender", action="store_true")
    p.add_argument("--no-shuffle", action="store_true", help="keep labeled block before generic block")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="formalmt", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a contrastive corpus")
    _corpus_args(p)
    p.add_argument("--violations", help="also write violations as JSON lines to this file")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("evaluate", help="matched accuracy of a hypothesis file")
    p.add_argument("hyp", help="system output, one segment per line")
    _corpus_args(p)
    p.add_argument("--formality", choices=["formal", "informal"], required=True)
    p.add_argument("--match-mode", choices=["auto", "token", "substring"], default="auto")
    p.add_argument("--case", choices=["sensitive", "fold"], default="sensitive")
    p.add_argument("--normalization", choices=["nfc", "none"], default="nfc")
    p.add_argument("--per-segment", help="write id<TAB>label<TAB>evidence rows here")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("agreement", help="Krippendorff's alpha over a ratings table")
    p.add_argument("ratings", help="TSV: header of rater names, one unit per row, empty = missing")
    p.add_argument("--id-column", action="store_true", help="first column holds unit ids")
    p.set_defaults(func=cmd_agreement)

    p = sub.add_parser("overlap", help="BLEU between informal and formal references")
    _corpus_args(p)
    p.add_argument("--tokenize", choices=["auto", "whitespace", "character"], default="auto")
    p.add_argument("--smooth", choices=["none", "floor", "add-k", "exp"], default="none")
    p.set_defaults(func=cmd_overlap)

    p = sub.add_parser("stats", help="marked phrase and token counts")
    _corpus_args(p, split_default="train")
    p.add_argument("--level", choices=["formal", "informal"], default="formal")
    p.add_argument("--tokenize", choices=["auto", "whitespace", "character"], default="auto")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("rules-label", help="rule-based labeling of a bitext")
    p.add_argument("src")
    p.add_argument("trg")
    p.add_argument("--lang", help="use the bundled ruleset for this language")
    p.add_argument("--rules", help="ruleset file (polarity<TAB>kind<TAB>text)")
    p.add_argument("--output", help="write label<TAB>source<TAB>target rows here")
    p.add_argument("--balanced", type=int, default=None, metavar="N",
                   help="keep N formal and N informal pairs (needs --seed)")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--show-labels", action="store_true", help="include per-line labels in the report")
    p.set_defaults(func=cmd_rules_label)

    p = sub.add_parser("select", help="filter candidate English source segments")
    p.add_argument("segments", help="one segment per line")
    p.add_argument("--min-words", type=int, default=7)
    p.add_argument("--max-words", type=int, default=40)
    p.add_argument("--first-person", action="store_true", help="also accept first-person pronouns")
    p.add_argument("--require-position", action="store_true")
    p.add_argument("--blocklist-mode", choices=["contains", "exact"], default="contains")
    p.add_argument("--decisions", help="write one JSON decision per line here")
    p.add_argument("--accepted", help="write accepted segments here")
    p.set_defaults(func=cmd_select)

    p = sub.add_parser("prepare", help="build control-token fine-tuning data")
    _corpus_args(p, split_default="train")
    _prep_args(p)
    p.add_argument("-k", "--upsample", dest="k", type=int, default=5)
    p.add_argument("--out-prefix", required=True)
    p.set_defaults(func=cmd_prepare)

    p = sub.add_parser("sweep", help="prepare one dataset per up-sampling factor")
    _corpus_args(p, split_default="train")
    _prep_args(p)
    p.add_argument("--k-values", required=True, help="comma-separated, e.g. 1,2,3,4,5")
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_sweep)
    return parser


def _options_echo(args) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k not in ("func",)}


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(name)s: %(levelname)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    report = {
        "command": args.command,
        "version": __version__,
        "options": _options_echo(args),
    }
    started = time.perf_counter()
    try:
        result, code = args.func(args)
        report["result"] = result
    except (FormalMTError, OSError, ValueError) as exc:
        log.error("%s", exc)
        report["result"] = None
        report["error"] = {"type": type(exc).__name__, "message": str(exc)}
        code = EXIT_ERROR
    report["exit_code"] = code
    report["wall_time"] = round(time.perf_counter() - started, 6)
    json.dump(report, sys.stdout, ensure_ascii=False, indent=2, default=str)
    sys.stdout.write("\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
