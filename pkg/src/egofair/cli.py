"""Command-line entry point: `audit`, `generate`, and `features` subcommands.

Exit codes: 0 success, 1 configuration or input error, 2 experiment aborted
by the failed-trial budget.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .features import (
    MODEL_FEATURE_NAMES,
    default_lexicon,
    default_smiley_patterns,
    load_lexicon,
    load_smiley_patterns,
)
from .graph import load_edge_list
from .runner import (
    ExperimentAborted,
    ExperimentConfig,
    SyntheticConfig,
    _extract_instances,
    emit_report,
    generate_synthetic,
    load_messages,
    render_human_report,
    run_experiment,
    write_messages,
)


def _add_synthetic_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--node-count", type=int, default=500)
    parser.add_argument("--message-count", type=int, default=5000)
    parser.add_argument("--positive-rate", type=float, default=0.02)
    parser.add_argument("--bias-strength", type=float, default=0.8)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="egofair",
        description="Audit a message-level abuse detector for disparities across "
        "network-centrality groups and remove them with equalized-odds "
        "post-processing.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    audit = sub.add_parser("audit", help="run the full multi-trial audit experiment")
    source = audit.add_mutually_exclusive_group(required=True)
    source.add_argument("--input", help="message corpus file (tab-separated records)")
    source.add_argument("--synthetic", action="store_true", help="generate a synthetic corpus")
    audit.add_argument("--master-seed", type=int, required=True)
    audit.add_argument("--trials", type=int, required=True)
    audit.add_argument("--out-dir", required=True)
    audit.add_argument("--train-fraction", type=float, default=0.7)
    audit.add_argument("--smote-k", type=int, default=5)
    audit.add_argument("--undersample-fraction", type=float, default=0.0)
    audit.add_argument("--fold-count", type=int, default=10)
    audit.add_argument("--threshold", type=float, default=0.5)
    audit.add_argument("--alpha", type=float, default=0.05)
    audit.add_argument("--lexicon", help="bad-word lexicon file (default: bundled)")
    audit.add_argument("--smileys", help="smiley-pattern file (default: bundled)")
    audit.add_argument("--edge-list", help="extra edges file, sender_id,receiver_id per line")
    audit.add_argument("--global-median", action="store_true",
                       help="split groups at a corpus-wide median instead of per test split")
    audit.add_argument("--workers", type=int, default=1)
    _add_synthetic_flags(audit)
    audit.add_argument("--synthetic-seed", type=int, default=0)

    gen = sub.add_parser("generate", help="write a synthetic corpus to a file")
    gen.add_argument("--out", required=True)
    gen.add_argument("--seed", type=int, default=0)
    _add_synthetic_flags(gen)

    feats = sub.add_parser("features", help="dump per-message feature vectors")
    feats.add_argument("--input", required=True)
    feats.add_argument("--lexicon")
    feats.add_argument("--smileys")
    feats.add_argument("--edge-list")
    feats.add_argument("--out", help="output file (default: stdout)")
    return parser


def _cmd_audit(args) -> int:
    synthetic = None
    if args.synthetic:
        synthetic = SyntheticConfig(
            node_count=args.node_count,
            message_count=args.message_count,
            positive_rate=args.positive_rate,
            bias_strength=args.bias_strength,
            seed=args.synthetic_seed,
        )
    cfg = ExperimentConfig(
        master_seed=args.master_seed,
        trials=args.trials,
        train_fraction=args.train_fraction,
        smote_k=args.smote_k,
        undersample_fraction=args.undersample_fraction,
        fold_count=args.fold_count,
        threshold=args.threshold,
        alpha=args.alpha,
        input_path=args.input,
        synthetic=synthetic,
        lexicon_path=args.lexicon,
        smiley_path=args.smileys,
        edge_list_path=args.edge_list,
        global_median=args.global_median,
        workers=args.workers,
    )
    report = run_experiment(cfg)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    structured = emit_report(report, "structured", out_dir / "report.json")
    human = emit_report(report, "human", out_dir / "report.txt")
    sys.stdout.write(render_human_report(report))
    print(f"structured report: {structured}")
    print(f"human report: {human}")
    return 0


def _cmd_generate(args) -> int:
    cfg = SyntheticConfig(
        node_count=args.node_count,
        message_count=args.message_count,
        positive_rate=args.positive_rate,
        bias_strength=args.bias_strength,
        seed=args.seed,
    )
    records = generate_synthetic(cfg)
    out = write_messages(records, args.out)
    positives = sum(r.label for r in records)
    print(f"wrote {len(records)} messages ({positives} positive) to {out}")
    return 0


def _cmd_features(args) -> int:
    records = load_messages(args.input)
    lexicon = load_lexicon(args.lexicon) if args.lexicon else default_lexicon()
    smileys = load_smiley_patterns(args.smileys) if args.smileys else default_smiley_patterns()
    extra = load_edge_list(args.edge_list) if args.edge_list else []
    instances, _ = _extract_instances(records, lexicon, smileys, extra)

    lines = ["\t".join(("message_id", *MODEL_FEATURE_NAMES, "sensitive_value", "label"))]
    for inst in instances:
        cells = [inst.message_id]
        cells += [repr(v) for v in inst.model_features]
        cells += [repr(inst.sensitive_value), str(inst.label)]
        lines.append("\t".join(cells))
    text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        print(f"wrote {len(instances)} feature rows to {args.out}")
    else:
        sys.stdout.write(text)
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors; map to the config-error code
        return 0 if exc.code in (0, None) else 1
    try:
        if args.command == "audit":
            return _cmd_audit(args)
        if args.command == "generate":
            return _cmd_generate(args)
        if args.command == "features":
            return _cmd_features(args)
        raise ValueError(f"unknown command {args.command!r}")
    except ExperimentAborted as exc:
        print(f"experiment aborted: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
