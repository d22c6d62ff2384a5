"""Command-line front end.

    gaitemo synth    [--params FILE] --out DIR [--force]
    gaitemo extract  --manifest FILE --out FEATURES.csv [--joints 14|25] [--missing-side ...]
    gaitemo crossval --features FEATURES.csv [--classifier gnb|svm] [--folds 10] [--seed N]
    gaitemo ablate   --manifest FILE [--classifier ...] [--folds ...] [--seed ...]

Exit codes: 0 success, 1 environment or I/O failure, 2 invalid input or
degenerate data.
"""
from __future__ import annotations

import argparse
import logging
import sys
from importlib import resources
from pathlib import Path

from . import ingestion
from .classify import ClassifierSpec, LabeledDataset, cross_validate, format_table, train
from .errors import GaitError, NotBinary
from .features import MissingSidePolicy, feature_width
from .pipeline import process_walks
from .preprocessing import PipelineConfig
from .skeleton import JointSet
from .synthgait import generate_corpus, load_corpus_spec

log = logging.getLogger("gaitemo")

EXIT_OK, EXIT_IO, EXIT_INVALID = 0, 1, 2


class CommandError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _config(args) -> PipelineConfig:
    return PipelineConfig(joint_set=JointSet.parse(args.joints))


def _load_manifest(path):
    try:
        return ingestion.load_manifest(path)
    except OSError as exc:
        raise CommandError(EXIT_IO, f"cannot read manifest: {exc}") from None


def _extract(manifest, cfg: PipelineConfig, policy: MissingSidePolicy, jobs: int):
    items = [(e.walk_id, e.load) for e in manifest]
    return process_walks(items, cfg, policy, jobs=jobs)


def _dataset(outcomes) -> LabeledDataset:
    return LabeledDataset.from_rows([(o.walk_id, o.label, o.features.values)
                                     for o in outcomes if o.ok])


def _write_walk_report(path: Path, outcomes) -> None:
    lines = ["walk_id,status,reason"]
    for o in outcomes:
        reason = (o.error or "").replace("\n", " ").replace(",", ";")
        lines.append(f"{o.walk_id},{'ok' if o.ok else 'skipped'},{reason}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def cmd_extract(args) -> int:
    manifest = _load_manifest(args.manifest)
    cfg = _config(args)
    outcomes = _extract(manifest, cfg, MissingSidePolicy(args.missing_side), args.jobs)
    rows = [(o.walk_id, o.label, o.features) for o in outcomes if o.ok]
    for o in outcomes:
        if not o.ok:
            print(f"skipped {o.walk_id}: {o.error}", file=sys.stderr)
    if not rows:
        raise CommandError(EXIT_INVALID, "no walk produced features")
    out = Path(args.out)
    ingestion.write_features_csv(out, rows, width=feature_width(len(cfg.joint_set.joints)))
    _write_walk_report(out.with_name(out.name + ".report.csv"), outcomes)
    print(f"wrote {len(rows)} feature rows to {out} ({len(outcomes) - len(rows)} skipped)")
    return EXIT_OK


def _check_binary(d: LabeledDataset) -> None:
    if len(d.classes) != 2:
        raise NotBinary(f"cross-validation expects exactly 2 labels, found "
                        f"{[str(c) for c in d.classes]}")


def cmd_crossval(args) -> int:
    try:
        rows = ingestion.read_features_csv(args.features)
    except OSError as exc:
        raise CommandError(EXIT_IO, f"cannot read features: {exc}") from None
    d = LabeledDataset.from_rows(rows)
    _check_binary(d)
    spec = ClassifierSpec(args.classifier, C=args.C, seed=args.seed)
    report = cross_validate(d, spec, args.folds, args.seed)
    print(format_table([report]))
    print(f"{args.folds}-fold CV, seed {args.seed}, {report.total} walks")
    out = Path(args.out) if args.out else Path(args.features).with_suffix(f".{args.classifier}.report")
    ingestion.write_report(out, report)
    if args.model_out:
        ingestion.save_model(args.model_out, train(spec, d))
    return EXIT_OK


def cmd_synth(args) -> int:
    if args.params:
        try:
            spec = load_corpus_spec(args.params)
        except OSError as exc:
            raise CommandError(EXIT_IO, f"cannot read params: {exc}") from None
    else:
        with resources.as_file(resources.files("gaitemo") / "data" / "demo_params.json") as p:
            spec = load_corpus_spec(p)
    out = Path(args.out)
    if out.exists() and (not out.is_dir() or any(out.iterdir())) and not args.force:
        raise CommandError(EXIT_INVALID, f"{out} exists and is not empty (use --force)")
    try:
        manifest = generate_corpus(spec, out)
    except OSError as exc:
        raise CommandError(EXIT_IO, f"cannot write corpus: {exc}") from None
    print(f"wrote {len(manifest)} walks ({spec.n_per_class} {spec.label_a} + "
          f"{spec.n_per_class} {spec.label_b}) to {out / 'manifest.csv'}")
    return EXIT_OK


def cmd_ablate(args) -> int:
    manifest = _load_manifest(args.manifest)
    if len(manifest) == 0:
        raise CommandError(EXIT_INVALID, "manifest has no walks")
    policy = MissingSidePolicy(args.missing_side)
    spec = ClassifierSpec(args.classifier, C=args.C, seed=args.seed)
    results = []
    for joint_set in (JointSet.SIGNIFICANT14, JointSet.ALL25):
        name = f"{len(joint_set.joints)} joints"
        outcomes = _extract(manifest, PipelineConfig(joint_set=joint_set), policy, args.jobs)
        try:
            d = _dataset(outcomes)
            _check_binary(d)
            report = cross_validate(d, spec, args.folds, args.seed)
        except GaitError as exc:
            results.append((name, None, str(exc)))
            continue
        results.append((name, report, None))
        if args.out:
            out = Path(args.out)
            out.mkdir(parents=True, exist_ok=True)
            ingestion.write_report(out / f"ablation_{len(joint_set.joints)}.report", report)
    print(f"{spec.display_name}, {args.folds}-fold CV, seed {args.seed}")
    print(format_table([err if r is None else r for _, r, err in results],
                       [n for n, _, _ in results], header="Joints"))
    if all(r is None for _, r, _ in results):
        raise CommandError(EXIT_INVALID, "both joint-set runs failed")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gaitemo", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def pipeline_flags(p):
        p.add_argument("--manifest", required=True, help="manifest CSV")
        p.add_argument("--missing-side", choices=[m.value for m in MissingSidePolicy],
                       default=MissingSidePolicy.REJECT.value)
        p.add_argument("--jobs", type=int, default=1, help="worker processes for extraction")

    def eval_flags(p):
        p.add_argument("--classifier", choices=["gnb", "svm"], default="gnb")
        p.add_argument("--folds", type=int, default=10)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--C", type=float, default=1.0, help="SVM regularization")

    p = sub.add_parser("extract", help="manifest -> features CSV")
    pipeline_flags(p)
    p.add_argument("--out", required=True)
    p.add_argument("--joints", choices=["14", "25"], default="14")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("crossval", help="k-fold cross-validation on a features CSV")
    p.add_argument("--features", required=True)
    eval_flags(p)
    p.add_argument("--out", help="keyed report path (default: next to the features file)")
    p.add_argument("--model-out", help="also train on all rows and save the model here")
    p.set_defaults(func=cmd_crossval)

    p = sub.add_parser("synth", help="write a synthetic corpus")
    p.add_argument("--params", help="corpus JSON (default: bundled demo)")
    p.add_argument("--out", required=True)
    p.add_argument("--force", action="store_true")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("ablate", help="14-joint vs 25-joint accuracy")
    pipeline_flags(p)
    eval_flags(p)
    p.add_argument("--out", help="directory for the two keyed reports")
    p.set_defaults(func=cmd_ablate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "folds", 2) < 2:
        print("error: --folds must be >= 2", file=sys.stderr)
        return EXIT_INVALID
    try:
        return args.func(args)
    except CommandError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except GaitError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
