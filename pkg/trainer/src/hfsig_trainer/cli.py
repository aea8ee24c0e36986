"""CLI: train a model, evaluate checkpoints, compare recipe datasets."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from hfsig_trainer.data import IqDataset, class_balanced_subset
from hfsig_trainer.evaluate import compare_recipes, evaluate, write_report
from hfsig_trainer.train import load_checkpoint, train


def build_parser():
    parser = argparse.ArgumentParser(prog="hfsig-train", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    tr = sub.add_parser("train", help="train one model on a dataset directory")
    tr.add_argument("--data", required=True, help="dataset dir (train.jsonl/val.jsonl)")
    tr.add_argument("--out", required=True, help="checkpoint path")
    tr.add_argument("--seed", type=int, default=0)
    tr.add_argument("--epochs", type=int, default=None)
    tr.add_argument("--subset", type=int, default=None,
                    help="train on the first N examples only")

    ev = sub.add_parser("evaluate", help="evaluate checkpoints on a labeled dataset")
    ev.add_argument("--model", nargs="+", required=True, help="checkpoint path(s)")
    ev.add_argument("--data", required=True, help="dataset .jsonl (or dir/val.jsonl)")
    ev.add_argument("--out", required=True, help="report directory")

    cp = sub.add_parser("compare", help="train per-recipe models and compare on one set")
    cp.add_argument("--train-sets", nargs="+", required=True,
                    help="dataset dirs, one per recipe")
    cp.add_argument("--eval-set", required=True)
    cp.add_argument("--seeds", type=int, default=5)
    cp.add_argument("--epochs", type=int, default=None)
    cp.add_argument("--subset", type=int, default=None)
    cp.add_argument("--out", required=True)
    return parser


def _split_path(data, split):
    path = Path(data)
    return path / f"{split}.jsonl" if path.is_dir() else path


def cmd_train(args) -> int:
    data = Path(args.data)
    if args.subset:
        train_set = class_balanced_subset(_split_path(data, "train"), args.subset)
    else:
        train_set = IqDataset(_split_path(data, "train"))
    val_path = data / "val.jsonl" if data.is_dir() else None
    val_set = IqDataset(val_path) if val_path and val_path.exists() else None
    model, history = train(
        train_set, seed=args.seed, epochs=args.epochs, val_set=val_set,
        checkpoint_path=args.out,
        log=lambda e: print(
            f"epoch {e['epoch']:2d}  loss {e['train_loss']:.4f}"
            + (f"  val_acc {e['val_accuracy']:.3f}" if "val_accuracy" in e else "")
            + f"  [{e['seconds']:.0f}s]", flush=True),
    )
    print(f"checkpoint: {args.out}")
    return 0


def cmd_evaluate(args) -> int:
    models = [load_checkpoint(p)[0] for p in args.model]
    dataset = IqDataset(_split_path(args.data, "val"))
    report = evaluate(models if len(models) > 1 else models[0], dataset)
    summary = write_report(report, args.out)
    print(f"overall accuracy: {report.overall_accuracy:.4f} over {report.run_count} run(s)")
    for b in sorted(report.bin_accuracy):
        label = "clean" if b == float("inf") else f"{b:+.0f} dB"
        print(f"  {label:>8}: {report.bin_accuracy[b]:.3f} (n={report.bin_counts[b]})")
    print(f"report: {summary['files']['snr_accuracy']}")
    return 0


def cmd_compare(args) -> int:
    eval_set = IqDataset(_split_path(args.eval_set, "val"))
    models_by_recipe = {}
    for train_dir in args.train_sets:
        path = _split_path(train_dir, "train")
        if args.subset:
            train_set = class_balanced_subset(path, args.subset)
        else:
            train_set = IqDataset(path)
        name = train_set.header["recipe"]
        models = []
        for seed in range(args.seeds):
            print(f"training {name!r} seed {seed}", flush=True)
            model, _ = train(train_set, seed=seed, epochs=args.epochs)
            models.append(model)
        models_by_recipe[name] = models
    results = compare_recipes(models_by_recipe, eval_set, out_dir=args.out)
    print("ranking on common evaluation set:")
    for name, report in results:
        print(f"  {report.overall_accuracy:.3f}  {name}")
    return 0


_COMMANDS = {"train": cmd_train, "evaluate": cmd_evaluate, "compare": cmd_compare}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return _COMMANDS[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
