"""Evaluation: accuracy per 5 dB SNR bin, confusion matrices, recipe
comparisons, and CSV/JSON report emission."""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import torch
from torch.utils.data import DataLoader

from hfsig_trainer.data import CLASS_NAMES, IqDataset
from hfsig_trainer.model import N_CLASSES

SNR_BIN_DB = 5.0
CLEAN_BIN = float("inf")  # bin for examples generated without noise


@dataclass
class EvalReport:
    """Accuracy by SNR bin plus a confusion matrix.

    bin_accuracy maps the bin's lower edge (inf for noiseless examples) to
    accuracy in [0, 1]. run_count/mean/stddev aggregate multiple models
    evaluated on the same data.
    """

    overall_accuracy: float
    bin_accuracy: dict
    bin_counts: dict
    confusion: np.ndarray
    run_count: int = 1
    bin_stddev: dict = field(default_factory=dict)

    def accuracy_at_or_above(self, snr_db: float) -> float:
        pairs = [(b, self.bin_accuracy[b]) for b in self.bin_accuracy
                 if b >= snr_db and b != CLEAN_BIN]
        total = sum(self.bin_counts[b] for b, _ in pairs)
        if total == 0:
            return float("nan")
        return sum(self.bin_counts[b] * acc for b, acc in pairs) / total


def snr_bin(snr_db) -> float:
    if snr_db is None:
        return CLEAN_BIN
    return float(np.floor(snr_db / SNR_BIN_DB) * SNR_BIN_DB)


@torch.no_grad()
def predict(model, dataset: IqDataset, batch_size: int = 256) -> np.ndarray:
    model.eval()
    loader = DataLoader(dataset, batch_size=batch_size, shuffle=False)
    out = [model(x).argmax(dim=1).numpy() for x, _ in loader]
    return np.concatenate(out)


def evaluate(model_or_models, dataset: IqDataset) -> EvalReport:
    """Evaluate one model, or average several trained on different seeds."""
    models = model_or_models if isinstance(model_or_models, (list, tuple)) else [model_or_models]
    labels = dataset.labels.numpy()
    bins = np.array([snr_bin(s) for s in dataset.snr_labels()])
    edges = sorted(set(bins))

    per_run_bin = {b: [] for b in edges}
    per_run_overall = []
    confusion = np.zeros((N_CLASSES, N_CLASSES), dtype=int)
    for model in models:
        pred = predict(model, dataset)
        correct = pred == labels
        per_run_overall.append(float(np.mean(correct)))
        for b in edges:
            sel = bins == b
            per_run_bin[b].append(float(np.mean(correct[sel])))
        np.add.at(confusion, (labels, pred), 1)

    report = EvalReport(
        overall_accuracy=float(np.mean(per_run_overall)),
        bin_accuracy={b: float(np.mean(v)) for b, v in per_run_bin.items()},
        bin_counts={b: int(np.sum(bins == b)) for b in edges},
        confusion=confusion,
        run_count=len(models),
        bin_stddev={b: float(np.std(v)) for b, v in per_run_bin.items()},
    )
    return report


def write_report(report: EvalReport, out_dir, stem="eval") -> dict:
    """Emit the report as CSV (accuracy per bin) plus a JSON summary."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    csv_path = out / f"{stem}_snr_accuracy.csv"
    with open(csv_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["snr_bin", "value", "stddev", "count"])
        for b in sorted(report.bin_accuracy):
            name = "clean" if b == CLEAN_BIN else b
            writer.writerow([name, f"{report.bin_accuracy[b]:.4f}",
                             f"{report.bin_stddev.get(b, 0.0):.4f}", report.bin_counts[b]])
    conf_path = out / f"{stem}_confusion.csv"
    with open(conf_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["true\\pred"] + list(CLASS_NAMES))
        for i, row in enumerate(report.confusion):
            writer.writerow([CLASS_NAMES[i]] + list(map(int, row)))
    summary = {
        "overall_accuracy": report.overall_accuracy,
        "run_count": report.run_count,
        "bins": {("clean" if b == CLEAN_BIN else b): report.bin_accuracy[b]
                 for b in sorted(report.bin_accuracy)},
        "files": {"snr_accuracy": str(csv_path), "confusion": str(conf_path)},
    }
    with open(out / f"{stem}_summary.json", "w") as fh:
        json.dump(summary, fh, indent=2, default=str)
    return summary


def compare_recipes(models_by_recipe: dict, eval_set: IqDataset, out_dir=None) -> list:
    """Evaluate per-recipe model ensembles on one common set; rank them.

    models_by_recipe maps recipe name -> list of trained models (one per
    seed). Returns (recipe, EvalReport) pairs sorted by overall accuracy.
    """
    results = [(name, evaluate(models, eval_set))
               for name, models in models_by_recipe.items()]
    results.sort(key=lambda pair: pair[1].overall_accuracy, reverse=True)
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        with open(out / "recipe_comparison.csv", "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["recipe", "snr_bin", "value"])
            for name, report in results:
                for b in sorted(report.bin_accuracy):
                    label = "clean" if b == CLEAN_BIN else b
                    writer.writerow([name, label, f"{report.bin_accuracy[b]:.4f}"])
        for name, report in results:
            write_report(report, out, stem=name.lower().replace(" ", "-").replace(",", ""))
    return results
