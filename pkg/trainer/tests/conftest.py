"""Shared fixtures: synthetic datasets written in the documented format."""

import json

import numpy as np
import pytest

from hfsig_trainer.data import CLASS_NAMES

FRAME_LEN = 2048
FS = 6000


def write_dataset(stem, frames, rows, recipe="Test", split="train", master_seed=0):
    """Write an (iqb, jsonl) pair exactly per the file-format contract."""
    frames = np.asarray(frames).astype("<c8")
    frames.tofile(str(stem) + ".iqb")
    header = {"format_version": 1, "recipe": recipe, "master_seed": master_seed,
              "n_train": len(rows), "n_val": 0, "sample_rate_hz": FS,
              "frame_len": FRAME_LEN, "split": split}
    with open(str(stem) + ".jsonl", "w") as fh:
        fh.write(json.dumps(header) + "\n")
        for row in rows:
            fh.write(json.dumps(row) + "\n")


def make_row(index, cls, snr_db=None):
    return {"index": index, "class": cls, "snr_db": snr_db, "noise_kind": "none",
            "impulse_exponent": None, "freq_offset_hz": 0.0, "phase_rad": 0.0,
            "fs_offset": 0.0, "rx_filter_bw_hz": 6000.0, "rx_filter_center_hz": 0.0,
            "channel": "none", "seed": index}


def tone_frame(freq_hz, amplitude=1.0, phase=0.0):
    n = np.arange(FRAME_LEN)
    return amplitude * np.exp(1j * (2 * np.pi * freq_hz * n / FS + phase))


@pytest.fixture
def toy_tone_dataset(tmp_path):
    """Trivially separable dataset: each class is a distinct pure tone."""
    rng = np.random.default_rng(0)
    frames, rows = [], []
    per_class = 8
    for i in range(per_class * len(CLASS_NAMES)):
        cls_idx = i % len(CLASS_NAMES)
        freq = -2400 + cls_idx * 250
        frame = tone_frame(freq, phase=rng.uniform(0, 2 * np.pi))
        frame += 0.05 * (rng.standard_normal(FRAME_LEN) + 1j * rng.standard_normal(FRAME_LEN))
        frames.append(frame)
        rows.append(make_row(i, CLASS_NAMES[cls_idx], snr_db=rng.uniform(-12, 22)))
    stem = tmp_path / "train"
    write_dataset(stem, frames, rows)
    return stem.with_suffix(".jsonl")
