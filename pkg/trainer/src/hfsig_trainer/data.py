"""Reader for the dataset file pair produced by the generator.

The formats are consumed as documented: `.iqb` holds little-endian float32
interleaved I/Q in 2048-complex-sample frames; `.jsonl` holds one header
line followed by one metadata object per frame.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np
import torch
from torch.utils.data import Dataset

FRAME_LEN = 2048

# class order fixed by the generator's table
CLASS_NAMES = (
    "psk31", "psk63", "rtty45_170", "rtty50_450", "rtty75_170", "navtex",
    "olivia4_500", "olivia8_250", "olivia16_500", "olivia32_1000",
    "contestia16_250", "mfsk16", "mfsk32", "mfsk64", "mt63_500",
    "usb_voice", "lsb_voice", "am_broadcast", "morse", "hf_fax",
)
CLASS_INDEX = {name: i for i, name in enumerate(CLASS_NAMES)}


def read_manifest(jsonl_path):
    with open(jsonl_path) as fh:
        header = json.loads(fh.readline())
        rows = [json.loads(line) for line in fh if line.strip()]
    return header, rows


def load_dataset(stem) -> tuple[dict, list[dict], np.ndarray]:
    """(header, rows, frames) for a dataset split given its .jsonl path
    or path stem."""
    stem = Path(stem)
    jsonl = stem if stem.suffix == ".jsonl" else stem.with_suffix(".jsonl")
    iqb = jsonl.with_suffix(".iqb")
    header, rows = read_manifest(jsonl)
    frame_len = header.get("frame_len", FRAME_LEN)
    frames = np.memmap(iqb, dtype="<c8", mode="r").reshape(-1, frame_len)
    if len(frames) != len(rows):
        raise ValueError(f"{iqb}: {len(frames)} frames but {len(rows)} manifest rows")
    return header, rows, frames


class IqDataset(Dataset):
    """Frames as 2x2048 float tensors (real/imag channels), RMS-normalized.

    Per-frame normalization keeps the network from keying on absolute power,
    which varies across impairment plans.
    """

    def __init__(self, stem, indices=None):
        self.header, rows, self.frames = load_dataset(stem)
        self.indices = np.arange(len(rows)) if indices is None else np.asarray(indices)
        self.rows = [rows[i] for i in self.indices]
        unknown = {r["class"] for r in self.rows} - set(CLASS_NAMES)
        if unknown:
            raise ValueError(f"dataset classes {sorted(unknown)} not in the 20-class set")
        self.labels = torch.tensor([CLASS_INDEX[r["class"]] for r in self.rows])

    def __len__(self):
        return len(self.indices)

    def __getitem__(self, i):
        frame = np.asarray(self.frames[self.indices[i]])
        x = np.stack([frame.real, frame.imag]).astype(np.float32)
        rms = np.sqrt(np.mean(x**2)) + 1e-12
        return torch.from_numpy(x / rms), self.labels[i]

    def snr_labels(self):
        """Labeled SNR per example (None where noise was disabled)."""
        return [r["snr_db"] for r in self.rows]


def class_balanced_subset(stem, n_examples) -> IqDataset:
    """First n_examples in index order; the generator's round-robin class
    assignment keeps any prefix balanced."""
    header, rows, _ = load_dataset(stem)
    if n_examples > len(rows):
        raise ValueError(f"requested {n_examples} of {len(rows)} examples")
    return IqDataset(stem, indices=np.arange(n_examples))
