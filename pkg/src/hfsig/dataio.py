"""Dataset file formats.

IQ payload (.iqb): little-endian float32 interleaved I,Q; frames of exactly
2048 complex values concatenated in index order.

Manifest (.jsonl): one header object, then one object per example carrying
the class label and every applied impairment value.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from hfsig.signal_model import FRAME_LEN, SAMPLE_RATE_HZ

FORMAT_VERSION = 1
BYTES_PER_FRAME = FRAME_LEN * 2 * 4


def make_header(recipe_name: str, master_seed: int, n_train: int, n_val: int,
                split: str, format_version: int = FORMAT_VERSION) -> dict:
    return {
        "format_version": format_version,
        "recipe": recipe_name,
        "master_seed": master_seed,
        "n_train": n_train,
        "n_val": n_val,
        "sample_rate_hz": SAMPLE_RATE_HZ,
        "frame_len": FRAME_LEN,
        "split": split,
    }


def frame_to_bytes(samples) -> bytes:
    return np.asarray(samples).astype("<c8").tobytes()


class DatasetWriter:
    """Streams (frame, row) pairs into an (iqb, jsonl) file pair."""

    def __init__(self, iqb_path, jsonl_path, header: dict):
        self.iqb_path = Path(iqb_path)
        self.jsonl_path = Path(jsonl_path)
        self._iqb = open(self.iqb_path, "wb")
        self._jsonl = open(self.jsonl_path, "w")
        self._jsonl.write(json.dumps(header) + "\n")
        self.count = 0

    def write(self, frame_samples, row: dict) -> None:
        self.write_raw(frame_to_bytes(frame_samples), row)

    def write_raw(self, frame_bytes: bytes, row: dict) -> None:
        self._iqb.write(frame_bytes)
        self._jsonl.write(json.dumps(row) + "\n")
        self.count += 1

    def close(self) -> None:
        self._iqb.close()
        self._jsonl.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


def read_manifest(jsonl_path) -> tuple[dict, list[dict]]:
    with open(jsonl_path) as fh:
        header = json.loads(fh.readline())
        rows = [json.loads(line) for line in fh if line.strip()]
    return header, rows


def read_frames(iqb_path, frame_len: int = FRAME_LEN) -> np.ndarray:
    """All frames as an (n, frame_len) complex64 array (memory-mapped)."""
    data = np.memmap(iqb_path, dtype="<c8", mode="r")
    if len(data) % frame_len:
        raise ValueError("payload size is not a whole number of frames")
    return data.reshape(-1, frame_len)


def read_frame(iqb_path, index: int, frame_len: int = FRAME_LEN) -> np.ndarray:
    frames = read_frames(iqb_path, frame_len)
    if not (0 <= index < len(frames)):
        raise IndexError(f"frame {index} out of range (dataset has {len(frames)})")
    return np.array(frames[index])


def check_consistency(iqb_path, jsonl_path) -> tuple[bool, str]:
    """Manifest row count x frame bytes must equal the payload size."""
    header, rows = read_manifest(jsonl_path)
    frame_len = header.get("frame_len", FRAME_LEN)
    expected = len(rows) * frame_len * 8
    actual = Path(iqb_path).stat().st_size
    if expected != actual:
        return False, f"payload holds {actual} bytes, manifest implies {expected}"
    for field in ("index", "class", "channel", "seed"):
        if rows and field not in rows[0]:
            return False, f"manifest rows missing field {field!r}"
    return True, f"{len(rows)} frames, {actual} bytes"
