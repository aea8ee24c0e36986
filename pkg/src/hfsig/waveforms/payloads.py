"""Payload sources: the content a transmitter would be sending.

The window is far too short for content to matter semantically, but each
generator still draws its payload from the right kind of source so the
framing statistics stay realistic.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy import signal as sig

from hfsig import fading
from hfsig.signal_model import SAMPLE_RATE_HZ, RngStream
from hfsig.waveforms import encodings as enc

_AUDIO_BP = {}


def _audio_band_noise(low, high, n, rng):
    key = (low, high)
    if key not in _AUDIO_BP:
        _AUDIO_BP[key] = sig.firwin(513, [low, high], pass_zero=False, fs=SAMPLE_RATE_HZ)
    raw = rng.standard_normal(n + 1024)
    shaped = sig.fftconvolve(raw, _AUDIO_BP[key], mode="same")
    return shaped[512 : 512 + n]


class PayloadKind(Enum):
    RANDOM_TEXT = "random_text"
    RANDOM_BITS = "random_bits"
    SYNTHETIC_AUDIO = "synthetic_audio"
    SYNTHETIC_IMAGE_LINES = "synthetic_image_lines"


@dataclass
class PayloadSource:
    """Deterministic payload generator of one kind, driven by an RngStream."""

    kind: PayloadKind
    rng: RngStream

    def text(self, n_chars: int, teleprinter: bool = False) -> str:
        assert self.kind is PayloadKind.RANDOM_TEXT
        if teleprinter:
            return enc.random_teleprinter_text(self.rng, n_chars)
        return enc.random_varicode_text(self.rng, n_chars)

    def bits(self, shape) -> np.ndarray:
        assert self.kind is PayloadKind.RANDOM_BITS
        return self.rng.integers(0, 2, size=shape)

    def symbols(self, count: int, alphabet_size: int) -> np.ndarray:
        assert self.kind is PayloadKind.RANDOM_BITS
        return self.rng.integers(0, alphabet_size, size=count)

    def audio(self, n: int, band=(300.0, 2700.0)) -> np.ndarray:
        """Speech-like audio: band-shaped noise under a 2-6 Hz syllabic
        envelope (magnitude of a narrowband complex Gaussian process)."""
        assert self.kind is PayloadKind.SYNTHETIC_AUDIO
        raw = _audio_band_noise(band[0], band[1], n, self.rng.child(1))
        env_rng = self.rng.child(2)
        rate = env_rng.uniform(2.0, 6.0)
        envelope = np.abs(fading.generate_tap_gain(rate, n, SAMPLE_RATE_HZ, env_rng.child(0)))
        return raw * envelope

    def image_line(self, line_len: int, marker_len: int = 90) -> np.ndarray:
        """One fax scan line: black marker, then random black/white runs."""
        assert self.kind is PayloadKind.SYNTHETIC_IMAGE_LINES
        runs = [np.full(marker_len, -1.0)]
        filled = marker_len
        level = 1.0
        while filled < line_len:
            span = int(np.clip(self.rng.uniform(0.005, 0.05) * SAMPLE_RATE_HZ,
                               15, line_len - filled))
            runs.append(np.full(span, level))
            level = -level
            filled += span
        return np.concatenate(runs)
