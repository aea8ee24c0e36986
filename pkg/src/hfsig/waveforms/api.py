"""Waveform request dispatch and the per-mode bandwidth lookup."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from hfsig.signal_model import FRAME_LEN, ModeSpec, RngStream, SignalClass, mode_spec
from hfsig.waveforms import generators as g

_GENERATORS = {
    SignalClass.PSK31: g.gen_psk,
    SignalClass.PSK63: g.gen_psk,
    SignalClass.RTTY45_170: g.gen_rtty,
    SignalClass.RTTY50_450: g.gen_rtty,
    SignalClass.RTTY75_170: g.gen_rtty,
    SignalClass.NAVTEX: g.gen_navtex,
    SignalClass.OLIVIA4_500: g.gen_mfsk,
    SignalClass.OLIVIA8_250: g.gen_mfsk,
    SignalClass.OLIVIA16_500: g.gen_mfsk,
    SignalClass.OLIVIA32_1000: g.gen_mfsk,
    SignalClass.CONTESTIA16_250: g.gen_mfsk,
    SignalClass.MFSK16: g.gen_mfsk,
    SignalClass.MFSK32: g.gen_mfsk,
    SignalClass.MFSK64: g.gen_mfsk,
    SignalClass.MT63_500: g.gen_mt63,
    SignalClass.USB_VOICE: g.gen_ssb,
    SignalClass.LSB_VOICE: g.gen_ssb,
    SignalClass.AM_BROADCAST: g.gen_am,
    SignalClass.MORSE: g.gen_morse,
    SignalClass.HF_FAX: g.gen_fax,
}


@dataclass(frozen=True)
class WaveformRequest:
    spec: ModeSpec
    n_samples: int
    rng: RngStream

    def __post_init__(self) -> None:
        if self.n_samples < FRAME_LEN:
            raise ValueError(f"n_samples must be >= {FRAME_LEN}")


def generate_waveform(req: WaveformRequest) -> np.ndarray:
    """Clean unit-power waveform for the requested mode.

    Deterministic given (spec, n_samples, stream seed); mean power over the
    returned window is normalized to 1.
    """
    gen = _GENERATORS.get(req.spec.signal_class)
    if gen is None:
        raise ValueError(f"unknown signal class: {req.spec.signal_class}")
    x = np.asarray(gen(req.spec, req.n_samples, req.rng), dtype=complex)
    if len(x) != req.n_samples:
        raise AssertionError("generator returned wrong length")
    return x / np.sqrt(np.mean(np.abs(x) ** 2))


def nominal_bandwidth(spec: ModeSpec) -> float:
    """Occupied bandwidth used as the receiver filter's lower bound."""
    return mode_spec(spec.signal_class).nominal_bandwidth_hz
