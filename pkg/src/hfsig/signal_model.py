"""Core domain types: frames, signal classes, mode descriptions, random streams."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

SAMPLE_RATE_HZ = 6000
FRAME_LEN = 2048


class SignalClass(Enum):
    """The 20 shortwave signal classes, in canonical table order."""

    PSK31 = "psk31"
    PSK63 = "psk63"
    RTTY45_170 = "rtty45_170"
    RTTY50_450 = "rtty50_450"
    RTTY75_170 = "rtty75_170"
    NAVTEX = "navtex"
    OLIVIA4_500 = "olivia4_500"
    OLIVIA8_250 = "olivia8_250"
    OLIVIA16_500 = "olivia16_500"
    OLIVIA32_1000 = "olivia32_1000"
    CONTESTIA16_250 = "contestia16_250"
    MFSK16 = "mfsk16"
    MFSK32 = "mfsk32"
    MFSK64 = "mfsk64"
    MT63_500 = "mt63_500"
    USB_VOICE = "usb_voice"
    LSB_VOICE = "lsb_voice"
    AM_BROADCAST = "am_broadcast"
    MORSE = "morse"
    HF_FAX = "hf_fax"


class Family(Enum):
    PSK = "psk"
    FSK = "fsk"
    MFSK = "mfsk"
    MULTI_CARRIER = "multi_carrier"
    SSB_USB = "ssb_usb"
    SSB_LSB = "ssb_lsb"
    AM = "am"
    OOK = "ook"
    FAX = "fax"


@dataclass(frozen=True)
class ModeSpec:
    """Static description of one signal class.

    baud_rate is 0 for the analog modes. tone_count applies to MFSK and
    multi-carrier modes only. shift_or_bandwidth_hz carries the FSK shift
    or the mode's designed bandwidth, whichever the mode name advertises.
    nominal_bandwidth_hz is the occupied bandwidth used as the lower bound
    for the receiver filter. center_freq_hz is where that band sits at
    complex baseband (0 for all modes except the SSB voice channels).
    """

    signal_class: SignalClass
    display_name: str
    family: Family
    baud_rate: float
    tone_count: int
    shift_or_bandwidth_hz: float
    nominal_bandwidth_hz: float
    center_freq_hz: float = 0.0

    def __post_init__(self) -> None:
        if not (0 < self.nominal_bandwidth_hz <= SAMPLE_RATE_HZ):
            raise ValueError(f"nominal bandwidth out of range: {self.nominal_bandwidth_hz}")


# Baud rates carry the exact on-air values (31.25 Bd, 45.45 Bd, ...), not
# the rounded figures mode names suggest; MFSK-32/64 run 16 tones here.
_MODE_TABLE: tuple[ModeSpec, ...] = (
    ModeSpec(SignalClass.PSK31, "PSK31", Family.PSK, 31.25, 0, 0.0, 62.5),
    ModeSpec(SignalClass.PSK63, "PSK63", Family.PSK, 62.5, 0, 0.0, 125.0),
    ModeSpec(SignalClass.RTTY45_170, "RTTY 45/170", Family.FSK, 45.45, 2, 170.0, 215.45),
    ModeSpec(SignalClass.RTTY50_450, "RTTY 50/450", Family.FSK, 50.0, 2, 450.0, 500.0),
    ModeSpec(SignalClass.RTTY75_170, "RTTY 75/170", Family.FSK, 75.0, 2, 170.0, 245.0),
    ModeSpec(SignalClass.NAVTEX, "Navtex / Sitor-B", Family.FSK, 100.0, 2, 170.0, 340.0),
    ModeSpec(SignalClass.OLIVIA4_500, "Olivia 4/500", Family.MFSK, 125.0, 4, 500.0, 500.0),
    ModeSpec(SignalClass.OLIVIA8_250, "Olivia 8/250", Family.MFSK, 31.25, 8, 250.0, 250.0),
    ModeSpec(SignalClass.OLIVIA16_500, "Olivia 16/500", Family.MFSK, 31.25, 16, 500.0, 500.0),
    ModeSpec(SignalClass.OLIVIA32_1000, "Olivia 32/1000", Family.MFSK, 31.25, 32, 1000.0, 1000.0),
    ModeSpec(SignalClass.CONTESTIA16_250, "Contestia 16/250", Family.MFSK, 15.625, 16, 250.0, 250.0),
    ModeSpec(SignalClass.MFSK16, "MFSK-16", Family.MFSK, 15.625, 16, 250.0, 250.0),
    ModeSpec(SignalClass.MFSK32, "MFSK-32", Family.MFSK, 31.25, 16, 500.0, 500.0),
    ModeSpec(SignalClass.MFSK64, "MFSK-64", Family.MFSK, 62.5, 16, 1000.0, 1000.0),
    ModeSpec(SignalClass.MT63_500, "MT63 / 500", Family.MULTI_CARRIER, 5.0, 64, 500.0, 500.0),
    ModeSpec(SignalClass.USB_VOICE, "USB (voice)", Family.SSB_USB, 0.0, 0, 2400.0, 2400.0, 1500.0),
    ModeSpec(SignalClass.LSB_VOICE, "LSB (voice)", Family.SSB_LSB, 0.0, 0, 2400.0, 2400.0, -1500.0),
    ModeSpec(SignalClass.AM_BROADCAST, "AM broadcast", Family.AM, 0.0, 0, 5000.0, 5000.0),
    ModeSpec(SignalClass.MORSE, "Morse Code", Family.OOK, 0.0, 0, 0.0, 200.0),
    ModeSpec(SignalClass.HF_FAX, "HF / Radio Fax", Family.FAX, 0.0, 0, 800.0, 1200.0),
)

_MODE_BY_CLASS = {spec.signal_class: spec for spec in _MODE_TABLE}


def mode_table() -> list[ModeSpec]:
    """All 20 mode specs, one per signal class, in table order."""
    return list(_MODE_TABLE)


def mode_spec(signal_class: SignalClass) -> ModeSpec:
    return _MODE_BY_CLASS[signal_class]


@dataclass
class IqFrame:
    """A fixed-length window of complex baseband samples (2048 @ 6 kHz)."""

    samples: np.ndarray
    sample_rate_hz: int = SAMPLE_RATE_HZ

    def __post_init__(self) -> None:
        self.samples = np.asarray(self.samples)
        if self.samples.ndim != 1 or len(self.samples) != FRAME_LEN:
            raise ValueError(f"frame must hold exactly {FRAME_LEN} samples")
        if self.sample_rate_hz != SAMPLE_RATE_HZ:
            raise ValueError(f"sample rate is fixed at {SAMPLE_RATE_HZ} Hz")
        if not np.all(np.isfinite(self.samples)):
            raise ValueError("frame contains non-finite samples")

    @property
    def duration_s(self) -> float:
        return len(self.samples) / self.sample_rate_hz


class RngStream:
    """Deterministic counter-based random stream.

    Built on the Philox generator, so equal seeds give equal sequences on
    every platform, and child streams derived from (seed, index) paths are
    independent of each other and of the order in which they are created.
    """

    def __init__(self, seed: int, path: tuple[int, ...] = ()):
        self.seed = int(seed)
        self.path = tuple(int(p) for p in path)
        ss = np.random.SeedSequence(self.seed, spawn_key=self.path)
        self._gen = np.random.Generator(np.random.Philox(ss))

    def child(self, index: int) -> "RngStream":
        """Independent stream keyed by (this stream's identity, index)."""
        return RngStream(self.seed, self.path + (int(index),))

    # Thin passthroughs to the underlying generator; every module draws
    # through these so the whole pipeline shares one determinism story.
    def uniform(self, low=0.0, high=1.0, size=None):
        return self._gen.uniform(low, high, size)

    def integers(self, low, high=None, size=None):
        return self._gen.integers(low, high, size)

    def standard_normal(self, size=None):
        return self._gen.standard_normal(size)

    def choice(self, options, size=None):
        return self._gen.choice(options, size)

    def __repr__(self) -> str:
        return f"RngStream(seed={self.seed}, path={self.path})"
