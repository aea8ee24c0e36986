"""Watterson ionospheric fading: Gaussian-spectrum tap gains, the two-tap
delay line, and the standardized channel parameter sets."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from hfsig.signal_model import SAMPLE_RATE_HZ, RngStream


@dataclass(frozen=True)
class WattersonParams:
    """One fading-channel parameterization.

    freq_spread_hz is the two-sided Doppler spread (2 sigma of the Gaussian
    Doppler spectrum). freq_offset_hz, when nonzero, shifts the delayed path.
    """

    name: str
    paths: int
    differential_delay_ms: float
    freq_spread_hz: float
    freq_offset_hz: float = 0.0

    def __post_init__(self) -> None:
        if self.paths not in (1, 2):
            raise ValueError("paths must be 1 or 2")
        if self.paths == 1 and self.differential_delay_ms != 0.0:
            raise ValueError("single-path channels have no differential delay")
        if self.differential_delay_ms < 0 or self.freq_spread_hz <= 0:
            raise ValueError("delay must be >= 0 and spread > 0")


@dataclass(frozen=True)
class ChannelSet:
    name: str
    channels: tuple[WattersonParams, ...]
    includes_no_channel: bool = True


_CCIR520 = (
    WattersonParams("Flat 1", 1, 0.0, 0.2),
    WattersonParams("Flat 2", 1, 0.0, 1.0),
    WattersonParams("Good", 2, 0.5, 0.1),
    WattersonParams("Moderate", 2, 1.0, 0.5),
    WattersonParams("Poor", 2, 2.0, 1.0),
    WattersonParams("Flutter", 2, 0.5, 10.0),
    WattersonParams("Doppler", 2, 0.5, 0.2, 5.0),
)

_ITU1487 = (
    WattersonParams("Low - Quiet", 2, 0.5, 0.5),
    WattersonParams("Low - Moderate", 2, 2.0, 1.5),
    WattersonParams("Low - Disturbed", 2, 6.0, 10.0),
    WattersonParams("Mid - Quiet", 2, 0.5, 0.1),
    WattersonParams("Mid - Moderate", 2, 1.0, 0.5),
    WattersonParams("Mid - Disturbed", 2, 2.0, 1.0),
    WattersonParams("Mid - NVIS", 2, 7.0, 1.0),
    WattersonParams("High - Quiet", 2, 1.0, 0.5),
    WattersonParams("High - Moderate", 2, 3.0, 10.0),
    WattersonParams("High - Disturbed", 2, 7.0, 30.0),
)

# CCIR plus the worst ITU channels plus custom extreme cases.
_EXTENDED = _CCIR520 + (
    WattersonParams("Low - Disturbed", 2, 6.0, 10.0),
    WattersonParams("Mid - NVIS", 2, 7.0, 1.0),
    WattersonParams("High - Moderate", 2, 3.0, 10.0),
    WattersonParams("High - Disturbed", 2, 7.0, 30.0),
    WattersonParams("Poor Doppler", 2, 2.0, 1.0, 10.0),
    WattersonParams("High - Moderate Doppler", 2, 3.0, 10.0, 8.0),
    WattersonParams("Extreme 1", 2, 1.0, 40.0),
    WattersonParams("Extreme 2", 2, 5.0, 0.5),
)

_SETS = {
    "ccir520": ChannelSet("ccir520", _CCIR520),
    "itu1487": ChannelSet("itu1487", _ITU1487),
    "extended": ChannelSet("extended", _EXTENDED),
}


def channel_set(name: str) -> ChannelSet:
    """The named channel parameter table (ccir520 | itu1487 | extended)."""
    key = name.lower().replace(" ", "").replace("-", "").replace("_", "")
    if key not in _SETS:
        raise ValueError(f"unknown channel set: {name}")
    return _SETS[key]


def generate_tap_gain(spread_hz: float, n: int, fs_hz: float, rng: RngStream):
    """Complex Gaussian tap-gain process with a Gaussian Doppler spectrum.

    The spectrum's two-sided spread (2 sigma) equals spread_hz and the mean
    power is 1. Synthesized spectrally at a low internal rate (>= 32 x
    spread) and linearly interpolated up to fs_hz; the interpolation images
    sit 30+ dB down at 64 sigma, far outside the spectrum of interest.
    """
    if spread_hz <= 0:
        raise ValueError("spread must be positive")
    if n < 1:
        raise ValueError("n must be >= 1")
    sigma = spread_hz / 2.0
    duration = n / fs_hz
    m = max(int(np.ceil(duration * 32.0 * spread_hz)) + 2, 16)
    rate = m / duration
    freqs = np.fft.fftfreq(m, d=1.0 / rate)
    shape = np.exp(-(freqs**2) / (4.0 * sigma**2))  # sqrt of the Gaussian PSD
    w = (rng.standard_normal(m) + 1j * rng.standard_normal(m)) / np.sqrt(2.0)
    spectrum = w * shape
    coarse = np.fft.ifft(spectrum) * m / np.sqrt(np.sum(shape**2))
    # The synthesis is circular, so wrap the last interpolation segment.
    xp = np.arange(m + 1)
    fp = np.concatenate([coarse, coarse[:1]])
    t = np.arange(n) / fs_hz * rate
    gain = np.interp(t, xp, fp.real) + 1j * np.interp(t, xp, fp.imag)
    return gain


def delay_samples(delay_ms: float, fs_hz: float = SAMPLE_RATE_HZ) -> int:
    d = delay_ms * 1e-3 * fs_hz
    return int(round(d))


def apply_watterson(x, params: WattersonParams, rng: RngStream, fs_hz: float = SAMPLE_RATE_HZ):
    """Run a sequence through the two-tap Watterson channel.

    y(t) = g1(t) x(t)                                   for one path,
    y(t) = [g1(t) x(t) + g2(t) x(t - tau) e^(j2 pi f t)] / sqrt(2)  for two,

    with g1, g2 independent unit-power tap gains, so the mean channel power
    is 1 either way. The first tau samples of the delayed path have no
    history; feed a longer source and discard the head to avoid the edge.
    """
    x = np.asarray(x)
    g1 = generate_tap_gain(params.freq_spread_hz, len(x), fs_hz, rng.child(0))
    if params.paths == 1:
        return x * g1
    d = delay_samples(params.differential_delay_ms, fs_hz)
    if d >= len(x):
        raise ValueError("differential delay exceeds the input length")
    g2 = generate_tap_gain(params.freq_spread_hz, len(x), fs_hz, rng.child(1))
    delayed = np.concatenate([np.zeros(d, dtype=x.dtype), x[: len(x) - d]])
    if params.freq_offset_hz:
        t = np.arange(len(x)) / fs_hz
        delayed = delayed * np.exp(2j * np.pi * params.freq_offset_hz * t)
    return (x * g1 + delayed * g2) / np.sqrt(2.0)
