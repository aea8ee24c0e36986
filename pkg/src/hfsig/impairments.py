"""Non-fading impairment operators: offsets, noise, receiver filter.

All operators are pure functions of their inputs plus an explicit random
stream, so the whole chain is reproducible and parallel-safe.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy import signal as sig

from hfsig.signal_model import FRAME_LEN, SAMPLE_RATE_HZ, RngStream

NYQUIST_BANDWIDTH_HZ = float(SAMPLE_RATE_HZ)
IMPULSE_EXPONENTS = (1.5, 2.0, 3.0)
FS_OFFSET_CHOICES = (0.0, 0.005, -0.005, 0.01, -0.01)

# Windowed-sinc fractional resampler: 2*RESAMPLER_HALF_TAPS taps per output
# sample, Kaiser-windowed for >60 dB image rejection.
RESAMPLER_HALF_TAPS = 16
_RESAMPLER_KAISER_BETA = 8.6


@dataclass(frozen=True)
class NoiseSpec:
    """Additive-noise selection: AWGN, or magnitude-exponentiated impulsive."""

    kind: str  # "awgn" | "impulsive"
    snr_db: float
    exponent: float | None = None

    def __post_init__(self) -> None:
        if self.kind not in ("awgn", "impulsive"):
            raise ValueError(f"unknown noise kind: {self.kind}")
        if self.kind == "impulsive" and self.exponent not in IMPULSE_EXPONENTS:
            raise ValueError(f"impulse exponent must be one of {IMPULSE_EXPONENTS}")
        if not np.isfinite(self.snr_db):
            raise ValueError("snr_db must be finite")


@dataclass(frozen=True)
class RxFilterSpec:
    """Receiver bandpass: center and bandwidth at complex baseband."""

    center_hz: float
    bandwidth_hz: float

    def __post_init__(self) -> None:
        if not (0 < self.bandwidth_hz <= NYQUIST_BANDWIDTH_HZ):
            raise ValueError("bandwidth outside (0, 6000]")
        lo = self.center_hz - self.bandwidth_hz / 2
        hi = self.center_hz + self.bandwidth_hz / 2
        if lo < -NYQUIST_BANDWIDTH_HZ / 2 - 1e-9 or hi > NYQUIST_BANDWIDTH_HZ / 2 + 1e-9:
            raise ValueError("passband exceeds the Nyquist band")


def apply_phase_offset(x, phi_rad: float):
    """Rotate every sample by a constant phase. Preserves power exactly."""
    if not np.isfinite(phi_rad):
        raise ValueError("phase must be finite")
    if phi_rad == 0.0:
        return np.asarray(x).copy()
    return np.asarray(x) * np.exp(1j * phi_rad)


def apply_frequency_offset(x, delta_f_hz: float, fs=SAMPLE_RATE_HZ):
    """Mix the signal with a complex exponential at delta_f_hz."""
    if abs(delta_f_hz) > fs / 2:
        raise ValueError("frequency offset beyond Nyquist")
    x = np.asarray(x)
    if delta_f_hz == 0.0:
        return x.copy()
    n = np.arange(len(x))
    return x * np.exp(2j * np.pi * delta_f_hz * n / fs)


def apply_sample_rate_offset(x, delta: float, n_out: int = FRAME_LEN):
    """Resample by a clock-offset factor (1 + delta) and crop to n_out.

    Models a receiver whose ADC clock runs fast/slow by `delta`: a tone at
    f lands at f / (1 + delta). delta = 0 is a pure crop. Uses windowed-sinc
    interpolation (band-limited, >60 dB image rejection).
    """
    x = np.asarray(x)
    if delta == 0.0:
        if len(x) < n_out:
            raise ValueError("input shorter than requested output")
        return x[:n_out].copy()
    ratio = float(Fraction(1.0 + delta).limit_denominator(100000))
    half = RESAMPLER_HALF_TAPS
    # Output sample n is the input evaluated at half + n / ratio; the `half`
    # start offset keeps the interpolation kernel inside the input.
    positions = half + np.arange(n_out) / ratio
    need = int(np.ceil(positions[-1])) + half + 1
    if len(x) < need:
        raise ValueError(f"input too short for resampling: need {need}, got {len(x)}")
    base = np.floor(positions).astype(int)
    frac = positions - base
    taps = np.arange(-half + 1, half + 1)
    # sinc interpolation kernel per output sample, Kaiser-tapered
    t = taps[None, :] - frac[:, None]
    kernel = np.sinc(t) * np.i0(_RESAMPLER_KAISER_BETA * np.sqrt(np.maximum(0.0, 1 - (t / half) ** 2))) / np.i0(_RESAMPLER_KAISER_BETA)
    idx = base[:, None] + taps[None, :]
    return np.sum(x[idx] * kernel, axis=1)


def synthesize_noise(kind: str, n: int, rng: RngStream, exponent: float | None = None):
    """Unit-mean-power complex noise of the requested kind.

    AWGN is circular complex Gaussian. Impulsive noise applies
    sign(g) * |g|^exponent independently to the real and imaginary parts of
    AWGN, then rescales the sequence back to unit mean power, so different
    exponents are compared at the same noise power.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if kind == "awgn":
        z = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    elif kind == "impulsive":
        if exponent is None or exponent <= 0:
            raise ValueError("impulsive noise needs a positive exponent")
        re = rng.standard_normal(n)
        im = rng.standard_normal(n)
        re = np.sign(re) * np.abs(re) ** exponent
        im = np.sign(im) * np.abs(im) ** exponent
        z = re + 1j * im
    else:
        raise ValueError(f"unknown noise kind: {kind}")
    return z / np.sqrt(np.mean(np.abs(z) ** 2))


def add_noise(x, spec: NoiseSpec | None, rng: RngStream):
    """Add noise scaled to the labeled SNR against the measured input power.

    SNR is referenced to the full Nyquist band: noise power is set from the
    pre-noise signal power regardless of any later filtering. spec=None
    (noise disabled) returns the frame unchanged.
    """
    x = np.asarray(x)
    if spec is None:
        return x.copy()
    p_signal = np.mean(np.abs(x) ** 2)
    noise = synthesize_noise(spec.kind, len(x), rng, spec.exponent)
    scale = np.sqrt(p_signal * 10.0 ** (-spec.snr_db / 10.0))
    return x + scale * noise


def _design_bandpass(filt: RxFilterSpec, fs=SAMPLE_RATE_HZ):
    """Linear-phase FIR complex bandpass taps for the given passband.

    The transition band sits entirely outside the nominal passband, so the
    in-band gain stays flat; for filters approaching the full Nyquist band
    the cutoff saturates just below fs/2 and the filter degenerates toward
    a passthrough, which is the physically sensible limit.
    """
    pass_edge = filt.bandwidth_hz / 2.0
    trans = max(50.0, 0.15 * filt.bandwidth_hz)
    cutoff = min(pass_edge + trans / 2.0, fs / 2.0 - 1.0)
    atten = 70.0
    beta = 0.1102 * (atten - 8.7)
    numtaps = int(np.ceil((atten - 7.95) / (2.285 * 2 * np.pi * trans / fs)))
    numtaps |= 1  # odd length, exact linear phase
    lowpass = sig.firwin(numtaps, cutoff, window=("kaiser", beta), fs=fs)
    n = np.arange(numtaps) - (numtaps - 1) / 2
    return lowpass * np.exp(2j * np.pi * filt.center_hz * n / fs)


def apply_rx_filter(x, filt: RxFilterSpec, fs=SAMPLE_RATE_HZ):
    """Bandpass the frame; reflection padding keeps the output length.

    A full-Nyquist filter is the identity. Out-of-band rejection is >= 60 dB,
    in-band ripple well under 0.1 dB.
    """
    x = np.asarray(x)
    if filt.bandwidth_hz >= NYQUIST_BANDWIDTH_HZ:
        return x.copy()
    taps = _design_bandpass(filt, fs)
    pad = len(taps) // 2
    if pad >= len(x):
        raise ValueError("frame too short for the filter length")
    padded = np.concatenate([x[pad:0:-1], x, x[-2:-pad - 2:-1]])
    return sig.fftconvolve(padded, taps, mode="valid")
