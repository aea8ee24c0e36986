"""Independent measurement tools: power, SNR, tone frequency, occupied
bandwidth, Doppler spread, kurtosis.

These are the instruments the test suite and the `measure` CLI command use
to check the synthesis chain, so they deliberately share no code with the
generators they verify.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import signal as sig

from hfsig.signal_model import SAMPLE_RATE_HZ


@dataclass(frozen=True)
class SpectrumEstimate:
    """Two-sided Welch PSD covering [-fs/2, fs/2)."""

    freqs_hz: np.ndarray
    psd: np.ndarray
    resolution_hz: float


def welch_psd(x, fs=SAMPLE_RATE_HZ, nperseg=4096) -> SpectrumEstimate:
    """Averaged-periodogram PSD estimate (Hann window, 50% overlap)."""
    x = np.asarray(x)
    nperseg = int(min(nperseg, len(x)))
    freqs, psd = sig.welch(
        x, fs=fs, window="hann", nperseg=nperseg, noverlap=nperseg // 2,
        return_onesided=False, detrend=False,
    )
    order = np.argsort(freqs)
    return SpectrumEstimate(freqs[order], psd[order], fs / nperseg)


def mean_power(x) -> float:
    """Mean of squared magnitudes."""
    x = np.asarray(x)
    if x.size == 0:
        raise ValueError("empty sequence")
    return float(np.mean(np.abs(x) ** 2))


def measure_snr(clean, noisy) -> float:
    """SNR in dB of `noisy` against the known `clean` reference.

    Noise power is taken over the full Nyquist band (it is simply the
    residual noisy - clean). Returns +inf when the residual is zero.
    """
    clean = np.asarray(clean)
    noisy = np.asarray(noisy)
    if clean.shape != noisy.shape:
        raise ValueError("clean and noisy must have equal length")
    p_noise = mean_power(noisy - clean)
    if p_noise == 0.0:
        return float("inf")
    return 10.0 * np.log10(mean_power(clean) / p_noise)


def estimate_tone_frequency(x, fs=SAMPLE_RATE_HZ) -> float:
    """Frequency of the dominant spectral peak, parabolically refined.

    Raises if no bin dominates the spectrum (flat input).
    """
    x = np.asarray(x)
    n = len(x)
    spec = np.abs(np.fft.fft(x)) ** 2
    k = int(np.argmax(spec))
    peak = spec[k]
    floor = np.median(spec)
    # white noise alone peaks near ln(n) ~ 8-20x the median; a real carrier
    # clears this by orders of magnitude
    if peak < 50.0 * floor or peak == 0.0:
        raise ValueError("no dominant spectral peak")
    # Parabolic interpolation on log power around the winning bin.
    km, kp = (k - 1) % n, (k + 1) % n
    with np.errstate(divide="ignore"):
        a, b, c = np.log(spec[km] + 1e-300), np.log(peak), np.log(spec[kp] + 1e-300)
    denom = a - 2 * b + c
    delta = 0.5 * (a - c) / denom if denom != 0 else 0.0
    delta = float(np.clip(delta, -0.5, 0.5))
    freq = (k + delta) * fs / n
    if freq > fs / 2:
        freq -= fs
    return float(freq)


def occupied_bandwidth(x, fraction=0.99, fs=SAMPLE_RATE_HZ, center_hz=0.0) -> float:
    """Width of the smallest band centered on `center_hz` holding `fraction`
    of the total energy."""
    x = np.asarray(x)
    if len(x) < 2**12:
        raise ValueError("sequence too short for a stable bandwidth estimate")
    est = welch_psd(x, fs=fs, nperseg=min(len(x), 8192))
    dist = np.abs(est.freqs_hz - center_hz)
    order = np.argsort(dist)
    cum = np.cumsum(est.psd[order])
    total = cum[-1]
    if total == 0.0:
        return 0.0
    stop = int(np.searchsorted(cum, fraction * total))
    stop = min(stop, len(order) - 1)
    return float(2.0 * dist[order[stop]])


def estimate_doppler_spread(gain, fs=SAMPLE_RATE_HZ) -> float:
    """Two-sided Doppler spread (2 x spectral std dev) of a tap-gain process.

    The gain sequence is usually enormously oversampled, so it is first
    decimated (plain slicing; the process is already band-limited) to a rate
    where the PSD second moment is well conditioned.
    """
    g = np.asarray(gain)
    if len(g) < 4096:
        raise ValueError("gain sequence too short")
    # Coarse decorrelation time via the autocorrelation at doubling lags.
    p0 = mean_power(g)
    if p0 == 0.0:
        return 0.0
    lag = 1
    ratio = 1.0
    while lag < len(g) // 4:
        r = np.vdot(g[:-lag], g[lag:]) / (len(g) - lag)
        ratio = abs(r) / p0
        if ratio < 0.5:
            break
        lag *= 2
    if ratio >= 0.9:
        return 0.0  # no measurable decorrelation: effectively constant gain
    # Gaussian-spectrum relation R(tau)/R(0) = exp(-2 pi^2 sigma^2 tau^2).
    sigma_coarse = np.sqrt(max(-np.log(max(ratio, 1e-12)), 1e-12) / (2 * np.pi**2)) / (lag / fs)
    step = max(1, int(fs / (64.0 * sigma_coarse)))
    gd = g[::step]
    fsd = fs / step
    est = welch_psd(gd, fs=fsd, nperseg=min(len(gd), 4096))
    psd = est.psd.copy()
    psd[psd < psd.max() * 1e-4] = 0.0  # drop the numerical floor before the moment
    total = psd.sum()
    if total == 0.0:
        return 0.0
    var = float(np.sum(psd * est.freqs_hz**2) / total)
    return 2.0 * np.sqrt(var)


def excess_kurtosis(x) -> float:
    """Fourth standardized moment minus 3, for a real-valued sequence."""
    x = np.asarray(x, dtype=float)
    if len(x) < 10**4:
        raise ValueError("sequence too short for a stable kurtosis estimate")
    x = x - np.mean(x)
    var = np.mean(x**2)
    if var == 0.0:
        raise ValueError("zero variance")
    return float(np.mean(x**4) / var**2 - 3.0)
