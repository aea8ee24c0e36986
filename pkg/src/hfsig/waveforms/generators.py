"""Per-class waveform synthesis at 6 kHz complex baseband.

Every generator returns exactly n samples, already windowed at a random
symbol-phase offset so frames do not align with symbol boundaries. Digital
modes sit at 0 Hz; the SSB voice channels occupy (0, +2700] / [-2700, 0)
relative to the suppressed carrier; AM keeps its carrier at 0 Hz.
"""

from __future__ import annotations

import numpy as np
from scipy import signal as sig

from hfsig.signal_model import SAMPLE_RATE_HZ, ModeSpec, RngStream
from hfsig.waveforms import encodings as enc
from hfsig.waveforms.payloads import PayloadKind, PayloadSource

FS = SAMPLE_RATE_HZ


def _crop(x, n, rng, pad):
    off = int(rng.integers(0, pad + 1)) if pad > 0 else 0
    if len(x) < off + n:
        raise AssertionError("generator produced too few samples")
    return x[off : off + n]


def _cpfsk(freq_hz, smooth_sigma=0.0):
    """Continuous-phase frequency modulation from a per-sample frequency.

    smooth_sigma applies a Gaussian frequency pulse (GFSK-style keying):
    the Gaussian's fast spectral decay keeps the keying splatter inside the
    mode's nominal band without any transmit filter.
    """
    if smooth_sigma >= 1.0:
        k = np.arange(-int(4 * smooth_sigma), int(4 * smooth_sigma) + 1)
        win = np.exp(-0.5 * (k / smooth_sigma) ** 2)
        win /= win.sum()
        freq_hz = sig.fftconvolve(freq_hz, win, mode="same")
    phase = 2 * np.pi * np.cumsum(freq_hz) / FS
    return np.exp(1j * phase)


def _cosine_track(symbols, sps, n_out):
    """Piecewise-cosine interpolation between consecutive symbol values.

    The value is exact on symbol instants and swings through a raised-cosine
    transition in between; a +1/-1 reversal therefore passes through zero,
    which is the classic PSK31 amplitude shape.
    """
    idx = np.arange(n_out)
    k = idx // sps
    u = (idx % sps) / sps
    a = symbols[k]
    b = symbols[k + 1]
    return a + (b - a) * 0.5 * (1 - np.cos(np.pi * u))


def _varicode_symbol_levels(n_symbols, rng):
    source = PayloadSource(PayloadKind.RANDOM_TEXT, rng)
    bits = enc.varicode_bits(source.text(n_symbols // 4 + 16))
    while len(bits) < n_symbols:
        bits = np.concatenate([bits, enc.varicode_bits(source.text(32))])
    bits = bits[:n_symbols]
    # Differential keying: a 0 bit reverses the carrier polarity.
    steps = np.where(bits == 0, -1.0, 1.0)
    return np.concatenate([[1.0], np.cumprod(steps)])


def gen_psk(spec: ModeSpec, n: int, rng: RngStream):
    sps = int(round(FS / spec.baud_rate))
    pad = sps
    total = n + pad
    nsym = total // sps + 2
    levels = _varicode_symbol_levels(nsym, rng)
    x = _cosine_track(levels, sps, total).astype(complex)
    return _crop(x, n, rng, pad)


def _fsk_from_halfbits(halfbits, spec, n, rng, pad):
    total = n + pad
    hb_idx = np.floor(np.arange(total) * (2 * spec.baud_rate) / FS).astype(int)
    levels = halfbits[hb_idx].astype(float)
    freq = (levels - 0.5) * spec.shift_or_bandwidth_hz
    x = _cpfsk(freq, 0.22 * FS / spec.baud_rate)
    return _crop(x, n, rng, pad)


def gen_rtty(spec: ModeSpec, n: int, rng: RngStream):
    pad = int(np.ceil(FS / spec.baud_rate))
    source = PayloadSource(PayloadKind.RANDOM_TEXT, rng)
    total_halfbits = int(np.ceil((n + pad) * 2 * spec.baud_rate / FS)) + 4
    halfbits = enc.rtty_halfbits(enc.ita2_codes(source.text(total_halfbits // 15 + 8, teleprinter=True)))
    while len(halfbits) < total_halfbits:
        more = enc.rtty_halfbits(enc.ita2_codes(source.text(8, teleprinter=True)))
        halfbits = np.concatenate([halfbits, more])
    return _fsk_from_halfbits(halfbits, spec, n, rng, pad)


def gen_navtex(spec: ModeSpec, n: int, rng: RngStream):
    pad = int(np.ceil(FS / spec.baud_rate))
    source = PayloadSource(PayloadKind.RANDOM_TEXT, rng)
    total_bits = int(np.ceil((n + pad) * spec.baud_rate / FS)) + 4
    bits = enc.ccir476_bits(enc.ita2_codes(source.text(total_bits // 14 + 8, teleprinter=True)))
    while len(bits) < total_bits:
        bits = np.concatenate([bits, enc.ccir476_bits(enc.ita2_codes(source.text(8, teleprinter=True)))])
    halfbits = np.repeat(bits, 2)
    return _fsk_from_halfbits(halfbits, spec, n, rng, pad)


def gen_mfsk(spec: ModeSpec, n: int, rng: RngStream):
    """Continuous-phase MFSK with tone spacing equal to the baud rate."""
    sps = int(round(FS / spec.baud_rate))
    pad = sps
    total = n + pad
    m = spec.tone_count
    nsym = total // sps + 2
    syms = PayloadSource(PayloadKind.RANDOM_BITS, rng).symbols(nsym, m)
    tone = (syms - (m - 1) / 2.0) * spec.baud_rate
    freq = np.repeat(tone, sps)[:total]
    x = _cpfsk(freq, 0.12 * sps)
    return _crop(x, n, rng, pad)


def gen_mt63(spec: ModeSpec, n: int, rng: RngStream):
    """64 BPSK subcarriers across the named bandwidth, staggered in time."""
    carriers = spec.tone_count
    sps = int(round(FS / spec.baud_rate))  # 1200 samples per symbol
    pad = sps
    total = n + pad
    nsym = total // sps + 3
    spacing = spec.shift_or_bandwidth_hz / carriers
    f_k = (np.arange(carriers) - (carriers - 1) / 2.0) * spacing
    offsets = np.floor(np.arange(carriers) * sps / carriers).astype(int)
    payload = PayloadSource(PayloadKind.RANDOM_BITS, rng)
    bits = np.where(payload.bits((carriers, nsym + 1)) > 0, 1.0, -1.0)
    idx = np.arange(total)[None, :] + offsets[:, None]
    k = idx // sps
    u = (idx % sps) / sps
    rows = np.arange(carriers)[:, None]
    a = bits[rows, k]
    b = bits[rows, k + 1]
    tracks = a + (b - a) * 0.5 * (1 - np.cos(np.pi * u))
    phases = rng.uniform(0, 2 * np.pi, size=carriers)
    mix = np.exp(1j * (2 * np.pi * f_k[:, None] * np.arange(total)[None, :] / FS + phases[:, None]))
    x = np.sum(tracks * mix, axis=0)
    return _crop(x, n, rng, pad)


def gen_ssb(spec: ModeSpec, n: int, rng: RngStream):
    audio = PayloadSource(PayloadKind.SYNTHETIC_AUDIO, rng).audio(n, (300.0, 2700.0))
    analytic = sig.hilbert(audio)
    if spec.center_freq_hz < 0:
        return np.conj(analytic)
    return analytic


def gen_am(spec: ModeSpec, n: int, rng: RngStream):
    audio = PayloadSource(PayloadKind.SYNTHETIC_AUDIO, rng).audio(n, (50.0, 2500.0))
    # Broadcast-style processing: normalize to a 12 dB crest factor and let
    # rare peaks clip instead of scaling the program material down.
    audio = audio / (4.0 * np.sqrt(np.mean(audio**2)))
    depth = rng.uniform(0.3, 0.9)
    envelope = np.maximum(1.0 + depth * audio, 0.0)
    return envelope.astype(complex)


def gen_morse(spec: ModeSpec, n: int, rng: RngStream):
    wpm = rng.uniform(10.0, 40.0)
    dot = int(round(1.2 / wpm * FS))
    pad = 7 * dot
    total = n + pad
    env = np.zeros(total + 14 * dot)
    pos = 0
    letters = "ABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789"
    while pos < total:
        word = enc.random_text(rng, int(rng.integers(2, 9)), letters)
        for on, dots in enc.morse_elements(word + " "):
            span = dots * dot
            if on:
                env[pos : pos + span] = 1.0
            pos += span
            if pos >= len(env):
                break
    ramp = int(0.005 * FS)
    win = np.hanning(2 * ramp + 1)
    win /= win.sum()
    env = sig.fftconvolve(env[:total], win, mode="same")
    return _crop(env.astype(complex), n, rng, pad)


def gen_fax(spec: ModeSpec, n: int, rng: RngStream):
    """Frequency-modulated scan lines: black/white runs at 120 lines/min.

    Each 0.5 s line opens with a short black marker, then random image runs;
    white maps to +deviation and black to -deviation.
    """
    line_len = FS // 2  # 0.5 s per line
    pad = line_len
    total = n + pad
    deviation = spec.shift_or_bandwidth_hz / 2.0
    source = PayloadSource(PayloadKind.SYNTHETIC_IMAGE_LINES, rng)
    lines = []
    while sum(len(l) for l in lines) < total:
        lines.append(source.image_line(line_len))
    m = np.concatenate(lines)[:total]
    x = _cpfsk(deviation * m, 0.002 * FS)
    return _crop(x, n, rng, pad)
