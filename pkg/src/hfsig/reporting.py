"""Dataset reports: textual summaries, CSV plot data, and rendered figures.

The `inspect` command prints the report; with plot emission enabled it also
writes (snr_bin, value) CSVs and static PNG figures next to the dataset.
"""

from __future__ import annotations

import csv
from collections import Counter
from pathlib import Path

import numpy as np

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from hfsig.signal_model import SignalClass

SNR_BIN_DB = 5.0


def snr_bin_edges(snrs):
    lo = np.floor(min(snrs) / SNR_BIN_DB) * SNR_BIN_DB
    hi = np.ceil(max(snrs) / SNR_BIN_DB) * SNR_BIN_DB
    if hi <= lo:
        hi = lo + SNR_BIN_DB
    return np.arange(lo, hi + SNR_BIN_DB, SNR_BIN_DB)


def class_histogram(rows) -> Counter:
    return Counter(r["class"] for r in rows)


def snr_histogram(rows):
    """(bin_low_edge, count) pairs over 5 dB bins; None SNRs are skipped."""
    snrs = [r["snr_db"] for r in rows if r["snr_db"] is not None]
    if not snrs:
        return []
    edges = snr_bin_edges(snrs)
    counts, _ = np.histogram(snrs, bins=edges)
    return list(zip(edges[:-1], counts))


def field_summary(rows) -> dict:
    """Distribution summaries for every impairment field."""
    out = {}
    freq = np.array([r["freq_offset_hz"] for r in rows])
    phase = np.array([r["phase_rad"] for r in rows])
    bw = np.array([r["rx_filter_bw_hz"] for r in rows])
    out["freq_offset_hz"] = (float(freq.min()), float(freq.max()))
    out["phase_rad"] = (float(phase.min()), float(phase.max()))
    out["rx_filter_bw_hz"] = (float(bw.min()), float(bw.max()))
    out["fs_offset"] = Counter(r["fs_offset"] for r in rows)
    out["noise_kind"] = Counter(r["noise_kind"] for r in rows)
    out["impulse_exponent"] = Counter(r["impulse_exponent"] for r in rows
                                      if r["impulse_exponent"] is not None)
    out["channel"] = Counter(r["channel"] for r in rows)
    return out


def render_inspect_report(header, rows, integrity: tuple[bool, str]) -> str:
    lines = [
        f"recipe: {header['recipe']}   split: {header.get('split', '?')}   "
        f"master_seed: {header['master_seed']}",
        f"examples: {len(rows)}   frame_len: {header['frame_len']} @ "
        f"{header['sample_rate_hz']} Hz   format v{header['format_version']}",
        f"integrity: {'OK' if integrity[0] else 'FAILED'} ({integrity[1]})",
        "",
        "class histogram:",
    ]
    for cls in SignalClass:
        count = sum(1 for r in rows if r["class"] == cls.value)
        lines.append(f"  {cls.value:18s} {count}")
    hist = snr_histogram(rows)
    lines.append("")
    if hist:
        lines.append("SNR histogram (5 dB bins):")
        for edge, count in hist:
            lines.append(f"  [{edge:+6.1f}, {edge + SNR_BIN_DB:+6.1f}) dB  {count}")
    else:
        lines.append("SNR histogram: no noise applied")
    summary = field_summary(rows)
    lines.append("")
    lines.append("impairment fields:")
    lines.append(f"  freq_offset_hz  range {summary['freq_offset_hz']}")
    lines.append(f"  phase_rad       range {summary['phase_rad']}")
    lines.append(f"  rx_filter_bw_hz range {summary['rx_filter_bw_hz']}")
    lines.append(f"  fs_offset       {dict(summary['fs_offset'])}")
    lines.append(f"  noise_kind      {dict(summary['noise_kind'])}")
    if summary["impulse_exponent"]:
        lines.append(f"  impulse_exp     {dict(summary['impulse_exponent'])}")
    channels = summary["channel"]
    lines.append(f"  channels        {len(channels)} distinct "
                 f"(none: {channels.get('none', 0)})")
    return "\n".join(lines)


def write_plot_data(out_dir, stem, rows) -> list[Path]:
    """Emit the report's plot data as CSVs plus rendered PNG figures."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []

    hist = snr_histogram(rows)
    if hist:
        csv_path = out / f"{stem}_snr_hist.csv"
        with open(csv_path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["snr_bin", "value"])
            writer.writerows(hist)
        written.append(csv_path)

        fig, ax = plt.subplots(figsize=(6, 3.5))
        edges = [e for e, _ in hist]
        ax.bar(edges, [c for _, c in hist], width=SNR_BIN_DB * 0.9, align="edge")
        ax.set_xlabel("SNR bin (dB)")
        ax.set_ylabel("examples")
        ax.set_title(f"{stem}: labeled SNR distribution")
        fig.tight_layout()
        png = out / f"{stem}_snr_hist.png"
        fig.savefig(png, dpi=120)
        plt.close(fig)
        written.append(png)

    counts = class_histogram(rows)
    csv_path = out / f"{stem}_class_hist.csv"
    with open(csv_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["class", "value"])
        for cls in SignalClass:
            writer.writerow([cls.value, counts.get(cls.value, 0)])
    written.append(csv_path)

    fig, ax = plt.subplots(figsize=(7, 3.5))
    names = [cls.value for cls in SignalClass]
    ax.bar(range(len(names)), [counts.get(n, 0) for n in names])
    ax.set_xticks(range(len(names)))
    ax.set_xticklabels(names, rotation=75, fontsize=7)
    ax.set_ylabel("examples")
    ax.set_title(f"{stem}: class balance")
    fig.tight_layout()
    png = out / f"{stem}_class_hist.png"
    fig.savefig(png, dpi=120)
    plt.close(fig)
    written.append(png)
    return written


def write_spectrum_figure(out_path, frame, fs, title) -> Path:
    """Periodogram figure for a single frame (the `measure` report)."""
    from hfsig.metrology import welch_psd

    est = welch_psd(frame, fs=fs, nperseg=min(len(frame), 2048))
    fig, ax = plt.subplots(figsize=(6, 3.5))
    with np.errstate(divide="ignore"):
        ax.plot(est.freqs_hz, 10 * np.log10(est.psd + 1e-20))
    ax.set_xlabel("frequency (Hz)")
    ax.set_ylabel("PSD (dB/Hz)")
    ax.set_title(title)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(out_path, dpi=120)
    plt.close(fig)
    return Path(out_path)
