"""Synthetic shortwave-signal dataset toolkit.

Generates the 20 HF signal classes at 6 kHz complex baseband, distorts them
with a parameterized impairment chain (offsets, noise, receiver filter,
Watterson ionospheric fading) and writes labeled, reproducible datasets.
"""

from hfsig.signal_model import (
    FRAME_LEN,
    SAMPLE_RATE_HZ,
    IqFrame,
    ModeSpec,
    RngStream,
    SignalClass,
    mode_table,
)

__version__ = "0.1.0"

__all__ = [
    "FRAME_LEN",
    "SAMPLE_RATE_HZ",
    "IqFrame",
    "ModeSpec",
    "RngStream",
    "SignalClass",
    "mode_table",
]
