"""Clean waveform generators for the 20 signal classes."""

from hfsig.waveforms.api import WaveformRequest, generate_waveform, nominal_bandwidth

__all__ = ["WaveformRequest", "generate_waveform", "nominal_bandwidth"]
