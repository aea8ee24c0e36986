import numpy as np
import pytest

import oracles
from hfsig.fading import (
    WattersonParams,
    apply_watterson,
    channel_set,
    delay_samples,
    generate_tap_gain,
)
from hfsig.signal_model import RngStream

FS = 6000

# Channel parameter tables, value for value.
CCIR520_EXPECTED = [
    ("Flat 1", 1, 0.0, 0.2, 0.0),
    ("Flat 2", 1, 0.0, 1.0, 0.0),
    ("Good", 2, 0.5, 0.1, 0.0),
    ("Moderate", 2, 1.0, 0.5, 0.0),
    ("Poor", 2, 2.0, 1.0, 0.0),
    ("Flutter", 2, 0.5, 10.0, 0.0),
    ("Doppler", 2, 0.5, 0.2, 5.0),
]

ITU1487_EXPECTED = [
    ("Low - Quiet", 2, 0.5, 0.5, 0.0),
    ("Low - Moderate", 2, 2.0, 1.5, 0.0),
    ("Low - Disturbed", 2, 6.0, 10.0, 0.0),
    ("Mid - Quiet", 2, 0.5, 0.1, 0.0),
    ("Mid - Moderate", 2, 1.0, 0.5, 0.0),
    ("Mid - Disturbed", 2, 2.0, 1.0, 0.0),
    ("Mid - NVIS", 2, 7.0, 1.0, 0.0),
    ("High - Quiet", 2, 1.0, 0.5, 0.0),
    ("High - Moderate", 2, 3.0, 10.0, 0.0),
    ("High - Disturbed", 2, 7.0, 30.0, 0.0),
]

EXTENDED_EXPECTED = CCIR520_EXPECTED + [
    ("Low - Disturbed", 2, 6.0, 10.0, 0.0),
    ("Mid - NVIS", 2, 7.0, 1.0, 0.0),
    ("High - Moderate", 2, 3.0, 10.0, 0.0),
    ("High - Disturbed", 2, 7.0, 30.0, 0.0),
    ("Poor Doppler", 2, 2.0, 1.0, 10.0),
    ("High - Moderate Doppler", 2, 3.0, 10.0, 8.0),
    ("Extreme 1", 2, 1.0, 40.0, 0.0),
    ("Extreme 2", 2, 5.0, 0.5, 0.0),
]


class TestChannelTables:
    @pytest.mark.parametrize("name,expected,size", [
        ("ccir520", CCIR520_EXPECTED, 7),
        ("itu1487", ITU1487_EXPECTED, 10),
        ("extended", EXTENDED_EXPECTED, 15),
    ])
    def test_value_for_value(self, name, expected, size):
        cs = channel_set(name)
        assert len(cs.channels) == size
        assert cs.includes_no_channel
        for ch, (nm, paths, delay, spread, offset) in zip(cs.channels, expected):
            assert ch.name == nm
            assert ch.paths == paths
            assert ch.differential_delay_ms == delay
            assert ch.freq_spread_hz == spread
            assert ch.freq_offset_hz == offset

    def test_specific_rows(self):
        good = channel_set("ccir520").channels[2]
        assert (good.paths, good.differential_delay_ms, good.freq_spread_hz) == (2, 0.5, 0.1)
        disturbed = [c for c in channel_set("itu1487").channels if c.name == "High - Disturbed"][0]
        assert (disturbed.differential_delay_ms, disturbed.freq_spread_hz) == (7.0, 30.0)
        poor_dop = [c for c in channel_set("extended").channels if c.name == "Poor Doppler"][0]
        assert (poor_dop.differential_delay_ms, poor_dop.freq_spread_hz,
                poor_dop.freq_offset_hz) == (2.0, 1.0, 10.0)

    def test_unknown_set_rejected(self):
        with pytest.raises(ValueError):
            channel_set("itu9999")

    def test_all_table_delays_are_integer_samples(self):
        for name in ("ccir520", "itu1487", "extended"):
            for ch in channel_set(name).channels:
                d = ch.differential_delay_ms * 1e-3 * FS
                assert d == int(d)
        assert delay_samples(0.5) == 3
        assert delay_samples(7.0) == 42

    def test_params_validation(self):
        with pytest.raises(ValueError):
            WattersonParams("bad", 1, 1.0, 0.5)  # 1-path with delay
        with pytest.raises(ValueError):
            WattersonParams("bad", 2, 1.0, 0.0)  # zero spread
        with pytest.raises(ValueError):
            WattersonParams("bad", 3, 1.0, 0.5)


class TestTapGain:
    def test_spread_recovered(self):
        # 1 Hz spread over 1000 s: spectral sigma ~ 0.5 Hz within 25%
        gain = generate_tap_gain(1.0, 6 * 10**6, FS, RngStream(1))
        sigma = oracles.gaussian_doppler_sigma(gain, FS)
        assert sigma == pytest.approx(0.5, rel=0.25)

    def test_unit_mean_power(self):
        # 3000/spread seconds: the realization power estimator's sigma is
        # ~1.4%, so the 5% bound is comfortably beyond 3 sigma
        for spread in (0.5, 5.0):
            n = int(3000 / spread * FS)
            gain = generate_tap_gain(spread, n, FS, RngStream(2))
            assert oracles.power(gain) == pytest.approx(1.0, abs=0.05)

    def test_independent_streams_uncorrelated(self):
        a = generate_tap_gain(5.0, 10**6, FS, RngStream(3).child(0))
        b = generate_tap_gain(5.0, 10**6, FS, RngStream(3).child(1))
        rho = np.corrcoef(a.real, b.real)[0, 1]
        assert abs(rho) < 0.05

    def test_deterministic(self):
        a = generate_tap_gain(2.0, 10**4, FS, RngStream(4))
        b = generate_tap_gain(2.0, 10**4, FS, RngStream(4))
        assert np.array_equal(a, b)

    def test_rejects_bad_spread(self):
        with pytest.raises(ValueError):
            generate_tap_gain(0.0, 100, FS, RngStream(0))


class TestApplyWatterson:
    def test_one_path_multiplies_gain(self):
        x = np.ones(6000, dtype=complex)
        params = WattersonParams("Flat 2", 1, 0.0, 1.0)
        y = apply_watterson(x, params, RngStream(5))
        gain = generate_tap_gain(1.0, 6000, FS, RngStream(5).child(0))
        assert np.allclose(y, gain)

    def test_two_path_long_run_power(self):
        # unit-power stationary input: long-run output power 1 +- 10%
        rng = RngStream(6)
        n = int(100 / 1.0 * FS) * 3
        x = np.exp(2j * np.pi * 500 * np.arange(n) / FS)
        params = WattersonParams("Poor", 2, 2.0, 1.0)
        y = apply_watterson(x, params, rng)
        assert oracles.power(y) == pytest.approx(1.0, abs=0.10)

    def test_doppler_channel_shows_5hz_path_separation(self):
        # CCIR "Doppler" on a pure tone -> two components 5 Hz apart
        doppler = [c for c in channel_set("ccir520").channels if c.name == "Doppler"][0]
        n = 120 * FS
        x = np.exp(2j * np.pi * 500 * np.arange(n) / FS)
        y = apply_watterson(x, doppler, RngStream(7))
        spec = np.abs(np.fft.fft(y * np.hanning(n))) ** 2
        freqs = np.fft.fftfreq(n, 1 / FS)
        sel = np.abs(freqs - 500) < 20
        f_sel, p_sel = freqs[sel], spec[sel]
        main = f_sel[np.argmax(p_sel)]
        away = np.abs(f_sel - main) > 2.5
        second = f_sel[away][np.argmax(p_sel[away])]
        assert abs(main - second) == pytest.approx(5.0, abs=0.5)

    def test_fading_makes_amplitude_fluctuate(self):
        n = 30 * FS
        x = np.exp(2j * np.pi * 300 * np.arange(n) / FS)  # constant envelope
        params = WattersonParams("Moderate", 2, 1.0, 0.5)
        y = apply_watterson(x, params, RngStream(8))
        assert np.var(np.abs(x)) < 1e-20
        assert np.var(np.abs(y)) > 0.01

    def test_delay_exceeding_input_rejected(self):
        params = WattersonParams("long", 2, 7.0, 1.0)
        with pytest.raises(ValueError):
            apply_watterson(np.ones(30, dtype=complex), params, RngStream(9))

    def test_deterministic(self):
        x = np.ones(4096, dtype=complex)
        params = WattersonParams("Good", 2, 0.5, 0.1)
        a = apply_watterson(x, params, RngStream(10))
        b = apply_watterson(x, params, RngStream(10))
        assert np.array_equal(a, b)
