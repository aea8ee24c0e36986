import hashlib
from collections import Counter
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

import oracles
from hfsig import dataio
from hfsig.dataset import (
    SOURCE_HEAD,
    SOURCE_LEN,
    ImpairmentPlan,
    example_class,
    example_stream,
    generate_dataset,
    make_example,
    regenerate_from_row,
    sample_impairment_plan,
    segment_recording,
    synthesize_example,
    synthesize_stages,
)
from hfsig.impairments import FS_OFFSET_CHOICES
from hfsig.recipes import Recipe, find_recipe, recipe_slug, recipe_table
from hfsig.signal_model import RngStream, SignalClass, mode_spec
from hfsig.waveforms import WaveformRequest, generate_waveform


class TestRecipeTable:
    def test_eleven_rows(self):
        assert len(recipe_table()) == 11

    def test_first_row_all_disabled(self):
        r = recipe_table()[0]
        assert r.name == "No Augmentation"
        assert not r.freq_offset and not r.phase_offset and not r.fs_offset
        assert r.noise_kinds == () and r.snr_range_db is None
        assert not r.rx_filter and r.fading_set is None

    def test_awgn_high_snr_row(self):
        r = find_recipe("awgn-high-snr")
        assert r.freq_offset and r.phase_offset and r.fs_offset
        assert r.noise_kinds == ("awgn",)
        assert r.snr_range_db == (5.0, 25.0)
        assert not r.rx_filter and r.fading_set is None

    def test_full_snr_range(self):
        assert find_recipe("awgn-full-snr").snr_range_db == (-15.0, 25.0)

    def test_extended_fading_row(self):
        r = recipe_table()[-1]
        assert r.name == "Extended Fading"
        assert r.freq_offset and r.phase_offset and r.fs_offset and r.rx_filter
        assert set(r.noise_kinds) == {"awgn", "impulsive"}
        assert r.fading_set == "extended"

    def test_cumulative_enabling(self):
        # each row's enabled set contains the previous row's
        def enabled(r):
            flags = {f for f in ("freq_offset", "phase_offset", "fs_offset", "rx_filter")
                     if getattr(r, f)}
            if r.noise_kinds:
                flags.add("noise")
            if r.fading_set:
                flags.add("fading")
            return flags

        rows = recipe_table()
        for prev, cur in zip(rows, rows[1:]):
            assert enabled(prev) <= enabled(cur)

    def test_fading_sets_of_last_three(self):
        assert [r.fading_set for r in recipe_table()[-3:]] == ["ccir520", "itu1487", "extended"]

    def test_find_recipe_accepts_table_names(self):
        assert find_recipe("AWGN, high SNR").name == "AWGN, high SNR"
        with pytest.raises(KeyError):
            find_recipe("nonsense")

    def test_slugs_are_distinct(self):
        slugs = [recipe_slug(r) for r in recipe_table()]
        assert len(set(slugs)) == 11


class TestSampleImpairmentPlan:
    def test_no_augmentation_is_identity(self):
        plan = sample_impairment_plan(find_recipe("no-augmentation"),
                                      SignalClass.PSK31, RngStream(0))
        assert plan == ImpairmentPlan()

    def test_fs_offset_uniform_over_choices(self):
        recipe = find_recipe("fs-offset")
        rng = RngStream(1)
        counts = Counter(
            sample_impairment_plan(recipe, SignalClass.MORSE, rng.child(i)).fs_offset
            for i in range(5000))
        assert set(counts) == set(FS_OFFSET_CHOICES)
        _, p = stats.chisquare(list(counts.values()))
        assert p > 0.01

    def test_impulsive_recipe_kinds(self):
        recipe = find_recipe("impulsive-noise")
        rng = RngStream(2)
        plans = [sample_impairment_plan(recipe, SignalClass.PSK63, rng.child(i))
                 for i in range(400)]
        kinds = {p.noise_kind for p in plans}
        assert kinds == {"awgn", "impulsive"}
        exps = {p.impulse_exponent for p in plans if p.noise_kind == "impulsive"}
        assert exps == {1.5, 2.0, 3.0}
        assert all(p.impulse_exponent is None for p in plans if p.noise_kind == "awgn")
        assert all(-15.0 <= p.snr_db <= 25.0 for p in plans)

    def test_freq_offset_range(self):
        recipe = find_recipe("frequency-offset")
        rng = RngStream(3)
        offs = [sample_impairment_plan(recipe, SignalClass.USB_VOICE, rng.child(i)).freq_offset_hz
                for i in range(500)]
        assert all(-250 <= o <= 250 for o in offs)
        assert min(offs) < -200 and max(offs) > 200
        # phase still disabled in this recipe
        assert all(sample_impairment_plan(recipe, SignalClass.USB_VOICE,
                                          rng.child(i)).phase_rad == 0.0 for i in range(20))

    def test_rx_filter_bandwidth_bounds(self):
        recipe = find_recipe("rx-filter")
        rng = RngStream(4)
        for i in range(300):
            for cls in (SignalClass.PSK31, SignalClass.USB_VOICE, SignalClass.AM_BROADCAST):
                plan = sample_impairment_plan(recipe, cls, rng.child(i))
                spec = mode_spec(cls)
                assert spec.nominal_bandwidth_hz <= plan.rx_filter_bw_hz <= 6000.0
                lo = plan.rx_filter_center_hz - plan.rx_filter_bw_hz / 2
                hi = plan.rx_filter_center_hz + plan.rx_filter_bw_hz / 2
                assert lo >= -3000 - 1e-9 and hi <= 3000 + 1e-9

    def test_channel_drawn_from_set_plus_none(self):
        recipe = find_recipe("ccir-fading")
        rng = RngStream(5)
        counts = Counter(
            sample_impairment_plan(recipe, SignalClass.MORSE, rng.child(i)).channel
            for i in range(4000))
        assert set(counts) == {"none", "Flat 1", "Flat 2", "Good", "Moderate",
                               "Poor", "Flutter", "Doppler"}
        _, p = stats.chisquare(list(counts.values()))
        assert p > 0.01


class TestSynthesizeExample:
    def test_identity_plan_equals_cropped_waveform(self):
        for cls in (SignalClass.PSK31, SignalClass.MORSE, SignalClass.MT63_500):
            stream = RngStream(6)
            record = synthesize_example(cls, ImpairmentPlan(), stream)
            wf = generate_waveform(WaveformRequest(mode_spec(cls), SOURCE_LEN, stream.child(0)))
            assert np.array_equal(record.frame.samples,
                                  wf[SOURCE_HEAD:SOURCE_HEAD + 2048])

    def test_snr_label_matches_measurement(self):
        plan = ImpairmentPlan(noise_kind="awgn", snr_db=10.0)
        stages = synthesize_stages(SignalClass.RTTY45_170, plan, RngStream(7))
        measured = 10 * np.log10(
            oracles.power(stages["clean_prefilter"])
            / oracles.power(stages["noisy_prefilter"] - stages["clean_prefilter"]))
        assert measured == pytest.approx(10.0, abs=0.5)

    def test_fading_channel_recorded_and_visible(self):
        plan = ImpairmentPlan(channel="Good")
        record = synthesize_example(SignalClass.RTTY45_170, plan, RngStream(8))
        assert record.plan.channel == "Good"
        baseline = synthesize_example(SignalClass.RTTY45_170, ImpairmentPlan(), RngStream(8))
        assert (np.var(np.abs(record.frame.samples))
                > np.var(np.abs(baseline.frame.samples)))

    def test_all_classes_run_through_full_chain(self):
        plan = ImpairmentPlan(phase_rad=1.0, freq_offset_hz=100.0, fs_offset=0.005,
                              noise_kind="impulsive", impulse_exponent=2.0, snr_db=5.0,
                              rx_filter_bw_hz=3000.0, rx_filter_center_hz=0.0,
                              channel="Poor")
        for cls in SignalClass:
            record = synthesize_example(cls, plan, RngStream(9))
            assert len(record.frame.samples) == 2048
            assert np.all(np.isfinite(record.frame.samples))


@pytest.fixture(scope="module")
def small_dataset(tmp_path_factory):
    out = tmp_path_factory.mktemp("ds")
    recipe = find_recipe("impulsive-noise")
    manifest = generate_dataset(recipe, 40, 20, 1234, out)
    return out, manifest


class TestGenerateDataset:

    def test_balanced_classes(self, small_dataset):
        _, manifest = small_dataset
        for split in ("train", "val"):
            counts = Counter(r["class"] for r in manifest.rows[split])
            assert len(counts) == 20
            assert max(counts.values()) - min(counts.values()) <= 1

    def test_payload_consistency(self, small_dataset):
        out, manifest = small_dataset
        for split in ("train", "val"):
            iqb, jsonl = manifest.paths[split]
            ok, msg = dataio.check_consistency(iqb, jsonl)
            assert ok, msg
            frames = dataio.read_frames(iqb)
            assert len(frames) == len(manifest.rows[split])

    def test_rows_reproducible_from_master_seed(self, small_dataset):
        out, manifest = small_dataset
        recipe = find_recipe("impulsive-noise")
        row = manifest.rows["train"][17]
        frames = dataio.read_frames(manifest.paths["train"][0])
        stages = regenerate_from_row(row, recipe, 1234, "train")
        assert np.allclose(frames[17], stages["final"].astype(np.complex64), atol=2e-7)

    def test_determinism_across_runs_and_parallelism(self, tmp_path):
        recipe = find_recipe("rx-filter")
        digests = []
        for run, par in (("a", 1), ("b", 1), ("c", 2)):
            manifest = generate_dataset(recipe, 24, 12, 77, tmp_path / run, parallel=par)
            digest = []
            for split in ("train", "val"):
                for path in manifest.paths[split]:
                    digest.append(hashlib.sha256(Path(path).read_bytes()).hexdigest())
            digests.append(digest)
        assert digests[0] == digests[1] == digests[2]

    def test_train_val_disjoint_streams(self, small_dataset):
        _, manifest = small_dataset
        t0 = manifest.rows["train"][0]
        v0 = manifest.rows["val"][0]
        assert t0["seed"] != v0["seed"]
        frames_t = dataio.read_frames(manifest.paths["train"][0])
        frames_v = dataio.read_frames(manifest.paths["val"][0])
        assert not np.array_equal(frames_t[0], frames_v[0])

    def test_example_class_round_robin(self):
        assert example_class(0) is SignalClass.PSK31
        assert example_class(20) is SignalClass.PSK31
        assert example_class(19) is SignalClass.HF_FAX


class TestSegmentRecording:
    def test_exact_multiples(self):
        stream = np.arange(8192, dtype=complex)
        frames = segment_recording(stream, hop=2048)
        assert len(frames) == 4

    def test_remainder_dropped(self):
        stream = np.arange(10000, dtype=complex)
        frames = segment_recording(stream, hop=2048)
        assert len(frames) == 4  # 1808 samples dropped

    def test_frames_bit_match_slices(self):
        rng = RngStream(10)
        stream = rng.standard_normal(9000) + 1j * rng.standard_normal(9000)
        frames = segment_recording(stream, hop=1000)
        for i, frame in enumerate(frames):
            assert np.array_equal(frame.samples, stream[i * 1000 : i * 1000 + 2048])

    def test_too_short_rejected(self):
        with pytest.raises(ValueError):
            segment_recording(np.zeros(2047, dtype=complex))

    @given(st.integers(2048, 40000), st.integers(1, 4096))
    @settings(max_examples=30, deadline=None)
    def test_frame_count_formula(self, n, hop):
        stream = np.zeros(n, dtype=complex)
        frames = segment_recording(stream, hop=hop)
        assert len(frames) == (n - 2048) // hop + 1


def test_make_example_stable_against_order():
    recipe = find_recipe("extended-fading")
    a = make_example(recipe, 55, "train", 7)
    _ = make_example(recipe, 55, "train", 3)
    b = make_example(recipe, 55, "train", 7)
    assert np.array_equal(a.frame.samples, b.frame.samples)
    assert a.plan == b.plan
