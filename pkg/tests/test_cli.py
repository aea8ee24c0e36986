import hashlib
import json
from pathlib import Path

import numpy as np
import pytest

from hfsig import dataio
from hfsig.cli import EXIT_IO, EXIT_OK, EXIT_USAGE, EXIT_VALIDATION, main


@pytest.fixture(scope="module")
def tiny_dataset(tmp_path_factory):
    out = tmp_path_factory.mktemp("cli_ds")
    rc = main(["generate", "--recipe", "awgn-full-snr", "--train", "20", "--val", "20",
               "--seed", "9", "--out", str(out), "--quiet"])
    assert rc == EXIT_OK
    return out


class TestGenerate:
    def test_minimal_balanced_smoke(self, tiny_dataset, capsys):
        header, rows = dataio.read_manifest(tiny_dataset / "train.jsonl")
        assert len(rows) == 20
        assert len({r["class"] for r in rows}) == 20  # one per class

    def test_same_flags_same_hashes(self, tmp_path):
        digests = []
        for sub in ("one", "two"):
            rc = main(["generate", "--recipe", "phase-offset", "--train", "12", "--val", "4",
                       "--seed", "3", "--out", str(tmp_path / sub), "--quiet"])
            assert rc == EXIT_OK
            files = sorted((tmp_path / sub).glob("*.iqb")) + sorted((tmp_path / sub).glob("*.jsonl"))
            digests.append([hashlib.sha256(p.read_bytes()).hexdigest() for p in files])
        assert digests[0] == digests[1]

    def test_unknown_recipe_is_usage_error(self, tmp_path, capsys):
        rc = main(["generate", "--recipe", "bogus", "--train", "4", "--val", "4",
                   "--out", str(tmp_path)])
        assert rc == EXIT_USAGE

    def test_bad_counts_usage_error(self, tmp_path):
        rc = main(["generate", "--recipe", "no-augmentation", "--train", "0",
                   "--val", "0", "--out", str(tmp_path)])
        assert rc == EXIT_USAGE

    def test_missing_subcommand_args(self):
        assert main(["generate"]) == EXIT_USAGE

    def test_unsupported_format_version(self, tmp_path):
        rc = main(["generate", "--recipe", "no-augmentation", "--train", "4", "--val", "4",
                   "--out", str(tmp_path), "--format-version", "9"])
        assert rc == EXIT_USAGE


class TestInspect:
    def test_reports_identity_for_no_augmentation(self, tmp_path, capsys):
        main(["generate", "--recipe", "no-augmentation", "--train", "20", "--val", "20",
              "--seed", "2", "--out", str(tmp_path), "--quiet"])
        capsys.readouterr()
        rc = main(["inspect", str(tmp_path / "train.jsonl")])
        out = capsys.readouterr().out
        assert rc == EXIT_OK
        assert "integrity: OK" in out
        assert "no noise applied" in out
        assert "freq_offset_hz  range (0.0, 0.0)" in out
        assert "rx_filter_bw_hz range (6000.0, 6000.0)" in out
        assert "fs_offset       {0.0: 20}" in out
        assert "(none: 20)" in out

    def test_balanced_histogram(self, tiny_dataset, capsys):
        rc = main(["inspect", str(tiny_dataset)])
        out = capsys.readouterr().out
        assert rc == EXIT_OK
        assert out.count(" 1\n") >= 40  # 20 classes x 1 example in both splits

    def test_truncated_payload_fails_integrity(self, tmp_path, capsys):
        main(["generate", "--recipe", "no-augmentation", "--train", "20", "--val", "20",
              "--seed", "4", "--out", str(tmp_path), "--quiet"])
        iqb = tmp_path / "train.iqb"
        iqb.write_bytes(iqb.read_bytes()[:-100])
        rc = main(["inspect", str(tmp_path / "train.jsonl")])
        out = capsys.readouterr().out
        assert rc == EXIT_VALIDATION
        assert "integrity: FAILED" in out

    def test_missing_file_is_io_error(self, tmp_path):
        assert main(["inspect", str(tmp_path / "nope.jsonl")]) == EXIT_IO

    def test_plot_emission(self, tiny_dataset, tmp_path, capsys):
        rc = main(["inspect", str(tiny_dataset / "train.jsonl"), "--plots",
                   "--out", str(tmp_path)])
        out = capsys.readouterr().out
        assert rc == EXIT_OK
        assert (tmp_path / "train_class_hist.csv").exists()
        assert (tmp_path / "train_class_hist.png").exists()
        assert (tmp_path / "train_snr_hist.csv").exists()
        header = (tmp_path / "train_snr_hist.csv").read_text().splitlines()[0]
        assert header == "snr_bin,value"


class TestMeasure:
    def test_reports_power_and_snr(self, tiny_dataset, capsys):
        rc = main(["measure", str(tiny_dataset / "train.jsonl"), "--index", "0"])
        out = capsys.readouterr().out
        assert rc == EXIT_OK
        assert "power:" in out
        assert "labeled SNR" in out and "measured" in out
        assert "regenerated from seed: match" in out

    def test_measured_snr_close_to_label(self, tiny_dataset, capsys):
        for idx in range(4):
            main(["measure", str(tiny_dataset / "train.jsonl"), "--index", str(idx)])
            out = capsys.readouterr().out
            line = [l for l in out.splitlines() if "labeled SNR" in l][0]
            labeled = float(line.split("labeled SNR:")[1].split("dB")[0])
            measured = float(line.split("measured:")[1].split("dB")[0])
            assert measured == pytest.approx(labeled, abs=0.5)

    def test_bad_index_usage_error(self, tiny_dataset):
        assert main(["measure", str(tiny_dataset / "train.jsonl"), "--index", "999"]) == EXIT_USAGE

    def test_raw_iqb_without_manifest(self, tiny_dataset, tmp_path, capsys):
        raw = tmp_path / "orphan.iqb"
        raw.write_bytes((tiny_dataset / "train.iqb").read_bytes())
        rc = main(["measure", str(raw), "--index", "1"])
        out = capsys.readouterr().out
        assert rc == EXIT_OK
        assert "no manifest" in out
        assert "power:" in out and "occupied bandwidth" in out


class TestSegment:
    def _write_raw(self, path, n, value=None):
        rng = np.random.default_rng(0)
        iq = (rng.standard_normal(n) + 1j * rng.standard_normal(n)).astype(np.complex64)
        raw = np.empty(2 * n, dtype="<f4")
        raw[0::2] = iq.real
        raw[1::2] = iq.imag
        raw.tofile(path)
        return iq

    def test_two_frames_from_4096(self, tmp_path, capsys):
        src = tmp_path / "raw.bin"
        self._write_raw(src, 4096)
        rc = main(["segment", str(src), "--hop", "2048", "--out", str(tmp_path / "seg")])
        assert rc == EXIT_OK
        header, rows = dataio.read_manifest(tmp_path / "seg.jsonl")
        assert len(rows) == 2
        assert all(r["class"] == "unknown" for r in rows)

    def test_overlap_hop(self, tmp_path):
        src = tmp_path / "raw.bin"
        n = 10000
        self._write_raw(src, n)
        rc = main(["segment", str(src), "--hop", "1024", "--out", str(tmp_path / "seg")])
        assert rc == EXIT_OK
        _, rows = dataio.read_manifest(tmp_path / "seg.jsonl")
        assert len(rows) == (n - 2048) // 1024 + 1

    def test_frames_bit_match_input(self, tmp_path):
        src = tmp_path / "raw.bin"
        iq = self._write_raw(src, 6000)
        main(["segment", str(src), "--hop", "2048", "--out", str(tmp_path / "seg")])
        frames = dataio.read_frames(tmp_path / "seg.iqb")
        for i in range(len(frames)):
            assert np.array_equal(frames[i], iq[i * 2048 : i * 2048 + 2048])

    def test_short_input_validation_error(self, tmp_path):
        src = tmp_path / "raw.bin"
        self._write_raw(src, 1000)
        rc = main(["segment", str(src), "--out", str(tmp_path / "seg")])
        assert rc == EXIT_VALIDATION


def test_usage_error_on_no_args():
    assert main([]) == EXIT_USAGE


def test_manifest_header_schema(tiny_dataset):
    header, _ = dataio.read_manifest(tiny_dataset / "val.jsonl")
    for key in ("format_version", "recipe", "master_seed", "n_train", "n_val",
                "sample_rate_hz", "frame_len"):
        assert key in header
    assert header["sample_rate_hz"] == 6000
    assert header["frame_len"] == 2048


def test_row_schema(tiny_dataset):
    _, rows = dataio.read_manifest(tiny_dataset / "train.jsonl")
    expected = {"index", "class", "snr_db", "noise_kind", "impulse_exponent",
                "freq_offset_hz", "phase_rad", "fs_offset", "rx_filter_bw_hz",
                "rx_filter_center_hz", "channel", "seed"}
    assert set(rows[0]) == expected
