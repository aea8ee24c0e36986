"""Command-line interface: generate, inspect, measure, segment.

Exit codes: 0 success, 1 usage error, 2 validation/integrity failure,
3 I/O error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from hfsig import dataio, reporting
from hfsig import metrology as met
from hfsig.dataset import generate_dataset, regenerate_from_row, segment_recording
from hfsig.recipes import find_recipe, recipe_slug, recipe_table
from hfsig.signal_model import FRAME_LEN, SAMPLE_RATE_HZ

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VALIDATION = 2
EXIT_IO = 3


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hfsig", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="synthesize a labeled dataset")
    gen.add_argument("--recipe", required=True,
                     help="recipe name, e.g. " + ", ".join(recipe_slug(r) for r in recipe_table()))
    gen.add_argument("--train", type=int, default=120000)
    gen.add_argument("--val", type=int, default=30000)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", required=True)
    gen.add_argument("--parallel", type=int, default=1)
    gen.add_argument("--format-version", type=int, default=dataio.FORMAT_VERSION)
    gen.add_argument("--plots", action="store_true",
                     help="emit plot-data CSVs and PNG figures next to the dataset")
    gen.add_argument("--quiet", action="store_true")

    ins = sub.add_parser("inspect", help="report on an existing dataset")
    ins.add_argument("data", help="manifest .jsonl path (or dataset directory)")
    ins.add_argument("--plots", action="store_true")
    ins.add_argument("--out", default=None, help="where to put plot data (default: beside the data)")

    mea = sub.add_parser("measure", help="metrology report for one example")
    mea.add_argument("data", help="manifest .jsonl path")
    mea.add_argument("--index", type=int, required=True)
    mea.add_argument("--plots", action="store_true")
    mea.add_argument("--out", default=None)

    seg = sub.add_parser("segment", help="cut a raw IQ recording into frames")
    seg.add_argument("input", help="raw little-endian float32 interleaved I/Q at 6 kHz")
    seg.add_argument("--hop", type=int, default=FRAME_LEN)
    seg.add_argument("--out", required=True, help="output stem (.iqb/.jsonl appended)")
    return parser


def cmd_generate(args) -> int:
    try:
        recipe = find_recipe(args.recipe)
    except KeyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.train <= 0 or args.val < 0:
        print("error: counts must be positive", file=sys.stderr)
        return EXIT_USAGE
    if args.format_version != dataio.FORMAT_VERSION:
        print(f"error: only format version {dataio.FORMAT_VERSION} is supported",
              file=sys.stderr)
        return EXIT_USAGE

    def progress(split, done, total):
        if not args.quiet and (done % 2000 == 0 or done == total):
            print(f"  {split}: {done}/{total}", file=sys.stderr)

    manifest = generate_dataset(recipe, args.train, args.val, args.seed,
                                args.out, parallel=args.parallel, progress=progress)
    print(f"recipe: {manifest.recipe}")
    print(f"master_seed: {manifest.master_seed}")
    for split in ("train", "val"):
        iqb, jsonl = manifest.paths[split]
        rows = manifest.rows[split]
        classes = len(set(r["class"] for r in rows))
        print(f"{split}: {len(rows)} examples, {classes} classes -> {iqb}, {jsonl}")
    if args.plots:
        for split in ("train", "val"):
            written = reporting.write_plot_data(args.out, split, manifest.rows[split])
            for path in written:
                print(f"plot data: {path}")
    return EXIT_OK


def _resolve_manifests(data_path: str) -> list[Path]:
    path = Path(data_path)
    if path.is_dir():
        found = sorted(path.glob("*.jsonl"))
        if not found:
            raise FileNotFoundError(f"no .jsonl manifests under {path}")
        return found
    return [path]


def cmd_inspect(args) -> int:
    status = EXIT_OK
    for jsonl in _resolve_manifests(args.data):
        iqb = jsonl.with_suffix(".iqb")
        header, rows = dataio.read_manifest(jsonl)
        integrity = dataio.check_consistency(iqb, jsonl)
        print(render_heading(str(jsonl)))
        print(reporting.render_inspect_report(header, rows, integrity))
        print()
        if not integrity[0]:
            status = EXIT_VALIDATION
        if args.plots:
            out = args.out or jsonl.parent
            for path in reporting.write_plot_data(out, jsonl.stem, rows):
                print(f"plot data: {path}")
    return status


def render_heading(text: str) -> str:
    return f"== {text} =="


def _measure_raw(args, iqb: Path) -> int:
    """Metrology for a bare .iqb frame file with no manifest."""
    frame = dataio.read_frame(iqb, args.index)
    print(f"frame {args.index} of {iqb} (no manifest)")
    power = met.mean_power(frame)
    print(f"power: {power:.4f}")
    if power > 0:
        try:
            print(f"dominant tone: {met.estimate_tone_frequency(frame):+.1f} Hz")
        except ValueError:
            print("dominant tone: none (no dominant peak)")
        long_frame = np.tile(frame, int(np.ceil(2**15 / len(frame))))
        print(f"occupied bandwidth (99%): {met.occupied_bandwidth(long_frame, 0.99):.1f} Hz")
    return EXIT_OK


def cmd_measure(args) -> int:
    jsonl = Path(args.data)
    if jsonl.suffix == ".iqb" and not jsonl.with_suffix(".jsonl").exists():
        return _measure_raw(args, jsonl)
    if jsonl.suffix == ".iqb":
        jsonl = jsonl.with_suffix(".jsonl")
    iqb = jsonl.with_suffix(".iqb")
    header, rows = dataio.read_manifest(jsonl)
    if not (0 <= args.index < len(rows)):
        print(f"error: index {args.index} out of range", file=sys.stderr)
        return EXIT_USAGE
    row = rows[args.index]
    frame = dataio.read_frame(iqb, args.index, header["frame_len"])
    print(f"example {args.index}: class={row['class']} channel={row['channel']}")
    power = met.mean_power(frame)
    print(f"power: {power:.4f}")
    if power > 0:
        try:
            tone = met.estimate_tone_frequency(frame)
            print(f"dominant tone: {tone:+.1f} Hz")
        except ValueError:
            print("dominant tone: none (no dominant peak)")
        long_frame = np.tile(frame, int(np.ceil(2**15 / len(frame))))
        obw = met.occupied_bandwidth(long_frame, 0.99,
                                     center_hz=row["rx_filter_center_hz"])
        print(f"occupied bandwidth (99%): {obw:.1f} Hz")
    try:
        recipe = find_recipe(header["recipe"])
        stages = regenerate_from_row(row, recipe, header["master_seed"],
                                     header.get("split", "train"))
        if row["snr_db"] is not None:
            measured = met.measure_snr(stages["clean_prefilter"], stages["noisy_prefilter"])
            print(f"labeled SNR: {row['snr_db']:+.2f} dB, measured: {measured:+.2f} dB")
        else:
            print("labeled SNR: none (noise disabled)")
        regenerated = np.allclose(stages["final"], frame, atol=1e-6)
        print(f"frame regenerated from seed: {'match' if regenerated else 'MISMATCH'}")
        if not regenerated:
            return EXIT_VALIDATION
    except KeyError:
        print("clean reference: not regenerable (unknown recipe)")
    if args.plots:
        out = Path(args.out or jsonl.parent)
        out.mkdir(parents=True, exist_ok=True)
        png = out / f"{jsonl.stem}_example{args.index}_psd.png"
        reporting.write_spectrum_figure(png, frame, header["sample_rate_hz"],
                                        f"{row['class']} example {args.index}")
        print(f"plot data: {png}")
    return EXIT_OK


def cmd_segment(args) -> int:
    raw = np.fromfile(args.input, dtype="<f4")
    if len(raw) % 2:
        raw = raw[:-1]
    samples = raw[0::2] + 1j * raw[1::2]
    try:
        frames = segment_recording(samples, args.hop)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    stem = Path(args.out)
    stem.parent.mkdir(parents=True, exist_ok=True)
    header = dataio.make_header("segmented", 0, 0, 0, "segment")
    with dataio.DatasetWriter(stem.with_suffix(".iqb"), stem.with_suffix(".jsonl"), header) as writer:
        for i, frame in enumerate(frames):
            row = {
                "index": i, "class": "unknown", "snr_db": None, "noise_kind": "none",
                "impulse_exponent": None, "freq_offset_hz": 0.0, "phase_rad": 0.0,
                "fs_offset": 0.0, "rx_filter_bw_hz": float(SAMPLE_RATE_HZ),
                "rx_filter_center_hz": 0.0, "channel": "none", "seed": 0,
            }
            writer.write(frame.samples, row)
    print(f"{len(frames)} frames -> {stem.with_suffix('.iqb')}, {stem.with_suffix('.jsonl')}")
    return EXIT_OK


_COMMANDS = {
    "generate": cmd_generate,
    "inspect": cmd_inspect,
    "measure": cmd_measure,
    "segment": cmd_segment,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return _COMMANDS[args.command](args)
    except (FileNotFoundError, PermissionError, IsADirectoryError, OSError) as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
