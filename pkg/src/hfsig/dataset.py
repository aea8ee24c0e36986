"""Recipe engine: per-example impairment plans, the synthesis chain, and
balanced dataset assembly.

Every example is derived from (master_seed, split, index) alone, so any
example can be regenerated bit-exactly in isolation and generation can be
parallelized at any degree without changing the output.
"""

from __future__ import annotations

import multiprocessing
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from hfsig import dataio
from hfsig.fading import WattersonParams, apply_watterson, channel_set
from hfsig.impairments import (
    FS_OFFSET_CHOICES,
    IMPULSE_EXPONENTS,
    NYQUIST_BANDWIDTH_HZ,
    NoiseSpec,
    RxFilterSpec,
    add_noise,
    apply_frequency_offset,
    apply_phase_offset,
    apply_rx_filter,
    apply_sample_rate_offset,
)
from hfsig.recipes import FREQ_OFFSET_RANGE_HZ, Recipe
from hfsig.signal_model import (
    FRAME_LEN,
    IqFrame,
    RngStream,
    SignalClass,
    mode_spec,
    mode_table,
)
from hfsig.waveforms import WaveformRequest, generate_waveform, nominal_bandwidth

CLASSES = tuple(spec.signal_class for spec in mode_table())

# Source window: 64 samples of head room for the Watterson delayed path
# (max delay 7 ms = 42 samples) plus the resampler's reach past 2048.
SOURCE_HEAD = 64
SOURCE_LEN = 2176

SPLIT_IDS = {"train": 0, "val": 1}

_CHANNELS_BY_NAME: dict[str, WattersonParams] = {}
for _set in ("ccir520", "itu1487", "extended"):
    for _ch in channel_set(_set).channels:
        assert _CHANNELS_BY_NAME.setdefault(_ch.name, _ch) == _ch
del _set, _ch


@dataclass(frozen=True)
class ImpairmentPlan:
    """Concrete impairment values for one example; identity where disabled."""

    phase_rad: float = 0.0
    freq_offset_hz: float = 0.0
    fs_offset: float = 0.0
    noise_kind: str = "none"
    impulse_exponent: float | None = None
    snr_db: float | None = None
    rx_filter_bw_hz: float = NYQUIST_BANDWIDTH_HZ
    rx_filter_center_hz: float = 0.0
    channel: str = "none"
    seed: int = 0


@dataclass(frozen=True)
class ExampleRecord:
    frame: IqFrame
    label: SignalClass
    plan: ImpairmentPlan
    index: int


def sample_impairment_plan(recipe: Recipe, signal_class: SignalClass, rng: RngStream) -> ImpairmentPlan:
    """Draw one plan uniformly over the recipe's enabled ranges."""
    phase = float(rng.uniform(0.0, 2 * np.pi)) if recipe.phase_offset else 0.0
    freq = float(rng.uniform(*FREQ_OFFSET_RANGE_HZ)) if recipe.freq_offset else 0.0
    fs_off = FS_OFFSET_CHOICES[int(rng.integers(0, len(FS_OFFSET_CHOICES)))] if recipe.fs_offset else 0.0

    kind, exponent, snr = "none", None, None
    if recipe.noise_kinds:
        combos = [("awgn", None)] if "awgn" in recipe.noise_kinds else []
        if "impulsive" in recipe.noise_kinds:
            combos += [("impulsive", x) for x in IMPULSE_EXPONENTS]
        kind, exponent = combos[int(rng.integers(0, len(combos)))]
        snr = float(rng.uniform(*recipe.snr_range_db))

    bw, center = NYQUIST_BANDWIDTH_HZ, 0.0
    if recipe.rx_filter:
        spec = mode_spec(signal_class)
        bw = float(rng.uniform(nominal_bandwidth(spec), NYQUIST_BANDWIDTH_HZ))
        limit = (NYQUIST_BANDWIDTH_HZ - bw) / 2.0
        center = float(np.clip(spec.center_freq_hz, -limit, limit))

    channel = "none"
    if recipe.fading_set is not None:
        options = channel_set(recipe.fading_set).channels
        pick = int(rng.integers(0, len(options) + 1))
        channel = "none" if pick == len(options) else options[pick].name

    plan = ImpairmentPlan(phase, freq, fs_off, kind, exponent, snr, bw, center, channel)
    _check_plan(recipe, plan)
    return plan


def _check_plan(recipe: Recipe, plan: ImpairmentPlan) -> None:
    lo, hi = FREQ_OFFSET_RANGE_HZ
    assert (lo <= plan.freq_offset_hz <= hi) if recipe.freq_offset else plan.freq_offset_hz == 0.0
    assert (0 <= plan.phase_rad < 2 * np.pi) if recipe.phase_offset else plan.phase_rad == 0.0
    assert plan.fs_offset in FS_OFFSET_CHOICES if recipe.fs_offset else plan.fs_offset == 0.0
    if recipe.noise_kinds:
        assert plan.noise_kind in recipe.noise_kinds
        assert recipe.snr_range_db[0] <= plan.snr_db <= recipe.snr_range_db[1]
    else:
        assert plan.noise_kind == "none" and plan.snr_db is None
    if not recipe.rx_filter:
        assert plan.rx_filter_bw_hz == NYQUIST_BANDWIDTH_HZ
    if recipe.fading_set is None:
        assert plan.channel == "none"


def channel_params(name: str) -> WattersonParams:
    return _CHANNELS_BY_NAME[name]


def synthesize_stages(signal_class: SignalClass, plan: ImpairmentPlan, rng: RngStream) -> dict:
    """Run the chain and return the tap points the metrology tools need.

    Chain order: waveform -> Watterson channel -> phase offset -> frequency
    offset -> sample-rate offset (crops to 2048) -> noise -> RX filter.
    The SNR label refers to the pre-filter signal/noise pair.
    """
    spec = mode_spec(signal_class)
    x = generate_waveform(WaveformRequest(spec, SOURCE_LEN, rng.child(0)))
    if plan.channel != "none":
        x = apply_watterson(x, channel_params(plan.channel), rng.child(1))
    x = apply_phase_offset(x, plan.phase_rad)
    x = apply_frequency_offset(x, plan.freq_offset_hz)
    clean = apply_sample_rate_offset(x[SOURCE_HEAD:], plan.fs_offset, FRAME_LEN)
    noise_spec = None
    if plan.noise_kind != "none":
        noise_spec = NoiseSpec(plan.noise_kind, plan.snr_db, plan.impulse_exponent)
    noisy = add_noise(clean, noise_spec, rng.child(2))
    final = apply_rx_filter(noisy, RxFilterSpec(plan.rx_filter_center_hz, plan.rx_filter_bw_hz))
    return {"clean_prefilter": clean, "noisy_prefilter": noisy, "final": final}


def synthesize_example(signal_class: SignalClass, plan: ImpairmentPlan, rng: RngStream,
                       index: int = 0) -> ExampleRecord:
    stages = synthesize_stages(signal_class, plan, rng)
    return ExampleRecord(IqFrame(stages["final"]), signal_class, plan, index)


def example_class(index: int) -> SignalClass:
    """Round-robin class assignment keeps every dataset balanced."""
    return CLASSES[index % len(CLASSES)]


def example_stream(master_seed: int, split: str, index: int) -> RngStream:
    return RngStream(master_seed).child(SPLIT_IDS[split]).child(index)


def _example_seed(master_seed: int, split: str, index: int) -> int:
    ss = np.random.SeedSequence(master_seed, spawn_key=(SPLIT_IDS[split], index))
    return int(ss.generate_state(1, np.uint64)[0])


def make_example(recipe: Recipe, master_seed: int, split: str, index: int) -> ExampleRecord:
    """Fully derive example `index` of a split; self-contained and parallel-safe."""
    stream = example_stream(master_seed, split, index)
    cls = example_class(index)
    plan = sample_impairment_plan(recipe, cls, stream.child(0))
    plan = replace(plan, seed=_example_seed(master_seed, split, index))
    return synthesize_example(cls, plan, stream.child(1), index)


def regenerate_from_row(row: dict, recipe: Recipe, master_seed: int, split: str) -> dict:
    """Rebuild an example's chain tap points from its manifest row."""
    plan = row_to_plan(row)
    stream = example_stream(master_seed, split, row["index"])
    return synthesize_stages(SignalClass(row["class"]), plan, stream.child(1))


def plan_to_row(plan: ImpairmentPlan, index: int, signal_class: SignalClass) -> dict:
    return {
        "index": index,
        "class": signal_class.value,
        "snr_db": plan.snr_db,
        "noise_kind": plan.noise_kind,
        "impulse_exponent": plan.impulse_exponent,
        "freq_offset_hz": plan.freq_offset_hz,
        "phase_rad": plan.phase_rad,
        "fs_offset": plan.fs_offset,
        "rx_filter_bw_hz": plan.rx_filter_bw_hz,
        "rx_filter_center_hz": plan.rx_filter_center_hz,
        "channel": plan.channel,
        "seed": plan.seed,
    }


def row_to_plan(row: dict) -> ImpairmentPlan:
    return ImpairmentPlan(
        phase_rad=row["phase_rad"],
        freq_offset_hz=row["freq_offset_hz"],
        fs_offset=row["fs_offset"],
        noise_kind=row["noise_kind"],
        impulse_exponent=row["impulse_exponent"],
        snr_db=row["snr_db"],
        rx_filter_bw_hz=row["rx_filter_bw_hz"],
        rx_filter_center_hz=row["rx_filter_center_hz"],
        channel=row["channel"],
        seed=row["seed"],
    )


@dataclass
class DatasetManifest:
    recipe: str
    master_seed: int
    n_train: int
    n_val: int
    format_version: int
    paths: dict
    rows: dict


_POOL_STATE: dict = {}


def _pool_init(recipe, master_seed, split):
    _POOL_STATE["args"] = (recipe, master_seed, split)


def _pool_make(index):
    recipe, master_seed, split = _POOL_STATE["args"]
    record = make_example(recipe, master_seed, split, index)
    row = plan_to_row(record.plan, index, record.label)
    return dataio.frame_to_bytes(record.frame.samples), row


def generate_dataset(recipe: Recipe, n_train: int, n_val: int, master_seed: int,
                     out_dir, parallel: int = 1, progress=None) -> DatasetManifest:
    """Write the (iqb, jsonl) train and validation pairs for one recipe.

    Output is bit-identical for any parallelism degree.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths, all_rows = {}, {}
    for split, count in (("train", n_train), ("val", n_val)):
        iqb = out / f"{split}.iqb"
        jsonl = out / f"{split}.jsonl"
        header = dataio.make_header(recipe.name, master_seed, n_train, n_val, split)
        rows = []
        with dataio.DatasetWriter(iqb, jsonl, header) as writer:
            if parallel <= 1:
                _pool_init(recipe, master_seed, split)
                results = map(_pool_make, range(count))
            else:
                method = "fork" if "fork" in multiprocessing.get_all_start_methods() else "spawn"
                ctx = multiprocessing.get_context(method)
                pool = ctx.Pool(parallel, initializer=_pool_init,
                                initargs=(recipe, master_seed, split))
                results = pool.imap(_pool_make, range(count), chunksize=16)
            for raw, row in results:
                writer.write_raw(raw, row)
                rows.append(row)
                if progress:
                    progress(split, len(rows), count)
            if parallel > 1:
                pool.close()
                pool.join()
        paths[split] = (iqb, jsonl)
        all_rows[split] = rows
    return DatasetManifest(recipe.name, master_seed, n_train, n_val,
                           dataio.FORMAT_VERSION, paths, all_rows)


def segment_recording(samples, hop: int = FRAME_LEN) -> list[IqFrame]:
    """Cut a 6 kHz IQ stream into 2048-sample frames at the given hop."""
    samples = np.asarray(samples)
    if len(samples) < FRAME_LEN:
        raise ValueError(f"stream shorter than one frame ({FRAME_LEN} samples)")
    if hop < 1:
        raise ValueError("hop must be positive")
    count = (len(samples) - FRAME_LEN) // hop + 1
    return [IqFrame(samples[i * hop : i * hop + FRAME_LEN]) for i in range(count)]
