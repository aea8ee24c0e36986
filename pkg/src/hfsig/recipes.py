"""The eleven training-dataset recipes.

Each recipe row enables one more impairment than the previous one; the last
three swap in the different fading channel sets.
"""

from __future__ import annotations

from dataclasses import dataclass

FREQ_OFFSET_RANGE_HZ = (-250.0, 250.0)
SNR_HIGH_DB = (5.0, 25.0)
SNR_FULL_DB = (-15.0, 25.0)


@dataclass(frozen=True)
class Recipe:
    """Which impairments are enabled and over what ranges."""

    name: str
    freq_offset: bool = False
    phase_offset: bool = False
    fs_offset: bool = False
    noise_kinds: tuple[str, ...] = ()
    snr_range_db: tuple[float, float] | None = None
    rx_filter: bool = False
    fading_set: str | None = None

    def __post_init__(self) -> None:
        if bool(self.noise_kinds) != (self.snr_range_db is not None):
            raise ValueError("noise kinds and SNR range must be set together")
        if self.fading_set not in (None, "ccir520", "itu1487", "extended"):
            raise ValueError(f"unknown fading set: {self.fading_set}")


_RECIPES = (
    Recipe("No Augmentation"),
    Recipe("Frequency Offset", freq_offset=True),
    Recipe("Phase Offset", freq_offset=True, phase_offset=True),
    Recipe("fs Offset", freq_offset=True, phase_offset=True, fs_offset=True),
    Recipe("AWGN, high SNR", freq_offset=True, phase_offset=True, fs_offset=True,
           noise_kinds=("awgn",), snr_range_db=SNR_HIGH_DB),
    Recipe("AWGN, full SNR", freq_offset=True, phase_offset=True, fs_offset=True,
           noise_kinds=("awgn",), snr_range_db=SNR_FULL_DB),
    Recipe("Impulsive Noise", freq_offset=True, phase_offset=True, fs_offset=True,
           noise_kinds=("awgn", "impulsive"), snr_range_db=SNR_FULL_DB),
    Recipe("RX Filter", freq_offset=True, phase_offset=True, fs_offset=True,
           noise_kinds=("awgn", "impulsive"), snr_range_db=SNR_FULL_DB, rx_filter=True),
    Recipe("CCIR Fading", freq_offset=True, phase_offset=True, fs_offset=True,
           noise_kinds=("awgn", "impulsive"), snr_range_db=SNR_FULL_DB, rx_filter=True,
           fading_set="ccir520"),
    Recipe("ITU Fading", freq_offset=True, phase_offset=True, fs_offset=True,
           noise_kinds=("awgn", "impulsive"), snr_range_db=SNR_FULL_DB, rx_filter=True,
           fading_set="itu1487"),
    Recipe("Extended Fading", freq_offset=True, phase_offset=True, fs_offset=True,
           noise_kinds=("awgn", "impulsive"), snr_range_db=SNR_FULL_DB, rx_filter=True,
           fading_set="extended"),
)


def recipe_table() -> list[Recipe]:
    """All 11 recipes in cumulative order."""
    return list(_RECIPES)


def recipe_slug(recipe: Recipe) -> str:
    return recipe.name.lower().replace(",", "").replace(" ", "-")


def find_recipe(name: str) -> Recipe:
    """Look up a recipe by its table name or its CLI slug."""
    wanted = name.lower().replace(",", "").replace("_", "-").replace(" ", "-")
    for recipe in _RECIPES:
        if recipe_slug(recipe) == wanted:
            return recipe
    raise KeyError(f"unknown recipe: {name!r} (choose from "
                   f"{', '.join(recipe_slug(r) for r in _RECIPES)})")
