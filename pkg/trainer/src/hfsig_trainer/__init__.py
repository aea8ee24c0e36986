"""CNN training and evaluation on hfsig (iqb, jsonl) datasets."""

from hfsig_trainer.model import CnnConfig, build_model, count_parameters
from hfsig_trainer.data import IqDataset, load_dataset

__version__ = "0.1.0"

__all__ = ["CnnConfig", "build_model", "count_parameters", "IqDataset", "load_dataset"]
