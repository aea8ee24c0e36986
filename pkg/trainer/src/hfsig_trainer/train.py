"""Training loop: Adam, batch 128, cross-entropy, fixed seed."""

from __future__ import annotations

import time

import torch
from torch import nn
from torch.utils.data import DataLoader

from hfsig_trainer.data import IqDataset
from hfsig_trainer.model import CnnConfig, build_model


class NanLossError(RuntimeError):
    pass


def _loader(dataset, batch_size, seed=None, shuffle=True):
    gen = torch.Generator()
    if seed is not None:
        gen.manual_seed(seed)
    return DataLoader(dataset, batch_size=batch_size, shuffle=shuffle, generator=gen)


def train(train_set: IqDataset, seed: int = 0, config: CnnConfig | None = None,
          val_set: IqDataset | None = None, epochs: int | None = None,
          log=None, checkpoint_path=None):
    """Train a fresh model on the dataset; returns (model, history).

    History holds one dict per epoch with train loss and, when a validation
    set is given, validation loss/accuracy. Aborts on NaN loss.
    """
    config = config or CnnConfig()
    epochs = epochs if epochs is not None else config.epochs
    torch.manual_seed(seed)
    model = build_model(config)
    optimizer = torch.optim.Adam(model.parameters(), lr=config.learning_rate)
    loss_fn = nn.CrossEntropyLoss()
    history = []
    for epoch in range(epochs):
        model.train()
        loader = _loader(train_set, config.batch_size, seed=seed * 10_000 + epoch)
        total, count = 0.0, 0
        t0 = time.monotonic()
        for x, y in loader:
            optimizer.zero_grad()
            loss = loss_fn(model(x), y)
            if not torch.isfinite(loss):
                raise NanLossError(f"non-finite loss at epoch {epoch}")
            loss.backward()
            optimizer.step()
            total += float(loss.detach()) * len(y)
            count += len(y)
        entry = {"epoch": epoch, "train_loss": total / count,
                 "seconds": time.monotonic() - t0}
        if val_set is not None:
            val_loss, val_acc = _validate(model, val_set, config, loss_fn)
            entry["val_loss"] = val_loss
            entry["val_accuracy"] = val_acc
        history.append(entry)
        if log:
            log(entry)
    if checkpoint_path is not None:
        save_checkpoint(model, config, checkpoint_path, history=history, seed=seed)
    return model, history


@torch.no_grad()
def _validate(model, dataset, config, loss_fn):
    model.eval()
    loader = _loader(dataset, config.batch_size, shuffle=False)
    total, correct, count = 0.0, 0, 0
    for x, y in loader:
        scores = model(x)
        total += float(loss_fn(scores, y)) * len(y)
        correct += int((scores.argmax(dim=1) == y).sum())
        count += len(y)
    return total / count, correct / count


def save_checkpoint(model, config, path, history=None, seed=None):
    torch.save({"state_dict": model.state_dict(), "config": vars(config) | {},
                "history": history, "seed": seed}, path)


def load_checkpoint(path):
    payload = torch.load(path, map_location="cpu", weights_only=False)
    config = CnnConfig(**{k: tuple(v) if isinstance(v, list) else v
                          for k, v in payload["config"].items()})
    model = build_model(config)
    model.load_state_dict(payload["state_dict"])
    model.eval()
    return model, config, payload.get("history")
