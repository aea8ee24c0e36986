"""The 9-layer classification CNN (~550k parameters, 2x2048 input)."""

from __future__ import annotations

from dataclasses import dataclass

import torch
from torch import nn

N_CLASSES = 20
PARAM_BUDGET = 550_000
BUDGET_TOLERANCE = 0.10


@dataclass(frozen=True)
class CnnConfig:
    """Layer plan and training protocol constants.

    Nine learnable layers: seven 1-D convolutions and two dense layers.
    The first convolution strides by 4; each of the first six stages halves
    the length, leaving 128 channels x 8 samples for the dense head.
    """

    input_channels: int = 2
    input_len: int = 2048
    conv_channels: tuple = (32, 48, 64, 96, 128, 128, 128)
    first_kernel: int = 8
    first_stride: int = 4
    kernel: int = 5
    dense_width: int = 256
    n_classes: int = N_CLASSES
    batch_size: int = 128
    epochs: int = 20
    learning_rate: float = 1e-3
    runs_per_recipe: int = 5


class SignalCnn(nn.Module):
    def __init__(self, config: CnnConfig):
        super().__init__()
        c = config
        convs = [nn.Conv1d(c.input_channels, c.conv_channels[0],
                           c.first_kernel, stride=c.first_stride, padding=2)]
        for cin, cout in zip(c.conv_channels, c.conv_channels[1:]):
            convs.append(nn.Conv1d(cin, cout, c.kernel, padding=c.kernel // 2))
        self.convs = nn.ModuleList(convs)
        self.pool = nn.MaxPool1d(2)
        length = c.input_len // c.first_stride // 2 ** (len(convs) - 1)
        self.fc1 = nn.Linear(c.conv_channels[-1] * length, c.dense_width)
        self.fc2 = nn.Linear(c.dense_width, c.n_classes)
        self.act = nn.ReLU()

    def forward(self, x):
        for i, conv in enumerate(self.convs):
            x = self.act(conv(x))
            if i < len(self.convs) - 1:
                x = self.pool(x)
        x = torch.flatten(x, 1)
        x = self.act(self.fc1(x))
        return self.fc2(x)


def count_parameters(model: nn.Module) -> int:
    return sum(p.numel() for p in model.parameters() if p.requires_grad)


def build_model(config: CnnConfig | None = None, seed: int | None = None) -> SignalCnn:
    """Build the CNN; enforces the parameter budget at construction."""
    config = config or CnnConfig()
    if seed is not None:
        torch.manual_seed(seed)
    model = SignalCnn(config)
    n = count_parameters(model)
    lo = PARAM_BUDGET * (1 - BUDGET_TOLERANCE)
    hi = PARAM_BUDGET * (1 + BUDGET_TOLERANCE)
    if not (lo <= n <= hi):
        raise ValueError(f"parameter count {n} outside budget {PARAM_BUDGET} +-10%")
    return model
