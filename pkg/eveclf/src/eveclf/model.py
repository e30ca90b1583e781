"""The eavesdropper's classifier: a small CNN over raw I/Q windows."""

from __future__ import annotations

import numpy as np
import torch
from torch import nn

N_BLOCKS = 7
N_FILTERS = 64
KERNEL = 7  # taps along the sample axis; the I/Q axis is never mixed by convs
DROPOUT = 0.5


def softmax(scores) -> np.ndarray:
    """Probability vector(s) of raw scores, along the last axis.

    Shift-invariant form, so arbitrarily large inputs stay finite.
    """
    z = np.asarray(scores, dtype=np.float64)
    z = z - z.max(axis=-1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=-1, keepdims=True)


class PatternCnn(nn.Module):
    """Seven conv blocks halving the sample axis, then a linear readout.

    Input is ``(batch, 1, 2, window)`` -- one channel holding the I and Q
    rows of a window.  Each block is a width-``KERNEL`` convolution along
    the sample axis into ``N_FILTERS`` feature maps; the first six blocks
    end in a stride-2 max pool, so a 1024-sample window arrives at the
    head as a 2x16 map.  Average pooling collapses that to 2x1, and a
    dropout + linear layer maps the 128 features to ``n_classes`` scores.
    Feed the returned logits through :func:`softmax` for probabilities.
    """

    def __init__(self, n_classes: int, window: int = 1024) -> None:
        super().__init__()
        if n_classes < 1:
            raise ValueError(f"n_classes {n_classes} < 1")
        if window < 2 ** (N_BLOCKS - 1):
            raise ValueError(f"window {window} too short for {N_BLOCKS - 1} poolings")
        blocks: list[nn.Module] = []
        ch = 1
        for i in range(N_BLOCKS):
            blocks.append(nn.Conv2d(ch, N_FILTERS, (1, KERNEL), padding=(0, KERNEL // 2)))
            blocks.append(nn.ReLU())
            if i < N_BLOCKS - 1:
                blocks.append(nn.MaxPool2d((1, 2)))
            ch = N_FILTERS
        self.features = nn.Sequential(*blocks)
        self.pool = nn.AdaptiveAvgPool2d((2, 1))
        self.drop = nn.Dropout(DROPOUT)
        self.fc = nn.Linear(2 * N_FILTERS, n_classes)
        self.n_classes = n_classes
        self.window = window

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        z = self.pool(self.features(x))
        return self.fc(self.drop(torch.flatten(z, 1)))


@torch.no_grad()
def predict_proba(model: PatternCnn, iq: np.ndarray, batch: int = 512) -> np.ndarray:
    """Class probabilities for ``(n, 2, window)`` float32 windows."""
    model.eval()
    out = np.empty((len(iq), model.n_classes), dtype=np.float64)
    for a in range(0, len(iq), batch):
        x = torch.from_numpy(iq[a : a + batch]).unsqueeze(1)
        out[a : a + batch] = softmax(model(x).numpy())
    return out


def predict_labels(model: PatternCnn, iq: np.ndarray, batch: int = 512) -> np.ndarray:
    """Hard decisions for ``(n, 2, window)`` float32 windows."""
    return predict_proba(model, iq, batch).argmax(axis=1)
