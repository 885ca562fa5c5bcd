"""Loss terms: ranked maxima selection, data attachment, smoothness.

The ranked selection loss keeps the ``target_count`` most important maxima
(hinged at a margin so they stop growing) and penalizes the saliency of all
others.  Importance only enters through the (piecewise constant) argsort, so
no gradient flows through it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .backprop import backprop_altitudes, backprop_measure
from .grid import Grid
from .imageio import Image
from .maxtree import MaxTree
from .measures import MeasureKind, compute_measure


@dataclass(frozen=True)
class LossConfig:
    """Composite objective: l2 + lambda1 * J_r + lambda2 * smoothness.

    lambda1/lambda2 have no universally sensible values; the defaults here
    are a plain starting point and experiments should set their own.
    """

    target_count: int = 1
    margin: float = 0.1
    saliency_kind: MeasureKind = MeasureKind.DYN
    importance_kind: MeasureKind = MeasureKind.DYN
    lambda1: float = 1.0
    lambda2: float = 0.0

    def __post_init__(self):
        if self.target_count < 0:
            raise ValueError("target_count must be non-negative")
        if not self.margin > 0:
            raise ValueError("margin must be positive")
        if not (np.isfinite(self.lambda1) and np.isfinite(self.lambda2)):
            raise ValueError("loss weights must be finite")
        if self.lambda1 < 0 or self.lambda2 < 0:
            raise ValueError("loss weights must be non-negative")


@dataclass(frozen=True)
class CompositeBreakdown:
    total: float
    l2: float
    jr: float
    smooth: float


def ranked_selection_loss(
    sm: np.ndarray, im: np.ndarray, target_count: int, margin: float
) -> tuple[float, np.ndarray]:
    """Hinge-select the top maxima by importance, suppress the rest.

    Returns the loss value and its gradient with respect to ``sm``; entries
    are -1 (selected, below margin), 0 (selected, at/above margin) or +1
    (discarded).  Ties in ``im`` rank the smaller index first, so the
    selection is deterministic.
    """
    sm = np.asarray(sm, dtype=np.float64)
    im = np.asarray(im, dtype=np.float64)
    if sm.shape != im.shape or sm.ndim != 1 or sm.size == 0:
        raise ValueError(
            f"saliency and importance must be equal-length non-empty vectors, "
            f"got shapes {sm.shape} and {im.shape}"
        )
    k = sm.shape[0]
    order = np.argsort(-im, kind="stable")
    selected = order[: min(target_count, k)]
    discarded = order[min(target_count, k):]
    grad = np.zeros(k)
    grad[selected] = np.where(sm[selected] < margin, -1.0, 0.0)
    grad[discarded] = 1.0
    value = float(
        np.maximum(margin - sm[selected], 0.0).sum() + sm[discarded].sum()
    )
    return value, grad


def l2_loss(f: np.ndarray, y: np.ndarray) -> tuple[float, np.ndarray]:
    """Squared error data attachment: sum (f - y)^2."""
    f = np.asarray(f, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if f.shape != y.shape:
        raise ValueError(f"shape mismatch: {f.shape} vs {y.shape}")
    d = f - y
    return float(d @ d), 2.0 * d


def smoothness_loss(f: np.ndarray, grid: Grid) -> tuple[float, np.ndarray]:
    """Squared discrete gradient, summed over 4-adjacent pixel pairs.

    Each horizontal/vertical pair counts once; no pairs cross the border
    (replicate boundary).  The 4-adjacency stencil is used regardless of the
    tree connectivity.
    """
    f = np.asarray(f, dtype=np.float64)
    if f.shape != (grid.n,):
        raise ValueError(f"expected {grid.n} values, got shape {f.shape}")
    m = f.reshape(grid.height, grid.width)
    dh = m[:, 1:] - m[:, :-1]
    dv = m[1:, :] - m[:-1, :]
    value = float((dh * dh).sum() + (dv * dv).sum())
    grad = np.zeros_like(m)
    grad[:, 1:] += 2.0 * dh
    grad[:, :-1] -= 2.0 * dh
    grad[1:, :] += 2.0 * dv
    grad[:-1, :] -= 2.0 * dv
    return value, grad.reshape(-1)


def composite_loss(
    image: Image, target: Image, tree: MaxTree, config: LossConfig
) -> tuple[CompositeBreakdown, np.ndarray]:
    """Full objective and its pixel gradient for one prebuilt tree of ``image``."""
    l2_val, l2_grad = l2_loss(image.values, target.values)
    smooth_val, smooth_grad = smoothness_loss(image.values, image.grid)
    sm = compute_measure(tree, config.saliency_kind)
    if config.importance_kind is config.saliency_kind:
        im = sm
    else:
        im = compute_measure(tree, config.importance_kind)
    jr_val, grad_sm = ranked_selection_loss(
        sm.values, im.values, config.target_count, config.margin
    )
    jr_grad_px = backprop_altitudes(tree, backprop_measure(tree, sm, grad_sm))
    total = l2_val + config.lambda1 * jr_val + config.lambda2 * smooth_val
    grad = l2_grad + config.lambda1 * jr_grad_px + config.lambda2 * smooth_grad
    breakdown = CompositeBreakdown(
        total=total, l2=l2_val, jr=jr_val, smooth=smooth_val
    )
    return breakdown, grad
