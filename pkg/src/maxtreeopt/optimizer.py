"""Gradient descent on images through the max-tree.

Each iteration rebuilds the tree of the current image from scratch so the
gradient always belongs to the current piece of the piecewise-smooth
objective, then applies one Adam update.  Stopping is based on a loss
plateau rather than the gradient norm, which jumps at piece boundaries.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .imageio import Image
from .losses import CompositeBreakdown, LossConfig, composite_loss
from .maxtree import build_maxtree


class OptimizationError(RuntimeError):
    """Non-finite loss or gradient encountered during a run."""


class StopReason(enum.Enum):
    MAX_ITERS = "max_iters"
    PLATEAU = "plateau"


@dataclass(frozen=True)
class OptimConfig:
    step_size: float = 1e-2
    beta1: float = 0.9
    beta2: float = 0.999
    eps_hat: float = 1e-8
    max_iters: int = 2000
    plateau_patience: int = 50
    plateau_tol: float = 1e-9
    seed: int = 0  # reserved for stochastic extensions; the descent is deterministic

    def __post_init__(self):
        if not self.step_size > 0:
            raise ValueError("step_size must be positive")
        for name in ("beta1", "beta2"):
            b = getattr(self, name)
            if not 0.0 < b < 1.0:
                raise ValueError(f"{name} must lie in (0, 1)")
        if not self.eps_hat > 0:
            raise ValueError("eps_hat must be positive")
        if self.max_iters < 1:
            raise ValueError("max_iters must be positive")
        if self.plateau_patience < 1:
            raise ValueError("plateau_patience must be positive")
        if self.plateau_tol < 0:
            raise ValueError("plateau_tol must be non-negative")


@dataclass(frozen=True)
class Trajectory:
    final_image: Image
    loss_log: list[CompositeBreakdown] = field(repr=False)
    iterations_run: int = 0
    stop_reason: StopReason = StopReason.MAX_ITERS


def optimize(
    y: Image, loss: LossConfig, opt: OptimConfig, on_iteration=None
) -> Trajectory:
    """Minimize the composite objective starting from the observation ``y``.

    The final image is the one whose loss is the last log entry, so written
    artifacts and logs stay consistent.  ``on_iteration(t, image)`` is an
    optional hook, called after each evaluation (snapshots etc.).
    """
    f = y.values.copy()
    m1 = np.zeros_like(f)
    m2 = np.zeros_like(f)
    log: list[CompositeBreakdown] = []
    best = np.inf
    stall = 0
    stop = StopReason.MAX_ITERS
    for t in range(1, opt.max_iters + 1):
        image = Image(f.copy(), y.grid)
        tree = build_maxtree(image)
        breakdown, grad = composite_loss(image, y, tree, loss)
        if not np.isfinite(breakdown.total) or not np.all(np.isfinite(grad)):
            raise OptimizationError(
                f"non-finite loss or gradient at iteration {t}"
            )
        log.append(breakdown)
        if on_iteration is not None:
            on_iteration(t, image)
        if breakdown.total < best - opt.plateau_tol:
            best = breakdown.total
            stall = 0
        else:
            stall += 1
        if stall >= opt.plateau_patience:
            stop = StopReason.PLATEAU
            break
        if t == opt.max_iters:
            break
        m1 = opt.beta1 * m1 + (1.0 - opt.beta1) * grad
        m2 = opt.beta2 * m2 + (1.0 - opt.beta2) * grad * grad
        m1_hat = m1 / (1.0 - opt.beta1**t)
        m2_hat = m2 / (1.0 - opt.beta2**t)
        f = f - opt.step_size * m1_hat / (np.sqrt(m2_hat) + opt.eps_hat)
    final = Image(f, y.grid)
    return Trajectory(
        final_image=final,
        loss_log=log,
        iterations_run=len(log),
        stop_reason=stop,
    )
