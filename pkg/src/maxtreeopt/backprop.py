"""Gradients through the max-tree.

The altitude vector is a selection of pixel values: node ``c`` has the value
of any of its proper pixels.  A gradient on altitudes therefore pulls back to
pixels by plain indexing (each pixel inherits the gradient of its proper
node), and each measure has a sparse backward rule onto altitudes.

Tree structure, rankings, and saddle assignments are held fixed during
differentiation: the objectives are piecewise smooth in the pixel values and
these rules are the exact gradient of the active piece.  At ties the
deterministic tie-breaking of the forward passes picks one subgradient.
"""

from __future__ import annotations

import numpy as np

from .maxtree import MaxTree, leaves
from .measures import MeasureKind, MeasureVector
from . import _kernels

# Gradient vectors are plain float arrays: length node_count on altitudes,
# length n on pixels.
AltitudeGrad = np.ndarray
PixelGrad = np.ndarray


def backprop_altitudes(tree: MaxTree, grad_a: AltitudeGrad) -> PixelGrad:
    """Pull a gradient on node altitudes back to pixel values."""
    grad_a = np.asarray(grad_a, dtype=np.float64)
    if grad_a.shape != (tree.node_count,):
        raise ValueError(
            f"altitude gradient has shape {grad_a.shape}, expected ({tree.node_count},)"
        )
    return grad_a[tree.proper_node]


def backprop_measure(
    tree: MaxTree, measure: MeasureVector, grad_m: np.ndarray
) -> AltitudeGrad:
    """Accumulate a per-maximum gradient onto node altitudes.

    alt: the gradient lands on the leaf.
    dyn: +g on the leaf, -g on its saddle (the root included).
    vol: +g * proper_count on every node of the branch-top subtree and
         -g * area[branch_top] on the saddle.
    """
    lv = leaves(tree)
    grad_m = np.asarray(grad_m, dtype=np.float64)
    if grad_m.shape != lv.shape:
        raise ValueError(
            f"measure gradient has length {grad_m.shape}, expected {lv.shape[0]}"
        )
    grad_a = np.zeros(tree.node_count)
    if measure.kind is MeasureKind.ALT:
        np.add.at(grad_a, lv, grad_m)
    elif measure.kind is MeasureKind.DYN:
        np.add.at(grad_a, lv, grad_m)
        np.add.at(grad_a, measure.saddle, -grad_m)
    elif measure.kind is MeasureKind.VOL:
        attrs = tree.attributes()
        marks = np.zeros(tree.node_count)
        np.add.at(marks, measure.branch_top, grad_m)
        _kernels.propagate_down_add(tree.parent, marks)
        grad_a += marks * attrs.proper_count
        np.add.at(grad_a, measure.saddle, -grad_m * attrs.area[measure.branch_top])
    else:
        raise ValueError(f"unknown measure kind: {measure.kind!r}")
    return grad_a
