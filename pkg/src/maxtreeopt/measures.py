"""Per-maximum saliency and importance measures.

Each regional maximum (leaf of the max-tree) gets a scalar: its peak
altitude, its dynamics, or its volume extinction.  The extinction measures
come with the *saddle node* of each maximum — the closest ancestor whose
subtree holds a strictly better ranked maximum — which is also exactly what
the backward rules in :mod:`maxtreeopt.backprop` need.

Ranking comparisons are strict: maxima whose branches tie exactly merge
together and share the extinction of the merged branch, which is what the
underlying increasing-filter definition yields (see
:func:`maxtreeopt.oracles.oracle_extinction`).

References
----------
.. [1] Vachier, C., & Meyer, F. (1995). Extinction value: a new measurement
       of persistence. IEEE Workshop on Nonlinear Signal and Image
       Processing.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .maxtree import MaxTree, leaves


class MeasureKind(enum.Enum):
    ALT = "alt"
    DYN = "dyn"
    VOL = "vol"


@dataclass(frozen=True)
class MeasureVector:
    """Per-maximum values in leaf order (ascending leaf node index).

    ``saddle[i]`` is a strict ancestor of leaf ``i`` (the root for a maximum
    that is never beaten) and ``branch_top[i]`` the child of the saddle on
    the path toward the leaf; for a never-beaten maximum of the volume
    measure both are the root, so its value covers the whole image.
    """

    kind: MeasureKind
    values: np.ndarray
    saddle: np.ndarray
    branch_top: np.ndarray


def alt_measure(tree: MaxTree) -> MeasureVector:
    """Peak altitude of each maximum."""
    lv = leaves(tree)
    return MeasureVector(
        kind=MeasureKind.ALT,
        values=tree.altitude[lv].copy(),
        saddle=tree.parent[lv].copy(),
        branch_top=lv.copy(),
    )


def saddle_nodes(
    tree: MaxTree, ranking: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Saddles for an arbitrary per-leaf ranking.

    For each leaf ``i``, the saddle is the nearest strict ancestor whose
    subtree contains a leaf with strictly greater ranking; a leaf with no
    such ancestor gets the root.  ``branch_top`` is the saddle's child on the
    path to the leaf (the leaf itself when the saddle is its direct parent,
    the root only for a single-node tree).
    """
    lv = leaves(tree)
    ranking = np.asarray(ranking, dtype=np.float64)
    if ranking.shape != lv.shape:
        raise ValueError(
            f"ranking has length {ranking.shape}, expected {lv.shape[0]} (one per maximum)"
        )
    best = np.full(tree.node_count, -np.inf)
    best[lv] = ranking
    _kernels.fold_max_up(tree.parent, best)
    return _kernels.saddle_walk(tree.parent, best, lv, ranking, tree.root)


def dyn_measure(tree: MaxTree) -> MeasureVector:
    """Dynamics: altitude drop from each peak to its saddle.

    The maximum with the greatest altitude has the root as saddle, so its
    dynamics is the full image range.
    """
    lv = leaves(tree)
    peak = tree.altitude[lv]
    saddle, btop = saddle_nodes(tree, peak)
    return MeasureVector(
        kind=MeasureKind.DYN,
        values=peak - tree.altitude[saddle],
        saddle=saddle,
        branch_top=btop,
    )


def vol_measure(tree: MaxTree) -> MeasureVector:
    """Volume extinction: surface of the branch lost at each saddle.

    Bottom-up, each child branch of a node carries the surface
    ``sum_{p in child} (f_p - altitude[node])`` (the parent-referenced volume
    attribute); a maximum rides its branch upward while that surface is
    maximal among siblings and its extinction is the branch surface where it
    is first strictly beaten.  A never-beaten maximum gets the total surface
    above the image minimum.
    """
    lv = leaves(tree)
    attrs = tree.attributes()
    vol = attrs.volume
    childmax = np.full(tree.node_count, -np.inf)
    if tree.node_count > 1:
        np.maximum.at(childmax, tree.parent[1:], vol[1:])
    saddle, btop = _kernels.volume_walk(tree.parent, childmax, vol, lv, tree.root)
    values = (
        attrs.sum_values[btop] - attrs.area[btop] * tree.altitude[saddle]
    )
    return MeasureVector(
        kind=MeasureKind.VOL, values=values, saddle=saddle, branch_top=btop
    )


def compute_measure(tree: MaxTree, kind: MeasureKind) -> MeasureVector:
    if kind is MeasureKind.ALT:
        return alt_measure(tree)
    if kind is MeasureKind.DYN:
        return dyn_measure(tree)
    if kind is MeasureKind.VOL:
        return vol_measure(tree)
    raise ValueError(f"unknown measure kind: {kind!r}")
