"""Canonical max-trees.

The max-tree of an image is the inclusion hierarchy of the connected
components of all of its upper level sets.  Each node stores the altitude at
which its component appears; every pixel is a *proper pixel* of exactly one
node (the component at the pixel's own level), which makes the map from node
altitudes back to pixel values trivial and is what the gradient machinery in
:mod:`maxtreeopt.backprop` relies on.

Construction uses the classic union-find scheme over pixels sorted by
decreasing value followed by a canonicalization sweep.

References
----------
.. [1] Salembier, P., Oliveras, A., & Garrido, L. (1998). Antiextensive
       connected operators for image and sequence processing. IEEE
       Transactions on Image Processing, 7(4), 555-570.
.. [2] Berger, C., Geraud, T., Levillain, R., Widynski, N., Baillard, A.,
       Bertin, E. (2007). Effective component tree computation with
       application to pattern recognition in astronomical imaging. ICIP.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .grid import Grid
from .imageio import Image


@dataclass(frozen=True, eq=False)
class MaxTree:
    """Canonical max-tree: parent links, altitudes, pixel-to-node map.

    Nodes are indexed root-first in topological order (``parent[c] < c`` for
    every non-root node), the root is node 0 and points to itself.  Altitude
    strictly increases from parent to child.  ``proper_node[p]`` is the node
    whose level equals the value of pixel ``p``.
    """

    grid: Grid
    parent: np.ndarray
    altitude: np.ndarray
    proper_node: np.ndarray
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def node_count(self) -> int:
        return self.parent.shape[0]

    @property
    def root(self) -> int:
        return 0

    def attributes(self) -> "NodeAttributes":
        """Node attributes, computed once and cached (the tree is immutable)."""
        attrs = self._cache.get("attributes")
        if attrs is None:
            attrs = compute_attributes(self)
            self._cache["attributes"] = attrs
        return attrs

    def node_pixel_sets(self) -> list[set[int]]:
        """Full pixel set of every node (quadratic storage; tests/debug only)."""
        sets = [set() for _ in range(self.node_count)]
        for p, c in enumerate(self.proper_node):
            sets[c].add(p)
        for c in range(self.node_count - 1, 0, -1):
            sets[self.parent[c]] |= sets[c]
        return sets

    def to_json(self) -> str:
        """JSON dump with deterministic field order."""
        area = self.attributes().area
        payload = {
            "parent": [int(x) for x in self.parent],
            "altitude": [float(x) for x in self.altitude],
            "proper_node": [int(x) for x in self.proper_node],
            "area": [int(x) for x in area],
        }
        return json.dumps(payload)


@dataclass(frozen=True)
class NodeAttributes:
    """Per-node attributes from one bottom-up pass.

    ``height`` is the maximum subtree altitude minus the node altitude.
    ``volume`` is referenced to the *parent* level:
    ``volume[c] = sum_{p in c} (f_p - altitude[parent[c]])``, with the root's
    parent level taken as the root altitude itself, so
    ``volume[root] = sum_p (f_p - min f)``.
    """

    area: np.ndarray
    proper_count: np.ndarray
    height: np.ndarray
    volume: np.ndarray
    sum_values: np.ndarray  # per-node sum of pixel values, reused by measures


def build_maxtree(image: Image) -> MaxTree:
    """Build the canonical max-tree of an image.

    Plateaus (maximal connected regions of equal value at a level) become a
    single node; ties in the pixel ordering are broken by ascending index so
    rebuilding the same image gives an identical tree.
    """
    grid = image.grid
    values = image.values
    n = grid.n
    neigh, degree = grid.neighbor_arrays()
    order = np.argsort(-values, kind="stable")
    parent_px = _kernels.build_pixel_parents(order, neigh, degree, values)

    is_canonical = (parent_px == np.arange(n)) | (values[parent_px] != values)
    canon = np.flatnonzero(is_canonical)
    # root-first topological node order: by (altitude, pixel index)
    canon = canon[np.lexsort((canon, values[canon]))]
    m = canon.shape[0]
    node_of_px = np.full(n, -1, dtype=np.int64)
    node_of_px[canon] = np.arange(m)
    proper_node = np.where(is_canonical, node_of_px, node_of_px[parent_px])
    parent = node_of_px[parent_px[canon]]
    altitude = values[canon].copy()
    return MaxTree(grid=grid, parent=parent, altitude=altitude, proper_node=proper_node)


def leaves(tree: MaxTree) -> np.ndarray:
    """Nodes without children, ascending; these are the regional maxima."""
    child_count = np.bincount(tree.parent[1:], minlength=tree.node_count)
    return np.flatnonzero(child_count == 0)


def compute_attributes(tree: MaxTree) -> NodeAttributes:
    proper_count = np.bincount(tree.proper_node, minlength=tree.node_count)
    area, sumf, maxalt = _kernels.accumulate_attributes(
        tree.parent, proper_count, tree.altitude
    )
    parent_alt = tree.altitude[tree.parent]  # root: its own altitude
    return NodeAttributes(
        area=area,
        proper_count=proper_count,
        height=maxalt - tree.altitude,
        volume=sumf - area * parent_alt,
        sum_values=sumf,
    )


def reconstruct(tree: MaxTree) -> Image:
    """Image whose pixel values are the altitudes of their proper nodes."""
    return Image(tree.altitude[tree.proper_node], tree.grid)
