"""Pixel domains and adjacency.

Images live on a rectangular grid of ``width * height`` pixels addressed by
flat indices ``0..n-1`` in row-major order.  The connectivity determines which
pixels are adjacent and therefore what "connected component" means everywhere
else in the package.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np


class Connectivity(enum.Enum):
    """Adjacency relation of the pixel grid."""

    CHAIN2 = "chain2"  # 1-d signals: left/right neighbors only
    CONN4 = "conn4"
    CONN8 = "conn8"


# Neighbor offsets as (dy, dx), in an order that yields ascending flat indices.
_OFFSETS = {
    Connectivity.CHAIN2: ((0, -1), (0, 1)),
    Connectivity.CONN4: ((-1, 0), (0, -1), (0, 1), (1, 0)),
    Connectivity.CONN8: (
        (-1, -1), (-1, 0), (-1, 1),
        (0, -1), (0, 1),
        (1, -1), (1, 0), (1, 1),
    ),
}


@dataclass(frozen=True)
class Grid:
    """Immutable pixel domain: dimensions plus adjacency.

    Pixel ``i`` sits at row ``i // width``, column ``i % width``.
    """

    width: int
    height: int
    connectivity: Connectivity
    _neighbor_cache: dict = field(
        default_factory=dict, repr=False, compare=False
    )

    @property
    def n(self) -> int:
        return self.width * self.height

    def neighbors(self, i: int) -> list[int]:
        """All pixels adjacent to ``i``, in ascending index order."""
        if not 0 <= i < self.n:
            raise IndexError(f"pixel index {i} out of range [0, {self.n})")
        arr, deg = self.neighbor_arrays()
        return [int(j) for j in arr[i, : deg[i]]]

    def neighbor_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """Padded adjacency table for array-based algorithms.

        Returns ``(neigh, degree)`` where ``neigh`` has shape ``(n, maxdeg)``
        (-1 padded) and ``neigh[i, :degree[i]]`` lists the neighbors of ``i``
        in ascending order.  Built once and cached; the grid itself stays
        immutable.
        """
        cached = self._neighbor_cache.get("arrays")
        if cached is None:
            cached = _build_neighbor_arrays(
                self.width, self.height, self.connectivity
            )
            self._neighbor_cache["arrays"] = cached
        return cached


def make_grid(width: int, height: int, connectivity: Connectivity) -> Grid:
    """Create a grid, validating dimensions against the connectivity."""
    if width < 1 or height < 1:
        raise ValueError(f"grid dimensions must be positive, got {width}x{height}")
    if connectivity is Connectivity.CHAIN2 and height != 1:
        raise ValueError("chain2 connectivity requires height == 1")
    return Grid(width, height, connectivity)


def _build_neighbor_arrays(width, height, connectivity):
    offsets = _OFFSETS[connectivity]
    n = width * height
    maxdeg = len(offsets)
    neigh = np.full((n, maxdeg), -1, dtype=np.int64)
    degree = np.zeros(n, dtype=np.int64)
    ys, xs = np.divmod(np.arange(n), width)
    for dy, dx in offsets:
        ny = ys + dy
        nx = xs + dx
        ok = (ny >= 0) & (ny < height) & (nx >= 0) & (nx < width)
        idx = np.flatnonzero(ok)
        neigh[idx, degree[idx]] = ny[idx] * width + nx[idx]
        degree[idx] += 1
    # offsets are listed in raster order, so each row is already ascending
    return neigh, degree
