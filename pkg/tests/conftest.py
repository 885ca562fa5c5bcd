import numpy as np
import pytest

from maxtreeopt import Connectivity, Image, MeasureKind, make_grid
from maxtreeopt.backprop import backprop_altitudes, backprop_measure
from maxtreeopt.maxtree import MaxTree, build_maxtree
from maxtreeopt.measures import compute_measure


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    """Trigger numba compilation once, outside any timed assertion."""
    img = Image(np.array([0.0, 1.0, 0.5, 2.0]), make_grid(4, 1, Connectivity.CHAIN2))
    tree = build_maxtree(img)
    for kind in MeasureKind:
        mv = compute_measure(tree, kind)
        backprop_altitudes(tree, backprop_measure(tree, mv, np.zeros(len(mv.values))))


def chain_image(values) -> Image:
    values = np.asarray(values, dtype=np.float64)
    return Image(values, make_grid(len(values), 1, Connectivity.CHAIN2))


def grid_image(matrix, connectivity=Connectivity.CONN8) -> Image:
    return Image.from_matrix(np.asarray(matrix, dtype=np.float64), connectivity)


def tree_node_map(tree: MaxTree):
    """{pixel set -> (altitude, parent pixel set)} for structural comparison."""
    sets = tree.node_pixel_sets()
    frozen = [frozenset(s) for s in sets]
    return {
        frozen[c]: (float(tree.altitude[c]), frozen[tree.parent[c]])
        for c in range(tree.node_count)
    }


def random_integer_image(rng, max_side, levels, connectivity) -> Image:
    w = int(rng.integers(1, max_side + 1))
    h = int(rng.integers(1, max_side + 1))
    vals = rng.integers(0, levels, size=w * h).astype(np.float64)
    return Image(vals, make_grid(w, h, connectivity))


def fig1_image() -> Image:
    """Six-pixel staircase used as the worked example throughout the tests."""
    return chain_image([0.0, 0.0, 2.0, 2.0, 1.0, 3.0])
