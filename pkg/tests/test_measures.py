import numpy as np
import pytest

from maxtreeopt import Connectivity, Image, make_grid
from maxtreeopt.maxtree import build_maxtree, leaves
from maxtreeopt.measures import (
    MeasureKind,
    alt_measure,
    compute_measure,
    dyn_measure,
    saddle_nodes,
    vol_measure,
)
from maxtreeopt.oracles import oracle_extinction_all, oracle_persistence_1d

from conftest import chain_image, fig1_image, random_integer_image


def test_alt_measure_staircase():
    t = build_maxtree(fig1_image())
    mv = alt_measure(t)
    np.testing.assert_array_equal(mv.values, [2.0, 3.0])
    np.testing.assert_array_equal(mv.saddle, [1, 1])  # parents of the leaves


def test_alt_measure_constant():
    t = build_maxtree(Image(np.full(4, 0.3), make_grid(2, 2, Connectivity.CONN8)))
    np.testing.assert_array_equal(alt_measure(t).values, [0.3])


def test_alt_max_is_image_max():
    rng = np.random.default_rng(0)
    for _ in range(20):
        img = random_integer_image(rng, 6, 9, Connectivity.CONN8)
        t = build_maxtree(img)
        assert alt_measure(t).values.max() == img.values.max()


def test_saddles_on_staircase():
    t = build_maxtree(fig1_image())
    saddle, btop = saddle_nodes(t, np.array([2.0, 3.0]))
    np.testing.assert_array_equal(saddle, [1, 0])  # C2 for C3; root for C4
    np.testing.assert_array_equal(btop, [2, 1])


def test_saddle_single_leaf_is_root():
    t = build_maxtree(chain_image([0, 1, 2, 3]))
    saddle, btop = saddle_nodes(t, np.array([1.0]))
    assert saddle[0] == t.root
    # monotone ramp: the whole chain is one branch under the root
    assert btop[0] == 1


def test_saddle_rejects_bad_length():
    t = build_maxtree(fig1_image())
    with pytest.raises(ValueError, match="length"):
        saddle_nodes(t, np.array([1.0]))


def _brute_force_saddles(tree, ranking):
    lv = leaves(tree)
    sets = tree.node_pixel_sets()
    leaf_of_node = {int(lv[i]): i for i in range(len(lv))}
    out = []
    for i, leaf in enumerate(lv):
        node = int(leaf)
        found = None
        path = [node]
        while tree.parent[node] != node:
            node = int(tree.parent[node])
            path.append(node)
            better = [
                j
                for other, j in leaf_of_node.items()
                if sets[other] <= sets[node] and ranking[j] > ranking[i]
            ]
            if better:
                found = node
                break
        if found is None:
            saddle = tree.root
            btop = path[-2] if len(path) > 1 else tree.root
        else:
            saddle = found
            btop = path[path.index(found) - 1]
        out.append((saddle, btop))
    return out


def test_saddles_match_brute_force_scan():
    rng = np.random.default_rng(1)
    for trial in range(60):
        conn = Connectivity.CONN4 if trial % 2 else Connectivity.CONN8
        img = random_integer_image(rng, 6, 8, conn)
        t = build_maxtree(img)
        k = len(leaves(t))
        ranking = rng.normal(size=k)
        saddle, btop = saddle_nodes(t, ranking)
        expected = _brute_force_saddles(t, ranking)
        assert list(zip(saddle.tolist(), btop.tolist())) == expected


def test_dyn_staircase():
    t = build_maxtree(fig1_image())
    mv = dyn_measure(t)
    np.testing.assert_array_equal(mv.values, [1.0, 3.0])
    np.testing.assert_array_equal(mv.saddle, [1, 0])


def test_dyn_constant_image():
    t = build_maxtree(Image(np.full(6, 1.5), make_grid(3, 2, Connectivity.CONN4)))
    np.testing.assert_array_equal(dyn_measure(t).values, [0.0])


def test_vol_staircase_tied_branches_share_total():
    # both branches of the staircase carry surface 2 at their merge, so the
    # filter family removes them together and both maxima live to the root
    t = build_maxtree(fig1_image())
    mv = vol_measure(t)
    np.testing.assert_array_equal(mv.values, [8.0, 8.0])
    np.testing.assert_array_equal(mv.saddle, [0, 0])
    np.testing.assert_array_equal(mv.branch_top, [0, 0])


def test_vol_untied_branches():
    img = chain_image([0, 3, 1, 2, 0])
    t = build_maxtree(img)
    mv = vol_measure(t)
    lv = leaves(t)
    peaks = t.altitude[lv]
    # peak 3 dominates; peak 2 loses at the level-1 merge with surface 1
    i2 = int(np.argmin(peaks))
    i3 = int(np.argmax(peaks))
    assert mv.values[i2] == 1.0
    assert mv.values[i3] == img.values.sum()  # total surface above min 0
    assert mv.saddle[i3] == t.root and mv.branch_top[i3] == t.root


def test_vol_constant_image():
    t = build_maxtree(Image(np.full(4, 2.0), make_grid(4, 1, Connectivity.CHAIN2)))
    np.testing.assert_array_equal(vol_measure(t).values, [0.0])


def test_extinction_matches_filter_sweep():
    rng = np.random.default_rng(2)
    for trial in range(40):
        conn = Connectivity.CONN4 if trial % 2 else Connectivity.CONN8
        img = random_integer_image(rng, 7, 6, conn)
        t = build_maxtree(img)
        lv = leaves(t)
        sets = t.node_pixel_sets()
        for kind in ("dyn", "vol"):
            mv = dyn_measure(t) if kind == "dyn" else vol_measure(t)
            table = oracle_extinction_all(img, kind)
            for i, leaf in enumerate(lv):
                assert table[frozenset(sets[leaf])] == mv.values[i], (
                    kind,
                    img.values,
                )


def test_dyn_matches_1d_persistence():
    rng = np.random.default_rng(3)
    for _ in range(60):
        n = int(rng.integers(2, 40))
        vals = rng.permutation(n).astype(np.float64)
        img = chain_image(vals)
        t = build_maxtree(img)
        lv = leaves(t)
        mv = dyn_measure(t)
        mine = {
            int(np.flatnonzero(t.proper_node == leaf)[0]): mv.values[i]
            for i, leaf in enumerate(lv)
        }
        assert mine == dict(oracle_persistence_1d(vals))


def test_dyn_invariant_under_offset_alt_shifts():
    rng = np.random.default_rng(4)
    img = random_integer_image(rng, 6, 9, Connectivity.CONN8)
    shifted = Image(img.values + 3.0, img.grid)
    t0, t1 = build_maxtree(img), build_maxtree(shifted)
    np.testing.assert_array_equal(dyn_measure(t0).values, dyn_measure(t1).values)
    np.testing.assert_array_equal(
        alt_measure(t0).values + 3.0, alt_measure(t1).values
    )
    assert np.argmax(alt_measure(t0).values) == np.argmax(alt_measure(t1).values)


def test_positive_rescale_scales_measures():
    rng = np.random.default_rng(5)
    img = random_integer_image(rng, 6, 9, Connectivity.CONN4)
    scaled = Image(img.values * 2.5, img.grid)
    t0, t1 = build_maxtree(img), build_maxtree(scaled)
    d0, d1 = dyn_measure(t0), dyn_measure(t1)
    np.testing.assert_allclose(d0.values * 2.5, d1.values, rtol=1e-12)
    np.testing.assert_array_equal(np.argsort(d0.values), np.argsort(d1.values))


def test_unique_dominant_on_distinct_values():
    # with all-distinct pixel values exactly one maximum rides to the root
    # unbeaten; other maxima may still have the root as their saddle when
    # they merge with the dominant one only there
    rng = np.random.default_rng(6)
    for _ in range(30):
        vals = rng.uniform(size=36)
        img = Image(vals, make_grid(6, 6, Connectivity.CONN8))
        t = build_maxtree(img)
        d = dyn_measure(t)
        peaks = t.altitude[leaves(t)]
        top = int(np.argmax(peaks))
        assert d.saddle[top] == t.root
        assert np.sum(d.saddle == t.root) >= 1
        v = vol_measure(t)
        assert np.sum(v.branch_top == t.root) == 1


def test_compute_measure_dispatch():
    t = build_maxtree(fig1_image())
    assert compute_measure(t, MeasureKind.ALT).kind is MeasureKind.ALT
    assert compute_measure(t, MeasureKind.DYN).kind is MeasureKind.DYN
    assert compute_measure(t, MeasureKind.VOL).kind is MeasureKind.VOL
