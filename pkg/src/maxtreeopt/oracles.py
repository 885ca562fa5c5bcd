"""Brute-force reference implementations for the test suite.

Everything here is a direct transcription of a definition — level-set
enumeration, filter sweeps, persistence pairing, finite differences — with
no shared code with the fast paths it validates.  Size guards keep these
from being used accidentally on real workloads.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import Grid
from .imageio import Image

_MAX_ORACLE_PIXELS = 256


@dataclass(frozen=True)
class OracleTree:
    """Component tree from exhaustive threshold enumeration.

    ``components[i]`` is a pixel set, ``altitudes[i]`` the largest threshold
    at which it is a connected component of the upper level set, and
    ``parent[i]`` the index of the smallest strictly containing component
    (the root points to itself).
    """

    components: list[frozenset[int]]
    altitudes: list[float]
    parent: list[int]


def _guard(image: Image):
    if image.n > _MAX_ORACLE_PIXELS:
        raise ValueError(
            f"oracle restricted to {_MAX_ORACLE_PIXELS} pixels, got {image.n}"
        )


def _flood(mask: np.ndarray, start: int, grid: Grid) -> set[int]:
    """Connected component of ``start`` within the True pixels of ``mask``."""
    seen = {start}
    stack = [start]
    while stack:
        p = stack.pop()
        for q in grid.neighbors(p):
            if mask[q] and q not in seen:
                seen.add(q)
                stack.append(q)
    return seen


def connected_components(mask: np.ndarray, grid: Grid) -> list[frozenset[int]]:
    comps = []
    remaining = set(np.flatnonzero(mask))
    while remaining:
        comp = _flood(mask, min(remaining), grid)
        comps.append(frozenset(comp))
        remaining -= comp
    return comps


def regional_maxima(image: Image) -> list[frozenset[int]]:
    """Equal-value plateaus all of whose outside neighbors are strictly lower."""
    v = image.values
    maxima = []
    visited = np.zeros(image.n, dtype=bool)
    for p in range(image.n):
        if visited[p]:
            continue
        plateau = _flood(v == v[p], p, image.grid)
        for q in plateau:
            visited[q] = True
        is_max = True
        for q in plateau:
            for r in image.grid.neighbors(q):
                if v[r] > v[p]:
                    is_max = False
                    break
            if not is_max:
                break
        if is_max:
            maxima.append(frozenset(plateau))
    return maxima


def oracle_component_tree(image: Image) -> OracleTree:
    """Enumerate every threshold, flood its level set, deduplicate, nest."""
    _guard(image)
    v = image.values
    seen: dict[frozenset[int], float] = {}
    for lam in np.unique(v):
        for comp in connected_components(v >= lam, image.grid):
            # identical pixel sets at several levels: keep the largest level
            if comp not in seen or lam > seen[comp]:
                seen[comp] = float(lam)
    # sort by (altitude, smallest pixel): parents precede children
    comps = sorted(seen, key=lambda c: (seen[c], min(c)))
    altitudes = [seen[c] for c in comps]
    parent = list(range(len(comps)))
    for i, c in enumerate(comps):
        best = None
        for j, d in enumerate(comps):
            if c < d and (best is None or len(d) < len(comps[best])):
                best = j
        if best is not None:
            parent[i] = best
    return OracleTree(components=comps, altitudes=altitudes, parent=parent)


def _branch_attributes(tree: OracleTree, values: np.ndarray, kind: str) -> list[float]:
    """Parent-referenced removal attribute of each non-root component.

    For the height family this is the rise of the branch's peak above the
    parent's level; for the volume family the surface of the component above
    the parent's level.  Referencing the parent level (rather than the
    component's own) is what makes the increasing filter family peel branches
    from their merge points, matching the saddle-based extinction values.
    """
    attrs = []
    for i, comp in enumerate(tree.components):
        if tree.parent[i] == i:
            attrs.append(np.inf)  # root is never removed
            continue
        parent_alt = tree.altitudes[tree.parent[i]]
        pix = list(comp)
        if kind == "dyn":
            attrs.append(float(values[pix].max() - parent_alt))
        else:
            attrs.append(float(values[pix].sum() - len(pix) * parent_alt))
    return attrs


def _filtered_image(tree: OracleTree, attrs, threshold, image: Image) -> Image:
    """Remove components with attribute < threshold, repaint survivors."""
    out = np.full(image.n, min(tree.altitudes))
    order = sorted(range(len(tree.components)), key=lambda i: tree.altitudes[i])
    for i in order:
        if attrs[i] >= threshold:
            out[list(tree.components[i])] = tree.altitudes[i]
    return Image(out, image.grid)


def oracle_extinction_all(image: Image, kind: str) -> dict[frozenset[int], float]:
    """Extinction of every regional maximum by sweeping the filter family.

    Sweeps thresholds over the attribute values present plus midpoints; the
    extinction of a maximum is the infimum of thresholds at which its pixel
    set is no longer inside any regional maximum of the filtered image.  A
    maximum that survives every threshold gets the root-level convention:
    its full height (resp. surface) above the image minimum.
    """
    _guard(image)
    if kind not in ("dyn", "vol"):
        raise ValueError(f"unsupported extinction kind: {kind!r}")
    v = image.values
    tree = oracle_component_tree(image)
    attrs = _branch_attributes(tree, v, kind)
    finite = sorted({a for a in attrs if np.isfinite(a)})
    candidates = list(finite)
    candidates += [(a + b) / 2.0 for a, b in zip(finite, finite[1:])]
    candidates.sort()

    targets = regional_maxima(image)
    result: dict[frozenset[int], float] = {}
    for k in candidates:
        if len(result) == len(targets):
            break
        filtered = _filtered_image(tree, attrs, k, image)
        maxima = regional_maxima(filtered)
        for target in targets:
            if target in result:
                continue
            if not any(target <= mx for mx in maxima):
                # first death; the true infimum is the attribute value just
                # below this threshold (strict removal keeps the filter
                # constant between consecutive attribute values)
                result[target] = max(a for a in finite if a < k)
    root_level = float(v.min())
    for target in targets:
        if target not in result:
            pix = list(target)
            if kind == "dyn":
                result[target] = float(v[pix[0]] - root_level)
            else:
                result[target] = float(v.sum() - image.n * root_level)
    return result


def oracle_extinction(image: Image, kind: str, maximum) -> float:
    """Extinction value of one regional maximum (given as its pixel set)."""
    key = frozenset(int(p) for p in maximum)
    table = oracle_extinction_all(image, kind)
    if key not in table:
        raise ValueError(f"{sorted(key)} is not a regional maximum of the image")
    return table[key]


def oracle_persistence_1d(signal) -> list[tuple[int, float]]:
    """Superlevel-set persistence pairs of a 1-d signal.

    Sweeps values from high to low with union-find; when two components
    merge, the one born lower dies and its lifetime is recorded against its
    peak.  The component born at the global maximum survives everything and
    is paired with the global minimum.  Returns (peak index, lifetime) pairs
    sorted by peak index.
    """
    v = np.asarray(signal, dtype=np.float64).reshape(-1)
    n = v.shape[0]
    order = sorted(range(n), key=lambda i: (-v[i], i))
    comp = {}  # pixel -> component representative
    birth: dict[int, int] = {}  # representative -> peak pixel
    pairs = []

    def find(x):
        while comp[x] != x:
            comp[x] = comp[comp[x]]
            x = comp[x]
        return x

    for p in order:
        roots = {find(q) for q in (p - 1, p + 1) if 0 <= q < n and q in comp}
        if not roots:
            # no higher processed neighbor: a maximum is born at p
            comp[p] = p
            birth[p] = p
            continue
        # attach p to the oldest component; any second component dies here
        ordered = sorted(
            roots, key=lambda r: (v[birth[r]], -birth[r]), reverse=True
        )
        keep = ordered[0]
        comp[p] = keep
        for r in ordered[1:]:
            pairs.append((birth[r], float(v[birth[r]] - v[p])))
            comp[r] = keep
    survivor = find(order[0])
    pairs.append((birth[survivor], float(v.max() - v.min())))
    return sorted(pairs)


def finite_difference_grad(fn, point: np.ndarray, step: float) -> np.ndarray:
    """Central-difference gradient estimate of a scalar function."""
    if not step > 0:
        raise ValueError("step must be positive")
    x = np.array(point, dtype=np.float64)
    grad = np.empty_like(x)
    for i in range(x.shape[0]):
        orig = x[i]
        x[i] = orig + step
        hi = fn(x)
        x[i] = orig - step
        lo = fn(x)
        x[i] = orig
        grad[i] = (hi - lo) / (2.0 * step)
    return grad
