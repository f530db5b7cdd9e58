"""Reference weights: the six-weight test corpus plus the singular-atom weight."""

from __future__ import annotations

import numpy as np

from .dynamics import GOLDEN
from .hinf import BoundaryLogModulus, HInfFunction, factor, outer_from_log_modulus

__all__ = [
    "open_dense_mask",
    "fat_cantor_mask",
    "outer_indicator",
    "singular_atom_weight",
    "corpus",
]


def _arc_mask(m: int, centers, lengths) -> np.ndarray:
    """Grid points ``j/m`` (in turns) inside the open arcs ``(c - l/2, c + l/2)``."""
    mask = np.zeros(m, dtype=bool)
    for c, l in zip(centers, lengths):
        lo = int(np.floor((c - l / 2) * m)) + 1
        hi = int(np.ceil((c + l / 2) * m)) - 1
        if hi >= lo:
            mask[np.arange(lo, hi + 1) % m] = True
    return mask


def open_dense_mask(
    m: int = 1 << 16,
    measure: float = 0.5,
    angle: float = GOLDEN,
    scale: float = 0.02,
    decay: float = 1.35,
    n_arcs: int = 4096,
) -> np.ndarray:
    """Grid membership of an open dense arc union ``G`` of the given measure.

    ``G`` is a central arc at 0 together with arcs around the rotation orbit
    ``{k * angle}`` (a dense set), the k-th of length ``scale / k**decay``
    turns. The central arc length is found by bisection so the grid
    fraction matches ``measure``.
    """
    k = np.arange(n_arcs, dtype=float)
    centers = (k * angle) % 1.0
    tail = scale / np.maximum(k, 1.0) ** decay

    def build(l0):
        lengths = tail.copy()
        lengths[0] = l0
        return _arc_mask(m, centers, lengths)

    lo, hi = 0.0, 1.0
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if build(mid).mean() < measure:
            lo = mid
        else:
            hi = mid
    return build(hi)


def fat_cantor_mask(m: int = 1 << 16, gap_cells: int = 2, depth: int | None = None) -> np.ndarray:
    """Grid membership of a closed nowhere-dense Cantor set of measure ~1/2.

    A first gap straddles the seam at angle 0; each later stage removes
    ``gap_cells`` grid cells from the middle of every remaining interval,
    so gaps stay resolvable at every stage. ``depth`` defaults to
    ``log2(m) - 2``, which for two-cell gaps leaves components exactly two
    cells wide and total measure exactly 1/2.
    """
    if depth is None:
        depth = max(1, int(np.log2(m)) - 2)
    intervals = [(gap_cells // 2, m - (gap_cells - gap_cells // 2))]
    for _ in range(depth):
        nxt = []
        for a, b in intervals:
            mid = (a + b) // 2
            lo = mid - gap_cells // 2
            hi = lo + gap_cells
            if lo > a:
                nxt.append((a, lo))
            if b > hi:
                nxt.append((hi, b))
        intervals = nxt
    mask = np.zeros(m, dtype=bool)
    for a, b in intervals:
        mask[a:b] = True
    return mask


def outer_indicator(mask, height: float = 1.0) -> HInfFunction:
    return outer_from_log_modulus(BoundaryLogModulus.indicator(mask, height))


def singular_atom_weight(theta: float = 0.0, mass: float = 1.0, m: int = 4096) -> HInfFunction:
    return HInfFunction(singular=((theta, mass),), outer_log_modulus=BoundaryLogModulus(np.zeros(m)), boundary_continuous=True)


def corpus(m: int = 1 << 16, poly_grid: int = 4096) -> dict:
    """The six reference weights keyed by short names."""
    return {
        "2+z": factor([2, 1], poly_grid),
        "z": factor([0, 1], poly_grid),
        "1-z": factor([1, -1], poly_grid),
        "outer(chi_G)": outer_indicator(open_dense_mask(m)),
        "outer(chi_K)": outer_indicator(fat_cantor_mask(m)),
        "(z-1/2)(z+2)": factor([-1.0, 1.5, 1.0], poly_grid),
    }
