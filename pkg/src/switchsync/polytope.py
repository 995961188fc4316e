"""Polytopic over-approximation of the parameter-dependent error dynamics.

Five entries of the cancelled error matrix depend affinely on the switching
parameter.  Treating each entry as an independent interval and taking all
combinations of interval endpoints yields 2^5 = 32 vertex matrices whose
convex hull contains the matrix for every parameter value; the vertices are
what the gain synthesis certifies against.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError
from .system import check_alpha, linear_error_matrix

# Positions of the parameter-dependent entries, in enumeration order.
ALPHA_ENTRIES = ((0, 0), (0, 1), (1, 0), (1, 1), (2, 2))

WEIGHT_SUM_TOL = 1e-12


@dataclass(frozen=True)
class EntryInterval:
    """Bounds of one matrix entry over the parameter range."""

    row: int
    col: int
    lo: float
    hi: float


def entry_intervals(alpha_lo: float = 0.0, alpha_hi: float = 1.0) -> tuple[EntryInterval, ...]:
    """Per-entry bounds of the cancelled error matrix over [alpha_lo, alpha_hi].

    Each tracked entry is affine in the parameter, so its extremes sit at
    the range endpoints.
    """
    lo = check_alpha(alpha_lo)
    hi = check_alpha(alpha_hi)
    if lo > hi:
        raise InvalidInputError("alpha_lo must not exceed alpha_hi")
    at_lo = linear_error_matrix(lo)
    at_hi = linear_error_matrix(hi)
    return tuple(
        EntryInterval(r, c, min(at_lo[r, c], at_hi[r, c]), max(at_lo[r, c], at_hi[r, c]))
        for r, c in ALPHA_ENTRIES
    )


def enumerate_vertices(intervals) -> np.ndarray:
    """All combinations of interval endpoints, as a (2^k, 3, 3) array.

    Vertex i picks the hi endpoint of interval j iff bit j of i is set,
    reading bits most-significant-first, so the ordering is the
    lexicographic order of the choice vectors.  Untracked entries are
    exactly zero.  Coincident vertices from degenerate ranges are kept.
    """
    ivs = tuple(intervals)
    if not ivs:
        raise InvalidInputError("need at least one entry interval")
    k = len(ivs)
    out = np.zeros((1 << k, 3, 3))
    for i in range(1 << k):
        for j, iv in enumerate(ivs):
            take_hi = (i >> (k - 1 - j)) & 1
            out[i, iv.row, iv.col] = iv.hi if take_hi else iv.lo
    return out


def convex_combination(weights, vertices) -> np.ndarray:
    """Weighted sum of vertex matrices for weights on the unit simplex."""
    w = np.asarray(weights, dtype=float)
    v = np.asarray(vertices, dtype=float)
    if w.ndim != 1 or len(w) != len(v):
        raise InvalidInputError(
            f"got {w.shape} weights for {len(v)} vertices"
        )
    if not np.isfinite(w).all() or (w < 0.0).any():
        raise InvalidInputError("weights must be finite and non-negative")
    if abs(float(w.sum()) - 1.0) > WEIGHT_SUM_TOL:
        raise InvalidInputError(f"weights sum to {w.sum()!r}, expected 1")
    return np.einsum("i,ijk->jk", w, v)
