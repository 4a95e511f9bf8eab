"""Lattice points of degree fibers.

Every fine degree of Pic degree b has the form alpha = lift(b) + R z with R
the ray matrix and z in Z^d.  Bounded regions cut out by coordinate
inequalities on alpha are enumerated by taking the bounding box of all basic
solutions of the relevant equalities (computed in floating point and padded,
so the box only ever over-approximates) and filtering exactly in integers.
"""

from itertools import combinations

import numpy as np


class FiberGeometry:
    def __init__(self, variety):
        self.variety = variety
        self.rays = np.array(variety.ray_matrix, dtype=np.int64)
        self.n, self.d = self.rays.shape
        self.bases = []
        for rows in combinations(range(self.n), self.d):
            sub = self.rays[list(rows)].astype(float)
            if abs(np.linalg.det(sub)) > 0.5:
                self.bases.append((rows, np.linalg.inv(sub)))

    def lift(self, b):
        return np.array(self.variety.lift(b), dtype=np.int64)

    def box(self, b, levels):
        """Integer box in z-space containing every vertex of the arrangement
        alpha_j = c, c in levels[j], intersected with the fiber over b."""
        base = self.lift(b).astype(float)
        lo = np.full(self.d, np.inf)
        hi = np.full(self.d, -np.inf)
        for rows, inv in self.bases:
            grids = np.meshgrid(*[np.asarray(levels[j], dtype=float) - base[j] for j in rows],
                                indexing="ij")
            rhs = np.stack([g.ravel() for g in grids], axis=1)
            if rhs.size == 0:
                continue
            zs = rhs @ inv.T
            lo = np.minimum(lo, zs.min(axis=0))
            hi = np.maximum(hi, zs.max(axis=0))
        return np.floor(lo).astype(np.int64) - 1, np.ceil(hi).astype(np.int64) + 1

    def alphas(self, b, lo, hi):
        """All fine degrees lift(b) + R z with z in the box [lo, hi]."""
        axes = [np.arange(a, c + 1, dtype=np.int64) for a, c in zip(lo, hi)]
        grids = np.meshgrid(*axes, indexing="ij")
        zs = np.stack([g.ravel() for g in grids], axis=1)
        return self.lift(b)[None, :] + zs @ self.rays.T

    def nonnegative(self, b, lower=None):
        """Fine degrees alpha >= lower (default 0) over b, lex-sorted."""
        if lower is None:
            lower = np.zeros(self.n, dtype=np.int64)
        lower = np.asarray(lower, dtype=np.int64)
        lo, hi = self.box(b, [[int(x)] for x in lower])
        pts = self.alphas(b, lo, hi)
        pts = pts[(pts >= lower[None, :]).all(axis=1)]
        if len(pts) == 0:
            return pts
        order = np.lexsort(pts.T[::-1])
        return pts[order]
