"""Local cohomology H^i_B(M) of fine-graded monomial modules.

Two independent routes are provided.

Pattern route (:class:`CohomologyEngine`).  At a fine degree alpha the Cech
complex on the generators x^{sigma hat} has one term M_{x^T} per set T of
maximal cones.  Which localized pieces are nonzero, and the relation space
inside them, is decided by comparing each alpha_j with a finite list of
thresholds (fine shifts, relation degrees, ideal exponents).  So the fine
cohomology only depends on the vector of threshold intervals ("type") of
alpha.  Summing over the lattice points of the degree fiber gives the
Pic-graded piece.  A type with nonzero cohomology whose cell is unbounded in
the fiber would give an infinite-dimensional piece; this is checked once per
module and raised as an error.  Every bounded cell has its vertices on the
arrangement alpha_j in {t, t - 1}, so the bounding box of the arrangement
vertices holds every contributing fiber point.

Resolution route (:func:`taylor_hypercohomology`).  Take a finite free
resolution F_. of M (Taylor complex for ideals and quotients, Schreyer
syzygies for presented modules), form the double complex of Cech complexes of
the F_j at alpha and take cohomology of its total complex.  It shares no code
with the pattern route beyond the fiber enumeration.
"""

import weakref
from bisect import bisect_right
from dataclasses import dataclass, field
from itertools import combinations, product

import numpy as np

from .errors import UnsupportedError, InputError
from .lattice import Window, add, sub
from .linalg import kernel_vector, dense_rank, rank


def _popcount(x):
    return bin(x).count("1")


class CechShape:
    """Subsets T of maximal cones, their variable unions U_T, and signs."""

    def __init__(self, variety):
        self.m = len(variety.irrelevant_complements)
        comp = [sum(1 << i for i in c) for c in variety.irrelevant_complements]
        self.union = [0] * (1 << self.m)
        for T in range(1, 1 << self.m):
            low = T & -T
            k = low.bit_length() - 1
            self.union[T] = self.union[T ^ low] | comp[k]
        self.by_size = [[] for _ in range(self.m + 1)]
        for T in range(1 << self.m):
            self.by_size[_popcount(T)].append(T)
        # coboundary pieces: (T, T | bit, sign)
        self.cofaces = {}
        for T in range(1 << self.m):
            out = []
            for k in range(self.m):
                if not T >> k & 1:
                    sign = -1 if _popcount(T & ((1 << k) - 1)) % 2 else 1
                    out.append((T | 1 << k, sign))
            self.cofaces[T] = out


def indicator_cech_dims(shape, admitted, p=None):
    """Cohomology of the Cech complex with a one-dimensional term at every
    admitted T (and zero elsewhere); maps are the signed identities."""
    m = shape.m
    index = [{T: k for k, T in enumerate(t for t in shape.by_size[q] if admitted(t))}
             for q in range(m + 1)]
    ranks = []
    for q in range(m):
        vecs = []
        tgt = index[q + 1]
        for T in index[q]:
            v = {tgt[T2]: s for T2, s in shape.cofaces[T] if T2 in tgt}
            if v:
                vecs.append(v)
        ranks.append(rank(vecs, p))
    ranks.append(0)
    return tuple(len(index[q]) - ranks[q] - (ranks[q - 1] if q else 0) for q in range(m + 1))


def pattern_cohomology(variety, negatives, p=None):
    """dim H^i_B(S)_alpha for any alpha with neg(alpha) = ``negatives``.

    Returns a dict i -> dimension (nonzero entries only).
    """
    shape = _shape(variety)
    N = sum(1 << j for j in negatives)
    dims = indicator_cech_dims(shape, lambda T: N & ~shape.union[T] == 0, p)
    return {i: d for i, d in enumerate(dims) if d}


_SHAPES = weakref.WeakKeyDictionary()


def _shape(variety):
    s = _SHAPES.get(variety)
    if s is None:
        s = _SHAPES[variety] = CechShape(variety)
    return s


def _mask(cond):
    out = 0
    for j, c in enumerate(cond):
        if c:
            out |= 1 << j
    return out


def _minimal_masks(masks):
    masks = sorted(set(masks), key=lambda x: (_popcount(x), x))
    out = []
    for a in masks:
        if not any(b & ~a == 0 for b in out):
            out.append(a)
    return tuple(sorted(out))


class CohomologyEngine:
    """Pattern-route local cohomology for one module over one field."""

    def __init__(self, module, field=None, check_unbounded=True):
        self.module = module
        self.variety = X = module.variety
        self.field = field
        self.shape = _shape(X)
        self.m = self.shape.m
        self.thr = [np.array(t, dtype=np.int64) for t in module.thresholds]
        self.radix = [len(t) + 1 for t in module.thresholds]
        self.strides = []
        s = 1
        for r in self.radix:
            self.strides.append(s)
            s *= r
        self.ntypes = s
        self._sig_dims = {}
        self._type_dims = {}
        self._pic = {}
        self._levels = [sorted(set(t) | {x - 1 for x in t}) for t in module.thresholds]
        if check_unbounded:
            self._check_unbounded()

    # fine degrees

    def type_of(self, alpha):
        return tuple(bisect_right(t, a) for t, a in zip(self.module.thresholds, alpha))

    def representative(self, typ):
        out = []
        for t, k in zip(self.module.thresholds, typ):
            out.append(t[0] - 1 if k == 0 else t[k - 1])
        return tuple(out)

    def _signature(self, alpha):
        M = self.module
        n = len(alpha)
        if M.kind == "ideal":
            return ("ideal", _minimal_masks(_mask(alpha[j] < g[j] for j in range(n))
                                            for g in M.gens))
        if M.kind == "quotient":
            neg = _mask(a < 0 for a in alpha)
            return ("quotient", neg, _minimal_masks(_mask(alpha[j] < g[j] for j in range(n))
                                                    for g in M.gens))
        if M.kind == "free":
            return ("free", tuple(sorted(_mask(alpha[j] < b[j] for j in range(n))
                                         for b in M.fine_shifts)))
        rows = tuple(_mask(alpha[j] < b[j] for j in range(n)) for b in M.fine_shifts)
        cols = tuple(_mask(alpha[j] < g[j] for j in range(n)) for g, _ in M.fine_columns)
        return ("presented", rows, cols)

    def _dims_of_signature(self, sig):
        got = self._sig_dims.get(sig)
        if got is not None:
            return got
        shape, p = self.shape, self.field
        U = shape.union
        kind = sig[0]
        if kind == "ideal":
            masks = sig[1]
            dims = indicator_cech_dims(shape, lambda T: any(f & ~U[T] == 0 for f in masks), p)
        elif kind == "quotient":
            neg, masks = sig[1], sig[2]
            dims = indicator_cech_dims(
                shape, lambda T: neg & ~U[T] == 0 and not any(f & ~U[T] == 0 for f in masks), p)
        elif kind == "free":
            total = [0] * (self.m + 1)
            for neg in sig[1]:
                d = self._dims_of_signature(("free1", neg))
                total = [a + b for a, b in zip(total, d)]
            dims = tuple(total)
        elif kind == "free1":
            neg = sig[1]
            dims = indicator_cech_dims(shape, lambda T: neg & ~U[T] == 0, p)
        else:
            dims = self._presented_dims(sig[1], sig[2])
        self._sig_dims[sig] = dims
        return dims

    def _presented_dims(self, rows, cols):
        shape, p, m = self.shape, self.field, self.m
        U = shape.union
        entries = [e for _, e in self.module.fine_columns]
        A, W = [], []
        for q in range(m + 1):
            idx = {}
            wvecs = []
            for T in shape.by_size[q]:
                for k, nk in enumerate(rows):
                    if nk & ~U[T] == 0:
                        idx[(T, k)] = len(idx)
                for c, nc in enumerate(cols):
                    if nc & ~U[T] == 0:
                        wvecs.append({idx[(T, r)]: coeff for r, coeff in entries[c]})
            A.append(idx)
            W.append(wvecs)
        rkW = [rank(w, p) for w in W]
        D = []
        for q in range(m):
            tgt = A[q + 1]
            vecs = []
            for (T, k) in A[q]:
                v = {tgt[(T2, k)]: s for T2, s in shape.cofaces[T]}
                vecs.append(v)
            D.append(vecs)
        rkDW = [rank(D[q] + W[q + 1], p) for q in range(m)]
        out = []
        for q in range(m + 1):
            h = len(A[q])
            if q < m:
                h -= rkDW[q] - rkW[q + 1]
            h -= rkDW[q - 1] if q else rkW[0]
            out.append(h)
        return tuple(out)

    def fine_dims(self, alpha):
        """dim H^i_B(M)_alpha for i = 0..m."""
        return self._dims_of_signature(self._signature(tuple(alpha)))

    def type_dims(self, typ):
        got = self._type_dims.get(typ)
        if got is None:
            got = self._type_dims[typ] = self.fine_dims(self.representative(typ))
        return got

    # unboundedness guard

    def _check_unbounded(self):
        X = self.variety
        R = X.ray_matrix
        n, d = len(R), len(R[0])
        dirs = []
        for rows in combinations(range(n), d - 1):
            sub_ = [R[j] for j in rows]
            if dense_rank(sub_) == d - 1 if sub_ else True:
                v = kernel_vector(sub_, d)
                if any(v):
                    dirs += [v, tuple(-x for x in v)]
        dirs = sorted(set(dirs))

        def recedes(cls):
            # cls[j]: 0 -> <v_j, z> <= 0, 1 -> = 0, 2 -> >= 0
            for z in dirs:
                ok = True
                for j in range(n):
                    val = sum(a * b for a, b in zip(R[j], z))
                    if (cls[j] == 0 and val > 0) or (cls[j] == 1 and val != 0) or \
                            (cls[j] == 2 and val < 0):
                        ok = False
                        break
                if ok:
                    return True
            return False

        unbounded = {}
        for typ in product(*(range(r) for r in self.radix)):
            cls = tuple(0 if k == 0 else (2 if k == r - 1 else 1)
                        for k, r in zip(typ, self.radix))
            if cls not in unbounded:
                unbounded[cls] = recedes(cls)
            if unbounded[cls] and any(self.type_dims(typ)):
                raise UnsupportedError(
                    "unbounded active slice at fine degree %s" % (self.representative(typ),))

    # Pic degrees

    def pic_dims(self, b):
        """dim H^i_B(M)_b for i = 0..m, exact."""
        b = tuple(int(x) for x in b)
        got = self._pic.get(b)
        if got is not None:
            return got
        fib = self.variety.fibers
        lo, hi = fib.box(b, self._levels)
        alphas = fib.alphas(b, lo, hi)
        total = np.zeros(self.m + 1, dtype=np.int64)
        if len(alphas):
            ids = np.zeros(len(alphas), dtype=np.int64)
            for j, t in enumerate(self.thr):
                ids += np.searchsorted(t, alphas[:, j], side="right") * self.strides[j]
            uniq, counts = np.unique(ids, return_counts=True)
            for tid, cnt in zip(uniq.tolist(), counts.tolist()):
                typ = tuple((tid // s) % r for s, r in zip(self.strides, self.radix))
                dims = self.type_dims(typ)
                if any(dims):
                    total += cnt * np.array(dims, dtype=np.int64)
        got = self._pic[b] = tuple(int(x) for x in total)
        return got

    def pic(self, b, i):
        if i < 0:
            return 0
        dims = self.pic_dims(b)
        return dims[i] if i < len(dims) else 0

    def window_dims(self, b, cap):
        """Brute-force fiber sum over |alpha_j| <= cap (window mode)."""
        fib = self.variety.fibers
        levels = [[-cap, cap]] * self.variety.nvars
        lo, hi = fib.box(tuple(b), levels)
        alphas = fib.alphas(tuple(b), lo, hi)
        alphas = alphas[(np.abs(alphas) <= cap).all(axis=1)]
        total = [0] * (self.m + 1)
        for a in alphas.tolist():
            dims = self.type_dims(self.type_of(a))
            total = [x + y for x, y in zip(total, dims)]
        return tuple(total)


_ENGINES = weakref.WeakKeyDictionary()


def engine_for(module, field=None):
    per = _ENGINES.get(module)
    if per is None:
        per = _ENGINES[module] = {}
    eng = per.get(field)
    if eng is None:
        eng = per[field] = CohomologyEngine(module, field)
    return eng


def fine_cech_dims(module, alpha, field=None):
    """dict i -> dim H^i_B(M)_alpha (nonzero entries)."""
    dims = engine_for(module, field).fine_dims(tuple(alpha))
    return {i: d for i, d in enumerate(dims) if d}


def default_cap(module, window):
    """Coordinate cap for window-mode fiber boxes.

    Every contributing fine degree lies in a bounded threshold cell, whose
    coordinates are within the threshold range shifted by the fiber offset;
    we take the largest threshold magnitude plus the largest lift coordinate
    of a window corner, times the number of variables, plus slack.
    """
    X = module.variety
    thr = max((abs(x) for t in module.thresholds for x in t), default=0)
    corners = [X.lift(c) for c in product(*zip(window.lower, window.upper))]
    lift = max(abs(x) for c in corners for x in c)
    return X.nvars * (thr + lift) + 2


@dataclass
class LocalCohomologyTable:
    entries: dict = field(default_factory=dict)        # (i, b) -> dim
    certification: dict = field(default_factory=dict)  # (i, b) -> "exact" | "window"

    def set(self, i, b, dim, cert):
        self.entries[(i, tuple(b))] = dim
        self.certification[(i, tuple(b))] = cert

    def nonzero(self):
        return {k: v for k, v in sorted(self.entries.items()) if v}


def pic_local_cohomology(module, b, i, mode="exact", field=None):
    """dim H^i_B(M)_b with its certification tag.

    ``mode`` is "exact" or a :class:`Window`, in which case fiber points are
    enumerated inside the box derived from the window (see default_cap).
    """
    eng = engine_for(module, field)
    if mode == "exact":
        return eng.pic(b, i), "exact"
    if isinstance(mode, Window):
        dims = eng.window_dims(b, default_cap(module, mode))
        return (dims[i] if 0 <= i < len(dims) else 0), "window"
    raise InputError("mode must be 'exact' or a Window")


def local_cohomology_table(module, window, mode="exact", field=None):
    eng = engine_for(module, field)
    table = LocalCohomologyTable()
    cap = default_cap(module, window) if mode != "exact" else None
    for b in window.points():
        dims = eng.pic_dims(b) if cap is None else eng.window_dims(b, cap)
        for i, d in enumerate(dims):
            table.set(i, b, d, "exact" if cap is None else "window")
    return table


# ---------------------------------------------------------------------------
# Resolution route


@dataclass
class FineResolution:
    """Free resolution with fine shifts.

    ``shifts[j]`` lists the fine degrees of the basis of F_j and
    ``maps[j]`` (for j >= 1) lists, per basis element of F_j, its image in
    F_{j-1} as pairs (target index, coefficient); the monomial factor is
    shifts[j][s] - shifts[j-1][t].
    """
    shifts: list
    maps: list


def taylor_resolution(module):
    """Taylor-type resolution of an ideal, a quotient or a free module."""
    n = module.variety.nvars
    if module.kind == "free":
        return FineResolution([list(module.fine_shifts)], [None])
    if module.kind not in ("ideal", "quotient"):
        raise UnsupportedError("taylor resolution needs an ideal, quotient or free module")
    gens = list(module.gens)
    s = len(gens)
    # subsets of generators indexed by size
    levels = [[()]] if module.kind == "quotient" else []
    start = 1
    for size in range(start, s + 1):
        levels.append(list(combinations(range(s), size)))

    def lcm(A):
        if not A:
            return (0,) * n
        return tuple(max(gens[a][j] for a in A) for j in range(n))

    shifts = [[lcm(A) for A in lev] for lev in levels]
    maps = [None]
    for j in range(1, len(levels)):
        pos = {A: k for k, A in enumerate(levels[j - 1])}
        rows = []
        for A in levels[j]:
            img = []
            for k in range(len(A)):
                face = A[:k] + A[k + 1:]
                img.append((pos[face], (-1) ** k))
            rows.append(img)
        maps.append(rows)
    return FineResolution(shifts, maps)


def resolution_for(module, budget=None):
    if module.kind in ("ideal", "quotient", "free"):
        return taylor_resolution(module)
    from .groebner import module_resolution
    return module_resolution(module, budget=budget)


class TotalComplexOracle:
    """Cohomology of Tot(Cech(F_.)) at fine degrees, cached per clipped alpha."""

    def __init__(self, module, resolution=None, field=None):
        self.module = module
        X = module.variety
        self.res = resolution or resolution_for(module)
        self.field = field
        self.m = len(X.irrelevant_complements)
        self.comp = [sum(1 << i for i in c) for c in X.irrelevant_complements]
        allpts = [s for lev in self.res.shifts for s in lev]
        n = X.nvars
        if allpts:
            self.lo = np.array([min(p[j] for p in allpts) - 1 for j in range(n)])
            self.hi = np.array([max(p[j] for p in allpts) for j in range(n)])
        else:
            self.lo = self.hi = np.zeros(n, dtype=np.int64)
        self.cache = {}
        self.subsets = [[T for T in combinations(range(self.m), q)] for q in range(self.m + 1)]

    def _union(self, T):
        u = 0
        for k in T:
            u |= self.comp[k]
        return u

    def dims(self, alpha):
        key = tuple(int(x) for x in np.clip(np.asarray(alpha), self.lo, self.hi))
        got = self.cache.get(key)
        if got is None:
            got = self.cache[key] = self._compute(key)
        return got

    def _compute(self, alpha):
        res, m, p = self.res, self.m, self.field
        n = len(alpha)
        L = len(res.shifts) - 1
        # basis of Tot^k: (q, j, s, T) with q - j = k
        basis = {}
        for j in range(L + 1):
            for s, beta in enumerate(res.shifts[j]):
                neg = 0
                for t in range(n):
                    if alpha[t] < beta[t]:
                        neg |= 1 << t
                for q in range(m + 1):
                    for T in self.subsets[q]:
                        if neg & ~self._union(T) == 0:
                            basis.setdefault(q - j, {})[(q, j, s, T)] = None
        index = {k: {e: i for i, e in enumerate(v)} for k, v in basis.items()}
        ranks = {}
        for k, elems in index.items():
            tgt = index.get(k + 1, {})
            vecs = []
            for (q, j, s, T) in elems:
                v = {}
                # Cech part
                for c in range(m):
                    if c in T:
                        continue
                    T2 = tuple(sorted(T + (c,)))
                    e = (q + 1, j, s, T2)
                    if e in tgt:
                        sign = (-1) ** sum(1 for x in T if x < c)
                        v[tgt[e]] = v.get(tgt[e], 0) + sign
                # resolution part
                if j >= 1:
                    sgn = -1 if q % 2 else 1
                    for t_idx, coeff in res.maps[j][s]:
                        e = (q, j - 1, t_idx, T)
                        if e in tgt:
                            v[tgt[e]] = v.get(tgt[e], 0) + sgn * coeff
                v = {a: c for a, c in v.items() if c}
                if v:
                    vecs.append(v)
            ranks[k] = rank(vecs, p)
        out = []
        for i in range(m + 1):
            dim = len(index.get(i, {}))
            out.append(dim - ranks.get(i, 0) - ranks.get(i - 1, 0))
        return tuple(out)

    def pic_dims(self, b, cap):
        X = self.module.variety
        fib = X.fibers
        lo, hi = fib.box(tuple(b), [[-cap, cap]] * X.nvars)
        alphas = fib.alphas(tuple(b), lo, hi)
        alphas = alphas[(np.abs(alphas) <= cap).all(axis=1)]
        if len(alphas) == 0:
            return (0,) * (self.m + 1)
        clipped = np.clip(alphas, self.lo[None, :], self.hi[None, :])
        uniq, counts = np.unique(clipped, axis=0, return_counts=True)
        total = [0] * (self.m + 1)
        for a, c in zip(uniq.tolist(), counts.tolist()):
            dims = self.dims(a)
            total = [x + c * y for x, y in zip(total, dims)]
        return tuple(total)


_ORACLES = weakref.WeakKeyDictionary()


def oracle_for(module, field=None):
    per = _ORACLES.get(module)
    if per is None:
        per = _ORACLES[module] = {}
    o = per.get(field)
    if o is None:
        o = per[field] = TotalComplexOracle(module, field=field)
    return o


def taylor_hypercohomology(module, b, i, window, field=None, cap=None):
    """dim H^i_B(M)_b from the total complex of Cech(F_.), window-bounded."""
    oracle = oracle_for(module, field)
    if cap is None:
        cap = default_cap(module, window)
    dims = oracle.pic_dims(tuple(b), cap)
    return dims[i] if 0 <= i < len(dims) else 0
