"""d-regularity, regularity regions, and non-regularity certificates.

M is d-regular when H^i_B(M) vanishes on d - lambda.C + Nef for every i > 0
and |lambda| = i - 1, and H^0_B(M) vanishes on d + c_j + Nef for every nef
generator c_j.  These conditions quantify over unbounded sets, so all
verdicts are taken over a finite check window: the requested window grown
downward far enough to hold every d - lambda.C, and upward by a pad.
NotRegular verdicts carry a replayable witness and are definitive.
"""

from dataclasses import dataclass, field

import numpy as np

from .cohomology import default_cap, engine_for, oracle_for
from .errors import InputError, VerificationFailure
from .lattice import Window, add, combo, minimal_elements, sub
from .ring import (MonomialModule, extra_monomials_witness, reduce_gens,
                   divides)


@dataclass(frozen=True)
class RegularityConfig:
    pad: object = None        # upward pad of the check window (Pic vector); None = 2 * sum(C)
    field: object = None      # None for Q, else a prime
    exact_h0: bool = True     # use saturation to decide H^0 = 0 exactly when possible
    oracle: str = "pattern"   # pattern | taylor | both
    taylor_cap: object = None # fiber-box cap for the Taylor route; None = default_cap


@dataclass(frozen=True)
class RegularityVerdict:
    regular: bool
    witness: object = None    # (i, b, dim) for NotRegular
    window: object = None     # check window used

    @property
    def status(self):
        return "Regular" if self.regular else "NotRegular"


@dataclass
class RegularityRegion:
    points: list
    minima: list
    window: Window
    certified: str = "window"
    check_window: object = None
    witnesses: dict = field(default_factory=dict, repr=False)

    def __contains__(self, p):
        return tuple(p) in self._set

    @property
    def _set(self):
        s = getattr(self, "_cache", None)
        if s is None:
            s = self._cache = frozenset(self.points)
        return s

    def to_json(self):
        return {"window": [list(self.window.lower), list(self.window.upper)],
                "points": [list(p) for p in sorted(self.points)],
                "minima": [list(p) for p in self.minima],
                "certified": self.certified}


def _lambdas(total, r):
    if r == 0:
        if total == 0:
            yield ()
        return
    if r == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _lambdas(total - first, r - 1):
            yield (first,) + rest


def saturation(variety, gens):
    """Generators of I : B^infinity for a monomial ideal I."""
    parts = []
    for comp in variety.irrelevant_complements:
        cs = set(comp)
        parts.append(reduce_gens(tuple(0 if j in cs else g[j] for j in range(len(g)))
                                 for g in gens))
    out = parts[0]
    for p in parts[1:]:
        out = reduce_gens(tuple(max(a, b) for a, b in zip(g, h)) for g in out for h in p)
    return out


def h0_vanishes(module):
    """True when H^0_B(M) = 0 is known exactly (ideals, free modules,
    quotients by B-saturated ideals); None when undecided."""
    if module.kind in ("ideal", "free"):
        return True
    if module.kind == "quotient":
        if not module.gens:
            return True
        sat = saturation(module.variety, module.gens)
        return all(any(divides(g, s) for g in module.gens) for s in sat)
    return None


def check_window(module, window, config=RegularityConfig()):
    X = module.variety
    C = X.nef_gens
    m = len(X.irrelevant_complements)
    rho = X.picard_rank
    cmax = tuple(max(c[k] for c in C) for k in range(rho))
    below = tuple(max(m - 1, 0) * x for x in cmax)
    pad = config.pad
    if pad is None:
        pad = tuple(2 * sum(c[k] for c in C) for k in range(rho))
    return window.grow(below, tuple(pad))


def _dims_function(module, cw, config):
    if config.oracle not in ("pattern", "taylor", "both"):
        raise InputError("oracle must be pattern, taylor or both")
    eng = engine_for(module, config.field) if config.oracle != "taylor" else None
    if config.oracle == "pattern":
        return eng.pic_dims
    orc = oracle_for(module, config.field)
    cap = config.taylor_cap or default_cap(module, cw)
    if config.oracle == "taylor":
        return lambda b: orc.pic_dims(b, cap)

    def both(b):
        d1, d2 = tuple(eng.pic_dims(b)), tuple(orc.pic_dims(b, cap))
        if d1 != d2:
            raise VerificationFailure("pattern and Taylor routes disagree at %s" % (b,),
                                      {"degree": list(b), "pattern": list(d1),
                                       "taylor": list(d2)})
        return d1
    return both


class _Obstructions:
    """Points p such that every d <= p (nef order) fails regularity."""

    def __init__(self, module, cw, config):
        X = module.variety
        self.module = module
        self.cw = cw
        dims_of = _dims_function(module, cw, config)
        C = X.nef_gens
        rho = X.picard_rank
        self.items = []  # (p, witness)
        skip_h0 = config.exact_h0 and h0_vanishes(module)
        for b in cw.points():
            dims = dims_of(b)
            if dims[0] and not skip_h0:
                for c in C:
                    self.items.append((sub(b, c), (0, b, dims[0])))
            for i in range(1, len(dims)):
                if not dims[i]:
                    continue
                for lam in _lambdas(i - 1, len(C)):
                    p = add(b, combo(lam, C, rho))
                    self.items.append((p, (i, b, dims[i])))
        self.items.sort()
        self.pts = np.array([p for p, _ in self.items], dtype=np.int64).reshape(-1, rho)
        self.facets = np.array(X.nef.facets, dtype=np.int64)

    def witness(self, d):
        if not len(self.pts):
            return None
        diff = self.pts - np.array(d)[None, :]
        ok = ((diff @ self.facets.T) >= 0).all(axis=1)
        hits = np.nonzero(ok)[0]
        if len(hits) == 0:
            return None
        return self.items[int(hits[0])][1]


def is_d_regular(module, d, window, config=RegularityConfig()):
    d = tuple(d)
    if d not in window:
        raise InputError("window must contain d")
    cw = check_window(module, window, config)
    obs = _Obstructions(module, cw, config)
    wit = obs.witness(d)
    return RegularityVerdict(wit is None, wit, cw)


def reg_region(module, window, config=RegularityConfig()):
    if module.is_zero_sheaf():
        raise InputError("sheaf is zero: regularity region is undefined")
    cw = check_window(module, window, config)
    obs = _Obstructions(module, cw, config)
    pts, wits = [], {}
    for d in window.points():
        w = obs.witness(d)
        if w is None:
            pts.append(d)
        else:
            wits[d] = w
    X = module.variety
    return RegularityRegion(sorted(pts), minimal_elements(pts, X.nef), window, "window", cw, wits)


def region_minima(region, nef):
    return minimal_elements(region.points, nef)


def in_upset(p, minima, nef):
    return any(nef.contains(sub(tuple(p), m)) for m in minima)


# certificates


@dataclass(frozen=True)
class Certificate:
    degree: tuple
    chamber: object
    walls: tuple
    differences: tuple
    monomials: tuple

    def to_json(self):
        return {"degree": list(self.degree),
                "chamber_rays": [list(r) for r in self.chamber.rays],
                "walls": [[list(r) for r in w.rays] for w in self.walls],
                "differences": [list(a) for a in self.differences],
                "monomials": [list(m) for m in self.monomials]}


def nonregularity_certificate(module, d, complex_=None, cap=16):
    """Certificate that M is not d-regular when every d - deg f_i lies in a
    single chamber other than Nef and outside Nef."""
    if not module.torsion_free:
        raise InputError("not torsion-free: the certificate needs a torsion-free module")
    if module.is_zero_sheaf():
        raise InputError("sheaf is zero")
    X = module.variety
    cx = complex_ if complex_ is not None else X.chambers
    d = tuple(d)
    diffs = tuple(sub(d, tuple(g)) for g in module.generator_degrees)
    if any(X.nef.contains(a) for a in diffs):
        raise InputError("inapplicable: some d - deg f_i is nef")
    for k, gamma in enumerate(cx.chambers):
        if k == cx.nef_index or gamma.same_as(X.nef):
            continue
        if all(gamma.contains(a) for a in diffs):
            mons = extra_monomials_witness(X, gamma, diffs, cap)
            walls = tuple(w for w, ij in cx.walls if k in ij)
            return Certificate(d, gamma, walls, diffs, tuple(mons))
    raise InputError("inapplicable: no single chamber holds every d - deg f_i")


def try_certificate(module, d, complex_=None, cap=16):
    try:
        return nonregularity_certificate(module, d, complex_, cap)
    except InputError:
        return None


# containment reports


def common_bounds(points, cone, upper=True, start_cap=4, max_cap=64):
    """Minimal common upper bounds (or maximal common lower bounds) of
    ``points`` in the order of ``cone``, found among p_0 +- lambda.H with H
    the Hilbert basis and |lambda| bounded (widened until nonempty)."""
    from .lattice import hilbert_basis
    pts = [tuple(p) for p in points]
    if not pts:
        raise InputError("empty point list")
    H = hilbert_basis(cone)
    rho = len(pts[0])
    sign = 1 if upper else -1
    cap = start_cap
    while cap <= max_cap:
        found = set()
        for total in range(cap + 1):
            for lam in _lambdas(total, len(H)):
                q = add(pts[0], tuple(sign * x for x in combo(lam, H, rho)))
                if all(cone.contains(sub(q, p) if upper else sub(p, q)) for p in pts):
                    found.add(q)
        if found:
            if upper:
                return minimal_elements(found, cone)
            neg = minimal_elements([tuple(-x for x in q) for q in found], cone)
            return sorted(tuple(-x for x in q) for q in neg)
        cap *= 2
    raise InputError("no common bound found within the search cap")


@dataclass
class ContainmentReport:
    eff_translates: list
    eff_holds: bool
    nef_translates: list
    nef_holds: bool
    nef_applicable: bool
    violations: list

    def to_json(self):
        return {"eff_translates": [list(b) for b in self.eff_translates],
                "eff_holds": self.eff_holds,
                "nef_translates": [list(b) for b in self.nef_translates],
                "nef_holds": self.nef_holds,
                "nef_bound_applicable": self.nef_applicable,
                "violations": [[list(p), list(b), kind] for p, b, kind in self.violations]}


def check_containment_bounds(module, region):
    """Compare a computed region with the Eff- and Nef-translate bounds.

    The Eff translate always applies (M with nonzero sheaf); the Nef
    translate applies when M is torsion-free.  ``nef_holds`` records whether
    the region actually lies in the best Nef translate, which for torsion
    modules is expected to fail.
    """
    X = module.variety
    degs = module.generator_degrees
    eff_b = common_bounds(degs, X.eff, upper=False)
    nef_b = common_bounds(degs, X.nef, upper=False)
    violations = []
    b = eff_b[0]
    eff_ok = True
    for p in region.points:
        if not X.eff.contains(sub(p, b)):
            eff_ok = False
            violations.append((p, b, "eff"))
    nb = nef_b[0]
    nef_ok = all(X.nef.contains(sub(p, nb)) for p in region.points)
    if module.torsion_free and not nef_ok:
        for p in region.points:
            if not X.nef.contains(sub(p, nb)):
                violations.append((p, nb, "nef"))
    return ContainmentReport(eff_b, eff_ok, nef_b, nef_ok, module.torsion_free, violations)
