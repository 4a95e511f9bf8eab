"""Rees rings of monomial ideals, their graded resolutions, and the
inner/outer bounds for the regularity of powers.

For I = <f_1..f_s> the Rees ring S[It] is presented as R/J with
R = S[T_1..T_s], deg T_i = (deg f_i, 1) in Pic x Z.  J is found by
eliminating t from <T_i - t f_i>.  Exponent vectors over R list the S
variables first, then T_1..T_s.
"""

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from . import groebner
from .errors import InputError
from .lattice import Window, add, combo, minimal_elements, sub
from .linalg import rank
from .regularity import _lambdas, common_bounds, reg_region
from .ring import MonomialModule, monomials_of_degree, reduce_gens


def minimal_in_order(gens):
    """Minimal generators, keeping the caller's order (it fixes T_1..T_s)."""
    keep = set(reduce_gens(gens))
    out = []
    for g in gens:
        g = tuple(int(x) for x in g)
        if g in keep and g not in out:
            out.append(g)
    return out


def _threads():
    try:
        return max(1, int(os.environ.get("TORREG_THREADS", "1")))
    except ValueError:
        return 1


# polynomials and the Rees ideal


def poly_str(poly, nx):
    names = ["x%d" % i for i in range(nx)]
    terms = []
    for exp in sorted(poly, reverse=True):
        c = poly[exp]
        mono = []
        for k, e in enumerate(exp):
            name = names[k] if k < nx else "T%d" % (k - nx + 1)
            if e == 1:
                mono.append(name)
            elif e:
                mono.append("%s^%d" % (name, e))
        body = "*".join(mono) or "1"
        if c == 1:
            terms.append("+ " + body)
        elif c == -1:
            terms.append("- " + body)
        else:
            terms.append("%s %s*%s" % ("+" if c > 0 else "-", abs(c), body))
    text = " ".join(terms) or "0"
    return text[2:] if text.startswith("+ ") else text


class ReesRing:
    """Grading data of R = S[T_1..T_s] for a monomial ideal."""

    def __init__(self, variety, gens):
        self.variety = variety
        self.gens = [tuple(g) for g in gens]
        self.nx = variety.nvars
        self.s = len(self.gens)
        self.P = [variety.degree(g) for g in self.gens]

    @property
    def nvars(self):
        return self.nx + self.s

    def degree(self, exp):
        """Pic x Z degree of an R-monomial."""
        X = self.variety
        b = X.degree(exp[:self.nx])
        v = exp[self.nx:]
        b = add(b, combo(v, self.P, X.picard_rank))
        return (b, sum(v))

    def monomials(self, b, k):
        """R-monomials of degree (b, k), sorted."""
        out = []
        for v in _lambdas(k, self.s):
            rest = sub(tuple(b), combo(v, self.P, self.variety.picard_rank))
            for u in monomials_of_degree(self.variety, rest):
                out.append(tuple(u) + tuple(v))
        return sorted(out)


def rees_ideal(variety, gens, budget=None):
    """Generators of the kernel of R -> S[It], x_i -> x_i, T_i -> f_i t."""
    gens = minimal_in_order(gens)
    if not gens:
        raise InputError("ideal has no generators")
    n, s = variety.nvars, len(gens)
    width = 1 + n + s  # t, x, T
    elims = []
    for i, g in enumerate(gens):
        e_T = [0] * width
        e_T[1 + n + i] = 1
        e_f = [1] + list(g) + [0] * s
        elims.append({(0, tuple(e_T)): Fraction(1), (0, tuple(e_f)): Fraction(-1)})
    key = groebner.top_key(groebner.elimination_key(1))
    G = groebner.buchberger(elims, key, budget)
    out = []
    for e in G:
        if all(exp[0] == 0 for _, exp in e):
            out.append({exp[1:]: c for (_, exp), c in e.items()})
    rkey = groebner.top_key(groebner.grevlex)
    lifted = [{(0, e): c for e, c in p.items()} for p in out]
    red = groebner.reduced_basis(lifted, rkey) if lifted else []
    return [{e: c for (_, e), c in p.items()} for p in red]


def is_homogeneous(ring, poly):
    return len({ring.degree(e) for e in poly}) <= 1


# graded resolutions


@dataclass
class GradedFreeComplex:
    """Free resolution over R with Pic x Z shifts.  ``diffs[j]`` lists the
    columns of d_j (j >= 1), each a dict row -> polynomial."""
    ring: object
    shifts: list
    diffs: list
    ranks: list = field(default_factory=list)

    @property
    def length(self):
        return len(self.shifts) - 1

    def compose_is_zero(self):
        cx = groebner.FreeComplex(self.ring.nvars, self.ranks, self.diffs)
        return cx.compose_is_zero()

    def is_homogeneous(self):
        R = self.ring
        for j in range(1, len(self.diffs)):
            for c, col in enumerate(self.diffs[j]):
                a, k = self.shifts[j][c]
                for row, poly in col.items():
                    a0, k0 = self.shifts[j - 1][row]
                    for exp in poly:
                        b, kk = R.degree(exp)
                        if (add(a0, b), k0 + kk) != (tuple(a), k):
                            return False
        return True

    def piece_matrix(self, j, degree):
        """Columns of d_j in one Pic x Z degree, as sparse vectors indexed
        by (row, monomial)."""
        R = self.ring
        b, k = degree
        src = []
        for c, (a, kc) in enumerate(self.shifts[j]):
            for m in R.monomials(sub(tuple(b), tuple(a)), k - kc) if k >= kc else []:
                src.append((c, m))
        vecs = []
        for c, m in src:
            vec = {}
            for row, poly in self.diffs[j][c].items():
                for exp, coeff in poly.items():
                    t = (row, add(m, exp))
                    v = vec.get(t, 0) + coeff
                    if v:
                        vec[t] = v
                    else:
                        vec.pop(t, None)
            vecs.append(vec)
        return vecs

    def piece_dim(self, j, degree):
        R = self.ring
        b, k = degree
        tot = 0
        for a, kc in self.shifts[j]:
            if k >= kc:
                tot += len(R.monomials(sub(tuple(b), tuple(a)), k - kc))
        return tot

    def homology(self, degree):
        """Dimensions of H_j of the complex in one Pic x Z degree."""
        ranks = [0] * (self.length + 2)
        for j in range(1, self.length + 1):
            ranks[j] = rank(self.piece_matrix(j, degree))
        return [self.piece_dim(j, degree) - ranks[j] - ranks[j + 1]
                for j in range(self.length + 1)]

    def to_json(self):
        return {"length": self.length,
                "shifts": [[[list(a), k] for a, k in lev] for lev in self.shifts]}


def schreyer_resolution(ring, J, budget=None, prune=True):
    """Free resolution of R/J with Pic x Z shifts."""
    gens = [{(0, e): Fraction(c) for e, c in p.items()} for p in J if p]
    for p in J:
        if p and not is_homogeneous(ring, p):
            raise InputError("ideal is not homogeneous")
    cx = groebner.schreyer_resolution(gens, ring.nvars, 1, budget=budget)
    zero = (tuple(0 for _ in range(ring.variety.picard_rank)), 0)
    shifts = [[zero]]
    for j in range(1, len(cx.ranks)):
        lev = []
        for col in cx.diffs[j]:
            row, poly = min(col.items())
            exp = next(iter(poly))
            a0, k0 = shifts[j - 1][row]
            b, k = ring.degree(exp)
            lev.append((add(a0, b), k0 + k))
        shifts.append(lev)
    if prune:
        groebner.prune(cx, shifts)
    return GradedFreeComplex(ring, shifts, cx.diffs, cx.ranks)


def rees_resolution(variety, gens, budget=None):
    ring = ReesRing(variety, minimal_in_order(gens))
    return schreyer_resolution(ring, rees_ideal(variety, gens, budget), budget)


def rees_slice_dim(cx, b, n):
    """dim (R/J)_{(b, n)}."""
    return cx.homology((tuple(b), n))[0]


# bounds


def shift_a(F, nef):
    pics = [tuple(a) for lev in F.shifts for a, _ in lev]
    return common_bounds(pics, nef, upper=True)[0]


def degree_bounds_q(P, nef):
    P = [tuple(p) for p in P]
    if not P:
        raise InputError("empty degree list")
    return common_bounds(P, nef, upper=True), common_bounds(P, nef, upper=False)


@dataclass
class Region:
    """A set of window points with a short description of its shape."""
    description: str
    points: frozenset
    window: Window

    def minima(self, nef):
        return minimal_elements(self.points, nef)

    def __contains__(self, p):
        return tuple(p) in self.points

    def to_json(self, nef):
        return {"description": self.description,
                "minima": [list(m) for m in self.minima(nef)]}


def _upset_points(window, bases, minima, nef):
    out = set()
    for p in window.points():
        for base in bases:
            q = sub(p, base)
            if any(nef.contains(sub(q, m)) for m in minima):
                out.add(p)
                break
    return out


def _vec(v):
    return "(%s)" % ",".join(str(x) for x in v)


def inner_bound(variety, n, q1, a, regS_minima, window):
    base = add(tuple(n * x for x in q1), tuple(a))
    pts = _upset_points(window, [base], regS_minima, variety.nef)
    return Region("%s + reg S" % _vec(base), frozenset(pts), window)


def sharp_inner_bound(variety, n, P, F, regS_minima, window):
    """Intersection over summands F_j(-a, -c) and |nu| = n - c of the unions
    over |lambda| = j of nu.P + a - lambda.C + reg S."""
    rho = variety.picard_rank
    C = variety.nef_gens
    pts = set(window.points())
    for j, lev in enumerate(F.shifts):
        lams = [combo(lam, C, rho) for lam in _lambdas(j, len(C))]
        for a, c in lev:
            if n - c < 0:
                continue
            for nu in _lambdas(n - c, len(P)):
                shift = add(combo(nu, P, rho), tuple(a))
                bases = [sub(shift, l) for l in lams]
                pts &= _upset_points(window, bases, regS_minima, variety.nef)
    return Region("sharp inner bound", frozenset(pts), window)


def outer_bound(variety, n, q2, window):
    base = tuple(n * x for x in q2)
    pts = [p for p in window.points() if variety.nef.contains(sub(p, base))]
    return Region("%s + Nef" % _vec(base), frozenset(pts), window)


def reg_s_minima(variety):
    """Minima of reg S, computed on a box that holds them."""
    S = MonomialModule.ring(variety)
    rho = variety.picard_rank
    m = len(variety.irrelevant_complements)
    tot = [sum(c[k] for c in variety.nef_gens) for k in range(rho)]
    hi = max(3, m * max(tot))
    W = Window(tuple(-1 for _ in range(rho)), tuple(hi for _ in range(rho)))
    return reg_region(S, W).minima


@dataclass
class BoundReport:
    n: int
    q1: list
    q2: list
    a: tuple
    reg_minima: list
    inner: Region
    sharp: Region
    outer: Region
    verdicts: dict
    witnesses: dict
    nef: object = None

    @property
    def ok(self):
        return all(self.verdicts.values())

    def to_json(self):
        return {"n": self.n,
                "q1": [list(q) for q in self.q1],
                "q2": [list(q) for q in self.q2],
                "a": list(self.a),
                "reg_minima": [list(m) for m in self.reg_minima],
                "inner": self.inner.to_json(self.nef),
                "sharp_inner": self.sharp.to_json(self.nef),
                "outer": self.outer.to_json(self.nef),
                "verdicts": {k: ("PASS" if v else "FAIL") for k, v in self.verdicts.items()},
                "witnesses": {k: list(v) for k, v in self.witnesses.items()}}


def _first_outside(inner, outer):
    for p in sorted(inner.points if isinstance(inner, Region) else inner):
        if p not in outer:
            return p
    return None


def verify_powers_theorem(variety, gens, n_max=4, window=None, budget=None):
    """Per n <= n_max, compute reg(I^n) and check inner, sharp inner and
    outer bounds against it inside the window."""
    gens = minimal_in_order(gens)
    if window is None:
        window = Window.square(-1, 11, variety.picard_rank)
    P = [variety.degree(g) for g in gens]
    q1s, q2s = degree_bounds_q(P, variety.nef)
    q1, q2 = q1s[0], q2s[0]
    F = rees_resolution(variety, gens, budget)
    a = shift_a(F, variety.nef)
    regS = reg_s_minima(variety)

    def one(n):
        M = MonomialModule.from_ideal(variety, gens).power(n)
        R = reg_region(M, window)
        reg = set(R.points)
        inner = inner_bound(variety, n, q1, a, regS, window)
        sharp = sharp_inner_bound(variety, n, P, F, regS, window)
        outer = outer_bound(variety, n, q2, window)
        checks = {"inner_in_reg": (inner, reg), "sharp_in_reg": (sharp, reg),
                  "reg_in_outer": (reg, outer), "inner_in_sharp": (inner, sharp.points)}
        verdicts, wits = {}, {}
        for name, (small, big) in checks.items():
            p = _first_outside(small, big)
            verdicts[name] = p is None
            if p is not None:
                wits[name] = p
        return BoundReport(n, q1s, q2s, a, R.minima, inner, sharp, outer, verdicts,
                           wits, variety.nef)

    with ThreadPoolExecutor(max_workers=_threads()) as pool:
        return list(pool.map(one, range(1, n_max + 1)))


def bounds_only(variety, degrees, n, a=None):
    """Inner/outer bound descriptors from generator degrees alone.  Without
    ``a`` (an upper bound of the Rees resolution shifts) the inner translate
    is left symbolic."""
    q1s, q2s = degree_bounds_q(degrees, variety.nef)
    nq1 = tuple(n * x for x in q1s[0])
    if a is None:
        inner = "%s + a + reg S" % _vec(nq1)
    else:
        inner = "%s + reg S" % _vec(add(nq1, tuple(a)))
    return {"n": n,
            "q1": [list(q) for q in q1s], "q2": [list(q) for q in q2s],
            "a": list(a) if a is not None else None,
            "inner": inner,
            "outer": "%s + Nef" % _vec(tuple(n * x for x in q2s[0]))}
