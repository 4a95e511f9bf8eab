"""Monomial algebra over the Cox ring: graded pieces, powers, truncations.

Monomials are exponent tuples.  A :class:`MonomialModule` is one of

* ``free``:       a direct sum of shifted copies of S,
* ``ideal``:      a monomial ideal I (as a submodule of S),
* ``quotient``:   S/I for a monomial ideal I,
* ``presented``:  coker(F1 -> F0) where every matrix entry is a rational
                  multiple of a monomial.

All of them are graded by the fine lattice Z^n: each free generator gets a
fine shift beta_k (a lift of its Pic degree), and each relation column a fine
degree gamma_c = beta_row + exponent, the same for every entry of the column.
"""

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import product

import numpy as np

from .errors import InputError, SearchExhausted, UnsupportedError
from .lattice import add, combo, sub
from .linalg import rank


def divides(g, m):
    return all(a <= b for a, b in zip(g, m))


def reduce_gens(gens):
    """Minimal monomial generators, lex-sorted."""
    gens = sorted(set(tuple(int(x) for x in g) for g in gens))
    return [g for g in gens if not any(h != g and divides(h, g) for h in gens)]


def monomial_str(exp, names=None):
    names = names or ["x%d" % i for i in range(len(exp))]
    parts = []
    for name, e in zip(names, exp):
        if e == 1:
            parts.append(name)
        elif e:
            parts.append("%s^%d" % (name, e))
    return "*".join(parts) or "1"


def monomials_of_degree(variety, b):
    """Exponent vectors of the monomials of S_b, lex-sorted."""
    pts = variety.fibers.nonnegative(tuple(b))
    return [tuple(int(x) for x in p) for p in pts]


def ideal_power(gens, n):
    if n < 1:
        raise InputError("power must be positive")
    out = reduce_gens(gens)
    base = list(out)
    for _ in range(n - 1):
        out = reduce_gens(add(a, b) for a in out for b in base)
    return out


def ideal_product(g1, g2):
    return reduce_gens(add(a, b) for a in g1 for b in g2)


@dataclass(frozen=True, eq=False)
class MonomialModule:
    variety: object
    kind: str
    shifts: tuple          # Pic degrees of the free generators
    relations: tuple = ()  # columns: tuples of (row, Fraction coeff, exponent)
    gens: tuple = ()       # ideal generators for kind ideal/quotient
    torsion_free: bool = False
    label: str = field(default="", compare=False)

    # constructors

    @classmethod
    def free(cls, variety, shifts, label=""):
        shifts = tuple(tuple(int(x) for x in s) for s in shifts)
        return cls(variety, "free", shifts, (), (), True, label or "free")

    @classmethod
    def ring(cls, variety):
        return cls.free(variety, [(0,) * variety.picard_rank], "S")

    @classmethod
    def from_ideal(cls, variety, gens, label=""):
        gens = tuple(reduce_gens(gens))
        _check_exps(variety, gens)
        if not gens:
            raise InputError("ideal has no generators")
        return cls(variety, "ideal", ((0,) * variety.picard_rank,), (), gens, True,
                   label or "ideal")

    @classmethod
    def quotient(cls, variety, gens, label=""):
        gens = tuple(reduce_gens(gens))
        _check_exps(variety, gens)
        return cls(variety, "quotient", ((0,) * variety.picard_rank,), (), gens,
                   not gens, label or "quotient")

    @classmethod
    def presented(cls, variety, shifts, columns, torsion_free=False, label=""):
        """``columns``: list of relation columns, each a list of (row, coeff, exp)."""
        shifts = tuple(tuple(int(x) for x in s) for s in shifts)
        cols = []
        for c, col in enumerate(columns):
            entries = []
            for row, coeff, exp in col:
                coeff = Fraction(coeff)
                if coeff == 0:
                    continue
                if not 0 <= row < len(shifts):
                    raise InputError("relation %d refers to row %d" % (c, row))
                entries.append((int(row), coeff, tuple(int(x) for x in exp)))
            _check_exps(variety, [e for _, _, e in entries])
            if entries:
                cols.append(tuple(sorted(entries)))
        mod = cls(variety, "presented", shifts, tuple(cols), (), bool(torsion_free),
                  label or "module")
        mod.fine_shifts  # validates homogeneity
        return mod

    @classmethod
    def from_json(cls, variety, data, label=""):
        if isinstance(data, str):
            data = json.loads(data)
        if not isinstance(data, dict):
            raise InputError("module JSON must be an object")
        try:
            if "gens" in data:
                if data.get("quotient"):
                    return cls.quotient(variety, data["gens"], label)
                return cls.from_ideal(variety, data["gens"], label)
            if "shifts" not in data:
                raise InputError("module JSON needs 'shifts' (or 'gens' for an ideal)")
            shifts = data["shifts"]
            rels = data.get("relations", [])
            if not rels:
                return cls.free(variety, shifts, label)
            columns = []
            for col in rels:
                if len(col) != len(shifts):
                    raise InputError("relation column has %d entries for %d shifts"
                                     % (len(col), len(shifts)))
                columns.append([(k, Fraction(str(e["coeff"])), e["exp"])
                                for k, e in enumerate(col)])
            return cls.presented(variety, shifts, columns,
                                 data.get("torsion_free", False), label)
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            if isinstance(exc, InputError):
                raise
            raise InputError("malformed module JSON: %s" % exc) from None

    def to_json(self):
        if self.kind in ("ideal", "quotient"):
            out = {"gens": [list(g) for g in self.gens]}
            if self.kind == "quotient":
                out["quotient"] = True
            return out
        rows = len(self.shifts)
        rels = []
        for col in self.relations:
            dense = [{"coeff": "0", "exp": [0] * self.variety.nvars} for _ in range(rows)]
            for row, coeff, exp in col:
                dense[row] = {"coeff": str(coeff), "exp": list(exp)}
            rels.append(dense)
        return {"shifts": [list(s) for s in self.shifts], "relations": rels,
                "torsion_free": self.torsion_free}

    # fine grading

    @cached_property
    def fine_shifts(self):
        """Fine degrees beta_k of the free generators of F0."""
        X = self.variety
        if self.kind != "presented":
            return tuple(X.lift(s) for s in self.shifts)
        nrows = len(self.shifts)
        parent = list(range(nrows))
        offset = [(0,) * X.nvars for _ in range(nrows)]  # beta_k - beta_parent

        def find(k):
            if parent[k] == k:
                return k, (0,) * X.nvars
            root, off = find(parent[k])
            parent[k] = root
            offset[k] = add(offset[k], off)
            return root, offset[k]

        for c, col in enumerate(self.relations):
            r0, _, e0 = col[0]
            for row, _, exp in col[1:]:
                # beta_row + exp = beta_r0 + e0
                ra, oa = find(r0)
                rb, ob = find(row)
                want = sub(e0, exp)  # beta_row - beta_r0
                if ra == rb:
                    if sub(ob, oa) != want:
                        raise UnsupportedError("relation %d is not fine-homogeneous" % c)
                else:
                    parent[rb] = ra
                    offset[rb] = sub(add(oa, want), ob)
            rows = [r for r, _, _ in col]
            if len(set(rows)) != len(rows):
                raise UnsupportedError("relation %d repeats a row" % c)
        out = [None] * nrows
        roots = {}
        for k in range(nrows):
            root, off = find(k)
            if root not in roots:
                roots[root] = X.lift(self.shifts[root])
            out[k] = add(roots[root], off)
        for k in range(nrows):
            if X.degree(out[k]) != self.shifts[k]:
                raise InputError("relation columns are not homogeneous for the given shifts")
        return tuple(out)

    @cached_property
    def fine_columns(self):
        """(gamma_c, [(row, coeff)]) for each relation column."""
        out = []
        for col in self.relations:
            row, _, exp = col[0]
            gamma = add(self.fine_shifts[row], exp)
            out.append((gamma, tuple((r, c) for r, c, _ in col)))
        return tuple(out)

    @property
    def generator_degrees(self):
        """Pic degrees of a generating set of M."""
        if self.kind == "ideal":
            return [self.variety.degree(g) for g in self.gens]
        return list(self.shifts)

    @cached_property
    def thresholds(self):
        """Per coordinate, the sorted values where fine pieces can change."""
        n = self.variety.nvars
        vals = [set() for _ in range(n)]
        pts = list(self.fine_shifts)
        if self.kind in ("ideal", "quotient"):
            pts += list(self.gens)
        pts += [g for g, _ in self.fine_columns]
        for p in pts:
            for j in range(n):
                vals[j].add(p[j])
        return tuple(tuple(sorted(v)) for v in vals)

    # graded pieces

    def piece_dim(self, alpha, inverted=0):
        """dim of the fine piece at alpha after inverting the variables in the
        bitmask ``inverted``."""
        alpha = tuple(alpha)
        n = len(alpha)
        free_on = [j for j in range(n) if not inverted >> j & 1]

        def ok(shift):
            return all(alpha[j] >= shift[j] for j in free_on)

        if self.kind in ("ideal", "quotient"):
            if not ok((0,) * n):
                return 0
            hit = any(ok(g) for g in self.gens)
            return int(hit) if self.kind == "ideal" else int(not hit)
        basis = [k for k, b in enumerate(self.fine_shifts) if ok(b)]
        if not basis:
            return 0
        cols = [{r: c for r, c in entries} for g, entries in self.fine_columns if ok(g)]
        return len(basis) - rank(cols)

    def hilbert_function(self, b):
        """dim_K M_b."""
        X = self.variety
        b = tuple(b)
        alphas = set()
        if self.kind in ("ideal", "quotient"):
            cands = [tuple(a) for a in X.fibers.nonnegative(b)]
            return sum(self.piece_dim(a) for a in cands)
        for s, beta in zip(self.shifts, self.fine_shifts):
            for m in X.fibers.nonnegative(sub(b, s)):
                alphas.add(add(beta, tuple(int(x) for x in m)))
        return sum(self.piece_dim(a) for a in alphas)

    def is_zero_sheaf(self):
        """True when every chart localization M_{x^sigma-hat} vanishes."""
        X = self.variety
        masks = [sum(1 << i for i in comp) for comp in X.irrelevant_complements]
        thr = self.thresholds
        reps = []
        for j in range(X.nvars):
            t = thr[j]
            reps.append([t[0] - 1] + list(t) if t else [0])
        for mask in masks:
            for alpha in product(*reps):
                if self.piece_dim(alpha, mask):
                    return False
        return True

    def power(self, n):
        if self.kind != "ideal":
            raise UnsupportedError("powers are defined for ideals only")
        return MonomialModule.from_ideal(self.variety, ideal_power(self.gens, n),
                                         "%s^%d" % (self.label, n))


def _check_exps(variety, exps):
    for e in exps:
        if len(e) != variety.nvars:
            raise InputError("exponent vector %s has length %d, expected %d"
                             % (list(e), len(e), variety.nvars))
        if any(x < 0 for x in e):
            raise InputError("exponent vector %s has a negative entry" % (list(e),))


def _divisor_degrees(variety, u):
    """Pic degrees of all divisors of the monomial x^u (numpy array)."""
    axes = [np.arange(x + 1) for x in u]
    grids = np.meshgrid(*axes, indexing="ij")
    vs = np.stack([g.ravel() for g in grids], axis=1)
    D = np.array(variety.degree_map, dtype=np.int64)
    return vs @ D.T


def truncation_generated_in_degree(module, d, window):
    """Check whether M_{>=d} is generated by its degree-d piece inside ``window``.

    Returns ``(True, None)`` or ``(False, witness)`` where the witness is a
    dict naming the degree, fine degree and free generator of an element of
    M_{>=d} outside S * (M_{>=d})_d.
    """
    X = module.variety
    d = tuple(d)
    nef = X.nef
    facets = np.array([f for f in nef.facets], dtype=np.int64)
    phi = X.eff.positive_functional()
    degrees = [dp for dp in window.points() if X.eff.contains(sub(dp, d))]
    degrees.sort(key=lambda dp: (sum(x * y for x, y in zip(phi, sub(dp, d))), dp))
    for dp in degrees:
        alphas = {}
        for k, (s, beta) in enumerate(zip(module.shifts, module.fine_shifts)):
            for m in X.fibers.nonnegative(sub(dp, s)):
                m = tuple(int(x) for x in m)
                alphas.setdefault(add(beta, m), []).append((k, m))
        for alpha, terms in sorted(alphas.items()):
            trunc, gen = [], []
            for k, u in terms:
                if module.kind in ("ideal", "quotient") and module.piece_dim(alpha) == 0:
                    continue
                degs = _divisor_degrees(X, u) + np.array(module.shifts[k])[None, :]
                rel = degs - np.array(d)[None, :]
                if ((rel @ facets.T) >= 0).all(axis=1).any():
                    trunc.append(k)
                if (rel == 0).all(axis=1).any():
                    gen.append(k)
            if len(trunc) == len(gen):
                continue
            if module.kind in ("ideal", "quotient", "free"):
                # one-dimensional pieces: compare membership directly
                missing = sorted(set(trunc) - set(gen))
                if missing:
                    return False, {"degree": dp, "alpha": alpha, "generator": missing[0]}
                continue
            ok = lambda g: all(alpha[j] >= g[j] for j in range(X.nvars))
            rels = [{r: c for r, c in e} for g, e in module.fine_columns if ok(g)]
            rw = rank(rels)
            r_trunc = rank(rels + [{k: 1} for k in trunc]) - rw
            r_gen = rank(rels + [{k: 1} for k in gen]) - rw
            if r_trunc > r_gen:
                k = next(k for k in trunc if k not in gen)
                return False, {"degree": dp, "alpha": alpha, "generator": k}
    return True, None


def extra_monomials_witness(variety, chamber, anchors, cap=16):
    """Monomials m_i of degree >= a_i whose product avoids <S_{sum a_i}>.

    Candidates come from degrees a_i + lambda.C with |lambda| <= cap, searched
    by increasing total |lambda|.
    """
    X = variety
    anchors = [tuple(a) for a in anchors]
    for a in anchors:
        if X.nef.contains(a):
            raise InputError("anchor %s is nef" % (a,))
        if not chamber.contains(a):
            raise InputError("anchor %s is outside the chamber" % (a,))
    total = (0,) * X.picard_rank
    for a in anchors:
        total = add(total, a)
    blockers = monomials_of_degree(X, total)

    def blocked(m):
        return any(divides(g, m) for g in blockers)

    C = X.nef_gens
    cache = {}

    def candidates(a, s):
        # monomials with Pic degree a + lambda.C for |lambda| == s
        key = (a, s)
        if key not in cache:
            out = set()
            for lam in _weak_compositions(s, len(C)):
                for m in monomials_of_degree(X, add(a, combo(lam, C, X.picard_rank))):
                    out.add(m)
            cache[key] = sorted(out, key=lambda m: (sum(m), m))
        return cache[key]

    r = len(anchors)
    for budget in range(cap * r + 1):
        for split in _weak_compositions(budget, r):
            if any(s > cap for s in split):
                continue
            found = _dfs(anchors, split, candidates, blocked, 0, (0,) * X.nvars, [])
            if found is not None:
                return found
    raise SearchExhausted("witness not found with |lambda| <= %d" % cap)


def _dfs(anchors, split, candidates, blocked, level, partial, chosen):
    if level == len(anchors):
        return list(chosen)
    for m in candidates(anchors[level], split[level]):
        prod_ = add(partial, m)
        if blocked(prod_):
            continue
        chosen.append(m)
        got = _dfs(anchors, split, candidates, blocked, level + 1, prod_, chosen)
        if got is not None:
            return got
        chosen.pop()
    return None


def _weak_compositions(total, parts):
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _weak_compositions(total - first, parts - 1):
            yield (first,) + rest
