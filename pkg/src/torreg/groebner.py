"""Buchberger's algorithm and Schreyer resolutions over Q.

Module elements are dicts ``{(pos, exp): Fraction}``; a polynomial is the
special case pos = 0.  A term order is a key function ``key(pos, exp)``
returning something comparable, larger meaning leading.
"""

from dataclasses import dataclass
from fractions import Fraction

from .errors import BudgetExceeded


def grevlex(exp):
    return (sum(exp), tuple(-e for e in reversed(exp)))


def elimination_key(first):
    """Order eliminating the variables with index < ``first``: lex on that
    block, then grevlex on the rest."""
    def key(exp):
        return (tuple(exp[:first]), grevlex(exp[first:]))
    return key


def top_key(mono_key):
    """Term-over-position order for free modules."""
    return lambda pos, exp: (mono_key(exp), -pos)


def _add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _divides(a, b):
    return all(x <= y for x, y in zip(a, b))


def leading(elem, key):
    return max(elem, key=lambda t: key(*t))


def _axpy(target, coeff, shift, elem):
    """target += coeff * x^shift * elem (in place)."""
    for (pos, exp), c in elem.items():
        t = (pos, _add(exp, shift))
        v = target.get(t, 0) + coeff * c
        if v:
            target[t] = v
        else:
            target.pop(t, None)


def _monic(elem, key):
    lt = leading(elem, key)
    c = elem[lt]
    return {t: v / c for t, v in elem.items()}


class GB:
    """A list of module elements with cached leading terms."""

    def __init__(self, key):
        self.key = key
        self.elems = []
        self.lts = []

    def add(self, elem):
        elem = _monic(elem, self.key)
        self.elems.append(elem)
        self.lts.append(leading(elem, self.key))

    def reduce(self, elem, track=False, full=True):
        """Remainder of elem (and quotients {index: {exp: coeff}} if track)."""
        rem = {}
        f = dict(elem)
        quot = {}
        key = self.key
        while f:
            lt = leading(f, key)
            c = f[lt]
            for k, (pos, exp) in enumerate(self.lts):
                if pos == lt[0] and _divides(exp, lt[1]):
                    shift = _sub(lt[1], exp)
                    _axpy(f, -c, shift, self.elems[k])
                    if track:
                        q = quot.setdefault(k, {})
                        q[shift] = q.get(shift, 0) + c
                    break
            else:
                if not full:
                    rem.update(f)
                    break
                rem[lt] = c
                del f[lt]
        return (rem, quot) if track else rem


def buchberger(gens, key, budget=None):
    """Groebner basis (minimal, monic) of the submodule generated by gens."""
    gb = GB(key)
    for g in gens:
        g = {t: Fraction(v) for t, v in g.items() if v}
        r = gb.reduce(g) if g else {}
        if r:
            gb.add(r)
    pairs = [(i, j) for j in range(len(gb.elems)) for i in range(j)]
    used = 0
    while pairs:
        i, j = pairs.pop(0)
        used += 1
        if budget is not None and used > budget:
            raise BudgetExceeded("Groebner pair budget %d exceeded" % budget)
        (pi, ei), (pj, ej) = gb.lts[i], gb.lts[j]
        if pi != pj:
            continue
        lcm = tuple(max(a, b) for a, b in zip(ei, ej))
        if pi == 0 and _add(ei, ej) == lcm and _single_position(gb, i, j):
            continue  # coprime leading monomials of polynomials
        s = {}
        _axpy(s, 1, _sub(lcm, ei), gb.elems[i])
        _axpy(s, -1, _sub(lcm, ej), gb.elems[j])
        r = gb.reduce(s)
        if r:
            gb.add(r)
            k = len(gb.elems) - 1
            pairs.extend((a, k) for a in range(k))
    return minimalize(gb.elems, key)


def _single_position(gb, i, j):
    return all(p == 0 for p, _ in gb.elems[i]) and all(p == 0 for p, _ in gb.elems[j])


def minimalize(elems, key):
    """Drop elements whose leading term is divisible by another's."""
    items = [(_monic(e, key), None) for e in elems if e]
    items = [(e, leading(e, key)) for e, _ in items]
    keep = []
    for k, (e, lt) in enumerate(items):
        dominated = False
        for k2, (e2, lt2) in enumerate(items):
            if k2 == k or lt2[0] != lt[0] or not _divides(lt2[1], lt[1]):
                continue
            if lt2 != lt or k2 < k:
                dominated = True
                break
        if not dominated:
            keep.append(e)
    return keep


def reduced_basis(elems, key):
    gb = minimalize(elems, key)
    out = []
    for k, e in enumerate(gb):
        rest = GB(key)
        for k2, e2 in enumerate(gb):
            if k2 != k:
                rest.add(e2)
        lt = leading(e, key)
        tail = {t: v for t, v in e.items() if t != lt}
        r = rest.reduce(tail) if tail else {}
        r[lt] = e[lt]
        out.append(_monic(r, key))
    return sorted(out, key=lambda e: key(*leading(e, key)))


def syzygies(elems, key):
    """Schreyer syzygies of a Groebner basis (list order = index order).

    Returns the syzygy elements (over positions = indices of ``elems``) and
    the induced order key.
    """
    gb = GB(key)
    for e in elems:
        gb.add(e)
    lts = gb.lts
    out = []
    for j in range(len(elems)):
        for i in range(j):
            (pi, ei), (pj, ej) = lts[i], lts[j]
            if pi != pj:
                continue
            lcm = tuple(max(a, b) for a, b in zip(ei, ej))
            mi, mj = _sub(lcm, ei), _sub(lcm, ej)
            s = {}
            _axpy(s, 1, mi, gb.elems[i])
            _axpy(s, -1, mj, gb.elems[j])
            rem, quot = gb.reduce(s, track=True)
            assert not rem, "input is not a Groebner basis"
            syz = {(i, mi): Fraction(1)}
            t = (j, mj)
            syz[t] = syz.get(t, 0) - 1
            for k, q in quot.items():
                for exp, c in q.items():
                    t = (k, exp)
                    v = syz.get(t, 0) - c
                    if v:
                        syz[t] = v
                    else:
                        syz.pop(t, None)
            syz = {t: v for t, v in syz.items() if v}
            if syz:
                out.append(syz)

    def induced(pos, exp, _lts=lts, _key=key):
        p, e = _lts[pos]
        return (_key(p, _add(exp, e)), -pos)

    return out, induced


@dataclass
class FreeComplex:
    """F_0 <- F_1 <- ... with ``diffs[j]`` (j >= 1) a list of columns, one per
    basis element of F_j, each a dict row -> polynomial (dict exp -> coeff).
    ``gens[j]`` optionally records the basis elements as module elements."""
    nvars: int
    ranks: list
    diffs: list

    @property
    def length(self):
        return len(self.ranks) - 1

    def compose_is_zero(self):
        for j in range(2, len(self.diffs)):
            for col in self.diffs[j]:
                acc = {}
                for mid, poly in col.items():
                    for row, p2 in self.diffs[j - 1][mid].items():
                        tgt = acc.setdefault(row, {})
                        for e1, c1 in poly.items():
                            for e2, c2 in p2.items():
                                e = _add(e1, e2)
                                v = tgt.get(e, 0) + c1 * c2
                                if v:
                                    tgt[e] = v
                                else:
                                    tgt.pop(e, None)
                if any(acc.values()):
                    return False
        return True


def schreyer_resolution(gens, nvars, npos, mono_key=grevlex, budget=None, max_length=None):
    """Free resolution of F_0 / <gens> with F_0 of rank ``npos``.

    Uses the Schreyer order at every level and sorts each level's Groebner
    basis by decreasing lex leading exponent inside each position, which
    forces the syzygy leading terms to lose one variable per step, so the
    loop stops after at most nvars + 1 levels.
    """
    key = top_key(mono_key)
    G = buchberger(gens, key, budget)
    ranks = [npos]
    diffs = [None]
    while G:
        G.sort(key=lambda e: _lex_sort_key(leading(e, key)))
        ranks.append(len(G))
        cols = []
        for e in G:
            col = {}
            for (pos, exp), c in e.items():
                col.setdefault(pos, {})[exp] = c
            cols.append(col)
        diffs.append(cols)
        if max_length is not None and len(ranks) > max_length:
            break
        syz, key = syzygies(G, key)
        G = minimalize(syz, key)
    return FreeComplex(nvars, ranks, diffs)


def _lex_sort_key(lt):
    pos, exp = lt
    return (pos, tuple(-e for e in exp))


def prune(cx, shifts):
    """Cancel unit entries (nonzero constants) in place; ``shifts[j]`` lists
    the degrees of F_j and is updated alongside."""
    changed = True
    while changed:
        changed = False
        for j in range(1, len(cx.diffs)):
            hit = None
            for c, col in enumerate(cx.diffs[j]):
                for r, poly in col.items():
                    if len(poly) == 1:
                        (e, u), = poly.items()
                        if not any(e):
                            hit = (c, r, u)
                            break
                if hit:
                    break
            if not hit:
                continue
            c, r, u = hit
            _cancel(cx, shifts, j, c, r, u)
            changed = True
            break
    # drop trailing empty levels
    while len(cx.ranks) > 1 and cx.ranks[-1] == 0:
        cx.ranks.pop()
        cx.diffs.pop()
        shifts.pop()
    return cx


def _poly_mul(p, q):
    out = {}
    for e1, c1 in p.items():
        for e2, c2 in q.items():
            e = _add(e1, e2)
            v = out.get(e, 0) + c1 * c2
            if v:
                out[e] = v
            else:
                out.pop(e, None)
    return out


def _poly_axpy(p, coeff, q):
    for e, c in q.items():
        v = p.get(e, 0) + coeff * c
        if v:
            p[e] = v
        else:
            p.pop(e, None)


def _cancel(cx, shifts, j, c, r, u):
    cols = cx.diffs[j]
    pivot_col = cols[c]
    new_cols = []
    for c2, col in enumerate(cols):
        if c2 == c:
            continue
        col = {row: dict(p) for row, p in col.items()}
        a = col.get(r)
        if a:
            for row, p in pivot_col.items():
                if row == r:
                    continue
                tgt = col.setdefault(row, {})
                _poly_axpy(tgt, Fraction(-1) / u, _poly_mul(p, a))
                if not tgt:
                    del col[row]
            del col[r]
        new_cols.append({(row if row < r else row - 1): p for row, p in col.items() if p})
    cx.diffs[j] = new_cols
    cx.ranks[j] -= 1
    cx.ranks[j - 1] -= 1
    del shifts[j][c]
    del shifts[j - 1][r]
    if j + 1 < len(cx.diffs):
        nxt = []
        for col in cx.diffs[j + 1]:
            nxt.append({(row if row < c else row - 1): p for row, p in col.items() if row != c})
        cx.diffs[j + 1] = nxt
    if j - 1 >= 1:
        prev = cx.diffs[j - 1]
        del prev[r]


def module_resolution(module, budget=None):
    """Fine-graded resolution of a presented monomial module."""
    from .cohomology import FineResolution
    n = module.variety.nvars
    gens = []
    for col in module.relations:
        gens.append({(row, exp): coeff for row, coeff, exp in col})
    nrows = len(module.shifts)
    cx = schreyer_resolution(gens, n, nrows, budget=budget)
    shifts = [list(module.fine_shifts)]
    for j in range(1, len(cx.ranks)):
        lev = []
        for col in cx.diffs[j]:
            row, poly = next(iter(col.items()))
            exp = next(iter(poly))
            lev.append(_add(shifts[j - 1][row], exp))
        shifts.append(lev)
    maps = [None]
    for j in range(1, len(cx.ranks)):
        rows = []
        for s, col in enumerate(cx.diffs[j]):
            img = []
            for row, poly in sorted(col.items()):
                if len(poly) != 1:
                    raise AssertionError("resolution is not fine-homogeneous")
                (exp, c), = poly.items()
                assert _add(shifts[j - 1][row], exp) == shifts[j][s]
                img.append((row, c))
            rows.append(img)
        maps.append(rows)
    return FineResolution(shifts, maps)
