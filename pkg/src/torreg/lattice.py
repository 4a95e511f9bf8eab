"""Lattice and rational cone arithmetic on the Picard lattice.

Vectors are plain integer tuples.  A :class:`Cone` stores both its extremal
rays and its facet normals (``n . v >= 0`` for every normal ``n``); equality
constraints of lower-dimensional cones appear as a pair ``n, -n``.
"""

from dataclasses import dataclass, field
from functools import cmp_to_key
from itertools import combinations, product

from .errors import InputError, SearchExhausted, UnsupportedError
from .linalg import dense_rank, kernel_vector, orthogonal_complement, primitive


def add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def scale(k, a):
    return tuple(k * x for x in a)


def dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def combo(coeffs, vectors, dim):
    """Integer combination sum(c_i * v_i)."""
    out = [0] * dim
    for c, v in zip(coeffs, vectors):
        if c:
            for k in range(dim):
                out[k] += c * v[k]
    return tuple(out)


def _unique_primitive(vectors):
    seen = []
    for v in vectors:
        if not any(v):
            continue
        p = primitive(v)
        if p not in seen:
            seen.append(p)
    return sorted(seen)


@dataclass(frozen=True)
class Cone:
    rays: tuple
    facets: tuple
    dim: int
    _equalities: frozenset = field(default=frozenset(), repr=False, compare=False)

    @classmethod
    def from_rays(cls, gens, dim=None):
        gens = _unique_primitive(tuple(int(x) for x in g) for g in gens)
        if dim is None:
            if not gens:
                raise InputError("dimension required for the zero cone")
            dim = len(gens[0])
        if any(len(g) != dim for g in gens):
            raise InputError("dimension mismatch")
        if not gens:
            normals = [tuple(int(i == j) for j in range(dim)) for i in range(dim)]
            normals += [scale(-1, v) for v in normals]
            return cls((), tuple(sorted(normals)), dim, frozenset(normals))
        k = dense_rank(gens)
        lin = orthogonal_complement(gens, dim)
        eqs = set()
        for v in lin:
            eqs.add(v)
            eqs.add(scale(-1, v))
        normals = set()
        for sub_ in combinations(gens, k - 1):
            rows = [list(v) for v in lin] + [list(v) for v in sub_]
            if dense_rank(rows) != dim - 1:
                continue
            n = kernel_vector(rows, dim)
            vals = [dot(n, g) for g in gens]
            if all(x >= 0 for x in vals):
                normals.add(n)
            elif all(x <= 0 for x in vals):
                normals.add(scale(-1, n))
        normals = {n for n in normals if n not in eqs}
        facets = tuple(sorted(normals | eqs))
        cone = cls(tuple(gens), facets, dim, frozenset(eqs))
        if cone.is_pointed():
            extremal = []
            for g in gens:
                tight = [f for f in facets if dot(f, g) == 0]
                if dense_rank(tight) == dim - 1:
                    extremal.append(g)
            cone = cls(tuple(extremal), facets, dim, frozenset(eqs))
        return cone

    @classmethod
    def from_facets(cls, normals, dim):
        """Pointed cone {v : n.v >= 0 for all n}."""
        normals = _unique_primitive(normals)
        if any(len(n) != dim for n in normals):
            raise InputError("dimension mismatch")
        if dense_rank(normals) < dim:
            raise InputError("non-pointed cone")
        rays = set()
        for sub_ in combinations(normals, dim - 1):
            if dense_rank(sub_) != dim - 1:
                continue
            r = kernel_vector([list(v) for v in sub_], dim)
            for cand in (r, scale(-1, r)):
                if all(dot(n, cand) >= 0 for n in normals):
                    rays.add(cand)
        if not rays:
            return cls.from_rays([], dim)
        return cls.from_rays(sorted(rays), dim)

    def _check(self, v):
        if len(v) != self.dim:
            raise InputError("dimension mismatch: expected %d coordinates" % self.dim)

    def contains(self, v):
        self._check(v)
        return all(dot(n, v) >= 0 for n in self.facets)

    def relint_contains(self, v):
        """Membership in the relative interior."""
        self._check(v)
        for n in self.facets:
            val = dot(n, v)
            if n in self._equalities:
                if val != 0:
                    return False
            elif val <= 0:
                return False
        return True

    def is_pointed(self):
        return dense_rank(self.facets) == self.dim if self.facets else self.dim == 0

    @property
    def span_rank(self):
        return dense_rank(self.rays) if self.rays else 0

    def intersect(self, other):
        return Cone.from_facets(self.facets + other.facets, self.dim)

    def same_as(self, other):
        return self.dim == other.dim and set(self.rays) == set(other.rays)

    def positive_functional(self):
        """Integer functional strictly positive on the nonzero points (pointed cones)."""
        out = (0,) * self.dim
        for n in self.facets:
            if n not in self._equalities:
                out = add(out, n)
        return out

    def to_json(self):
        return {"rays": [list(r) for r in self.rays],
                "facets": [list(f) for f in self.facets if f not in self._equalities],
                "equations": sorted(list(f) for f in self._equalities
                                    if scale(-1, f) > f)}


def cone_contains(cone, v):
    return cone.contains(tuple(v))


def nef_leq(a, b, nef):
    """a <= b in the order induced by ``nef``."""
    if len(a) != len(b):
        raise InputError("dimension mismatch")
    return nef.contains(sub(b, a))


def minimal_elements(points, nef):
    """Minimal elements of a finite set, lex-sorted."""
    pts = sorted(set(tuple(p) for p in points))
    out = []
    for p in pts:
        if not any(q != p and nef.contains(sub(p, q)) for q in pts):
            out.append(p)
    return out


def hilbert_basis(cone):
    """Minimal generators of the monoid of lattice points in a pointed cone."""
    if not cone.is_pointed():
        raise InputError("non-pointed cone")
    if not cone.rays:
        return []
    dim = cone.dim
    # Every irreducible element lies in the zonotope spanned by the rays.
    lo = [sum(min(r[k], 0) for r in cone.rays) for k in range(dim)]
    hi = [sum(max(r[k], 0) for r in cone.rays) for k in range(dim)]
    phi = cone.positive_functional()
    cands = [v for v in product(*(range(a, b + 1) for a, b in zip(lo, hi)))
             if any(v) and cone.contains(v)]
    cands.sort(key=lambda v: (dot(phi, v), v))
    basis = []
    for v in cands:
        if not any(cone.contains(sub(v, h)) for h in basis):
            basis.append(v)
    return sorted(basis)


@dataclass(frozen=True)
class ChamberComplex:
    chambers: tuple
    walls: tuple  # (wall cone, (i, j)) with i < j
    nef_index: object = None

    def chamber_of(self, v):
        """Indices of chambers containing v."""
        return [k for k, c in enumerate(self.chambers) if c.contains(v)]


def _cross(u, v):
    return u[0] * v[1] - u[1] * v[0]


def _cross3(u, v):
    return (u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0])


def _sign(x):
    return (x > 0) - (x < 0)


def chamber_complex(degree_vectors, nef=None):
    """Fan covering Eff refined by the cones spanned by the degree vectors.

    For rank 3 the cells come from the arrangement of planes through pairs of
    degree vectors, which may be finer than the coarsest such fan; when
    ``nef`` is given, the cells inside it are merged back into one chamber.
    """
    dirs = _unique_primitive(degree_vectors)
    if not dirs:
        raise InputError("no degree vectors")
    rho = len(dirs[0])
    if rho > 3:
        raise UnsupportedError("unsupported rank: %d" % rho)
    eff = Cone.from_rays(dirs, rho)
    if not eff.is_pointed():
        raise InputError("degree vectors span a non-pointed cone")
    if eff.span_rank < rho:
        raise InputError("degree vectors do not span the Picard lattice")
    if rho == 1:
        return ChamberComplex((eff,), (), 0 if nef is not None else None)

    if rho == 2:
        start = next(r for r in eff.rays if all(_cross(r, v) >= 0 for v in dirs))

        def cmp(u, v):
            return -_sign(_cross(u, v))

        order = sorted(dirs, key=cmp_to_key(cmp))
        assert order[0] == start
        cells = [Cone.from_rays([order[k], order[k + 1]], 2) for k in range(len(order) - 1)]
        candidates = order
    else:
        normals = set()
        for u, v in combinations(dirs, 2):
            n = _cross3(u, v)
            if any(n):
                n = primitive(n)
                if n < (0, 0, 0):
                    n = scale(-1, n)
                normals.add(n)
        normals = sorted(normals)
        cand = set(dirs)
        for n1, n2 in combinations(normals, 2):
            line = _cross3(n1, n2)
            if not any(line):
                continue
            line = primitive(line)
            for r in (line, scale(-1, line)):
                if eff.contains(r):
                    cand.add(r)
        candidates = sorted(cand)
        seen = {}
        for tri in combinations(candidates, 3):
            if dense_rank(tri) != 3:
                continue
            p = combo((1, 1, 1), tri, 3)
            if not eff.relint_contains(p):
                continue
            key = tuple(_sign(dot(n, p)) for n in normals)
            if 0 in key or key in seen:
                continue
            members = [r for r in candidates
                       if all(_sign(dot(n, r)) in (0, s) for n, s in zip(normals, key))]
            seen[key] = Cone.from_rays(members, 3)
        cells = [seen[k] for k in sorted(seen)]

    nef_index = None
    if nef is not None:
        inside = [c for c in cells if all(nef.contains(r) for r in c.rays)]
        rest = [c for c in cells if not all(nef.contains(r) for r in c.rays)]
        cells = rest
        if inside:
            cells = [nef] + rest
            nef_index = 0
    walls = []
    for i, j in combinations(range(len(cells)), 2):
        common = [r for r in candidates if cells[i].contains(r) and cells[j].contains(r)]
        if common and dense_rank(common) == rho - 1:
            walls.append((Cone.from_rays(common, rho), (i, j)))
    return ChamberComplex(tuple(cells), tuple(walls), nef_index)


def _compositions(total, parts):
    """Positive integer tuples of the given length summing to ``total``."""
    if parts == 1:
        yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def wall_witness(d, anchors, complex_, nef, cap=64):
    """Find a chamber across a wall of Nef and a wall point pushing d into it.

    Returns ``(chamber, wall, w)`` with w in the relative interior of the
    wall, d + w in the chamber, and d + w - a in the chamber for every anchor.
    """
    d = tuple(d)
    if nef.contains(d):
        raise InputError("witness not needed: degree is nef")
    if not any(c.contains(d) for c in complex_.chambers):
        raise InputError("outside effective cone")
    for a in anchors:
        if not nef.contains(tuple(a)):
            raise InputError("anchor %s is not nef" % (tuple(a),))
    ni = complex_.nef_index
    if ni is None:
        ni = next((k for k, c in enumerate(complex_.chambers) if c.same_as(nef)), None)
    if ni is None:
        raise UnsupportedError("nef cone is not a chamber of the complex")
    adjacent = [(w, j if i == ni else i) for w, (i, j) in complex_.walls if ni in (i, j)]
    dim = len(d)
    for total in range(1, cap + 1):
        for wall, g in adjacent:
            gamma = complex_.chambers[g]
            gens = wall.rays
            if total < len(gens):
                continue
            for coeffs in _compositions(total, len(gens)):
                w = combo(coeffs, gens, dim)
                p = add(d, w)
                if gamma.contains(p) and all(gamma.contains(sub(p, tuple(a))) for a in anchors):
                    return gamma, wall, w
    raise SearchExhausted("witness not found with coefficient sum <= %d" % cap)


@dataclass(frozen=True)
class Window:
    """Closed integer box [lower, upper] in Pic coordinates."""
    lower: tuple
    upper: tuple

    def __post_init__(self):
        if len(self.lower) != len(self.upper):
            raise InputError("window corners have different lengths")
        if any(a > b for a, b in zip(self.lower, self.upper)):
            raise InputError("window lower corner exceeds upper corner")

    @classmethod
    def square(cls, lo, hi, rank=2):
        return cls((lo,) * rank, (hi,) * rank)

    @classmethod
    def parse(cls, text):
        """Parse ``x0,y0:x1,y1``."""
        try:
            a, b = text.split(":")
            lower = tuple(int(x) for x in a.split(","))
            upper = tuple(int(x) for x in b.split(","))
        except ValueError:
            raise InputError("window must look like x0,y0:x1,y1, got %r" % text) from None
        return cls(lower, upper)

    def __contains__(self, p):
        return all(a <= x <= b for a, x, b in zip(self.lower, p, self.upper))

    def points(self):
        return list(product(*(range(a, b + 1) for a, b in zip(self.lower, self.upper))))

    def grow(self, below, above):
        return Window(tuple(a - k for a, k in zip(self.lower, below)),
                      tuple(b + k for b, k in zip(self.upper, above)))

    def to_json(self):
        return {"lower": list(self.lower), "upper": list(self.upper)}

    def __str__(self):
        return "%s:%s" % (",".join(map(str, self.lower)), ",".join(map(str, self.upper)))
