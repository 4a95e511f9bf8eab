"""Smooth projective toric varieties: fans, Cox-ring grading, B, Nef and Eff.

Projectivity is taken on trust.  Smoothness and completeness are checked
(completeness only in dimension <= 3, by requiring every codimension-one face
of a maximal cone to lie in exactly two maximal cones).
"""

import json
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations

from .errors import InputError, UnsupportedError
from .lattice import Cone, chamber_complex, hilbert_basis
from .linalg import (dense_rank, determinant, inverse_unimodular, matmul,
                     smith_normal_form)
from math import gcd


@dataclass(frozen=True)
class Fan:
    rays: tuple
    max_cones: tuple

    @classmethod
    def make(cls, rays, max_cones):
        rays = tuple(tuple(int(x) for x in r) for r in rays)
        cones = tuple(tuple(sorted(int(i) for i in c)) for c in max_cones)
        return cls(rays, cones)

    @classmethod
    def from_json(cls, data):
        if isinstance(data, str):
            data = json.loads(data)
        if not isinstance(data, dict) or "rays" not in data or "max_cones" not in data:
            raise InputError("fan JSON needs 'rays' and 'max_cones'")
        try:
            return cls.make(data["rays"], data["max_cones"])
        except (TypeError, ValueError) as exc:
            raise InputError("malformed fan JSON: %s" % exc) from None

    def to_json(self):
        return {"rays": [list(r) for r in self.rays],
                "max_cones": [list(c) for c in self.max_cones]}

    @property
    def dim(self):
        return len(self.rays[0]) if self.rays else 0

    def validate(self):
        if not self.rays:
            raise InputError("fan has no rays")
        d = self.dim
        if d > 3:
            raise UnsupportedError("unsupported dimension: %d (at most 3)" % d)
        for k, r in enumerate(self.rays):
            if len(r) != d:
                raise InputError("ray %d has the wrong length" % k)
            g = 0
            for x in r:
                g = gcd(g, x)
            if g != 1:
                raise InputError("ray %d is not primitive" % k)
        if len(set(self.rays)) != len(self.rays):
            raise InputError("rays are not distinct")
        used = set()
        for k, cone in enumerate(self.max_cones):
            if any(i < 0 or i >= len(self.rays) for i in cone):
                raise InputError("max cone %d references an unknown ray" % k)
            if len(set(cone)) != len(cone):
                raise InputError("max cone %d repeats a ray" % k)
            if len(cone) != d:
                raise InputError("max cone %d is not full-dimensional (fan incomplete)" % k)
            mat = [self.rays[i] for i in cone]
            det = determinant(mat)
            if det == 0:
                raise InputError("max cone %d has dependent rays" % k)
            if abs(det) != 1:
                raise InputError("max cone %d is non-smooth (|det| = %d)" % (k, abs(det)))
            used.update(cone)
        if used != set(range(len(self.rays))):
            missing = sorted(set(range(len(self.rays))) - used)
            raise InputError("ray %d lies in no max cone" % missing[0])
        faces = {}
        for k, cone in enumerate(self.max_cones):
            for face in combinations(cone, d - 1):
                faces.setdefault(face, []).append(k)
        for face, owners in sorted(faces.items()):
            if len(owners) != 2:
                raise InputError("fan incomplete: face %s of max cone %d lies in %d max cones"
                                 % (list(face), owners[0], len(owners)))
        if dense_rank(self.rays) != d:
            raise InputError("fan incomplete: rays do not span")


def cokernel_grading(ray_matrix):
    """Picard rank and degree map of the Cox ring attached to the rays.

    The basis of Pic is normalized so that the lexicographically last set of
    variables whose degrees form a lattice basis gets the standard basis.
    """
    rows = [list(map(int, r)) for r in ray_matrix]
    n = len(rows)
    d = len(rows[0]) if n else 0
    if dense_rank(rows) != d:
        raise InputError("ray matrix does not have full column rank")
    u, diag, _ = smith_normal_form(rows)
    for k in range(d):
        if diag[k][k] != 1:
            raise InputError("unsupported grading: torsion in the Picard group")
    rho = n - d
    base = [u[k] for k in range(d, n)]
    cols = basis_variables(base)
    sub_ = [[row[c] for c in cols] for row in base]
    degree_map = matmul(inverse_unimodular(sub_), base)
    assert all(x == 0 for row in matmul(degree_map, rows) for x in row)
    return rho, [list(r) for r in degree_map]


def basis_variables(degree_map):
    """Lexicographically last set of variables whose degrees form a Z-basis."""
    rho = len(degree_map)
    n = len(degree_map[0]) if rho else 0
    for cols in reversed(list(combinations(range(n), rho))):
        sub_ = [[row[c] for c in cols] for row in degree_map]
        if abs(determinant(sub_)) == 1:
            return cols
    raise InputError("unsupported grading: no unimodular set of variable degrees")


@dataclass(frozen=True, eq=False)
class ToricVariety:
    fan: Fan
    picard_rank: int
    degree_map: tuple
    var_degrees: tuple
    irrelevant_complements: tuple
    nef: Cone
    eff: Cone
    nef_gens: tuple
    name: str = ""

    @property
    def nvars(self):
        return len(self.var_degrees)

    @property
    def irrelevant_generators(self):
        """Exponent vectors of the monomials x^{sigma hat}."""
        out = []
        for comp in self.irrelevant_complements:
            out.append(tuple(int(i in comp) for i in range(self.nvars)))
        return out

    def degree(self, exponents):
        return tuple(sum(self.degree_map[k][i] * exponents[i] for i in range(self.nvars))
                     for k in range(self.picard_rank))

    @cached_property
    def ray_matrix(self):
        return [list(r) for r in self.fan.rays]

    @cached_property
    def basis_vars(self):
        return basis_variables([list(r) for r in self.degree_map])

    def lift(self, b):
        """A fine degree alpha with deg(alpha) = b (supported on basis_vars)."""
        out = [0] * self.nvars
        for k, j in enumerate(self.basis_vars):
            out[j] = int(b[k])
        return tuple(out)

    @cached_property
    def fibers(self):
        from .fiber import FiberGeometry
        return FiberGeometry(self)

    @cached_property
    def chambers(self):
        return chamber_complex(self.var_degrees, self.nef)

    def summary(self):
        return {
            "name": self.name,
            "picard_rank": self.picard_rank,
            "degree_map": [list(r) for r in self.degree_map],
            "var_degrees": [list(v) for v in self.var_degrees],
            "irrelevant_generators": [list(g) for g in self.irrelevant_generators],
            "nef": self.nef.to_json(),
            "eff": self.eff.to_json(),
            "nef_hilbert_basis": [list(c) for c in self.nef_gens],
        }


def build_variety(fan, name=""):
    if not isinstance(fan, Fan):
        fan = Fan.make(*fan)
    fan.validate()
    rho, dmap = cokernel_grading(fan.rays)
    n = len(fan.rays)
    degs = tuple(tuple(dmap[k][i] for k in range(rho)) for i in range(n))
    comps = tuple(tuple(i for i in range(n) if i not in set(c)) for c in fan.max_cones)
    eff = Cone.from_rays(degs, rho)
    if not eff.is_pointed():
        raise InputError("effective cone is not pointed (variety not projective)")
    nef = None
    for comp in comps:
        piece = Cone.from_rays([degs[i] for i in comp], rho)
        if piece.span_rank < rho:
            raise InputError("variety is not projective: a complement cone is degenerate")
        nef = piece if nef is None else nef.intersect(piece)
    if nef.span_rank < rho:
        raise InputError("nef cone is not full-dimensional (variety not projective)")
    return ToricVariety(fan, rho, tuple(tuple(r) for r in dmap), degs, comps,
                        nef, eff, tuple(hilbert_basis(nef)), name)


def load_variety(path):
    with open(path) as fh:
        return build_variety(Fan.from_json(json.load(fh)), name=str(path))


# Standard fixtures.

def hirzebruch(t):
    return build_variety(Fan.make([(1, 0), (0, 1), (-1, t), (0, -1)],
                                  [(0, 1), (1, 2), (2, 3), (3, 0)]), "H%d" % t)


def projective_space(n):
    rays = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    rays.append(tuple(-1 for _ in range(n)))
    cones = [tuple(j for j in range(n + 1) if j != i) for i in range(n + 1)]
    return build_variety(Fan.make(rays, cones), "P%d" % n)


def product_fan(f1, f2):
    d1, d2 = f1.dim, f2.dim
    rays = [tuple(r) + (0,) * d2 for r in f1.rays] + [(0,) * d1 + tuple(r) for r in f2.rays]
    off = len(f1.rays)
    cones = [tuple(a) + tuple(off + b for b in c2) for a in f1.max_cones for c2 in f2.max_cones]
    return Fan.make(rays, cones)


def p1xp1():
    p1 = projective_space(1).fan
    return build_variety(product_fan(p1, p1), "P1xP1")


def p1_cubed():
    p1 = projective_space(1).fan
    return build_variety(product_fan(product_fan(p1, p1), p1), "P1xP1xP1")


def fixture(name):
    """Look up a named fixture variety: H<t>, P<n>, P1xP1, P1xP1xP1."""
    if name == "P1xP1":
        return p1xp1()
    if name == "P1xP1xP1":
        return p1_cubed()
    if name[:1] == "H" and name[1:].isdigit():
        return hirzebruch(int(name[1:]))
    if name[:1] == "P" and name[1:].isdigit():
        return projective_space(int(name[1:]))
    raise InputError("unknown fixture %r" % name)
