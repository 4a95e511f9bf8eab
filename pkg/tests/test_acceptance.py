"""End-to-end acceptance checks, one test per criterion.

A summary line per criterion is printed at the end of the run (see conftest).
"""

import random
import time
from contextlib import contextmanager

import pytest

from tests.conftest import POWERS_WINDOW, I_GENS, J_GENS, rank3_module
from torreg.cohomology import (CechShape, default_cap, engine_for, oracle_for,
                               pic_local_cohomology, taylor_resolution)
from torreg.groebner import module_resolution
from torreg.lattice import Window, add, hilbert_basis, minimal_elements, nef_leq, sub
from torreg.rees import (poly_str, rees_ideal, rees_resolution, shift_a,
                         verify_powers_theorem)
from torreg.regularity import (check_containment_bounds, reg_region, try_certificate)
from torreg.ring import MonomialModule, ideal_power
from torreg.toric import hirzebruch, p1xp1

MODULE_WINDOW = Window((-7, -1), (7, 7))


@contextmanager
def time_limit(seconds):
    t0 = time.perf_counter()
    yield
    elapsed = time.perf_counter() - t0
    assert elapsed < seconds, "took %.1fs, limit %ss" % (elapsed, seconds)


def _nef_points(X, W):
    return {p for p in W.points() if X.nef.contains(p)}


def test_criterion_01_cox_data():
    with time_limit(1):
        X = hirzebruch(2)
        assert [X.degree(tuple(int(k == j) for k in range(4))) for j in range(4)] == \
            [(1, 0), (-2, 1), (1, 0), (0, 1)]
        assert sorted(X.irrelevant_generators) == sorted(
            [(0, 0, 1, 1), (1, 0, 0, 1), (1, 1, 0, 0), (0, 1, 1, 0)])
        assert sorted(X.nef.rays) == [(0, 1), (1, 0)]
        assert sorted(X.eff.rays) == [(-2, 1), (1, 0)]


@pytest.mark.parametrize("t", [1, 2, 3])
def test_criterion_02_reg_S(t):
    with time_limit(30):
        X = hirzebruch(t)
        W = Window.square(-3, 3)
        reg = reg_region(MonomialModule.ring(X), W)
        pts = set(reg.points)
        assert pts <= _nef_points(X, W)
        if t == 1:
            assert pts == _nef_points(X, W)
        if t == 2:
            assert reg.minima == [(0, 1), (1, 0)]
            assert pts == _nef_points(X, W) - {(0, 0)}


def test_criterion_03_torsion_example(torsion_quotient):
    with time_limit(60):
        X = torsion_quotient.variety
        reg = reg_region(torsion_quotient, MODULE_WINDOW)
        assert set(reg.points) == {p for p in MODULE_WINDOW.points() if X.eff.contains(p)}
        assert len(reg.minima) >= 4
        for a in reg.minima:
            for b in reg.minima:
                assert a == b or not (nef_leq(a, b, X.nef) or nef_leq(b, a, X.nef))
        rep = check_containment_bounds(torsion_quotient, reg)
        assert rep.eff_holds and not rep.nef_holds


def test_criterion_04_degrees_do_not_bound(degs_ideal):
    with time_limit(30):
        X = degs_ideal.variety
        reg = reg_region(degs_ideal, Window.square(-4, 4))
        assert (1, 1) in reg
        assert (2, 0) in [tuple(g) for g in degs_ideal.generator_degrees]
        assert not nef_leq((2, 0), (1, 1), X.nef)


def test_criterion_05_torsion_free_module(rank3):
    with time_limit(60):
        reg = reg_region(rank3, MODULE_WINDOW)
        assert reg.minima == [(-1, 4), (1, 3)]
        assert all(rank3.variety.nef.contains(sub(p, (-3, 2))) for p in reg.points)


POWERS_MINIMA = {
    "I": [[(1, 3), (2, 2)], [(2, 4)], [(3, 6)], [(4, 8)]],
    "J": [[(0, 2), (2, 1)], [(0, 4), (1, 3), (3, 2)], [(0, 5), (2, 4), (4, 3)],
          [(0, 7), (1, 6), (3, 5), (5, 4)]],
}


def test_criterion_06_powers(H2):
    with time_limit(300):
        for name, gens in (("I", I_GENS), ("J", J_GENS)):
            reports = verify_powers_theorem(H2, gens, 4, POWERS_WINDOW)
            for r, expected in zip(reports, POWERS_MINIMA[name]):
                assert sorted(r.reg_minima) == sorted(expected), (name, r.n)
                assert r.verdicts["inner_in_reg"] and r.verdicts["sharp_in_reg"]
                assert r.verdicts["reg_in_outer"], (name, r.n, r.witnesses)
                assert r.outer.minima(H2.nef) == [(0, r.n)]
                assert r.outer.points == {p for p in POWERS_WINDOW.points()
                                          if H2.nef.contains(sub(p, (0, r.n)))}


def _random_ideal(rng, X):
    gens = set()
    while not gens:
        for _ in range(rng.randint(1, 3)):
            g = tuple(rng.randint(0, 3) for _ in range(X.nvars))
            if any(g):
                gens.add(g)
    return sorted(gens)


def test_criterion_07_oracle_equivalence():
    rng = random.Random(20261014)
    varieties = [hirzebruch(1), hirzebruch(2), p1xp1()]
    W = Window.square(-4, 4)
    checked = 0
    with time_limit(600):
        for k in range(50):
            X = varieties[k % 3]
            M = MonomialModule.from_ideal(X, _random_ideal(rng, X))
            eng, orc = engine_for(M), oracle_for(M)
            cap = default_cap(M, W)
            for b in W.points():
                assert tuple(eng.pic_dims(b)) == tuple(orc.pic_dims(b, cap)), (M.gens, b)
            checked += 1
    assert checked == 50


def _random_presented(rng, X):
    """Cokernel of one column of monomials with no common factor: torsion-free
    (the entries generate an ideal of height at least two)."""
    while True:
        k = rng.randint(2, 3)
        col = [tuple(rng.randint(0, 3) for _ in range(X.nvars)) for _ in range(k)]
        if any(all(c[j] > 0 for c in col) for j in range(X.nvars)):
            continue
        if not all(any(c) for c in col):
            continue
        D = tuple(rng.randint(-1, 3) for _ in range(X.picard_rank))
        shifts = [sub(D, X.degree(c)) for c in col]
        return MonomialModule.presented(X, shifts, [[(j, 1 if j else -1, c)
                                                     for j, c in enumerate(col)]],
                                        torsion_free=True, label="random")


def _window_around(M, pad=2):
    degs = [tuple(g) for g in M.generator_degrees]
    rho = len(degs[0])
    lo = tuple(min(d[j] for d in degs) - pad for j in range(rho))
    hi = tuple(max(d[j] for d in degs) + pad for j in range(rho))
    return Window(lo, hi)


def test_criterion_08_certificate_soundness():
    rng = random.Random(8)
    H1, H2, H3, P = hirzebruch(1), hirzebruch(2), hirzebruch(3), p1xp1()
    modules = [MonomialModule.ring(X) for X in (H1, H2, H3, P)]
    modules += [rank3_module(H2), MonomialModule.from_ideal(H2, I_GENS),
                MonomialModule.from_ideal(H2, J_GENS),
                MonomialModule.from_ideal(H2, [(1, 0, 0, 1), (1, 0, 1, 0), (0, 1, 1, 0)]),
                MonomialModule.quotient(H2, [(0, 0, 1, 0), (0, 0, 0, 1)])]
    modules += [_random_presented(rng, (H1, H2, P)[k % 3]) for k in range(20)]
    certified = {"fixture": 0, "random": 0}
    with time_limit(300):
        for M in modules:
            W = Window.square(-4, 4) if M.label != "rank3" else MODULE_WINDOW
            if M.label == "random":
                W = _window_around(M)
            reg = reg_region(M, W)
            inside = set(reg.points)
            for d in W.points():
                cert = try_certificate(M, d)
                if cert is not None:
                    certified["random" if M.label == "random" else "fixture"] += 1
                    assert d not in inside, (M.label, d)
    assert certified["fixture"] > 0 and certified["random"] > 0


def test_criterion_09_rees_slices(H2):
    with time_limit(120):
        assert [poly_str(p, 4) for p in rees_ideal(H2, I_GENS)] == \
            ["- x0*x3*T2 + x1^2*x2^4*T1"]
        assert [poly_str(p, 4) for p in rees_ideal(H2, J_GENS)] == ["x0^3*x1*T1 - x3*T2"]
        for gens, a in ((I_GENS, (1, 3)), (J_GENS, (1, 2))):
            F = rees_resolution(H2, gens)
            assert shift_a(F, H2.nef) == a
            for n in (1, 2, 3):
                In = MonomialModule.from_ideal(H2, ideal_power(gens, n))
                for b in POWERS_WINDOW.points():
                    assert F.homology((b, n))[0] == In.hilbert_function(b), (gens, n, b)


def _fine_compose_is_zero(res):
    # the monomial factor of a composite only depends on the end points
    for j in range(2, len(res.maps)):
        for img in res.maps[j]:
            acc = {}
            for mid, c1 in img:
                for tgt, c2 in res.maps[j - 1][mid]:
                    acc[tgt] = acc.get(tgt, 0) + c1 * c2
            if any(acc.values()):
                return False
    return True


def _cech_compose_is_zero(shape):
    for T, out in shape.cofaces.items():
        acc = {}
        for T1, s1 in out:
            for T2, s2 in shape.cofaces[T1]:
                acc[T2] = acc.get(T2, 0) + s1 * s2
        if any(acc.values()):
            return False
    return True


def test_criterion_10_invariants(H2, rank3, torsion_quotient, degs_ideal):
    with time_limit(120):
        fixtures = [hirzebruch(1), H2, hirzebruch(3), p1xp1()]
        # partial order axioms of the nef order
        pts = list(Window.square(-2, 2).points())
        for X in fixtures:
            for a in pts:
                assert nef_leq(a, a, X.nef)
                for b in pts:
                    if a != b and nef_leq(a, b, X.nef):
                        assert not nef_leq(b, a, X.nef)
                    for c in pts[::5]:
                        if nef_leq(a, b, X.nef) and nef_leq(b, c, X.nef):
                            assert nef_leq(a, c, X.nef)
        # upward closure and antichain minima
        for M, W in [(MonomialModule.ring(H2), Window.square(-3, 3)),
                     (torsion_quotient, MODULE_WINDOW), (degs_ideal, Window.square(-4, 4)),
                     (rank3, MODULE_WINDOW)]:
            reg = reg_region(M, W)
            S = set(reg.points)
            for p in S:
                for c in hilbert_basis(H2.nef):
                    if add(p, c) in W:
                        assert add(p, c) in S
            assert minimal_elements(reg.minima, H2.nef) == reg.minima
            assert all(any(nef_leq(m, p, H2.nef) for m in reg.minima) for p in S)
        # d o d = 0: Cech complexes, Taylor, Groebner and Rees resolutions
        for X in fixtures:
            assert _cech_compose_is_zero(CechShape(X))
        for M in (torsion_quotient, degs_ideal, MonomialModule.quotient(H2, I_GENS)):
            assert _fine_compose_is_zero(taylor_resolution(M))
        assert _fine_compose_is_zero(module_resolution(rank3))
        for gens in (I_GENS, J_GENS, [(1, 0, 0, 1), (1, 0, 1, 0), (0, 1, 1, 0)]):
            assert rees_resolution(H2, gens).compose_is_zero()
        # shift equivariance, H^0 = H^1 = 0 and nef vanishing for S
        for X in fixtures:
            S = MonomialModule.ring(X)
            W = Window.square(-3, 3)
            e = engine_for(S)
            for a in [(1, 0), (0, 1), (-1, 2)]:
                Sa = MonomialModule.free(X, [a])
                ea = engine_for(Sa)
                for b in W.points():
                    assert tuple(ea.pic_dims(b)) == tuple(e.pic_dims(sub(b, a)))
            for b in W.points():
                dims = e.pic_dims(b)
                assert dims[0] == 0 and dims[1] == 0
                if X.nef.contains(b):
                    assert not any(dims[1:])
            assert pic_local_cohomology(S, (0, 0), 0)[0] == 0
