import random

import pytest

from tests.conftest import POWERS_WINDOW, I_GENS, J_GENS
from torreg.lattice import Window, minimal_elements
from torreg.rees import (ReesRing, bounds_only, degree_bounds_q, inner_bound, outer_bound,
                         poly_str, rees_ideal, rees_resolution, reg_s_minima, schreyer_resolution,
                         shift_a, sharp_inner_bound, verify_powers_theorem)
from torreg.ring import MonomialModule, ideal_power


def test_rees_ideal_examples(H2):
    assert [poly_str(p, 4) for p in rees_ideal(H2, I_GENS)] == ["- x0*x3*T2 + x1^2*x2^4*T1"]
    assert [poly_str(p, 4) for p in rees_ideal(H2, J_GENS)] == ["x0^3*x1*T1 - x3*T2"]
    assert rees_ideal(H2, [(1, 0, 0, 1)]) == []


@pytest.mark.parametrize("gens,shift", [(I_GENS, ((1, 3), 1)), (J_GENS, ((1, 2), 1))])
def test_resolution_shifts(H2, gens, shift):
    F = rees_resolution(H2, gens)
    assert F.length == 1
    assert F.shifts[1] == [shift]
    assert F.compose_is_zero() and F.is_homogeneous()


def test_zero_ideal_resolution(H2):
    R = ReesRing(H2, [(1, 0, 0, 1)])
    F = schreyer_resolution(R, [])
    assert F.length == 0
    assert shift_a(F, H2.nef) == (0, 0)


def test_shift_a(H2):
    assert shift_a(rees_resolution(H2, I_GENS), H2.nef) == (1, 3)
    assert shift_a(rees_resolution(H2, J_GENS), H2.nef) == (1, 2)


def test_degree_bounds(H2):
    assert degree_bounds_q([(1, 1), (0, 2)], H2.nef) == ([(1, 2)], [(0, 1)])
    assert degree_bounds_q([(0, 1), (1, 1)], H2.nef) == ([(1, 1)], [(0, 1)])
    assert degree_bounds_q([(2, 3)], H2.nef) == ([(2, 3)], [(2, 3)])


def test_three_generator_resolution_is_exact(H2):
    gens = [(1, 0, 0, 1), (1, 0, 1, 0), (0, 1, 1, 0)]
    F = rees_resolution(H2, gens)
    assert F.compose_is_zero() and F.is_homogeneous()
    rng = random.Random(5)
    for _ in range(12):
        deg = ((rng.randint(-1, 4), rng.randint(0, 4)), rng.randint(0, 3))
        h = F.homology(deg)
        assert all(x == 0 for x in h[1:]), (deg, h)


@pytest.mark.parametrize("gens", [I_GENS, J_GENS, [(1, 0, 0, 1), (1, 0, 1, 0), (0, 1, 1, 0)]])
def test_rees_slices_small_window(H2, gens):
    F = rees_resolution(H2, gens)
    for n in (1, 2):
        In = MonomialModule.from_ideal(H2, ideal_power(gens, n))
        for b in Window.square(-1, 4).points():
            assert F.homology((b, n))[0] == In.hilbert_function(b), (n, b)


def test_bounds_examples(H2):
    regS = reg_s_minima(H2)
    assert regS == [(0, 1), (1, 0)]
    inner = inner_bound(H2, 1, (1, 2), (1, 3), regS, POWERS_WINDOW)
    assert inner.minima(H2.nef) == [(2, 6), (3, 5)]
    inner2 = inner_bound(H2, 2, (1, 2), (1, 3), regS, POWERS_WINDOW)
    assert inner2.description == "(3,7) + reg S"
    assert outer_bound(H2, 2, (0, 1), POWERS_WINDOW).minima(H2.nef) == [(0, 2)]
    assert outer_bound(H2, 4, (0, 1), POWERS_WINDOW).minima(H2.nef) == [(0, 4)]
    F = rees_resolution(H2, I_GENS)
    P = [H2.degree(g) for g in I_GENS]
    sharp = sharp_inner_bound(H2, 1, P, F, regS, POWERS_WINDOW)
    assert inner.points <= sharp.points


def test_principal_ideal_bounds_are_tight(H2):
    g = [(1, 0, 0, 1)]
    regS = reg_s_minima(H2)
    for r in verify_powers_theorem(H2, g, 3, Window.square(-1, 8)):
        expect = sorted((m[0] + r.n, m[1] + r.n) for m in regS)
        assert r.reg_minima == expect
        assert r.inner.minima(H2.nef) == expect
        assert r.sharp.minima(H2.nef) == expect
        assert r.ok


def test_bounds_only_symbolic(H2):
    out = bounds_only(H2, [(1, 1), (0, 2)], 3)
    assert out["inner"] == "(3,6) + a + reg S" and out["a"] is None
    assert out["outer"] == "(0,3) + Nef"
    assert bounds_only(H2, [(1, 1), (0, 2)], 1, (1, 3))["inner"] == "(2,5) + reg S"


def test_shifted_inner_translates_lie_in_reg(H2):
    # the translates n*q1 + (1,1) + reg S sit inside reg(I^n)
    regS = reg_s_minima(H2)
    for gens, q1, reports in [(I_GENS, (1, 2), None), (J_GENS, (1, 1), None)]:
        for r in verify_powers_theorem(H2, gens, 4, POWERS_WINDOW):
            base = (r.n * q1[0] + 1, r.n * q1[1] + 1)
            dark = inner_bound(H2, 1, (0, 0), base, regS, POWERS_WINDOW)
            reg = set()
            for p in POWERS_WINDOW.points():
                if any(H2.nef.contains((p[0] - m[0], p[1] - m[1])) for m in r.reg_minima):
                    reg.add(p)
            assert dark.points <= reg
