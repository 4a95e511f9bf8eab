import random

import pytest
from hypothesis import given, settings, strategies as st

from tests.conftest import rank3_module
from torreg.cohomology import pic_local_cohomology
from torreg.errors import InputError
from torreg.lattice import Window, add, hilbert_basis, sub
from torreg.regularity import (RegularityConfig, _lambdas, check_containment_bounds,
                               common_bounds, h0_vanishes, in_upset, is_d_regular,
                               nonregularity_certificate, reg_region, saturation,
                               try_certificate)
from torreg.ring import MonomialModule, truncation_generated_in_degree

MODULE_WINDOW = Window((-7, -1), (7, 7))


@pytest.fixture(scope="module")
def regions(H2, rank3, torsion_quotient, degs_ideal):
    S = MonomialModule.ring(H2)
    return {
        "S": (S, reg_region(S, Window.square(-3, 3))),
        "rank3": (rank3, reg_region(rank3, MODULE_WINDOW)),
        "quotient": (torsion_quotient, reg_region(torsion_quotient, MODULE_WINDOW)),
        "degs": (degs_ideal, reg_region(degs_ideal, Window.square(-4, 4))),
    }


def test_verdict_examples(H2, degs_ideal):
    S = MonomialModule.ring(H2)
    v = is_d_regular(S, (0, 0), Window.square(-4, 4))
    assert v.status == "NotRegular" and v.witness == (3, (0, -2), 1)
    assert is_d_regular(S, (1, 0), Window.square(-4, 4)).status == "Regular"
    assert is_d_regular(degs_ideal, (1, 1), Window.square(-4, 4)).regular
    with pytest.raises(InputError, match="window must contain d"):
        is_d_regular(S, (9, 9), Window.square(-4, 4))


def test_region_examples(H2, regions):
    _, rS = regions["S"]
    assert rS.minima == [(0, 1), (1, 0)]
    assert set(rS.points) == {p for p in Window.square(-3, 3).points()
                              if H2.nef.contains(p) and p != (0, 0)}
    _, rq = regions["quotient"]
    assert set(rq.points) == {p for p in MODULE_WINDOW.points() if H2.eff.contains(p)}
    assert len(rq.minima) >= 4
    _, r5 = regions["rank3"]
    assert r5.minima == [(-1, 4), (1, 3)]
    assert all(H2.nef.contains(sub(p, (-3, 2))) for p in r5.points)


@pytest.mark.parametrize("name", ["S", "rank3", "quotient", "degs"])
def test_upward_closed_and_minima(H2, regions, name):
    _, reg = regions[name]
    pts = set(reg.points)
    for p in pts:
        for c in hilbert_basis(H2.nef):
            q = add(p, c)
            if q in reg.window:
                assert q in pts
        assert in_upset(p, reg.minima, H2.nef)
    for a in reg.minima:
        for b in reg.minima:
            if a != b:
                assert not H2.nef.contains(sub(b, a))


@pytest.mark.parametrize("name", ["S", "rank3", "quotient", "degs"])
def test_witnesses_replay(H2, regions, name):
    module, reg = regions[name]
    C = [H2.degree(tuple(int(k == j) for k in range(H2.nvars)))
         for j in range(H2.nvars)]
    rng = random.Random(name)
    items = sorted(reg.witnesses.items())
    for d, (i, b, dim) in rng.sample(items, min(15, len(items))):
        assert dim > 0
        assert pic_local_cohomology(module, b, i)[0] == dim
        if i == 0:
            ok = any(H2.nef.contains(sub(sub(b, c), d)) for c in C)
        else:
            ok = any(H2.nef.contains(sub(add(b, _combo(lam, C)), d))
                     for lam in _lambdas(i - 1, len(C)))
        assert ok, (d, i, b)


def _combo(lam, C):
    out = (0,) * len(C[0])
    for k, c in zip(lam, C):
        out = add(out, tuple(k * x for x in c))
    return out


def test_region_implies_truncation_generated(regions):
    for name in ("S", "degs"):
        module, reg = regions[name]
        for d in reg.minima:
            assert truncation_generated_in_degree(module, d, reg.window)[0]


def test_h0_and_saturation(H2, torsion_quotient):
    assert h0_vanishes(MonomialModule.ring(H2))
    assert not h0_vanishes(MonomialModule.quotient(H2, [(1, 0, 0, 0), (0, 1, 0, 0),
                                                        (0, 0, 1, 0), (0, 0, 0, 1)]))
    # <x2, x3> contains no power of B, so it stays saturated
    assert sorted(saturation(H2, [(0, 0, 1, 0), (0, 0, 0, 1)])) == [(0, 0, 0, 1), (0, 0, 1, 0)]
    assert h0_vanishes(torsion_quotient)


def test_certificates(H2, rank3, torsion_quotient, regions):
    S = MonomialModule.ring(H2)
    c = nonregularity_certificate(S, (-1, 1))
    assert sorted(c.chamber.rays) == [(-2, 1), (0, 1)]
    assert c.monomials == ((0, 0, 0, 1),)
    c5 = nonregularity_certificate(rank3, (-4, 4))
    assert sorted(c5.differences) == [(-3, 2), (-2, 2), (-1, 1)]
    with pytest.raises(InputError, match="not torsion-free"):
        nonregularity_certificate(torsion_quotient, (0, 0))
    with pytest.raises(InputError, match="inapplicable"):
        nonregularity_certificate(S, (1, 1))
    for name in ("S", "rank3", "degs"):
        module, reg = regions[name]
        for d in reg.window.points():
            if try_certificate(module, d) is not None:
                assert d not in reg


def test_zero_sheaf(H2):
    Z = MonomialModule.quotient(H2, [(0, 0, 0, 0)])
    with pytest.raises(InputError, match="sheaf is zero"):
        reg_region(Z, Window.square(-1, 1))


def test_containment_reports(H2, regions):
    rep = check_containment_bounds(*regions["rank3"])
    assert rep.nef_translates == [(-3, 2)] and rep.nef_holds and rep.eff_holds
    assert rep.eff_translates == [(-2, 2)]
    rq = check_containment_bounds(*regions["quotient"])
    assert rq.eff_holds and not rq.nef_holds
    rS = check_containment_bounds(*regions["S"])
    assert rS.nef_translates == [(0, 0)] and rS.nef_holds and not rS.violations


def test_common_bounds(H2):
    assert common_bounds([(1, 1), (0, 2)], H2.nef) == [(1, 2)]
    assert common_bounds([(1, 1), (0, 2)], H2.nef, upper=False) == [(0, 1)]


def test_oracles_agree_on_region(H2, rank3):
    w = Window((-3, 1), (2, 5))
    a = reg_region(rank3, w)
    b = reg_region(rank3, w, RegularityConfig(oracle="both"))
    assert a.points == b.points


@settings(max_examples=15, deadline=None)
@given(st.lists(st.tuples(*[st.integers(0, 2)] * 4), min_size=1, max_size=3))
def test_ideal_regions_upward_closed(gens):
    from torreg.toric import hirzebruch
    X = hirzebruch(1)
    gens = [g for g in gens if any(g)] or [(1, 0, 0, 0)]
    M = MonomialModule.from_ideal(X, gens)
    reg = reg_region(M, Window.square(-2, 3))
    pts = set(reg.points)
    for p in pts:
        for c in hilbert_basis(X.nef):
            if add(p, c) in reg.window:
                assert add(p, c) in pts
