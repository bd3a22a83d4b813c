import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jacobi_tqft.diagram import LinComb, build, disjoint_union, theta
from jacobi_tqft.maps import MapError, UnsupportedInput, comb, rho
from jacobi_tqft.relations import equal, normal_form, quotient_basis
from jacobi_tqft.skeleton import EMPTY, SkeletonError, chain_graph, intervals
from jacobi_tqft.tqft import TQFTVector, genus_profile, include, pair, rename_component

TH = LinComb.of(theta())


def basis_upto(g, n):
    return [LinComb.of(b) for m in range(n + 1) for b in quotient_basis(chain_graph(g), m).basis]


def pairable(g, n):
    out = []
    B = basis_upto(g, n)
    for a in B:
        for b in B:
            try:
                out.append((a, b, pair(a, b, n)))
            except UnsupportedInput:
                pass
    return out


def test_vector_profiles():
    assert TQFTVector.empty(0).profile == ()
    assert TQFTVector.empty(2).profile == (2,)
    with pytest.raises(SkeletonError):
        TQFTVector(LinComb(chain_graph(1)), profile=(2,))
    with pytest.raises(SkeletonError):
        genus_profile(intervals(1))


def test_include_renames_clash():
    v = include(TQFTVector.empty(1), TQFTVector.empty(2))
    assert v.profile == (1, 2)
    assert [c.id for c in v.value.skeleton.components] == ["G", "G2"]
    w = include(TQFTVector.empty(0), TQFTVector.empty(1))
    assert w.profile == (1,)


def test_rename_component():
    x = rho(comb(2))
    y = rename_component(x, "G", "H")
    assert [c.id for c in y.skeleton.components] == ["H"]
    assert {e for d, _ in y.items() for e, _ in d.legs} == {"H.1"}


def test_genus_zero_pairing_is_union():
    assert pair(TH, TH, 1) == normal_form(disjoint_union(TH, TH))
    one = LinComb.of(theta()) * 0 + LinComb.of(build(EMPTY, [], 0, []))
    assert pair(one, one, 3) == one


@pytest.mark.parametrize("g, n", [(1, 1), (1, 2), (2, 1)])
def test_pair_symmetric(g, n):
    for a, b, ab in pairable(g, n):
        assert equal(ab, pair(b, a, n))


@pytest.mark.parametrize("g, n", [(1, 1), (1, 2), (2, 1)])
def test_degree_bookkeeping(g, n):
    for a, b, ab in pairable(g, n):
        expect = max(a.degrees()) + max(b.degrees()) - n * g
        assert all(k == expect for k in ab.degrees())


@pytest.mark.parametrize("g, n", [(1, 1), (2, 1)])
def test_theta_equivariance(g, n):
    for a, b, ab in pairable(g, n):
        lhs = pair(disjoint_union(TH, a), b, n, cap=4)
        assert equal(lhs, disjoint_union(TH, ab), cap=4)


@settings(max_examples=20)
@given(st.data())
def test_bilinear(data):
    g, n = data.draw(st.sampled_from([(1, 1), (1, 2), (2, 1)]))
    B = [x for x in basis_upto(g, n)]
    a1, a2, b = (data.draw(st.sampled_from(B)) for _ in range(3))
    s, t = data.draw(st.integers(-3, 3)), data.draw(st.integers(-3, 3))
    try:
        lhs = pair(a1 * s + a2 * t, b, n)
        rhs = pair(a1, b, n) * s + pair(a2, b, n) * t
    except UnsupportedInput:
        return
    assert equal(lhs, rhs)


def test_match_permutation():
    g2 = chain_graph(2)
    x = LinComb.of(build(g2, [("G.1", 0), ("G.1", 1)], 0, [(("L", 0), ("L", 1))]))
    y = LinComb.of(build(g2, [("G.2", 0), ("G.2", 1)], 0, [(("L", 0), ("L", 1))]))
    # straight: each circle carries one chord; swapped: one circle gets both
    straight = pair(x, y, 1)
    (d, c), = straight.items()
    assert d.nv == 0 and d.loops == 2
    with pytest.raises(UnsupportedInput):
        pair(x, y, 1, match=[1, 0])
    assert pair(x, y, 2, match=[1, 0]).is_zero()
    with pytest.raises(MapError):
        pair(x, y, 1, match=[0, 0])


def test_genus_mismatch():
    with pytest.raises(MapError):
        pair(LinComb(chain_graph(1)), LinComb(chain_graph(2)), 1)


def test_wheel_through_pairing():
    # the closed two-comb paired with nothing at n = 1 is minus theta
    assert equal(pair(rho(comb(2)), LinComb.of(build(chain_graph(1), [], 0, [])), 1), TH * -1)
