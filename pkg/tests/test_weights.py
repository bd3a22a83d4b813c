from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jacobi_tqft.diagram import LinComb, build, disjoint_union, theta
from jacobi_tqft.relations import enumerate_diagrams, normal_form
from jacobi_tqft.skeleton import EMPTY, Circle, MarkedSkeleton, Skeleton
from jacobi_tqft.weights import (
    PRESETS,
    Ring,
    WeightData,
    WeightError,
    check_data,
    contract,
    eval_circle,
    eval_closed,
    eval_marked,
    even_model,
    exterior,
    format_weight_data,
    parse_rep,
    parse_weight_data,
    perturbed,
    so3,
    so3_adjoint,
    symplectic_toy,
    truncated_even,
)
from oracles import einsum_lie
from strategies import combos

CIRC = Skeleton((Circle("C"),))
TH = LinComb.of(theta())


def dense_T(w):
    T = np.zeros((w.rank,) * 3, dtype=object)
    for key, v in w.T.items():
        T[key] = v[0]
    return T


def test_so3_values(oracle_values):
    w = so3()
    assert eval_closed(TH, w) == (oracle_values["so3_theta"],)
    assert eval_closed(disjoint_union(TH, TH), w) == (oracle_values["so3_theta_squared"],)
    chord = LinComb.of(build(CIRC, [("C", 0), ("C", 1)], 0, [(("L", 0), ("L", 1))]))
    assert eval_circle(chord, w, so3_adjoint()) == (oracle_values["so3_adjoint_chord"],)


def test_against_einsum():
    w = so3()
    T = dense_T(w)
    Bt = np.array([[float(x) for x in r] for r in w.Bt])
    seen = 0
    for n in range(4):
        for d in enumerate_diagrams(EMPTY, n):
            got = contract(d, w).get((), (Fraction(0),))[0]
            assert got == einsum_lie(d, T, Bt), d
            seen += 1
    assert seen > 5


def test_loops_give_rank():
    loop = LinComb.of(build(EMPTY, [], 0, [], loops=2))
    assert eval_closed(loop, so3()) == (9,)
    assert eval_closed(loop, symplectic_toy())[0] == 4


@settings(max_examples=30)
@given(st.data())
def test_factors_through_quotient(data):
    w = data.draw(st.sampled_from([so3(), even_model()]))
    n = data.draw(st.integers(0, 3))
    x = data.draw(combos(EMPTY, n))
    assert eval_closed(x, w) == eval_closed(normal_form(x), w)


def test_even_ring_theta():
    w = even_model()
    R = w.ring
    assert eval_closed(TH, w) == R.scale(R.basis(2), 6)


@pytest.mark.parametrize("name", sorted(PRESETS))
def test_presets_pass_checks(name):
    if name == "so3-perturbed":
        return
    w = PRESETS[name]()
    assert check_data(w, 2).ok


def test_so3_with_adjoint_checks():
    report = check_data(so3(), 2, so3_adjoint())
    assert report.ok and report.checked > 50
    assert so3_adjoint().commutator_defect(so3()) == 0


def test_perturbation_is_caught():
    report = check_data(perturbed(), 2)
    assert not report.ok
    assert {k for k, *_ in report.failures} == {"IHX"}


def test_marked_strut_is_inverse_form():
    w = symplectic_toy()
    s = LinComb.of(build(MarkedSkeleton(2), [(1,), (2,)], 0, [(("L", 0), ("L", 1))]))
    part = eval_marked(s, w).parts[(1, 2)]
    R = w.ring
    for i in range(2):
        for j in range(2):
            assert part.get((i, j), R.zero()) == R.scalar(w.Bt[i][j])


def test_marked_antisymmetric_in_labels():
    w = symplectic_toy()
    R = w.ring
    tripod = LinComb.of(build(MarkedSkeleton(1), [(1,)] * 3, 1,
                              [(("L", k), ("V", 0, k)) for k in range(3)]))
    part = eval_marked(tripod, w).parts.get((1, 1, 1), {})
    for (a, b, c), v in part.items():
        assert part.get((b, a, c), R.zero()) == R.scale(v, -1)


def test_marked_needs_symplectic():
    s = LinComb.of(build(MarkedSkeleton(1), [(1,), (1,)], 0, [(("L", 0), ("L", 1))]))
    with pytest.raises(WeightError):
        eval_marked(s, so3())


def test_ring_validation():
    with pytest.raises(WeightError):
        Ring(("1", "x"), (0, 1), {(1, 1): {1: 1}})  # breaks grading
    with pytest.raises(WeightError):
        Ring(("1", "x", "y", "z"), (0, 1, 1, 2), {(1, 2): {3: 1}, (2, 1): {3: 1}})
    R = exterior(2)
    t1, t2 = R.basis(1), R.basis(2)
    assert R.mul(t1, t2) == R.scale(R.mul(t2, t1), -1)
    assert R.mul(t1, t1) == R.zero()
    E = truncated_even(2)
    assert E.mul(E.basis(2), E.basis(1)) == E.zero()


def test_weight_validation():
    with pytest.raises(WeightError):
        WeightData.from_entries("lie", 2, [[1, 0], [1, 1]], {})
    with pytest.raises(WeightError):
        WeightData.from_entries("symplectic", 2, [[0, 1], [-1, 0]], {(0, 0, 0): 1}, exterior(1))
    with pytest.raises(WeightError):
        WeightData.from_entries("lie", 2, [[1, 0], [0, 1]], {(0, 1, 2): 1})


@pytest.mark.parametrize("name", sorted(PRESETS))
def test_format_round_trip(name):
    w = PRESETS[name]()
    v = parse_weight_data(format_weight_data(w))
    assert (v.flavor, v.rank, v.B) == (w.flavor, w.rank, w.B)
    assert v.ring.names == w.ring.names
    assert {k: x for k, x in v.T.items() if any(x)} == {k: x for k, x in w.T.items() if any(x)}


def test_parse_errors():
    with pytest.raises(WeightError, match="line 3"):
        parse_weight_data("flavor lie\nrank 1\nwhat is this\n")
    with pytest.raises(WeightError):
        parse_weight_data("rank 1\nB\n1\n")
    with pytest.raises(WeightError):
        parse_rep("1 0\n0 1\n")


def test_parse_rep():
    rep = parse_rep("matrix\n0 1\n-1 0\nmatrix\n1 0\n0 1\n")
    assert rep.size == 2 and len(rep.matrices) == 2
