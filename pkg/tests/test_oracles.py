"""Recompute the frozen oracle values and compare against the package."""

import pytest

import oracles
from jacobi_tqft.diagram import reverse_component
from jacobi_tqft.maps import perfect_matchings
from jacobi_tqft.relations import enumerate_diagrams, generate_relations, normal_form
from jacobi_tqft.skeleton import EMPTY, Interval, Skeleton


def test_fixture_matches_recomputation(oracle_values):
    assert oracle_values["so3_theta"] == oracles.so3_theta() == 6
    assert oracle_values["so3_adjoint_chord"] == oracles.so3_adjoint_chord() == -6
    for n, v in oracle_values["circle_matchings"].items():
        assert v == oracles.double_factorial(2 * int(n) - 1)
        assert v == sum(1 for _ in perfect_matchings(range(2 * int(n))))


@pytest.mark.parametrize("n", [0, 1])
def test_closed_counts_recomputed(oracle_values, n):
    assert oracles.count_closed_diagrams(n) == oracle_values["closed_counts"][str(n)]


@pytest.mark.slow
def test_closed_counts_degree_two(oracle_values):
    assert oracles.count_closed_diagrams(2) == oracle_values["closed_counts"]["2"]
    assert len(enumerate_diagrams(EMPTY, 2)) == 3


def test_reversal_sign_oracle(oracle_values):
    assert oracle_values["reversal_signs"] == [-1]
    a, ra = Skeleton((Interval("a"),)), Skeleton((Interval("a", True),))
    stu = [r.vector for r in generate_relations(a, 1) if r.kind == "STU"]
    rev = [r.vector for r in generate_relations(ra, 1)]
    assert oracles.reversal_preserves_relations(-1, stu, rev, enumerate_diagrams(ra, 1))


def test_package_reversal_respects_relations():
    a = Skeleton((Interval("a"),))
    for n in (1, 2):
        for r in generate_relations(a, n):
            assert normal_form(reverse_component(r.vector, "a")).is_zero()
