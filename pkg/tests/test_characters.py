"""Weight multisets, symmetric/exterior powers, the knapsack counter,
and Freudenthal multiplicities."""

import random

import pytest

from nilcoh.roots import build_root_system
from nilcoh.characters import (
    WeightMultiset, decompose_into_irreducibles, exterior_power,
    full_sym_character, full_weight_multiset, irreducible_dominant_weights,
    sym_power_count,
)
from nilcoh.subspaces import full_nilradical, quotient_weights, subspace_from_diagram
from nilcoh.cohomology import weyl_dimension


def e6():
    return build_root_system("E6")


def binom(n, k):
    out = 1
    for i in range(k):
        out = out * (n - i) // (i + 1)
    return out


def test_exterior_power_d5a1_line():
    rs = e6()
    q = WeightMultiset.from_weights([rs.parse_weight("{0 1 0 0 0 / 0}"),
                                     rs.parse_weight("{1 1 0 0 0 / 0}")])
    e2 = exterior_power(q, 2)
    assert e2.the_weight() == rs.parse_weight("{1 2 0 0 0 / 0}")
    e0 = exterior_power(q, 0)
    assert e0.the_weight() == rs.zero()
    assert len(exterior_power(q, 3)) == 0


def test_exterior_power_a5_line():
    rs = e6()
    sub = subspace_from_diagram(rs.parse_diagram("[2 1 0 1 2 / 1]"))
    sup = subspace_from_diagram(rs.parse_diagram("[2 0 2 0 2 / 0]"))
    q = quotient_weights(sub, sup)
    e4 = exterior_power(q, 4)
    assert e4.the_weight() == rs.parse_weight("{0 1 4 1 0 / 1}")


def test_exterior_sizes_sum_to_power_of_two():
    rs = e6()
    q = quotient_weights(subspace_from_diagram(rs.parse_diagram("[2 1 0 1 2 / 1]")),
                         subspace_from_diagram(rs.parse_diagram("[2 0 2 0 2 / 0]")))
    total = sum(len(exterior_power(q, j)) for j in range(len(q) + 1))
    assert total == 2 ** len(q)


def test_sym_power_count_basics():
    rs = e6()
    u = full_nilradical(rs)
    theta = rs.highest_roots[0]
    assert sym_power_count(u, 0, rs.zero()) == 1
    assert sym_power_count(u, 0, theta) == 0
    assert sym_power_count(u, 1, theta) == 1
    # brute force over the 36^2 pairs for n = 2, nu = 2*theta
    pairs = 0
    pos = list(u.dual_weights())
    for i in range(len(pos)):
        for j in range(i, len(pos)):
            if (pos[i] + pos[j]) == 2 * theta:
                pairs += 1
    assert pairs == 1
    assert sym_power_count(u, 2, 2 * theta) == 1


def test_sym_power_count_total_is_binomial():
    rs = build_root_system("A2")
    u = full_nilradical(rs)
    for n in range(5):
        ch = full_sym_character(u, n)
        assert len(ch) == binom(u.dim + n - 1, n)
        for w, m in ch:
            assert sym_power_count(u, n, w) == m


def test_full_sym_matches_point_counts_on_e6_sample():
    rs = e6()
    s = subspace_from_diagram(rs.parse_diagram("[0 0 0 0 0 / 2]"))
    for n in (0, 1, 2, 3):
        ch = full_sym_character(s, n)
        assert len(ch) == binom(s.dim + n - 1, n)
        for w, m in list(ch)[::3]:
            assert sym_power_count(s, n, w) == m


def test_full_sym_character_a1():
    rs = build_root_system("A1")
    u = full_nilradical(rs)
    for n in range(6):
        ch = full_sym_character(u, n)
        assert len(ch) == 1
        assert ch.the_weight() == n * rs.simple_roots[0]


def test_full_sym_budget_guard():
    rs = e6()
    u = full_nilradical(rs)
    with pytest.raises(ValueError):
        full_sym_character(u, 100)


def test_sl2cubed_s2_decomposition():
    rs = build_root_system("A1+A1+A1")
    cube = WeightMultiset.from_weights(
        [rs.weight(fund_coords=[a, b, c]) for a in (1, -1) for b in (1, -1) for c in (1, -1)])
    s2 = full_sym_character(cube, 2)
    assert len(s2) == 36
    dims = sorted(weyl_dimension(rs, hw) for hw, m in decompose_into_irreducibles(rs, s2)
                  for _ in range(m))
    assert dims == [3, 3, 3, 27]


def test_freudenthal_trivial_and_adjoint():
    rs = e6()
    assert list(irreducible_dominant_weights(rs, rs.zero())) == [(rs.zero(), 1)]
    theta = rs.highest_roots[0]
    dom = dict(irreducible_dominant_weights(rs, theta).mult)
    assert dom == {rs.zero(): 6, theta: 1}
    # adjoint weights are exactly the roots with multiplicity 1 plus 0^rank
    full = full_weight_multiset(rs, theta)
    assert len(full) == 78 == weyl_dimension(rs, theta)
    for b in rs.roots:
        assert full[b] == 1
    assert full[rs.zero()] == 6


def test_freudenthal_reproduces_dimension_on_sample():
    random.seed(7)
    for name in ["A2", "B2", "G2"]:
        rs = build_root_system(name)
        for _ in range(4):
            mu = rs.weight(fund_coords=[random.randint(0, 2) for _ in range(rs.rank)])
            full = full_weight_multiset(rs, mu)
            assert len(full) == weyl_dimension(rs, mu)


def test_freudenthal_rejects_non_dominant():
    rs = e6()
    with pytest.raises(ValueError):
        irreducible_dominant_weights(rs, -rs.highest_roots[0])


def test_twist_preserves_sizes():
    rs = e6()
    q = quotient_weights(subspace_from_diagram(rs.parse_diagram("[0 1 1 2 0 / 2]")),
                         subspace_from_diagram(rs.parse_diagram("[0 2 0 2 0 / 2]")))
    t = q.twist(rs.highest_roots[0])
    assert len(t) == len(q)
    assert t.twist(-rs.highest_roots[0]) == q
