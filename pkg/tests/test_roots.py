"""Root system and Weyl group unit tests."""

import pytest

from nilcoh.roots import CartanType, build_root_system


def weyl_order_formula(ctype):
    # independent of the BFS enumeration: classical order formulas
    table = {"A": lambda n: _fact(n + 1), "B": lambda n: 2**n * _fact(n),
             "C": lambda n: 2**n * _fact(n), "D": lambda n: 2**(n - 1) * _fact(n),
             "E": lambda n: {6: 51840, 7: 2903040, 8: 696729600}[n],
             "F": lambda n: 1152, "G": lambda n: 12}
    out = 1
    for fam, r in ctype.components:
        out *= table[fam](r)
    return out


def _fact(n):
    out = 1
    for k in range(2, n + 1):
        out *= k
    return out


def test_e6_basic_facts():
    rs = build_root_system("E6")
    assert len(rs.roots) == 72
    assert len(rs.positive_roots) == 36
    assert rs.pairings(rs.rho) == (1, 1, 1, 1, 1, 1)
    theta = rs.highest_roots[0]
    assert theta == rs.parse_weight("{1 2 3 2 1 / 2}")


def test_e6_weyl_group_size_and_lengths():
    rs = build_root_system("E6")
    mats, lengths = rs.weyl_stack()
    assert len(mats) == 51840 == weyl_order_formula(rs.ctype)
    assert int(lengths.max()) == 36  # longest element has length |Phi+|
    # length from the matrix (positive roots sent negative) agrees with BFS depth
    for w in list(rs.weyl_elements())[:40]:
        assert rs.length_of_matrix(w.matrix) == w.length


@pytest.mark.parametrize("name,nroots", [
    ("A1", 2), ("A2", 6), ("B2", 8), ("C2", 8), ("G2", 12), ("A3", 12),
    ("D4", 24), ("F4", 48), ("A1+A1+A1", 6), ("A2+A2+A1", 14),
])
def test_root_counts_and_weyl_orders(name, nroots):
    rs = build_root_system(name)
    assert len(rs.roots) == nroots
    mats, _ = rs.weyl_stack()
    assert len(mats) == weyl_order_formula(rs.ctype)


def test_roots_sum_to_zero_and_simple_permutation():
    rs = build_root_system("E6")
    total = rs.zero()
    for b in rs.roots:
        total = total + b
    assert total.is_zero()
    # s_j permutes the positive roots other than alpha_j
    for j in range(rs.rank):
        others = {b.c for b in rs.positive_roots if b != rs.simple_roots[j]}
        image = {rs.reflect(b, j).c for b in rs.positive_roots if b != rs.simple_roots[j]}
        assert image == others


def test_pairing_examples_from_e6():
    rs = build_root_system("E6")
    for j in range(rs.rank):
        assert rs.pairing(rs.simple_roots[j], j) == 2
    assert rs.pairing(rs.simple_roots[2], 1) == -1  # <a3, a2^vee>
    w = rs.parse_weight("{1 2 2 2 1 / 0}")
    assert rs.pairing(w, 5) == -2


def test_reflect_and_dot_reflect():
    rs = build_root_system("E6")
    for j in range(rs.rank):
        assert rs.reflect(rs.simple_roots[j], j) == -rs.simple_roots[j]
    # dot_reflect with m = 0 adds alpha_j... paper step: {1 2 0 0 0/0} -> {1 2 1 0 0/0}
    w = rs.parse_weight("{1 2 0 0 0 / 0}")
    got = rs.dot_reflect(w, 2)
    assert got == rs.parse_weight("{1 2 1 0 0 / 0}")
    # fixed point of the dot action at pairing -1
    v = rs.parse_weight("{0 1 0 0 0 / 0}")
    assert rs.pairing(v, 2) == -1
    assert rs.dot_reflect(v, 2) == v


def test_weyl_element_stream_small():
    rs = build_root_system("A1")
    elems = list(rs.weyl_elements())
    assert [e.length for e in elems] == [0, 1]
    rs2 = build_root_system("A2")
    lens = sorted(e.length for e in rs2.weyl_elements())
    assert lens == [0, 1, 1, 2, 2, 3]


def test_a1_rho_is_half_alpha():
    rs = build_root_system("A1")
    assert rs.rho.root_coords()[0].numerator == 1
    assert rs.rho.root_coords()[0].denominator == 2


def test_fundamental_weights_pair_as_identity():
    for name in ["E6", "B2", "G2", "A2+A2+A1"]:
        rs = build_root_system(name)
        for j, f in enumerate(rs.fundamental_weights):
            assert rs.pairings(f) == tuple(int(i == j) for i in range(rs.rank))


def test_weight_text_roundtrip():
    rs = build_root_system("E6")
    w = rs.parse_weight("{2 4 6 4 2 / 4}")
    assert w == 2 * rs.highest_roots[0]
    assert rs.format_weight(w) == "{2 4 6 4 2 / 4}"
    a13 = build_root_system("A1+A1+A1")
    v = a13.parse_weight("(-2,-2,0)@fund")
    assert a13.pairings(v) == (-2, -2, 0)
    v2 = a13.parse_weight(a13.format_weight(v))
    assert v2 == v


def test_longest_element_of_chain():
    rs = build_root_system("E6")
    # w0 of the A2 on (a3, a6) sends {1 2 2 2 1/0} to {1 2 4 2 1/2}
    w0 = rs.longest_element_of_chain([2, 5])
    w = rs.parse_weight("{1 2 2 2 1 / 0}")
    assert rs.apply_matrix(w0, w) == rs.parse_weight("{1 2 4 2 1 / 2}")
    # w0 of the full A3 chain (a3,a4,a5): {1 2 1 0 0/0} -> {1 2 2 2 1/0}
    w0b = rs.longest_element_of_chain([2, 3, 4])
    assert rs.apply_matrix(w0b, rs.parse_weight("{1 2 1 0 0 / 0}")) == w


def test_invalid_types_rejected():
    with pytest.raises(ValueError):
        build_root_system("E9")
    with pytest.raises(ValueError):
        build_root_system("H3")
    with pytest.raises(ValueError):
        CartanType([("F", 5)]) and build_root_system("F5")


def test_graph_automorphism_of_e6():
    rs = build_root_system("E6")
    perm = rs.graph_automorphism([4, 3, 2, 1, 0, 5])
    w = rs.parse_weight("{2 2 2 1 0 / 1}")
    assert rs.permute_weight(perm, w) == rs.parse_weight("{0 1 2 2 2 / 1}")
    with pytest.raises(ValueError):
        rs.graph_automorphism([1, 0, 2, 3, 4, 5])
