"""Weighted-diagram subspaces, stability, edits, quotients."""

import pytest

from nilcoh.roots import build_root_system
from nilcoh.subspaces import (
    RootSet, WeightedDiagram, diagram_from_levi_regular, full_nilradical,
    grading_parts, levi_of_nilradical, nilradical_of_parabolic, parse_rootset,
    quotient_weights, subspace_from_diagram,
)


def e6():
    return build_root_system("E6")


def test_full_diagram_is_u():
    rs = e6()
    d = rs.parse_diagram("[2 2 2 2 2 / 2]")
    s = subspace_from_diagram(d)
    assert s.dim == 36
    assert s.members == full_nilradical(rs).members


def test_zero_diagram_is_empty():
    rs = e6()
    s = subspace_from_diagram(rs.parse_diagram("[0 0 0 0 0 / 0]"))
    assert s.dim == 0


def test_02020_matches_bruteforce_grade_scan_and_stability():
    rs = e6()
    d = rs.parse_diagram("[0 2 0 2 0 / 2]")
    s = subspace_from_diagram(d)
    # independent oracle: grade scan straight from the raw definition
    labels = (0, 2, 0, 2, 0, 2)
    expect = set()
    for b in rs.negative_roots:
        rc = b.root_coords()
        grade = sum(-int(c) * l for c, l in zip(rc, labels))
        if grade >= 2:
            expect.add(b.c)
    assert {b.c for b in s.members} == expect
    assert s.is_b_stable
    assert s.is_parabolic_stable(2)  # P_{alpha_3}


def test_nilradical_equals_02_diagram():
    rs = e6()
    assert nilradical_of_parabolic(rs, []).dim == 36
    assert nilradical_of_parabolic(rs, range(6)).dim == 0
    a = nilradical_of_parabolic(rs, [0, 2, 4])
    b = subspace_from_diagram(rs.parse_diagram("[0 2 0 2 0 / 2]"))
    assert a.members == b.members
    assert levi_of_nilradical(a) == (0, 2, 4)
    assert levi_of_nilradical(subspace_from_diagram(rs.parse_diagram("[1 0 1 0 1 / 0]"))) is None


def test_even_diagram_has_empty_grade_one():
    rs = e6()
    g = grading_parts(rs.parse_diagram("[2 2 2 2 2 / 2]"))
    assert g.grade(1) == ()
    assert g.omega.is_zero()


def test_omega_of_10101():
    rs = e6()
    g = grading_parts(rs.parse_diagram("[1 0 1 0 1 / 0]"))
    assert g.omega == -rs.parse_weight("{2 5 8 5 2 / 4}")


def test_edit_involution_and_guards():
    rs = e6()
    s = subspace_from_diagram(rs.parse_diagram("[1 0 1 0 1 / 0]"))
    beta = rs.parse_weight("{-1 -1 -1 0 0 / 0}")
    assert beta in s
    t = s.edit(remove=[beta])
    assert t.dim == s.dim - 1
    assert t.edit(add=[beta]).members == s.members
    with pytest.raises(ValueError):
        s.edit(add=[beta])  # already present
    with pytest.raises(ValueError):
        t.edit(remove=[beta])  # gone
    with pytest.raises(ValueError):
        s.edit(add=[rs.parse_weight("{1 1 0 0 0 / 0}")])  # not negative
    with pytest.raises(ValueError):
        RootSet(rs, [rs.parse_weight("{0 0 0 0 0 / 1}")])


def test_u2_intersection_for_orbit_a2():
    rs = e6()
    u2 = parse_rootset(rs, "[0 0 0 0 0 / 2] & [0 1 0 1 0 / 0]")
    a = subspace_from_diagram(rs.parse_diagram("[0 0 0 0 0 / 2]"))
    b = subspace_from_diagram(rs.parse_diagram("[0 1 0 1 0 / 0]"))
    assert u2.members == (a.members & b.members)
    assert u2.is_b_stable


def test_codim_two_cut_of_u1():
    rs = e6()
    u1 = subspace_from_diagram(rs.parse_diagram("[1 0 1 0 1 / 0]"))
    u = parse_rootset(rs, "[1 0 1 0 1 / 0] - {-1 -1 -1 0 0 / 0} - {0 0 -1 -1 -1 / 0}")
    assert u.dim == u1.dim - 2


def test_quotient_weights_d5a1_examples():
    rs = e6()
    sub = subspace_from_diagram(rs.parse_diagram("[0 1 1 2 0 / 2]"))
    sup = subspace_from_diagram(rs.parse_diagram("[0 2 0 2 0 / 2]"))
    q = quotient_weights(sub, sup)
    assert sorted(str(w) for w, m in q) == ["{0 1 0 0 0 / 0}", "{1 1 0 0 0 / 0}"]
    sup2 = subspace_from_diagram(rs.parse_diagram("[0 0 2 2 0 / 2]"))
    q2 = quotient_weights(sub, sup2)
    assert q2.the_weight() == rs.simple_roots[2]
    assert len(quotient_weights(sub, sub)) == 0
    with pytest.raises(ValueError):
        quotient_weights(sup, sub)


def test_quotient_sum_matches_dim_and_top_weight():
    rs = e6()
    sub = subspace_from_diagram(rs.parse_diagram("[2 1 0 1 2 / 1]"))
    sup = subspace_from_diagram(rs.parse_diagram("[2 0 2 0 2 / 0]"))
    assert sub.issubset(sup)
    q = quotient_weights(sub, sup)
    assert len(q) == sup.dim - sub.dim == 4
    # sum of the quotient dual weights is the top exterior power's weight
    from nilcoh.characters import exterior_power
    top = exterior_power(q, len(q))
    assert top.the_weight() == q.sum()


def test_weighted_dynkin_diagrams_from_levis_match_paper():
    rs = e6()
    anchors = {
        "[0 0 0 0 0 / 1]": [0],
        "[1 0 0 0 1 / 0]": [0, 4],
        "[0 0 1 0 0 / 0]": [0, 4, 5],
        "[0 0 0 0 0 / 2]": [0, 1],
        "[0 1 0 1 0 / 1]": [0, 1, 2, 4],     # A3+A1, stated in the paper
        "[1 0 1 0 1 / 0]": [0, 1, 3, 4, 5],  # 2A2+A1, stated in the paper
        "[2 1 0 1 2 / 1]": [0, 1, 2, 3, 4],  # A5, stated in the paper
        "[0 0 2 0 0 / 2]": [1, 2, 3, 5],     # D4
    }
    for text, levi in anchors.items():
        d = diagram_from_levi_regular(rs, levi)
        assert d == rs.parse_diagram(text), (text, str(d))


def test_negative_labels_rejected():
    rs = e6()
    with pytest.raises(ValueError):
        WeightedDiagram(rs, [0, 0, -1, 0, 0, 0])
