"""Bott-Borel-Weil for line bundles on G/B, Euler-characteristic
multiplicities of irreducibles in S^n V* (x) lambda, the Weyl dimension
formula, and the small-representation predicate.

Convention: a dominant weight has H^0 equal to the irreducible with that
highest weight; all cohomology vanishes iff lambda + rho is singular.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import numpy as np

from .roots import RootSystem, Weight
from .characters import WeightMultiset, irreducible_dominant_weights


class BBWResult:
    """Singular (all cohomology zero) or Regular{degree, highest weight}."""

    __slots__ = ("degree", "highest")

    def __init__(self, degree=None, highest=None):
        self.degree = degree
        self.highest = highest

    @property
    def is_singular(self):
        return self.degree is None

    def __eq__(self, other):
        return isinstance(other, BBWResult) and self.degree == other.degree \
            and self.highest == other.highest

    def __repr__(self):
        if self.is_singular:
            return "BBW(singular)"
        return f"BBW(H^{self.degree} = V[{self.highest}])"


def bbw(rs: RootSystem, lam: Weight) -> BBWResult:
    """Cohomology of the line bundle of weight lam on G/B."""
    cur = lam + rs.rho
    count = 0
    guard = 0
    while True:
        neg = None
        for j in range(rs.rank):
            p = rs.pairing(cur, j)
            if p == 0:
                return BBWResult()
            if p < 0 and neg is None:
                neg = j
        if neg is None:
            return BBWResult(count, cur - rs.rho)
        cur = rs.reflect(cur, neg)
        count += 1
        guard += 1
        if guard > len(rs.positive_roots):
            raise AssertionError("BBW reflection loop exceeded the root count")


def weyl_dimension(rs: RootSystem, mu: Weight) -> int:
    """dim V_mu = prod <mu+rho, beta^vee> / <rho, beta^vee>, exact."""
    if not rs.is_dominant(mu):
        raise ValueError("weyl_dimension requires a dominant weight")
    num = Fraction(1)
    mu_rho = mu + rs.rho
    for beta in rs.positive_roots:
        num *= rs.coroot_pairing(mu_rho, beta) / rs.coroot_pairing(rs.rho, beta)
    if num.denominator != 1:
        raise AssertionError("Weyl dimension formula gave a non-integer")
    return int(num)


def is_small(rs: RootSystem, mu: Weight) -> bool:
    """True iff twice a root is never a weight of V_mu (checked per root
    length class via the dominant roots)."""
    if not rs.is_dominant(mu):
        raise ValueError("is_small requires a dominant weight")
    dom = irreducible_dominant_weights(rs, mu)
    for theta in rs.positive_roots:
        if rs.is_dominant(theta):
            if dom[2 * theta] > 0:
                return False
    return True


def euler_mult(s, n: int, twist: Weight, mu: Weight, threads: int = 1) -> int:
    """Coefficient of V_mu in chi(G/B, S^n V* (x) twist) for the RootSet s.

    Alternating Weyl sum of knapsack point counts:
        sum_w (-1)^len(w) * count(n, w.mu - twist)
    with the dot action w.mu = w(mu + rho) - rho.
    """
    from .subspaces import RootSet
    if not isinstance(s, RootSet):
        raise TypeError("euler_mult expects a RootSet")
    rs = s.rs
    if not rs.is_dominant(mu):
        raise ValueError("euler_mult requires a dominant mu")
    if n < 0:
        return 0
    return _euler_point(rs, s.sym_counter(), n, twist, mu, None, threads)


def euler_mult_factored(s, n: int, twist: Weight, factor, mu: Weight,
                        threads: int = 1) -> int:
    """Same, for S^n V* (x) factor (x) twist with an explicit multiset factor."""
    rs = s.rs
    if n < 0:
        return 0
    total = 0
    for u, m in factor:
        total += m * _euler_point(rs, s.sym_counter(), n, twist + u, mu, None, threads)
    return total


def _euler_point(rs, counter, n, twist, mu, _unused, threads):
    images, signs = rs.dot_orbit(mu)
    base = np.array((rs.rho + twist).c, dtype=np.int64)
    nus = images - base  # w(mu+rho) - rho - twist, per Weyl element
    if not counter.weights:
        # empty module: S^0 only
        if n == 0:
            hits = np.all(nus == 0, axis=1)
            return int(signs[hits].sum())
        return 0
    cap = np.array(counter.maxcoord, dtype=np.int64) * n
    mask = np.all(nus >= 0, axis=1) & np.all(nus <= cap, axis=1)
    hsum = nus.sum(axis=1)
    mask &= hsum <= n * counter.suffix_max[0]
    idx = np.nonzero(mask)[0]
    if len(idx) == 0:
        return 0
    if threads > 1 and len(idx) > 8:
        chunks = np.array_split(idx, threads)
        def work(ch):
            sub = 0
            for k in ch:
                sub += int(signs[k]) * counter.count(n, tuple(int(x) for x in nus[k]))
            return sub
        with ThreadPoolExecutor(max_workers=threads) as ex:
            return sum(ex.map(work, chunks))
    total = 0
    for k in idx:
        total += int(signs[k]) * counter.count(n, tuple(int(x) for x in nus[k]))
    return total


def euler_oracle(s, n: int, twist: Weight, mu: Weight) -> int:
    """Brute-force oracle: full character of S^n V*, then line-by-line BBW.

    Independent route used on small types; never taken by euler_mult.
    """
    from .characters import full_sym_character
    rs = s.rs
    ch = full_sym_character(s, n)
    total = 0
    for nu, m in ch:
        res = bbw(rs, nu + twist)
        if not res.is_singular and res.highest == mu:
            total += m * (1 if res.degree % 2 == 0 else -1)
    return total


def broer_case_1(s, twist: Weight):
    """Levi simples if s is a parabolic nilradical and twist is a dominant
    character of that parabolic (pairing 0 on Levi simples, >= 0 off);
    None otherwise."""
    from .subspaces import levi_of_nilradical
    rs = s.rs
    levi = levi_of_nilradical(s)
    if levi is None:
        return None
    pair = rs.pairings(twist)
    if any(pair[j] != 0 for j in levi):
        return None
    if any(p < 0 for p in pair):
        return None
    return levi


def broer_case_2(s, twist: Weight, diagram):
    """Check Case 2 for the supplied candidate diagram: s must equal the
    diagram subspace and twist - omega must be a dominant character of the
    grade-zero parabolic.  Returns the dominant lambda or None."""
    from .subspaces import grading_parts, subspace_from_diagram
    rs = s.rs
    if subspace_from_diagram(diagram).members != s.members:
        return None
    g = grading_parts(diagram)
    lam = twist - g.omega
    pair = rs.pairings(lam)
    levi = [j for j in range(rs.rank) if diagram.labels[j] == 0]
    if any(pair[j] != 0 for j in levi):
        return None
    if any(p < 0 for p in pair):
        return None
    return lam


class BroerOutcome:
    __slots__ = ("case", "diagram", "levi", "lam", "near_miss")

    def __init__(self, case, diagram=None, levi=None, lam=None, near_miss=None):
        self.case = case  # 1, 2, or None
        self.diagram = diagram
        self.levi = levi
        self.lam = lam
        self.near_miss = near_miss

    @property
    def applies(self):
        return self.case in (1, 2)

    def __repr__(self):
        if self.case == 1:
            return f"Broer(case 1, levi={self.levi})"
        if self.case == 2:
            return f"Broer(case 2, lambda={self.lam})"
        return f"Broer(not applicable{'; near miss: ' + self.near_miss if self.near_miss else ''})"


def broer_case_check(s, twist: Weight, diagram=None) -> BroerOutcome:
    """Decide whether higher cohomology of S^n V* (x) twist vanishes for all n
    by Broer's criterion.  Case 1 needs twist in X*(P); a twist that is only
    P-dominant (nonzero on a Levi simple) is flagged as a near miss."""
    from .subspaces import levi_of_nilradical
    rs = s.rs
    levi = levi_of_nilradical(s)
    if levi is not None:
        pair = rs.pairings(twist)
        if all(p >= 0 for p in pair):
            if all(pair[j] == 0 for j in levi):
                return BroerOutcome(1, levi=levi)
            if diagram is None:
                return BroerOutcome(None, near_miss="dominant but nonzero on a Levi simple")
    if diagram is not None:
        lam = broer_case_2(s, twist, diagram)
        if lam is not None:
            return BroerOutcome(2, diagram=diagram, lam=lam)
    return BroerOutcome(None)
