"""Proof-replay engine: cohomology queries symbolic in n, rewrite steps with
full precondition checking, and staircase bookkeeping for Koszul resolutions.

A query tracks the invariant  H^{i+shift}(T) = H^i(S^{n+offset} R* (x) factor
(x) twist)  for the object T it stands for.  Steps rewrite the right-hand
side; every claimed isomorphism or vanishing is cross-checked numerically by
Euler multiplicities on a probe set over a window of n.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field

from .roots import RootSystem, Weight
from .subspaces import (
    RootSet, levi_of_nilradical, nilradical_of_parabolic, parse_rootset,
    quotient_weights, subspace_from_diagram,
)
from .characters import WeightMultiset, exterior_power, sym_power, decompose_into_irreducibles
from .cohomology import bbw, broer_case_check, euler_mult_factored, weyl_dimension


class ReplayError(Exception):
    """A step precondition or cross-check failed; replay aborts loudly."""


@dataclass
class CohQuery:
    """H^{i+shift}(T) = H^i(S^{n+offset} rootset* (x) factor (x) twist)."""
    rootset: RootSet
    offset: int
    twist: Weight
    shift: int = 0
    factor: WeightMultiset | None = None
    factor_degree: int | None = None

    def copy(self):
        return CohQuery(self.rootset, self.offset, self.twist, self.shift,
                        self.factor, self.factor_degree)

    def describe(self, plain=False):
        off = f"n{self.offset:+d}" if self.offset else "n"
        fac = f" (x) wedge^{self.factor_degree}[{len(self.factor)} wts]" if self.factor else ""
        tw = "" if self.twist.is_zero() else f" (x) {self.twist}"
        base = f"S^{off} V*[dim {self.rootset.dim}]{fac}{tw}"
        if self.shift and not plain:
            return f"H^(i+{self.shift}) ~ {base}"
        return base


@dataclass
class TermFact:
    """What a sub-derivation established about one Koszul term."""
    kind: str                  # 'vanish' | 'carrier' | 'opaque'
    shift: int = 0             # placement s: H^{i+s}(T) = H^i(query)
    query: CohQuery | None = None
    threshold: int | None = None   # H^{>= threshold}(query) = 0 (1 = exact H^0 only)

    @property
    def top_occupied(self):
        if self.kind == "vanish":
            return None
        return self.shift + self.threshold - 1


class ProbeChecker:
    """Euler-multiplicity cross-checks over the probe set and n-window."""

    def __init__(self, rs: RootSystem, probes, nmax: int):
        self.rs = rs
        self.probes = probes  # list of (name, dominant weight)
        self.nmax = nmax
        self.checks = 0

    def chi(self, q: CohQuery, mu: Weight, n: int) -> int:
        n_eff = n + q.offset
        if n_eff < 0:
            return 0
        factor = q.factor if q.factor is not None else \
            WeightMultiset(self.rs, {self.rs.zero(): 1})
        return euler_mult_factored(q.rootset, n_eff, q.twist, factor, mu)

    def expect_iso(self, before: CohQuery, after: CohQuery, label, perm=None):
        """chi(before) == (-1)^(shift change) chi(after), probe by probe."""
        sign = -1 if (after.shift - before.shift) % 2 else 1
        for name, mu in self.probes:
            mu2 = self.rs.permute_weight(perm, mu) if perm is not None else mu
            for n in range(self.nmax + 1):
                lhs = self.chi(before, mu, n)
                rhs = sign * self.chi(after, mu2, n)
                self.checks += 1
                if lhs != rhs:
                    raise ReplayError(
                        f"{label}: Euler cross-check failed at probe {name}, n={n}: "
                        f"{lhs} != {rhs}")

    def expect_zero(self, q: CohQuery, label):
        for name, mu in self.probes:
            for n in range(self.nmax + 1):
                self.checks += 1
                if self.chi(q, mu, n) != 0:
                    raise ReplayError(
                        f"{label}: claimed vanishing but chi != 0 at probe {name}, n={n}")


# ----- primitive steps (the spec operations) ---------------------------------

def apply_demazure(rs: RootSystem, q: CohQuery, j: int):
    """Vanish at pairing -1; raise across the wall at pairing <= -2.

    Raise: m := -<twist, a_j^vee> - 2 >= 0 and twist += (m+1) a_j, shift += 1
    (the proposition read with lambda equal to the new twist).
    """
    if q.factor is not None:
        raise ReplayError("demazure needs a folded (line-free) query")
    if not q.rootset.is_parabolic_stable(j):
        raise ReplayError(f"rootset is not P_alpha{j + 1}-stable")
    p = rs.pairing(q.twist, j)
    if p == -1:
        return "vanish"
    if p >= 0:
        raise ReplayError(
            f"demazure inapplicable at alpha{j + 1}: pairing {p} >= 0 (m <= -2)")
    m = -p - 2
    out = q.copy()
    out.twist = q.twist + (m + 1) * rs.simple_roots[j]
    out.shift = q.shift + 1
    return out


def apply_sommers(rs: RootSystem, q: CohQuery, chain, m: int):
    """Swap the A-factors around position m of a type-A chain; exact checks."""
    if q.factor is not None:
        raise ReplayError("sommers needs a folded query")
    levi = levi_of_nilradical(q.rootset)
    if levi is None:
        raise ReplayError("rootset is not the nilradical of a parabolic")
    l = len(chain)
    if not 1 <= m <= l:
        raise ReplayError("sommers position m out of range")
    chain = tuple(chain)
    if len(set(chain)) != l:
        raise ReplayError("sommers chain repeats a vertex")
    for a in range(l):
        for b in range(a + 1, l):
            adjacent = rs.cartan[chain[a]][chain[b]] != 0
            if b == a + 1:
                if not (rs.cartan[chain[a]][chain[b]] == -1
                        and rs.cartan[chain[b]][chain[a]] == -1):
                    raise ReplayError("sommers chain is not a simply-laced path")
            elif adjacent:
                raise ReplayError("sommers chain has a chord; not type A")
    gap = chain[m - 1]
    if gap in levi:
        raise ReplayError(f"alpha{gap + 1} is a simple root of the Levi")
    for k, v in enumerate(chain):
        if k != m - 1 and v not in levi:
            raise ReplayError(f"chain vertex alpha{v + 1} is not in the Levi")
    chain_set = set(chain)
    for v in chain:
        for nb in rs.adjacency[v]:
            if nb not in chain_set and nb in levi:
                raise ReplayError(
                    f"[L, L'] not contained in L': alpha{nb + 1} is in the Levi "
                    f"and adjacent to the chain")
    for k, v in enumerate(chain):
        if k != m - 1 and rs.pairing(q.twist, v) != 0:
            raise ReplayError(
                f"twist pairing at chain vertex alpha{v + 1} must be 0")
    r = rs.pairing(q.twist, gap)
    mprime = min(m, l + 1 - m)
    if not (2 * mprime - 2 - l <= r <= 0):
        raise ReplayError(
            f"sommers bound violated: need {2 * mprime - 2 - l} <= r <= 0, got r={r}")
    new_levi = sorted((set(levi) - chain_set)
                      | (chain_set - {chain[l - m]}))  # gap moves to l+1-m
    w0 = rs.longest_element_of_chain(list(chain))
    out = q.copy()
    out.rootset = nilradical_of_parabolic(rs, new_levi)
    out.offset = q.offset + r * mprime
    out.twist = rs.apply_matrix(w0, q.twist)
    return out


# ----- bounded searches -------------------------------------------------------

class KillSearch:
    """BFS for a Demazure chain that kills a line bundle weight.

    Moves use only simple roots under which the ambient rootset is stable;
    each move raises across a wall; success is a pairing of -1.
    """

    def __init__(self, rs, depth=4):
        self.rs = rs
        self.depth = depth
        self.cache = {}

    def find(self, rootset: RootSet, w: Weight):
        stable = rootset.stable_simples()
        key = (rootset, w.c)
        if key in self.cache:
            return self.cache[key]
        rs = self.rs
        frontier = [(w, ())]
        seen = {w.c}
        result = None
        for _ in range(self.depth + 1):
            nxt = []
            for cur, path in frontier:
                for j in stable:
                    p = rs.pairing(cur, j)
                    if p == -1:
                        result = path + (j,)
                        break
                    if p <= -2:
                        up = cur + (-p - 1) * rs.simple_roots[j]
                        if up.c not in seen:
                            seen.add(up.c)
                            nxt.append((up, path + (j,)))
                if result:
                    break
            if result:
                break
            frontier = nxt
        self.cache[key] = result
        return result


def filtration_order(module: WeightMultiset):
    """Ascending-height order; each prefix is closed under subtracting simple
    roots inside the module, so quotients of the flag are lines."""
    order = [w for w, m in module for _ in range(m)]
    support = set(w.c for w, _ in module)
    rs = module.rs
    seen = set()
    for w in order:
        for j in range(rs.rank):
            lower = w - rs.simple_roots[j]
            if lower.c in support and lower.c not in seen and lower.c != w.c:
                if lower.height2() >= w.height2():
                    raise AssertionError("filtration order is not B-stable")
        seen.add(w.c)
    return order


class EditSearch:
    """Best-first search over single-root edits with Demazure witnesses."""

    def __init__(self, rs, kill: KillSearch, max_nodes=30000):
        self.rs = rs
        self.kill = kill
        self.max_nodes = max_nodes

    def moves(self, s: RootSet, twist: Weight):
        rs = self.rs
        out = []
        for beta in sorted(s.members, key=lambda b: (-b.height2(), b.c)):
            t = s.edit(remove=[beta])
            if t.is_b_stable:
                wit = self.kill.find(s, -beta + twist)
                if wit is not None:
                    out.append(("remove", beta, t, wit))
        for beta in rs.negative_roots:
            if beta in s.members:
                continue
            t = s.edit(add=[beta])
            if t.is_b_stable:
                wit = self.kill.find(t, -beta + twist)
                if wit is not None:
                    out.append(("add", beta, t, wit))
        return out

    def find_chain(self, start: RootSet, goal: RootSet, twist: Weight, depth):
        if start.members == goal.members:
            return []
        def dist(s):
            return len(s.members ^ goal.members)
        counter = 0
        heap = [(dist(start), 0, counter, start, [])]
        visited = {start.members}
        nodes = 0
        while heap:
            _, steps, _, cur, path = heapq.heappop(heap)
            if steps >= depth:
                continue
            for op, beta, t, wit in self.moves(cur, twist):
                nodes += 1
                if nodes > self.max_nodes:
                    return None
                if t.members in visited:
                    continue
                visited.add(t.members)
                npath = path + [(op, beta, wit)]
                if t.members == goal.members:
                    return npath
                counter += 1
                heapq.heappush(heap, (dist(t), steps + 1, counter, t, npath))
        return None


# ----- product-type vanishing (the SL2xSL2xSL2 lemma pattern) -----------------

@dataclass
class ProductVanishReport:
    levi_type: str
    module_dim: int
    ambient_dim: int
    witness: int
    candidates: list
    decomposition: list | None
    quotient_coh: str | None = None


def product_type_vanish(rs, rootset: RootSet, base_module: WeightMultiset,
                        x_weights: WeightMultiset, degree: int,
                        levi_groups, ambient_hw_text, kill_depth=4):
    """Replays the exclusion argument for wedge^degree of a product-type
    module (or the given quotient part of it): candidates from line-by-line
    BBW must sit in degrees {degree-1, degree}, cancel in pairs, and be
    absent from S^degree(ambient); all middle exterior powers must die by
    Demazure chains.  Returns a report; raises ReplayError if the argument
    fails.
    """
    from .roots import build_root_system
    flat = [v for g in levi_groups for v in g]
    for v in flat:
        if not rootset.is_parabolic_stable(v):
            raise ReplayError(f"rootset not stable under P_alpha{v + 1}")
    for g in levi_groups:
        for a in range(len(g) - 1):
            if rs.cartan[g[a]][g[a + 1]] != -1 or rs.cartan[g[a + 1]][g[a]] != -1:
                raise ReplayError("levi group is not a chain in the listed order")
        for a in range(len(g)):
            for b in range(a + 2, len(g)):
                if rs.cartan[g[a]][g[b]] != 0:
                    raise ReplayError("levi group has a chord")
    for gi in range(len(levi_groups)):
        for gj in range(gi + 1, len(levi_groups)):
            for a in levi_groups[gi]:
                for b in levi_groups[gj]:
                    if rs.cartan[a][b] != 0:
                        raise ReplayError("levi groups are not orthogonal")
    tname = "+".join(f"A{len(g)}" for g in levi_groups)
    target = build_root_system(tname)
    module = base_module.restrict(target, flat)
    x_res = x_weights.restrict(target, flat)
    ambient_hw = target.parse_weight(ambient_hw_text)
    from .characters import full_weight_multiset
    ambient = full_weight_multiset(target, ambient_hw)
    for w, m in module:
        if ambient[w] < m:
            raise ReplayError("module does not embed in the ambient character")
    # middle terms S^k(ambient) (x) wedge^(degree-k)(module) must die line by line
    pk = KillSearch(target, depth=kill_depth)
    all_stable = _AllStable(target)
    for k in range(1, degree):
        wk = exterior_power(module, degree - k)
        for w, _ in wk:
            if pk.find(all_stable, w) is None:
                raise ReplayError(
                    f"middle term wedge^{degree - k} weight {w} not killed "
                    f"by a Demazure chain in the product type")
    # candidates of the X part via exact BBW on lines
    candidates = []
    for w in x_res.weights():
        res = bbw(target, w)
        if res.is_singular:
            continue
        if res.degree not in (degree - 1, degree):
            raise ReplayError(
                f"BBW candidate in degree {res.degree} (allowed {degree - 1},{degree}) "
                f"from weight {w}")
        candidates.append((res.degree, res.highest))
    balance = {}
    for deg, hw in candidates:
        balance[hw] = balance.get(hw, 0) + (1 if deg % 2 == 0 else -1)
    for hw, b in balance.items():
        if b != 0:
            raise ReplayError(
                f"candidate Euler characteristic does not cancel for {hw}")
    # exclusion: each candidate representation absent from S^degree(ambient)
    sym = sym_power(ambient, degree)
    dec = None
    if len(sym) <= 4000:
        dec = decompose_into_irreducibles(target, sym)
        present = {hw.c for hw, _ in dec}
        for _, hw in candidates:
            if hw.c in present:
                raise ReplayError(
                    f"candidate {hw} IS present in S^{degree}(ambient): "
                    f"exclusion argument fails")
        dec = [(str(hw), m, weyl_dimension(target, hw)) for hw, m in dec]
    else:
        for _, hw in sorted(set((d, h) for d, h in candidates)):
            mult = _mult_in_character(target, sym, hw)
            if mult != 0:
                raise ReplayError(
                    f"candidate {hw} IS present in S^{degree}(ambient)")
    return ProductVanishReport(
        levi_type=tname, module_dim=len(module), ambient_dim=len(ambient),
        witness=degree,
        candidates=sorted((d, str(h)) for d, h in candidates),
        decomposition=dec)


class _AllStable:
    """Stands in for a G-stable ambient factor: every simple is allowed."""

    def __init__(self, rs):
        self._simples = tuple(range(rs.rank))

    def stable_simples(self):
        return self._simples

    def __hash__(self):
        return hash(("all", self._simples))

    def __eq__(self, other):
        return isinstance(other, _AllStable) and self._simples == other._simples


def _mult_in_character(rs, ch: WeightMultiset, mu: Weight) -> int:
    mats, lengths = rs.weyl_stack()
    total = 0
    import numpy as np
    v = np.array((mu + rs.rho).c, dtype=np.int64)
    rho = np.array(rs.rho.c, dtype=np.int64)
    images = np.einsum("kab,b->ka", mats, v) - rho
    signs = np.where(lengths % 2 == 0, 1, -1)
    lookup = {w.c: m for w, m in ch.mult.items()}
    for img, sgn in zip(images, signs):
        m = lookup.get(tuple(int(x) for x in img))
        if m:
            total += int(sgn) * m
    return total
