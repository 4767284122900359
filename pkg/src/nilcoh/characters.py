"""Characters of T-modules: weight multisets, symmetric/exterior powers,
the lattice-knapsack counter for point multiplicities of S^n V*, and
Freudenthal weight multiplicities of irreducibles.
"""

from __future__ import annotations

from fractions import Fraction

from .roots import RootSystem, Weight


class WeightMultiset:
    """Finite T-module character: map weight -> positive multiplicity."""

    __slots__ = ("rs", "mult")

    def __init__(self, rs, mult):
        self.rs = rs
        self.mult = {w: m for w, m in mult.items() if m != 0}
        if any(m < 0 for m in self.mult.values()):
            raise ValueError("multiplicities must be positive")

    @classmethod
    def from_weights(cls, weights):
        weights = list(weights)
        if not weights:
            raise ValueError("cannot infer the root system of an empty multiset")
        rs = weights[0].rs
        mult = {}
        for w in weights:
            mult[w] = mult.get(w, 0) + 1
        return cls(rs, mult)

    @classmethod
    def empty(cls, rs):
        return cls(rs, {})

    def __len__(self):
        return sum(self.mult.values())

    def __eq__(self, other):
        return isinstance(other, WeightMultiset) and self.mult == other.mult

    def __iter__(self):
        """(weight, multiplicity), canonically ordered."""
        for w in sorted(self.mult, key=lambda w: (w.height2(), w.c)):
            yield w, self.mult[w]

    def __getitem__(self, w):
        return self.mult.get(w, 0)

    def __contains__(self, w):
        return w in self.mult

    def weights(self):
        return [w for w, m in self for _ in range(m)]

    def twist(self, lam: Weight) -> "WeightMultiset":
        return WeightMultiset(self.rs, {w + lam: m for w, m in self.mult.items()})

    def add(self, other) -> "WeightMultiset":
        out = dict(self.mult)
        for w, m in other.mult.items():
            out[w] = out.get(w, 0) + m
        return WeightMultiset(self.rs, out)

    def sum(self) -> Weight:
        total = self.rs.zero()
        for w, m in self.mult.items():
            total = total + m * w
        return total

    def is_line(self):
        return len(self) == 1

    def the_weight(self):
        (w, m), = list(self)
        if m != 1:
            raise ValueError("not a line")
        return w

    def restrict(self, target_rs: RootSystem, simples) -> "WeightMultiset":
        """Restrict to the Levi product named by `simples`: each weight maps
        to its pairings with the chosen coroots, read in target fund coords."""
        out = {}
        for w, m in self.mult.items():
            pair = [self.rs.pairing(w, j) for j in simples]
            t = target_rs.weight(fund_coords=pair)
            out[t] = out.get(t, 0) + m
        return WeightMultiset(target_rs, out)

    def __repr__(self):
        items = ", ".join(f"{w}:{m}" for w, m in self)
        return f"WeightMultiset({items})"


def exterior_power(ch: WeightMultiset, j: int) -> WeightMultiset:
    """Elementary-symmetric construction over the expanded weight list."""
    if j < 0:
        raise ValueError("exterior power degree must be >= 0")
    rs = ch.rs
    layers = [dict() for _ in range(j + 1)]
    layers[0][rs.zero()] = 1
    for w in ch.weights():
        for k in range(min(j, len(layers) - 1), 0, -1):
            prev = layers[k - 1]
            cur = layers[k]
            for v, m in prev.items():
                nv = v + w
                cur[nv] = cur.get(nv, 0) + m
    return WeightMultiset(rs, layers[j])


def sym_power(ch: WeightMultiset, n: int) -> WeightMultiset:
    """Complete-homogeneous lift: character of S^n of the module."""
    if n < 0:
        raise ValueError("symmetric power degree must be >= 0")
    rs = ch.rs
    # multiply out 1/(1-x_w)^mult weight by weight, truncated at degree n
    cur = {(rs.zero(), 0): 1}
    for w, mult in ch:
        nxt = {}
        for (v, d), m in cur.items():
            for k in range(0, n - d + 1):
                ways = _multiset_count(mult, k)
                key = (v + k * w, d + k)
                nxt[key] = nxt.get(key, 0) + m * ways
        cur = nxt
    out = {}
    for (v, d), m in cur.items():
        if d == n:
            out[v] = out.get(v, 0) + m
    return WeightMultiset(rs, out)


def _multiset_count(slots, k):
    """Number of multisets of size k from `slots` kinds: C(slots+k-1, k)."""
    num = 1
    den = 1
    for i in range(k):
        num *= slots + i
        den *= i + 1
    return num // den


FULL_SYM_BUDGET = 2_000_000


def full_sym_character(module, n: int) -> WeightMultiset:
    """ch S^n of a RootSet's dual module, or of an explicit WeightMultiset.

    Budget-guarded: intended for oracles and small (rank <= 3) instances.
    """
    ch = _as_dual_multiset(module)
    if (len(ch) + 1) ** 2 * (n + 1) ** 2 > FULL_SYM_BUDGET:
        raise ValueError("full_sym_character budget exceeded; use sym_power_count")
    return sym_power(ch, n)


def _as_dual_multiset(module):
    from .subspaces import RootSet
    if isinstance(module, RootSet):
        return WeightMultiset.from_weights(list(module.dual_weights()))
    if isinstance(module, WeightMultiset):
        return module
    raise TypeError("expected a RootSet or WeightMultiset")


class SymCounter:
    """Memoized bounded-knapsack point counter over a fixed weight list.

    count(n, nu) = number of multisets of exactly n list entries summing to
    nu (coordinates in the scaled root basis).  One shared memo per list;
    pure, safe to call concurrently under the GIL.
    """

    __slots__ = ("weights", "heights", "suffix_max", "suffix_maxcoord", "_memo", "maxcoord")

    def __init__(self, weight_coords):
        # sort tallest first so the height bound prunes hard
        ws = sorted(weight_coords, key=lambda c: (-sum(c), c))
        self.weights = tuple(tuple(c) for c in ws)
        self.heights = tuple(sum(c) for c in self.weights)
        n = len(self.weights)
        self.suffix_max = tuple(
            self.heights[i] if i < n else 0 for i in range(n + 1)
        )
        dim = len(self.weights[0]) if self.weights else 0
        sm = []
        running = [0] * dim
        out = [tuple(running)]
        for c in reversed(self.weights):
            running = [max(r, x) for r, x in zip(running, c)]
            out.append(tuple(running))
        self.suffix_maxcoord = tuple(reversed(out))
        self.maxcoord = self.suffix_maxcoord[0] if self.weights else ()
        self._memo = {}

    def count(self, n: int, nu) -> int:
        if n < 0:
            return 0
        nu = tuple(nu)
        if n == 0:
            return 1 if all(x == 0 for x in nu) else 0
        if any(x < 0 for x in nu):
            return 0
        return self._count(0, n, nu)

    def _count(self, i, n, nu):
        if n == 0:
            return 1 if all(x == 0 for x in nu) else 0
        if i >= len(self.weights):
            return 0
        h = sum(nu)
        if h > n * self.suffix_max[i]:
            return 0
        if h == 0:
            return 0  # n > 0 but all entries have positive height
        cap = self.suffix_maxcoord[i]
        if any(x > n * c for x, c in zip(nu, cap)):
            return 0
        key = (i, n, nu)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        w = self.weights[i]
        total = 0
        cur = nu
        k = 0
        while k <= n:
            total += self._count(i + 1, n - k, cur)
            k += 1
            if k > n:
                break
            nxt = tuple(x - y for x, y in zip(cur, w))
            if any(x < 0 for x in nxt):
                break
            cur = nxt
        self._memo[key] = total
        return total


def sym_power_count(s, n: int, nu: Weight) -> int:
    """Multiplicity of the weight nu in ch S^n V* for the RootSet s."""
    from .subspaces import RootSet
    if isinstance(s, RootSet):
        return s.sym_counter().count(n, nu.c)
    return SymCounter(tuple(w.c for w in _as_dual_multiset(s).weights())).count(n, nu.c)


# ----- irreducible characters (Freudenthal) ----------------------------------

def irreducible_dominant_weights(rs: RootSystem, mu: Weight) -> WeightMultiset:
    """Dominant weights of the irreducible V_mu with multiplicities."""
    if not rs.is_dominant(mu):
        raise ValueError("highest weight must be dominant")
    mults = _freudenthal(rs, mu)
    return WeightMultiset(rs, mults)


def _freudenthal(rs, mu):
    n = rs.rank
    mu_rc = mu.root_coords()
    box = [int(c) for c in mu_rc]  # dominant weights have 0 <= coords <= mu coords
    candidates = []
    def rec(i, acc):
        if i == n:
            candidates.append(tuple(acc))
            return
        # nu_i = mu_i - k, k integer >= 0, nu_i >= 0
        top = mu_rc[i]
        k = 0
        while top - k >= 0:
            acc.append(mu_rc[i] - k)
            rec(i + 1, acc)
            acc.pop()
            k += 1
    rec(0, [])
    doms = []
    for rc in candidates:
        scaled = tuple(int(f * s) for f, s in zip(rc, rs.scale))
        w = Weight(rs, scaled)
        if rs.is_dominant(w):
            doms.append(w)
    # sort by descending height: mu first
    doms.sort(key=lambda w: (-w.height2(), w.c))
    mults = {}
    mu_rho = mu + rs.rho
    norm_mu = rs._bilinear(mu_rho, mu_rho)
    for w in doms:
        if w == mu:
            mults[w] = 1
            continue
        w_rho = w + rs.rho
        denom = norm_mu - rs._bilinear(w_rho, w_rho)
        total = Fraction(0)
        for beta in rs.positive_roots:
            k = 1
            while True:
                up = w + k * beta
                dom_up, _ = rs.dominantize(up)
                m = mults.get(dom_up)
                if m is None:
                    # outside the weight polytope once we leave known weights
                    if not _below(rs, dom_up, mu):
                        break
                    m = 0
                if m:
                    total += 2 * m * rs._bilinear(up, beta)
                k += 1
        if denom == 0:
            raise AssertionError("Freudenthal denominator vanished")
        val = total / denom
        if val.denominator != 1:
            raise AssertionError("Freudenthal produced a non-integer")
        if int(val):
            mults[w] = int(val)
    return mults


def _below(rs, w, mu):
    """mu - w in the non-negative root lattice."""
    for a, b in zip(w.root_coords(), mu.root_coords()):
        d = b - a
        if d.denominator != 1 or d < 0:
            return False
    return True


def full_weight_multiset(rs: RootSystem, mu: Weight) -> WeightMultiset:
    """All weights of V_mu with multiplicities (Weyl-orbit expansion)."""
    dom = irreducible_dominant_weights(rs, mu)
    out = {}
    for w, m in dom:
        for v in weyl_orbit(rs, w):
            out[v] = out.get(v, 0) + m
    return WeightMultiset(rs, out)


def weyl_orbit(rs: RootSystem, w: Weight):
    seen = {w.c}
    frontier = [w]
    out = [w]
    while frontier:
        nxt = []
        for v in frontier:
            for j in range(rs.rank):
                r = rs.reflect(v, j)
                if r.c not in seen:
                    seen.add(r.c)
                    nxt.append(r)
                    out.append(r)
        frontier = nxt
    return out


def irreducible_dimension(rs: RootSystem, mu: Weight) -> int:
    from .cohomology import weyl_dimension
    return weyl_dimension(rs, mu)


def decompose_into_irreducibles(rs: RootSystem, ch: WeightMultiset):
    """Peel a genuine G-module character into irreducibles.

    Returns a list of (highest weight, multiplicity); raises if the
    character is not a non-negative sum of irreducible characters.
    """
    remaining = dict(ch.mult)
    out = []
    while remaining:
        top = max(remaining, key=lambda w: (w.height2(), w.c))
        if not rs.is_dominant(top):
            raise ValueError(f"maximal weight {top} is not dominant")
        m = remaining[top]
        comp = full_weight_multiset(rs, top)
        for w, k in comp.mult.items():
            nv = remaining.get(w, 0) - m * k
            if nv < 0:
                raise ValueError("character is not a sum of irreducibles")
            if nv:
                remaining[w] = nv
            else:
                remaining.pop(w, None)
        out.append((top, m))
    out.sort(key=lambda t: (t[0].height2(), t[0].c))
    return out
