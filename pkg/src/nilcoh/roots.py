"""Exact root-system and Weyl-group arithmetic for finite Cartan types.

Weights are stored as integer vectors in a scaled simple-root basis: each
irreducible component scales its root-basis coordinates by a fixed integer
(3 for E6, otherwise lcm(fundamental-group index, 2)) so that every weight
of the character lattice, including rho, has integer coordinates.  All
arithmetic is exact; numpy enters only for the bulk Weyl-group kernels.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache

import numpy as np

_WEYL_ORDER = {
    "A": lambda n: _factorial(n + 1),
    "B": lambda n: 2**n * _factorial(n),
    "C": lambda n: 2**n * _factorial(n),
    "D": lambda n: 2 ** (n - 1) * _factorial(n),
    "E": lambda n: {6: 51840, 7: 2903040, 8: 696729600}[n],
    "F": lambda n: 1152,
    "G": lambda n: 12,
}

_LATTICE_INDEX = {
    "A": lambda n: n + 1,
    "B": lambda n: 2,
    "C": lambda n: 2,
    "D": lambda n: 4,
    "E": lambda n: {6: 3, 7: 2, 8: 1}[n],
    "F": lambda n: 1,
    "G": lambda n: 1,
}


def _factorial(n):
    out = 1
    for k in range(2, n + 1):
        out *= k
    return out


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def _lcm(a, b):
    return a * b // _gcd(a, b)


def _component_edges(family, rank):
    """Dynkin-diagram edges of one component, 0-based local indices.

    Edge = (i, j, aij, aji) with aij = <alpha_j, alpha_i^vee>.
    E-series numbering follows the chain-plus-branch convention: vertices
    0..rank-2 form a chain and the last vertex attaches to vertex 2.
    """
    edges = []
    if family == "A":
        for i in range(rank - 1):
            edges.append((i, i + 1, -1, -1))
    elif family in ("B", "C"):
        if rank < 2:
            raise ValueError(f"{family}{rank} is not a valid type (rank >= 2)")
        for i in range(rank - 2):
            edges.append((i, i + 1, -1, -1))
        # B: last root short; C: last root long.
        if family == "B":
            edges.append((rank - 2, rank - 1, -1, -2))
        else:
            edges.append((rank - 2, rank - 1, -2, -1))
    elif family == "D":
        if rank < 3:
            raise ValueError("D requires rank >= 3")
        for i in range(rank - 2):
            edges.append((i, i + 1, -1, -1))
        edges.append((rank - 3, rank - 1, -1, -1))
    elif family == "E":
        if rank not in (6, 7, 8):
            raise ValueError("E requires rank 6, 7 or 8")
        for i in range(rank - 2):
            edges.append((i, i + 1, -1, -1))
        edges.append((2, rank - 1, -1, -1))
    elif family == "F":
        if rank != 4:
            raise ValueError("F requires rank 4")
        edges = [(0, 1, -1, -1), (1, 2, -1, -2), (2, 3, -1, -1)]
    elif family == "G":
        if rank != 2:
            raise ValueError("G requires rank 2")
        edges = [(0, 1, -3, -1)]
    else:
        raise ValueError(f"unknown family {family!r}")
    return edges


def _component_symmetrizers(family, rank):
    """d_i with (alpha_i, alpha_j) = d_i * A[i][j] symmetric; short roots d=1."""
    if family == "B":
        return [2] * (rank - 1) + [1]
    if family == "C":
        return [1] * (rank - 1) + [2]
    if family == "F":
        return [2, 2, 1, 1]
    if family == "G":
        return [1, 3]
    return [1] * rank


class CartanType:
    """A finite Cartan type: an ordered list of simple components."""

    def __init__(self, components):
        comps = []
        for fam, rank in components:
            fam = fam.upper()
            if fam not in "ABCDEFG":
                raise ValueError(f"unknown family {fam!r}")
            if rank < 1:
                raise ValueError("rank must be positive")
            comps.append((fam, int(rank)))
        self.components = tuple(comps)
        self.rank = sum(r for _, r in comps)
        # global vertex index -> (component number, local index)
        self.vertex_component = []
        for ci, (_, r) in enumerate(comps):
            self.vertex_component += [ci] * r
        off = 0
        self.component_offset = []
        for _, r in comps:
            self.component_offset.append(off)
            off += r

    @classmethod
    def parse(cls, text):
        """Parse 'E6', 'A1+A1+A1', 'A2+A2+A1', 'B2' etc."""
        parts = re.split(r"[+x]", text.strip())
        comps = []
        for p in parts:
            m = re.fullmatch(r"\s*([A-Ga-g])\s*(\d+)\s*", p)
            if not m:
                raise ValueError(f"cannot parse Cartan type {text!r}")
            comps.append((m.group(1).upper(), int(m.group(2))))
        return cls(comps)

    def __str__(self):
        return "+".join(f"{f}{r}" for f, r in self.components)

    def __repr__(self):
        return f"CartanType({self})"

    def __eq__(self, other):
        return isinstance(other, CartanType) and self.components == other.components

    def __hash__(self):
        return hash(self.components)

    @property
    def is_e6(self):
        return self.components == (("E", 6),)


class Weight:
    """Exact lattice vector in scaled simple-root coordinates."""

    __slots__ = ("rs", "c")

    def __init__(self, rs, coords):
        self.rs = rs
        self.c = tuple(coords)

    def __add__(self, other):
        self._check(other)
        return Weight(self.rs, tuple(a + b for a, b in zip(self.c, other.c)))

    def __sub__(self, other):
        self._check(other)
        return Weight(self.rs, tuple(a - b for a, b in zip(self.c, other.c)))

    def __neg__(self):
        return Weight(self.rs, tuple(-a for a in self.c))

    def __mul__(self, k):
        return Weight(self.rs, tuple(k * a for a in self.c))

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, Weight) and self.c == other.c and self.rs is other.rs

    def __hash__(self):
        return hash(self.c)

    def __lt__(self, other):
        return self.c < other.c

    def _check(self, other):
        if self.rs is not other.rs:
            raise ValueError("weights belong to different root systems")

    def is_zero(self):
        return all(a == 0 for a in self.c)

    def root_coords(self):
        """Coordinates in the plain simple-root basis, as Fractions."""
        return tuple(Fraction(a, s) for a, s in zip(self.c, self.rs.scale))

    def is_root_integral(self):
        return all(a % s == 0 for a, s in zip(self.c, self.rs.scale))

    def height2(self):
        """Sum of scaled coordinates (monotone stand-in for the height)."""
        return sum(self.c)

    def __repr__(self):
        return f"Weight({self.rs.format_weight(self)})"

    def __str__(self):
        return self.rs.format_weight(self)


class WeylElement:
    """One Weyl-group element: exact matrix on scaled root coordinates."""

    __slots__ = ("rs", "matrix", "length")

    def __init__(self, rs, matrix, length):
        self.rs = rs
        self.matrix = matrix  # tuple of row-tuples, ints
        self.length = length

    def apply(self, w: Weight) -> Weight:
        c = w.c
        return Weight(w.rs, tuple(sum(m * x for m, x in zip(row, c)) for row in self.matrix))

    def __repr__(self):
        return f"WeylElement(len={self.length})"


class RootSystem:
    """Cartan data, the full root set, rho, and Weyl-group machinery."""

    def __init__(self, ctype: CartanType):
        self.ctype = ctype
        n = ctype.rank
        self.rank = n
        # cartan[i][j] = <alpha_j, alpha_i^vee>
        cartan = [[0] * n for _ in range(n)]
        sym = []
        for i in range(n):
            cartan[i][i] = 2
        for ci, (fam, r) in enumerate(ctype.components):
            off = ctype.component_offset[ci]
            for i, j, aij, aji in _component_edges(fam, r):
                cartan[off + i][off + j] = aij
                cartan[off + j][off + i] = aji
            sym += _component_symmetrizers(fam, r)
        self.cartan = tuple(tuple(row) for row in cartan)
        self.symmetrizer = tuple(sym)
        for i in range(n):
            for j in range(n):
                if sym[i] * cartan[i][j] != sym[j] * cartan[j][i]:
                    raise AssertionError("Cartan matrix is not symmetrizable as built")
        scale = []
        for ci, (fam, r) in enumerate(ctype.components):
            s = 3 if (fam, r) == ("E", 6) else _lcm(_LATTICE_INDEX[fam](r), 2)
            scale += [s] * r
        self.scale = tuple(scale)
        self.adjacency = tuple(
            tuple(j for j in range(n) if j != i and cartan[i][j] != 0) for i in range(n)
        )
        self._generate_roots()
        self._compute_rho_and_fundamentals()
        self.weyl_order = 1
        for fam, r in ctype.components:
            self.weyl_order *= _WEYL_ORDER[fam](r)
        self._wstack = None
        self._dot_cache = {}

    # ----- construction helpers -------------------------------------------

    def _generate_roots(self):
        """Closure from the simple roots using root strings; plain root coords.

        Layered by height, so every down-string is already complete when a
        root is processed.  beta + alpha_j is a root iff q - <beta,aj^vee> > 0
        where q is the depth of the alpha_j-string below beta.
        """
        n = self.rank
        simple = [tuple(1 if k == i else 0 for k in range(n)) for i in range(n)]
        pos = set(simple)
        frontier = list(simple)
        while frontier:
            new = []
            for beta in frontier:
                for j in range(n):
                    if sum(beta) == 1 and beta[j] == 1:
                        continue  # beta == alpha_j: 2*alpha_j is never a root
                    p = sum(self.cartan[j][i] * beta[i] for i in range(n))
                    q = 0
                    cur = list(beta)
                    while True:
                        cur[j] -= 1
                        if tuple(cur) in pos:
                            q += 1
                        else:
                            break
                    if q - p > 0:
                        up = list(beta)
                        up[j] += 1
                        t = tuple(up)
                        if t not in pos:
                            pos.add(t)
                            new.append(t)
            frontier = new
        self._pos_root_coords = sorted(pos, key=lambda t: (sum(t), t))
        mk = self._weight_from_root_coords
        self.positive_roots = tuple(mk(t) for t in self._pos_root_coords)
        self.negative_roots = tuple(-b for b in self.positive_roots)
        self.roots = self.positive_roots + self.negative_roots
        self.simple_roots = tuple(mk(t) for t in
                                  [tuple(1 if k == i else 0 for k in range(self.rank))
                                   for i in range(self.rank)])
        self._pos_set = set(b.c for b in self.positive_roots)
        self._neg_set = set(b.c for b in self.negative_roots)
        by_comp = {}
        for t in self._pos_root_coords:
            ci = self.ctype.vertex_component[next(i for i, x in enumerate(t) if x)]
            cur = by_comp.get(ci)
            if cur is None or sum(t) > sum(cur):
                by_comp[ci] = t
        self.highest_roots = tuple(mk(by_comp[ci]) for ci in sorted(by_comp))

    def _weight_from_root_coords(self, coords):
        return Weight(self, tuple(int(c) * s for c, s in zip(coords, self.scale)))

    def _compute_rho_and_fundamentals(self):
        """Solve <w, alpha_j^vee> = delta for fundamentals, sum for rho."""
        n = self.rank
        A = [[Fraction(self.cartan[i][j]) for j in range(n)] for i in range(n)]
        inv = _fraction_inverse(A)
        funds = []
        for j in range(n):
            col = [inv[i][j] for i in range(n)]
            coords = []
            for i in range(n):
                v = col[i] * self.scale[i]
                if v.denominator != 1:
                    raise AssertionError("scale does not clear fundamental weight")
                coords.append(int(v))
            funds.append(Weight(self, tuple(coords)))
        self.fundamental_weights = tuple(funds)
        rho = Weight(self, (0,) * n)
        for f in funds:
            rho = rho + f
        self.rho = rho

    # ----- basic exact operations ------------------------------------------

    def weight(self, root_coords=None, fund_coords=None):
        """Build an admitted weight from plain root or fundamental coordinates."""
        if root_coords is not None:
            if len(root_coords) != self.rank:
                raise ValueError("wrong length")
            w = Weight(self, tuple(int(c) * s for c, s in zip(root_coords, self.scale)))
        else:
            if len(fund_coords) != self.rank:
                raise ValueError("wrong length")
            w = Weight(self, (0,) * self.rank)
            for c, f in zip(fund_coords, self.fundamental_weights):
                w = w + int(c) * f
        self._assert_admitted(w)
        return w

    def zero(self):
        return Weight(self, (0,) * self.rank)

    def _assert_admitted(self, w):
        for j in range(self.rank):
            self.pairing(w, j)

    def pairing(self, w: Weight, j: int) -> int:
        """<w, alpha_j^vee>, exact."""
        num = sum(self.cartan[j][i] * w.c[i] for i in range(self.rank))
        q, r = divmod(num, self.scale[j])
        if r:
            raise ValueError(f"weight {w.c} not in the admitted lattice at vertex {j}")
        return q

    def pairings(self, w: Weight):
        return tuple(self.pairing(w, j) for j in range(self.rank))

    def coroot_pairing(self, w: Weight, beta: Weight) -> Fraction:
        """<w, beta^vee> = 2(w, beta)/(beta, beta) for any root beta."""
        wb = self._bilinear(w, beta)
        bb = self._bilinear(beta, beta)
        return Fraction(2) * wb / bb

    def _bilinear(self, a: Weight, b: Weight) -> Fraction:
        n = self.rank
        total = Fraction(0)
        ac = a.root_coords()
        bc = b.root_coords()
        for i in range(n):
            if ac[i] == 0:
                continue
            for j in range(n):
                if self.cartan[i][j] and bc[j]:
                    total += ac[i] * self.symmetrizer[i] * self.cartan[i][j] * bc[j]
        return total

    def reflect(self, w: Weight, j: int) -> Weight:
        p = self.pairing(w, j)
        c = list(w.c)
        c[j] -= p * self.scale[j]
        return Weight(self, tuple(c))

    def dot_reflect(self, w: Weight, j: int) -> Weight:
        """s_j . w = s_j(w + rho) - rho = w - (<w,a_j^vee> + 1) a_j."""
        p = self.pairing(w, j)
        c = list(w.c)
        c[j] -= (p + 1) * self.scale[j]
        return Weight(self, tuple(c))

    def is_dominant(self, w: Weight) -> bool:
        return all(self.pairing(w, j) >= 0 for j in range(self.rank))

    def is_positive_root(self, w: Weight) -> bool:
        return w.c in self._pos_set

    def is_negative_root(self, w: Weight) -> bool:
        return w.c in self._neg_set

    def is_root(self, w: Weight) -> bool:
        return w.c in self._pos_set or w.c in self._neg_set

    def dominantize(self, w: Weight):
        """Return (dominant representative, number of reflections used)."""
        cur = w
        count = 0
        while True:
            for j in range(self.rank):
                if self.pairing(cur, j) < 0:
                    cur = self.reflect(cur, j)
                    count += 1
                    break
            else:
                return cur, count

    def dominantize_coweight(self, coroot_coeffs):
        """Dominant Weyl conjugate of h = sum c_i alpha_i^vee; returns its
        simple-root labels <alpha_j, h>.  Reflections act on coroot coords."""
        c = list(coroot_coeffs)
        n = self.rank

        def labels(cc):
            # <alpha_i, h> = sum_j cc[j] <alpha_i, alpha_j^vee> = (C^T cc)_i
            return [sum(self.cartan[j][i] * cc[j] for j in range(n)) for i in range(n)]

        while True:
            lab = labels(c)
            neg = [i for i in range(n) if lab[i] < 0]
            if not neg:
                return tuple(lab)
            i = neg[0]
            c[i] -= lab[i]  # s_i on coweights: c -> c - <alpha_i, h> alpha_i^vee

    # ----- Weyl group -------------------------------------------------------

    def _reflection_matrix(self, j):
        n = self.rank
        M = np.eye(n, dtype=np.int64)
        for i in range(n):
            M[j, i] -= self.cartan[j][i]
        return M

    def weyl_stack(self):
        """(mats, lengths): all |W| elements as an int64 array stack, BFS order."""
        if self._wstack is None:
            n = self.rank
            gens = [self._reflection_matrix(j) for j in range(n)]
            mats = [np.eye(n, dtype=np.int64)]
            lengths = [0]
            seen = {mats[0].tobytes()}
            frontier = [mats[0]]
            ell = 0
            while frontier:
                ell += 1
                batch = np.stack(frontier)
                nxt = []
                for j in range(n):
                    prod = np.einsum("ab,kbc->kac", gens[j], batch)
                    for m in prod:
                        key = m.tobytes()
                        if key not in seen:
                            seen.add(key)
                            nxt.append(m)
                            mats.append(m)
                            lengths.append(ell)
                frontier = nxt
            if len(mats) != self.weyl_order:
                raise AssertionError(
                    f"Weyl enumeration found {len(mats)} elements, expected {self.weyl_order}"
                )
            self._wstack = (np.stack(mats), np.array(lengths, dtype=np.int64))
        return self._wstack

    def weyl_elements(self):
        """Deterministic stream of all Weyl elements (BFS by length)."""
        mats, lengths = self.weyl_stack()
        for m, l in zip(mats, lengths):
            yield WeylElement(self, tuple(tuple(int(x) for x in row) for row in m), int(l))

    def length_of_matrix(self, mat) -> int:
        """ell(w) = number of positive roots sent negative."""
        count = 0
        arr = np.asarray(mat, dtype=np.int64)
        for b in self.positive_roots:
            img = tuple(arr @ np.array(b.c, dtype=np.int64))
            if img in self._neg_set:
                count += 1
        return count

    def dot_orbit(self, mu: Weight):
        """(images, signs): w(mu+rho) for every w, and (-1)^len(w); cached."""
        key = (mu + self.rho).c
        hit = self._dot_cache.get(key)
        if hit is not None:
            return hit
        mats, lengths = self.weyl_stack()
        v = np.array(key, dtype=np.int64)
        images = np.einsum("kab,b->ka", mats, v)
        signs = np.where(lengths % 2 == 0, 1, -1).astype(np.int64)
        self._dot_cache[key] = (images, signs)
        return images, signs

    def longest_element_of_chain(self, chain):
        """Matrix of w0 of the (type A) subsystem spanned by `chain` indices."""
        n = self.rank
        v = self.zero()
        for j in chain:
            v = v + self.fundamental_weights[j]
        mats = [self._reflection_matrix(j) for j in range(n)]
        acc = np.eye(n, dtype=np.int64)
        cur = v
        guard = 0
        while True:
            for j in chain:
                if self.pairing(cur, j) > 0:
                    cur = self.reflect(cur, j)
                    acc = mats[j] @ acc
                    guard += 1
                    break
            else:
                break
            if guard > 10000:
                raise AssertionError("longest-element computation did not terminate")
        return acc

    def apply_matrix(self, mat, w: Weight) -> Weight:
        arr = np.asarray(mat, dtype=np.int64)
        img = arr @ np.array(w.c, dtype=np.int64)
        return Weight(self, tuple(int(x) for x in img))

    def graph_automorphism(self, perm):
        """Validate a Dynkin-diagram automorphism given as image list (0-based)."""
        n = self.rank
        if sorted(perm) != list(range(n)):
            raise ValueError("not a permutation")
        for i in range(n):
            for j in range(n):
                if self.cartan[perm[i]][perm[j]] != self.cartan[i][j]:
                    raise ValueError("permutation does not preserve the Cartan matrix")
        return tuple(perm)

    def permute_weight(self, perm, w: Weight) -> Weight:
        c = [0] * self.rank
        for i in range(self.rank):
            c[perm[i]] = w.c[i]
        return Weight(self, tuple(c))

    # ----- text syntax -------------------------------------------------------

    def format_weight(self, w: Weight, style=None) -> str:
        rc = w.root_coords()
        if self.ctype.is_e6 and all(f.denominator == 1 for f in rc):
            a = [str(int(f)) for f in rc]
            return "{%s %s %s %s %s / %s}" % (a[0], a[1], a[2], a[3], a[4], a[5])
        if all(f.denominator == 1 for f in rc):
            return "(%s)@root" % ",".join(str(int(f)) for f in rc)
        return "(%s)@fund" % ",".join(str(p) for p in self.pairings(w))

    def parse_weight(self, text) -> Weight:
        text = text.strip()
        if text.startswith("{"):
            if not text.endswith("}"):
                raise ValueError(f"unterminated weight literal: {text!r}")
            body = text[1:-1].replace("/", " ")
            parts = body.split()
            if len(parts) != self.rank:
                raise ValueError(f"weight {text!r} has wrong rank for {self.ctype}")
            return self.weight(root_coords=[int(p) for p in parts])
        m = re.fullmatch(r"\(([^)]*)\)@(root|fund)", text)
        if not m:
            raise ValueError(f"cannot parse weight {text!r}")
        coords = [int(p) for p in m.group(1).split(",")]
        if m.group(2) == "root":
            return self.weight(root_coords=coords)
        return self.weight(fund_coords=coords)


def _fraction_inverse(A):
    n = len(A)
    M = [row[:] + [Fraction(int(i == k)) for k in range(n)] for i, row in enumerate(A)]
    for col in range(n):
        piv = next(r for r in range(col, n) if M[r][col] != 0)
        M[col], M[piv] = M[piv], M[col]
        d = M[col][col]
        M[col] = [x / d for x in M[col]]
        for r in range(n):
            if r != col and M[r][col] != 0:
                f = M[r][col]
                M[r] = [x - f * y for x, y in zip(M[r], M[col])]
    return [row[n:] for row in M]


@lru_cache(maxsize=None)
def _cached_system(components):
    return RootSystem(CartanType(components))


def build_root_system(ctype) -> RootSystem:
    """Build (and cache) the root system of a valid finite type."""
    if isinstance(ctype, str):
        ctype = CartanType.parse(ctype)
    return _cached_system(ctype.components)
