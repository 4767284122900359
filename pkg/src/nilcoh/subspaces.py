"""B-stable subspaces of the nilradical named by weighted Dynkin diagrams.

A RootSet is a set of negative roots; it names the T-stable subspace of u
spanned by those root spaces.  Stability under B and under each minimal
parabolic is computed, never assumed.
"""

from __future__ import annotations

import re

from .roots import RootSystem, Weight


class WeightedDiagram:
    """Non-negative integer labels on the simple vertices."""

    __slots__ = ("rs", "labels")

    def __init__(self, rs: RootSystem, labels):
        labels = tuple(int(x) for x in labels)
        if len(labels) != rs.rank:
            raise ValueError("label count does not match rank")
        if any(x < 0 for x in labels):
            raise ValueError("diagram labels must be non-negative")
        self.rs = rs
        self.labels = labels

    def __eq__(self, other):
        return isinstance(other, WeightedDiagram) and self.labels == other.labels \
            and self.rs is other.rs

    def __hash__(self):
        return hash(self.labels)

    def is_even(self):
        return all(x % 2 == 0 for x in self.labels)

    def grade_of(self, beta: Weight) -> int:
        """ad(h)-eigenvalue of the weight space of the negative root beta."""
        rc = beta.root_coords()
        total = 0
        for c, d in zip(rc, self.labels):
            total += -c * d
        if total.denominator != 1:
            raise AssertionError("grade of a root must be an integer")
        return int(total)

    def __str__(self):
        return self.rs.format_diagram(self)

    __repr__ = __str__


def _format_diagram(rs, d):
    if rs.ctype.is_e6:
        a = d.labels
        return "[%s %s %s %s %s / %s]" % (a[0], a[1], a[2], a[3], a[4], a[5])
    return "[%s]" % ",".join(str(x) for x in d.labels)


def _parse_diagram(rs, text):
    text = text.strip()
    if not (text.startswith("[") and text.endswith("]")):
        raise ValueError(f"cannot parse diagram {text!r}")
    body = text[1:-1].replace("/", " ").replace(",", " ")
    parts = body.split()
    if len(parts) != rs.rank:
        raise ValueError(f"diagram {text!r} has wrong rank for {rs.ctype}")
    return WeightedDiagram(rs, [int(p) for p in parts])


RootSystem.format_diagram = _format_diagram
RootSystem.parse_diagram = _parse_diagram


class RootSet:
    """A finite set of negative roots; canonically ordered, immutable."""

    __slots__ = ("rs", "members", "_ordered", "_stable", "_dual", "_counter")

    def __init__(self, rs: RootSystem, members):
        self.rs = rs
        out = []
        for b in members:
            if not rs.is_negative_root(b):
                raise ValueError(f"{b} is not a negative root")
            out.append(b)
        self.members = frozenset(out)
        # canonical order: by height (ascending toward 0), then lexicographic
        self._ordered = tuple(sorted(self.members, key=lambda b: (-b.height2(), b.c)))
        self._stable = None
        self._dual = None
        self._counter = None

    def __eq__(self, other):
        return isinstance(other, RootSet) and self.members == other.members \
            and self.rs is other.rs

    def __hash__(self):
        return hash(self.members)

    def __len__(self):
        return len(self.members)

    def __contains__(self, b):
        return b in self.members

    def __iter__(self):
        return iter(self._ordered)

    @property
    def dim(self):
        return len(self.members)

    def key(self):
        return tuple(b.c for b in self._ordered)

    # ----- stability ---------------------------------------------------------

    def _stability(self):
        """(b_stable, tuple of per-simple parabolic stability flags)."""
        if self._stable is None:
            rs = self.rs
            b_ok = True
            p_flags = []
            for j in range(rs.rank):
                aj = rs.simple_roots[j]
                down_ok = True
                up_ok = True
                for beta in self.members:
                    lower = beta - aj
                    if rs.is_negative_root(lower) and lower not in self.members:
                        down_ok = False
                    higher = beta + aj
                    if rs.is_negative_root(higher) and higher not in self.members:
                        up_ok = False
                p_flags.append(down_ok and up_ok)
                if not down_ok:
                    b_ok = False
            self._stable = (b_ok, tuple(p_flags))
        return self._stable

    @property
    def is_b_stable(self):
        return self._stability()[0]

    def is_parabolic_stable(self, j):
        b_ok, flags = self._stability()
        return b_ok and flags[j]

    def stable_simples(self):
        b_ok, flags = self._stability()
        if not b_ok:
            return ()
        return tuple(j for j, f in enumerate(flags) if f)

    # ----- set operations ----------------------------------------------------

    def intersect(self, other: "RootSet") -> "RootSet":
        return RootSet(self.rs, self.members & other.members)

    def union(self, other: "RootSet") -> "RootSet":
        return RootSet(self.rs, self.members | other.members)

    def issubset(self, other: "RootSet") -> bool:
        return self.members <= other.members

    def edit(self, add=(), remove=()) -> "RootSet":
        """Add/remove single root spaces; rejects no-ops and non-roots."""
        cur = set(self.members)
        for b in remove:
            if b not in cur:
                raise ValueError(f"cannot remove {b}: not in the set")
            cur.discard(b)
        for b in add:
            if not self.rs.is_negative_root(b):
                raise ValueError(f"cannot add {b}: not a negative root")
            if b in cur:
                raise ValueError(f"cannot add {b}: already present")
            cur.add(b)
        return RootSet(self.rs, cur)

    def dual_weights(self):
        """Weights of the dual module: {-beta : beta in set}, height-descending."""
        if self._dual is None:
            self._dual = tuple(-b for b in self._ordered)
        return self._dual

    def sym_counter(self):
        from .characters import SymCounter
        if self._counter is None:
            self._counter = SymCounter(tuple(w.c for w in self.dual_weights()))
        return self._counter

    def __repr__(self):
        return f"RootSet(dim={self.dim})"


def subspace_from_diagram(d: WeightedDiagram) -> RootSet:
    """Negative roots of ad(h)-grade >= 2; checked B-stable."""
    rs = d.rs
    members = [b for b in rs.negative_roots if d.grade_of(b) >= 2]
    s = RootSet(rs, members)
    if not s.is_b_stable:
        raise AssertionError(f"diagram subspace {d} is not B-stable")
    return s


class GradedParts:
    """Positive ad(h)-grades of the nilradical, keyed by eigenvalue."""

    def __init__(self, d: WeightedDiagram):
        rs = d.rs
        self.diagram = d
        parts = {}
        for b in rs.negative_roots:
            g = d.grade_of(b)
            if g > 0:
                parts.setdefault(g, []).append(b)
        self.parts = {g: tuple(sorted(v, key=lambda b: (-b.height2(), b.c)))
                      for g, v in parts.items()}
        omega = rs.zero()
        for b in self.parts.get(1, ()):
            omega = omega + b
        self.omega = omega  # sum of grade-1 weights (a non-positive weight)

    def grade(self, g):
        return self.parts.get(g, ())


def grading_parts(d: WeightedDiagram) -> GradedParts:
    return GradedParts(d)


def nilradical_of_parabolic(rs: RootSystem, levi_simples) -> RootSet:
    """Negative roots with support outside the Levi simples."""
    levi = frozenset(levi_simples)
    for j in levi:
        if not 0 <= j < rs.rank:
            raise ValueError(f"invalid simple index {j}")
    members = []
    for b in rs.negative_roots:
        rc = b.root_coords()
        if any(rc[i] != 0 for i in range(rs.rank) if i not in levi):
            members.append(b)
    s = RootSet(rs, members)
    d = WeightedDiagram(rs, [0 if i in levi else 2 for i in range(rs.rank)])
    if subspace_from_diagram(d).members != s.members:
        raise AssertionError("nilradical does not match its 0/2 diagram")
    return s


def levi_of_nilradical(s: RootSet):
    """Recover the Levi simples if s is the nilradical of a parabolic, else None."""
    rs = s.rs
    levi = tuple(j for j in range(rs.rank) if -rs.simple_roots[j] not in s.members)
    try:
        if nilradical_of_parabolic(rs, levi).members == s.members:
            return levi
    except AssertionError:
        pass
    return None


def quotient_weights(sub: RootSet, sup: RootSet):
    """Dual weights of sup/sub: the multiset {-beta : beta in sup minus sub}."""
    if not sub.issubset(sup):
        raise ValueError("quotient requires sub to be contained in sup")
    from .characters import WeightMultiset
    return WeightMultiset(sub.rs, {-b: 1 for b in sup.members - sub.members})


def full_nilradical(rs: RootSystem) -> RootSet:
    return RootSet(rs, rs.negative_roots)


def diagram_from_levi_regular(rs: RootSystem, levi_simples) -> WeightedDiagram:
    """Weighted Dynkin diagram of the orbit that is regular in the Levi
    spanned by `levi_simples`: dominantize h = 2 rho^vee of the Levi."""
    n = rs.rank
    levi = sorted(set(levi_simples))
    # 2 rho^vee of the Levi: solve <alpha_i, h> = 2 on Levi simples, h
    # supported on Levi coroots.  Within the Levi, <alpha_i, sum c_j aj^vee>
    # = (C_L^T c)_i, so c = 2 * (C_L^T)^{-1} 1.
    from fractions import Fraction
    from .roots import _fraction_inverse
    k = len(levi)
    CLt = [[Fraction(rs.cartan[levi[j]][levi[i]]) for j in range(k)] for i in range(k)]
    inv = _fraction_inverse(CLt)
    coeffs = [0] * n
    for i in range(k):
        v = 2 * sum(inv[i][j] for j in range(k))
        if v.denominator != 1:
            raise AssertionError("2 rho^vee of a Levi must be integral")
        coeffs[levi[i]] = int(v)
    labels = rs.dominantize_coweight(coeffs)
    return WeightedDiagram(rs, labels)


def parse_rootset(rs: RootSystem, text) -> RootSet:
    """Set expression: diagram, intersections, and single-root edits.

    Grammar: ATOM ( '&' ATOM | '-' WEIGHT | '+' WEIGHT )* where ATOM is a
    bracketed diagram and WEIGHT is a brace weight literal (a negative root).
    """
    text = text.strip()
    tokens = _tokenize_setspec(text)
    if not tokens:
        raise ValueError("empty set expression")
    kind, val = tokens[0]
    if kind != "diagram":
        raise ValueError(f"set expression must start with a diagram: {text!r}")
    cur = subspace_from_diagram(rs.parse_diagram(val))
    i = 1
    while i < len(tokens):
        op, _ = tokens[i]
        kind, val = tokens[i + 1]
        if op == "&":
            if kind != "diagram":
                raise ValueError("'&' must be followed by a diagram")
            cur = cur.intersect(subspace_from_diagram(rs.parse_diagram(val)))
        elif op == "-":
            cur = cur.edit(remove=[rs.parse_weight(val)])
        elif op == "+":
            cur = cur.edit(add=[rs.parse_weight(val)])
        else:
            raise ValueError(f"unknown operator {op!r}")
        i += 2
    return cur


def _tokenize_setspec(text):
    tokens = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch == "[":
            j = text.index("]", i)
            tokens.append(("diagram", text[i:j + 1]))
            i = j + 1
        elif ch == "{":
            j = text.index("}", i)
            tokens.append(("weight", text[i:j + 1]))
            i = j + 1
        elif ch in "&+-":
            tokens.append((ch, ch))
            i += 1
        else:
            raise ValueError(f"unexpected character {ch!r} in set expression")
    return tokens


def format_rootset(s: RootSet) -> str:
    return "{" + ", ".join(str(b) for b in s) + "}"
