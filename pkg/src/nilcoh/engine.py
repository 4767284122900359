"""Execution of replay scripts: runs each step with precondition checks and
numeric cross-checks, combines Koszul term facts through the staircase of
short exact sequences, and emits a deterministic report.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .roots import build_root_system
from .subspaces import RootSet, parse_rootset, quotient_weights, subspace_from_diagram
from .characters import WeightMultiset, exterior_power
from .cohomology import broer_case_check
from .replay import (
    CohQuery, EditSearch, KillSearch, ProbeChecker, ReplayError, TermFact,
    apply_demazure, apply_sommers, filtration_order, product_type_vanish,
)
from .scriptfile import (
    Node, ScriptSyntaxError, attr_groups, attr_ids, attr_int, attr_str,
    parse_script,
)


def default_probes(rs):
    theta = rs.highest_roots[0]
    return [("trivial", rs.zero()), ("adjoint", theta),
            ("min27a", rs.fundamental_weights[0]),
            ("min27b", rs.fundamental_weights[4])]


@dataclass
class SectionConclusion:
    result: str                     # 'iso' | 'surjection' | 'sequence' | 'failed'
    sup: CohQuery | None = None
    sub: RootSet | None = None
    kernels: list = field(default_factory=list)   # [(CohQuery, quotient_flag)]
    detail: str = ""

    def render(self):
        if self.result == "iso":
            return (f"H^i(S^n V2* (x) t) = H^i(S^n V1* (x) t) for all i, n "
                    f"(V2 dim {self.sup.rootset.dim}, V1 dim {self.sub.dim})")
        if self.result == "surjection":
            return "H^0(S^n V2*) ->> H^0(S^n V1*) (kernel not in closed form)"
        if self.result == "sequence":
            parts = [f"H^0({q.describe(plain=True)})" for q, _ in self.kernels]
            chain = " -> ".join(parts)
            return (f"0 -> {chain} -> H^0(S^n V2*) -> H^0(S^n V1*) -> 0")
        return f"FAILED: {self.detail}"


class ScriptEngine:
    def __init__(self, rs=None, nmax=8, depth=4, probes=None, check=True):
        self.rs = rs or build_root_system("E6")
        self.nmax = nmax
        self.depth = depth
        self.check = check
        self.probes = probes or default_probes(self.rs)
        self.checker = ProbeChecker(self.rs, self.probes, nmax)
        self.kill = KillSearch(self.rs, depth=depth)
        self.defs = {}
        self.report = {"meta": [], "sections": [], "steps": [],
                       "unverified": [], "cross_checks": 0}
        self._expectations = []
        self._current = None
        self._section_steps = None

    # ----- plumbing -----------------------------------------------------------

    def _parse_set(self, text) -> RootSet:
        text = text.strip()
        if text.startswith("$"):
            name = text[1:].strip()
            if name not in self.defs:
                raise ReplayError(f"undefined set name ${name}")
            return self.defs[name]
        return parse_rootset(self.rs, text)

    def _parse_weight(self, text):
        return self.rs.parse_weight(text.strip())

    def _record(self, kind, line, detail, status="ok"):
        entry = {"kind": kind, "line": line, "detail": detail, "status": status}
        if self._section_steps is not None:
            self._section_steps.append(entry)
        else:
            self.report["steps"].append(entry)
        return entry

    def _check_iso(self, before, after, label, perm=None):
        if self.check:
            self.checker.expect_iso(before, after, label, perm)

    def _check_zero(self, q, label):
        if self.check:
            self.checker.expect_zero(q, label)

    # ----- main entry ---------------------------------------------------------

    def run(self, text, name="<script>"):
        items = parse_script(text)
        self.report["script"] = name
        i = 0
        while i < len(items):
            node = items[i]
            if node.tag == "meta":
                self.report["meta"].append(attr_str(node, "text"))
            elif node.tag == "config":
                if "nmax" in node.attrs:
                    self.nmax = attr_int(node, "nmax")
                    self.checker.nmax = self.nmax
                if "depth" in node.attrs:
                    self.depth = attr_int(node, "depth")
                    self.kill.depth = self.depth
            elif node.tag == "def":
                name_ = attr_str(node, "name")
                self.defs[name_] = self._parse_set(attr_str(node, "set"))
            elif node.tag == "query":
                self._finish_section()
                self._start_section(node)
            elif node.tag == "step":
                if self._current is None:
                    raise ReplayError(f"line {node.line}: step before any [query]")
                if self._conclusion is not None:
                    raise ReplayError(
                        f"line {node.line}: section already concluded")
                self._run_step(self._current, node, top_level=True)
            elif node.tag == "conclude":
                raise ReplayError(
                    f"line {node.line}: top-level [conclude] is only valid inside blocks")
            elif node.tag in ("expect", "expect_kernel"):
                self._expectations.append(node)
            else:
                raise ReplayError(f"line {node.line}: unknown directive [{node.tag}]")
            i += 1
        self._finish_section()
        self.report["cross_checks"] = self.checker.checks
        ok = all(s.get("result") != "failed" for s in self.report["sections"])
        self.report["status"] = "passed" if ok else "failed"
        return self.report

    def _start_section(self, node):
        s = self._parse_set(attr_str(node, "set"))
        if not s.is_b_stable:
            raise ReplayError(f"line {node.line}: query rootset is not B-stable")
        tw_text = node.attrs.get("twist")
        twist = self._parse_weight(tw_text) if tw_text else self.rs.zero()
        self._current = CohQuery(s, attr_int(node, "offset", 0), twist,
                                 attr_int(node, "shift", 0))
        self._section_steps = []
        self._section = {"query": self._current.describe(), "steps": self._section_steps}
        self._conclusion = None
        self._expectations = []

    def _finish_section(self):
        if self._current is None:
            return
        sec = self._section
        if self._conclusion is None:
            if self._expectations:
                raise ReplayError("section has expectations but never concluded")
            sec["result"] = "open"
            sec["conclusion"] = "no concluding step (informational section)"
        else:
            c = self._conclusion
            sec["result"] = c.result
            sec["conclusion"] = c.render()
            sec["kernels"] = [
                {"set_dim": q.rootset.dim,
                 "rootset": sorted(str(b) for b in q.rootset),
                 "offset": q.offset, "twist": str(q.twist),
                 "quotient": quot}
                for q, quot in c.kernels]
            self._check_expectations(c)
        self.report["sections"].append(sec)
        self._current = None
        self._section_steps = None
        self._conclusion = None

    def _check_expectations(self, conclusion):
        kern_idx = 0
        for node in self._expectations:
            if node.tag == "expect":
                want = attr_str(node, "result")
                if want != conclusion.result:
                    raise ReplayError(
                        f"line {node.line}: expected result={want}, got "
                        f"{conclusion.result} ({conclusion.detail})")
            else:
                want_set = self._parse_set(attr_str(node, "set"))
                want_off = attr_int(node, "offset")
                want_tw = self._parse_weight(attr_str(node, "twist"))
                if kern_idx >= len(conclusion.kernels):
                    raise ReplayError(f"line {node.line}: fewer kernels than expected")
                q, _ = conclusion.kernels[kern_idx]
                if q.rootset.members != want_set.members or q.offset != want_off \
                        or q.twist != want_tw:
                    raise ReplayError(
                        f"line {node.line}: kernel {kern_idx} mismatch: derived "
                        f"{q.describe()}")
                kern_idx += 1
        if any(n.tag == "expect_kernel" for n in self._expectations):
            if kern_idx != len(conclusion.kernels):
                raise ReplayError("more kernels derived than expected")

    # ----- steps --------------------------------------------------------------

    def _run_step(self, state, node, top_level=False):
        kind = attr_str(node, "kind")
        handler = getattr(self, f"_step_{kind}", None)
        if handler is None:
            raise ReplayError(f"line {node.line}: unknown step kind {kind!r}")
        return handler(state, node, top_level)

    def _step_demazure(self, state, node, top_level):
        j = attr_int(node, "alpha") - 1
        expect = attr_str(node, "expect")
        before = state.copy()
        out = apply_demazure(self.rs, state, j)
        if out == "vanish":
            if expect != "vanish":
                raise ReplayError(
                    f"line {node.line}: demazure vanished but expect={expect}")
            self._check_zero(before, f"line {node.line} demazure vanish")
            self._record("demazure", node.line,
                         f"alpha{j + 1}: pairing -1, total vanishing")
            state.factor = None
            return "vanish"
        if expect != "shift":
            raise ReplayError(
                f"line {node.line}: demazure shifted but expect={expect}")
        state.twist = out.twist
        state.shift = out.shift
        self._check_iso(before, state, f"line {node.line} demazure shift")
        self._record("demazure", node.line,
                     f"alpha{j + 1}: twist -> {state.twist}, shift -> {state.shift}")
        return None

    def _step_sommers(self, state, node, top_level):
        chain = attr_ids(node, "chain")
        m = attr_int(node, "m")
        before = state.copy()
        out = apply_sommers(self.rs, state, chain, m)
        if "expect_offset" in node.attrs:
            want = attr_int(node, "expect_offset")
            if out.offset != want:
                raise ReplayError(
                    f"line {node.line}: sommers offset {out.offset} != expected {want}")
        if "expect_twist" in node.attrs:
            want = self._parse_weight(attr_str(node, "expect_twist"))
            if out.twist != want:
                raise ReplayError(
                    f"line {node.line}: sommers twist {out.twist} != expected {want}")
        state.rootset, state.offset, state.twist = out.rootset, out.offset, out.twist
        self._check_iso(before, state, f"line {node.line} sommers")
        self._record("sommers", node.line,
                     f"chain ({','.join(str(c + 1) for c in chain)}) m={m}: "
                     f"offset -> n{state.offset:+d}, twist -> {state.twist}")
        return None

    def _step_symmetry(self, state, node, top_level):
        perm = attr_ids(node, "map")
        self.rs.graph_automorphism(perm)
        before = state.copy()
        state.rootset = RootSet(self.rs, [self.rs.permute_weight(perm, b)
                                          for b in state.rootset])
        state.twist = self.rs.permute_weight(perm, state.twist)
        if state.factor is not None:
            state.factor = WeightMultiset(
                self.rs, {self.rs.permute_weight(perm, w): mm
                          for w, mm in state.factor.mult.items()})
        self._check_iso(before, state, f"line {node.line} symmetry", perm=perm)
        self._record("symmetry", node.line, "diagram automorphism applied")
        return None

    def _step_edit(self, state, node, top_level):
        if state.factor is not None:
            raise ReplayError(f"line {node.line}: edit needs a folded query")
        before = state.copy()
        ops = []
        for key in ("remove", "add"):
            vals = node.attrs.get(key)
            if vals is None:
                continue
            if not isinstance(vals, list):
                vals = [vals]
            for v in vals:
                ops.append((key, self._parse_weight(v)))
        for op, beta in ops:
            big = state.rootset if op == "remove" else state.rootset.edit(add=[beta])
            small = state.rootset.edit(remove=[beta]) if op == "remove" else state.rootset
            if not big.is_b_stable or not small.is_b_stable:
                raise ReplayError(
                    f"line {node.line}: edit breaks B-stability at {beta}")
            wit = self.kill.find(big, -beta + state.twist)
            if wit is None:
                raise ReplayError(
                    f"line {node.line}: no Demazure witness for edit {op} {beta}")
            state.rootset = small if op == "remove" else big
            self._record("edit", node.line,
                         f"{op} {beta} (witness chain "
                         f"{'-'.join(str(j + 1) for j in wit)})")
        self._check_iso(before, state, f"line {node.line} edit")
        return None

    def _step_chain(self, state, node, top_level):
        if state.factor is not None:
            raise ReplayError(f"line {node.line}: chain needs a folded query")
        goal = self._parse_set(attr_str(node, "to"))
        depth = attr_int(node, "depth", max(8, len(state.rootset.members ^ goal.members) + 2))
        before = state.copy()
        search = EditSearch(self.rs, self.kill)
        path = search.find_chain(state.rootset, goal, state.twist, depth)
        if path is None:
            raise ReplayError(
                f"line {node.line}: no cohomology-preserving edit chain found "
                f"(distance {len(state.rootset.members ^ goal.members)})")
        state.rootset = goal
        self._check_iso(before, state, f"line {node.line} chain")
        self._record("chain", node.line,
                     f"{len(path)} single-root edits: " + "; ".join(
                         f"{op} {b}" for op, b, _ in path))
        return None

    def _step_asserted_iso(self, state, node, top_level):
        before = state.copy()
        state.rootset = self._parse_set(attr_str(node, "set"))
        state.offset = attr_int(node, "offset")
        state.twist = self._parse_weight(attr_str(node, "twist"))
        state.shift = attr_int(node, "shift", state.shift)
        note = attr_str(node, "note", "")
        self._check_iso(before, state, f"line {node.line} asserted_iso")
        self.report["unverified"].append(
            {"line": node.line, "note": note,
             "claim": f"{before.describe()} = {state.describe()}"})
        self._record("asserted_iso", node.line,
                     f"UNVERIFIED (numeric cross-check only): {note}", status="unverified")
        return None

    def _step_filtration(self, state, node, top_level):
        if state.factor is None:
            raise ReplayError(f"line {node.line}: filtration needs a module factor")
        survivor = node.attrs.get("survivor")
        survivor_w = self._parse_weight(survivor) if survivor else None
        order = filtration_order(state.factor)
        witnesses = []
        for w in order:
            if survivor_w is not None and w == survivor_w:
                continue
            wit = self.kill.find(state.rootset, w + state.twist)
            if wit is None:
                raise ReplayError(
                    f"line {node.line}: filtration weight {w} not killed within "
                    f"depth {self.kill.depth}")
            witnesses.append((str(w), "-".join(str(j + 1) for j in wit)))
        if survivor_w is None:
            before = state.copy()
            self._check_zero(before, f"line {node.line} filtration vanish")
            self._record("filtration", node.line,
                         f"all {len(witnesses)} quotient lines killed")
            state.factor = None
            return "vanish"
        if state.factor[survivor_w] != 1:
            raise ReplayError(f"line {node.line}: survivor must occur exactly once")
        before = state.copy()
        state.twist = state.twist + survivor_w
        state.factor = None
        self._check_iso(before, state, f"line {node.line} filtration survivor")
        self._record("filtration", node.line,
                     f"{len(witnesses)} lines killed; survivor {survivor_w} folded")
        return None

    def _step_split(self, state, node, top_level):
        if state.factor is None:
            raise ReplayError(f"line {node.line}: split needs a module factor")
        j = attr_int(node, "alpha") - 1
        values = set(int(x) for x in attr_str(node, "values").split(","))
        q_part = {}
        x_part = {}
        for w, mm in state.factor.mult.items():
            if self.rs.pairing(w, j) in values:
                q_part[w] = mm
            else:
                x_part[w] = mm
        if not q_part:
            raise ReplayError(f"line {node.line}: split selected nothing")
        # Q must be a B-submodule of the factor (closed under lowering)
        for w in q_part:
            for s in range(self.rs.rank):
                lw = w - self.rs.simple_roots[s]
                if lw in state.factor.mult and lw not in q_part:
                    raise ReplayError(
                        f"line {node.line}: selected part is not closed under "
                        f"subtracting alpha{s + 1}")
        quotient_block = node.blocks.get("quotient")
        if quotient_block is None:
            raise ReplayError(f"line {node.line}: split needs a [quotient] block")
        xstate = state.copy()
        xstate.factor = WeightMultiset(self.rs, x_part)
        fact = self._run_block(xstate, quotient_block, "quotient part")
        if fact.kind != "vanish":
            raise ReplayError(
                f"line {node.line}: the split quotient must vanish totally")
        state.factor = WeightMultiset(self.rs, q_part)
        state.pending_split = (state.factor_degree, state.factor_degree + 1)
        self._record("split", node.line,
                     f"factor split: kept {len(state.factor)} weights with "
                     f"<.,alpha{j + 1}^vee> in {sorted(values)}; quotient vanishes")
        return None

    def _step_product_vanish(self, state, node, top_level):
        if state.factor is None:
            raise ReplayError(f"line {node.line}: product_vanish needs a factor")
        if not state.twist.is_zero():
            # the product argument applies to the wedge factor alone; a twist
            # trivial on the Levi is tolerated, anything else is suspect
            for g in attr_groups(node, "levi"):
                for v in g:
                    if self.rs.pairing(state.twist, v) != 0:
                        raise ReplayError(
                            f"line {node.line}: twist is nonzero on the Levi")
        groups = attr_groups(node, "levi")
        base_q = getattr(state, "base_quotient", None)
        if base_q is None:
            raise ReplayError(
                f"line {node.line}: product_vanish needs the enclosing Koszul quotient")
        rep = product_type_vanish(self.rs, state.rootset, base_q, state.factor,
                                  state.factor_degree, groups,
                                  attr_str(node, "ambient"),
                                  kill_depth=self.kill.depth)
        before = state.copy()
        self._check_zero(before, f"line {node.line} product_vanish")
        detail = (f"{rep.levi_type}: candidates {rep.candidates} all absent from "
                  f"S^{rep.witness}(ambient dim {rep.ambient_dim})")
        if rep.decomposition:
            dims = sorted(d for _, m, d in rep.decomposition for _ in range(m))
            detail += f"; decomposition dims {dims}"
        self._record("product_vanish", node.line, detail)
        state.factor = None
        return "vanish"

    # ----- koszul and friends ---------------------------------------------------

    def _step_koszul(self, state, node, top_level):
        mode = attr_str(node, "mode", "conclude")
        if mode == "bound":
            return self._step_koszul_bound(state, node, top_level)
        if state.factor is not None:
            raise ReplayError(f"line {node.line}: koszul needs a folded query")
        if mode in ("conclude", "descend", "rewrite"):
            sub = self._parse_set(attr_str(node, "sub"))
            sup_set = state.rootset
        else:
            sup_set = self._parse_set(attr_str(node, "sup"))
            sub = state.rootset
        if not sub.issubset(sup_set):
            raise ReplayError(f"line {node.line}: sub is not contained in sup")
        if not sub.is_b_stable or not sup_set.is_b_stable:
            raise ReplayError(f"line {node.line}: both sides must be B-stable")
        q = quotient_weights(sub, sup_set)
        d = len(q)
        if d == 0:
            raise ReplayError(f"line {node.line}: trivial inclusion")
        wedges = {jj: exterior_power(q, jj) for jj in range(d + 1)}
        if self.check:
            self._koszul_additivity(node, state, sub, sup_set, q, wedges)
        facts = {}
        target = attr_int(node, "term", 0) if mode in ("rewrite", "lift") else None
        for jj in range(1, d + 1):
            if mode in ("rewrite", "lift") and jj == target:
                continue
            block = node.blocks.get(str(jj))
            tstate = self._term_state(sup_set, state, jj, wedges[jj], q)
            if block is None:
                facts[jj] = self._auto_vanish(tstate, node, jj)
            else:
                facts[jj] = self._run_block(tstate, block, f"term {jj}")
        if mode == "conclude":
            self._conclude_section(state, node, sub, facts, d)
            return "concluded"
        if mode in ("ascend", "descend"):
            for jj, f in facts.items():
                if f.kind != "vanish":
                    raise ReplayError(
                        f"line {node.line}: {mode} requires every term to vanish "
                        f"(term {jj} did not)")
            before = state.copy()
            state.rootset = sup_set if mode == "ascend" else sub
            self._check_iso(before, state, f"line {node.line} {mode}")
            self._record("koszul", node.line,
                         f"{mode}: rootset -> dim {state.rootset.dim} "
                         f"(all {d} terms vanish)")
            return None
        # rewrite / lift: the other end must vanish, then jump to `target`
        endkey = "f" if mode == "rewrite" else "0"
        endblock = node.blocks.get(endkey)
        if endblock is None:
            raise ReplayError(
                f"line {node.line}: {mode} needs a [term j={endkey}] block")
        if mode == "rewrite":
            estate = CohQuery(sub, state.offset, state.twist, 0)
        else:
            estate = CohQuery(sup_set, state.offset, state.twist, 0)
        efact = self._run_block(estate, endblock, f"term {endkey}")
        if efact.kind != "vanish":
            raise ReplayError(
                f"line {node.line}: the [term j={endkey}] side must vanish totally")
        for jj, f in facts.items():
            if f.kind != "vanish":
                raise ReplayError(
                    f"line {node.line}: {mode} requires term {jj} to vanish")
        if not 1 <= target <= d:
            raise ReplayError(f"line {node.line}: term={target} out of range")
        line = wedges[target]
        if len(line) != 1:
            raise ReplayError(
                f"line {node.line}: wedge^{target} is not one-dimensional")
        before = state.copy()
        state.rootset = sup_set
        state.offset -= target
        state.twist = state.twist + line.the_weight()
        state.shift -= (target - 1) if mode == "rewrite" else target
        self._check_iso(before, state, f"line {node.line} {mode}")
        self._record("koszul", node.line,
                     f"{mode} to term {target}: offset n{state.offset:+d}, "
                     f"twist {state.twist}, shift {state.shift}")
        return None

    @staticmethod
    def _term_state(sup_set, state, jj, wedge, q):
        """Term j of the resolution; a one-dimensional factor folds at once."""
        t = CohQuery(sup_set, state.offset - jj, state.twist, 0, wedge, jj)
        if wedge is not None and len(wedge) == 1:
            t.twist = t.twist + wedge.the_weight()
            t.factor = None
        t.base_quotient = q
        return t

    def _step_koszul_bound(self, state, node, top_level):
        """Terminal: threshold for the current query via an auxiliary Koszul."""
        if state.factor is not None:
            raise ReplayError(f"line {node.line}: bound needs a folded query")
        if "sup" in node.attrs:
            side = "sub"   # current sits at the F-position inside sup
            sup_set = self._parse_set(attr_str(node, "sup"))
            sub = state.rootset
        else:
            side = "sup"   # current is the T0-position over the given sub
            sub = self._parse_set(attr_str(node, "sub"))
            sup_set = state.rootset
        if not sub.issubset(sup_set):
            raise ReplayError(f"line {node.line}: sub not contained in sup")
        q = quotient_weights(sub, sup_set)
        d = len(q)
        wedges = {jj: exterior_power(q, jj) for jj in range(d + 1)}
        facts = {}
        for jj in range(1, d + 1):
            block = node.blocks.get(str(jj))
            tstate = self._term_state(sup_set, state, jj, wedges[jj], q)
            facts[jj] = self._run_block(tstate, block, f"term {jj}") if block \
                else self._auto_vanish(tstate, node, jj)
        endkey = "0" if side == "sub" else "f"
        endblock = node.blocks.get(endkey)
        if endblock is None:
            raise ReplayError(f"line {node.line}: bound needs a [term j={endkey}] block")
        if side == "sub":
            estate = CohQuery(sup_set, state.offset, state.twist, 0)
        else:
            estate = CohQuery(sub, state.offset, state.twist, 0)
        efact = self._run_block(estate, endblock, f"term {endkey}")
        if efact.kind == "vanish":
            t_end = 0
        else:
            t_end = efact.shift + efact.threshold
        entries, _ = self._staircase(facts, d, node)
        t_entries = 0
        for base, fct in entries:
            t_entries = max(t_entries, base + fct.threshold + (0 if side == "sup" else -1))
        t = max(t_end, t_entries)
        state.threshold = t
        self._record("koszul_bound", node.line,
                     f"H^i vanishes for i >= {t} (side {side}, {d} terms)")
        return "bounded"

    def _auto_vanish(self, tstate, node, jj):
        if tstate.factor is None:
            targets = [tstate.twist]
        else:
            targets = [w + tstate.twist for w in filtration_order(tstate.factor)]
        for w in targets:
            wit = self.kill.find(tstate.rootset, w)
            if wit is None:
                raise ReplayError(
                    f"line {node.line}: term {jj} has no block and weight "
                    f"{w} survives the Demazure search")
        self._check_zero(tstate, f"line {node.line} term {jj} auto-vanish")
        return TermFact("vanish")

    def _koszul_additivity(self, node, state, sub, sup_set, q, wedges):
        nmax = min(self.nmax, 6)
        from .cohomology import euler_mult_factored
        for pname, mu in self.probes:
            for n in range(nmax + 1):
                lhs = 0
                for jj, wj in wedges.items():
                    n_eff = n + state.offset - jj
                    if n_eff < 0 or len(wj) == 0:
                        continue
                    sign = -1 if jj % 2 else 1
                    lhs += sign * euler_mult_factored(sup_set, n_eff, state.twist,
                                                      wj, mu)
                n_eff = n + state.offset
                rhs = 0
                if n_eff >= 0:
                    rhs = euler_mult_factored(
                        sub, n_eff, state.twist,
                        WeightMultiset(self.rs, {self.rs.zero(): 1}), mu)
                self.checker.checks += 1
                if lhs != rhs:
                    raise ReplayError(
                        f"line {node.line}: Koszul chi-additivity failed at "
                        f"{pname}, n={n}: {lhs} != {rhs}")

    # ----- blocks and facts ------------------------------------------------------

    def _run_block(self, state, items, label) -> TermFact:
        state.vanished = False
        state.threshold = None
        outer_steps = self._section_steps
        sub_steps = []
        self._section_steps = sub_steps
        try:
            fact = None
            for node in items:
                if node.tag == "meta":
                    self.report["meta"].append(attr_str(node, "text"))
                    continue
                if node.tag == "step":
                    res = self._run_step(state, node)
                    if res == "vanish":
                        state.vanished = True
                    continue
                if node.tag == "conclude":
                    fact = self._conclude_block(state, node)
                    continue
                raise ReplayError(f"line {node.line}: [{node.tag}] not allowed in a block")
            if fact is None:
                raise ReplayError(f"block '{label}' did not conclude")
            pend = getattr(state, "pending_split", None)
            if pend is not None and fact.kind == "carrier":
                if fact.shift in pend:
                    raise ReplayError(
                        f"block '{label}': split bookkeeping needs the kept part "
                        f"concentrated away from degrees {pend}")
            return fact
        finally:
            self._section_steps = outer_steps
            if outer_steps is not None:
                outer_steps.append({"kind": "block", "label": label,
                                    "steps": sub_steps})

    def _conclude_block(self, state, node) -> TermFact:
        kind = attr_str(node, "kind")
        if kind == "vanish":
            if not state.vanished:
                raise ReplayError(
                    f"line {node.line}: conclude vanish without a vanishing step")
            self._record("conclude", node.line, "total vanishing")
            return TermFact("vanish")
        if kind == "broer":
            if state.factor is not None:
                raise ReplayError(f"line {node.line}: broer needs a folded query")
            case = attr_int(node, "case")
            diagram = None
            if "diagram" in node.attrs:
                diagram = self.rs.parse_diagram(attr_str(node, "diagram"))
            out = broer_case_check(state.rootset, state.twist, diagram=diagram)
            if not out.applies or out.case != case:
                raise ReplayError(
                    f"line {node.line}: Broer case {case} does not apply: {out}")
            self._record("conclude", node.line,
                         f"Broer case {case}: H^(>0) vanishes; concentrated in "
                         f"degree {state.shift}")
            return TermFact("carrier", shift=state.shift, query=state.copy(),
                            threshold=1)
        if kind in ("partial", "bounded"):
            if state.threshold is None:
                raise ReplayError(
                    f"line {node.line}: no bound step established a threshold")
            want = attr_int(node, "t", state.threshold)
            if state.threshold > want:
                raise ReplayError(
                    f"line {node.line}: derived threshold {state.threshold} "
                    f"is weaker than the expected {want}")
            self._record("conclude", node.line,
                         f"partial: H^(>= {state.threshold}) vanishes at shift "
                         f"{state.shift}")
            return TermFact("carrier", shift=state.shift, query=state.copy(),
                            threshold=state.threshold)
        raise ReplayError(f"line {node.line}: unknown conclude kind {kind!r}")

    # ----- staircase ----------------------------------------------------------

    def _staircase(self, facts, d, node):
        """Fold term facts from the top of the resolution down to Z_1.

        Returns (entries, clean).  Entries [(base, TermFact)] bound H^k(Z_1)
        by the contributions H^(k-base) of each fact's query; when `clean`,
        the entries form a formal complex and the H^0 kernel formula is exact
        (adjacent placements splice into one exact sequence).
        """
        entries = []
        clean = True
        for jj in range(d, 0, -1):
            f = facts[jj]
            if jj == d:
                if f.kind != "vanish":
                    entries = [(f.shift, f)]
                continue
            if f.kind == "vanish":
                entries = [(b - 1, e) for b, e in entries]
                continue
            for b, e in entries:
                if b + e.threshold - 1 > f.shift:
                    clean = False  # overlap: bounds remain valid, formula does not
            entries = [(b - 1, e) for b, e in entries] + [(f.shift, f)]
        return sorted(entries, key=lambda t: t[0]), clean

    def _conclude_section(self, state, node, sub, facts, d):
        entries, clean = self._staircase(facts, d, node)
        surjective = True
        blocker = ""
        for b, e in entries:
            k = 1 - b
            if k < 0:
                continue
            if k >= e.threshold:
                continue
            surjective = False
            blocker = f"H^{k} of the profile entry at base {b} is not known to vanish"
        conclusion = SectionConclusion("failed", sup=state, sub=sub)
        if not entries:
            conclusion.result = "iso"
        elif not surjective:
            conclusion.detail = blocker
        else:
            chain = None
            if clean:
                base_map = dict(entries)
                if 0 in base_map:
                    chain = []
                    b = 0
                    while b in base_map:
                        e = base_map[b]
                        if e.kind != "carrier" or e.threshold != 1 or e.query is None:
                            chain = None
                            break
                        chain.append(e)
                        b -= 1
                    if chain is not None and len(chain) != len(
                            [1 for bb, _ in entries if bb <= 0]):
                        # a non-chained entry wholly below degree zero would
                        # force its own cohomology to vanish: authoring error
                        raise ReplayError(
                            f"line {node.line}: disconnected profile entry in "
                            f"negative degrees; inconsistent derivation")
            if chain:
                kernels = []
                n_chain = len(chain)
                for idx, e in enumerate(reversed(chain)):  # most negative first
                    is_last = idx == n_chain - 1
                    kernels.append((e.query, bool(n_chain > 1 and is_last)))
                conclusion.result = "sequence"
                conclusion.kernels = kernels
            else:
                conclusion.result = "surjection"
        self._record("koszul", node.line,
                     f"conclude over {d} terms: {conclusion.result}")
        self._conclusion = conclusion


def run_script(path, rs=None, nmax=8, check=True):
    """Execute a script file and return its ReplayReport dictionary."""
    with open(path) as f:
        text = f.read()
    eng = ScriptEngine(rs=rs, nmax=nmax, check=check)
    import os
    try:
        return eng.run(text, name=os.path.basename(path))
    except (ReplayError, ScriptSyntaxError) as exc:
        eng.report["status"] = "failed"
        eng.report["error"] = str(exc)
        return eng.report


def render_report(report) -> str:
    lines = [f"script: {report.get('script', '?')}",
             f"status: {report['status']}"]
    if "error" in report:
        lines.append(f"error: {report['error']}")
    for text in report["meta"]:
        lines.append(f"  [meta] {text}")
    for sec in report["sections"]:
        lines.append(f"section: {sec['query']}")
        _render_steps(lines, sec["steps"], "  ")
        lines.append(f"  => {sec['conclusion']}")
    for u in report["unverified"]:
        lines.append(f"UNVERIFIED (line {u['line']}): {u['note']}")
    lines.append(f"cross-checks: {report['cross_checks']}")
    return "\n".join(lines)


def _render_steps(lines, steps, indent):
    for s in steps:
        if s.get("kind") == "block":
            lines.append(f"{indent}[{s['label']}]")
            _render_steps(lines, s["steps"], indent + "  ")
        else:
            mark = "" if s.get("status", "ok") == "ok" else f" ({s['status']})"
            lines.append(f"{indent}{s['kind']}: {s['detail']}{mark}")


def report_json(report) -> str:
    return json.dumps(report, indent=1, sort_keys=True)
