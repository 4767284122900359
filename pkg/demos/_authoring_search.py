"""Authoring aid: search Demazure/Sommers move sequences from a query state
to a state where Broer's criterion applies.  Prints ready-to-paste script
lines.  Not used by the replay engine; scripts pin what this finds.
"""

from collections import deque

from nilcoh.roots import build_root_system
from nilcoh.subspaces import levi_of_nilradical, nilradical_of_parabolic
from nilcoh.cohomology import broer_case_check
from nilcoh.replay import CohQuery, apply_demazure, apply_sommers, ReplayError

RS = build_root_system("E6")


def candidate_chains(levi):
    """All ordered paths in the E6 diagram with exactly one non-Levi vertex."""
    n = RS.rank
    out = []
    for start in range(n):
        stack = [(start,)]
        while stack:
            path = stack.pop()
            if len(path) >= 1:
                gaps = [v for v in path if v not in levi]
                if len(gaps) == 1:
                    out.append((path, path.index(gaps[0]) + 1))
            if len(path) < 6:
                last = path[-1]
                for nb in RS.adjacency[last]:
                    if nb in path:
                        continue
                    if all(RS.cartan[nb][p] == 0 for p in path[:-1]):
                        stack.append(path + (nb,))
    return out


def sommers_moves(q):
    levi = levi_of_nilradical(q.rootset)
    if levi is None:
        return
    for chain, m in candidate_chains(set(levi)):
        try:
            out = apply_sommers(RS, q, chain, m)
        except ReplayError:
            continue
        desc = (f"[step kind=sommers chain={','.join(str(c + 1) for c in chain)} "
                f"m={m} expect_offset={out.offset} expect_twist={out.twist}]")
        yield desc, out


def demazure_moves(q):
    for j in range(RS.rank):
        try:
            out = apply_demazure(RS, q, j)
        except ReplayError:
            continue
        if out == "vanish":
            yield f"[step kind=demazure alpha={j + 1} expect=vanish]", "vanish"
        else:
            yield f"[step kind=demazure alpha={j + 1} expect=shift]", out


def search_to_broer(rootset, offset, twist, max_steps=8, allow_demazure=True,
                    want_vanish=False):
    """BFS to a Broer-case-1 state (or to total vanishing)."""
    start = CohQuery(rootset, offset, twist, 0)
    seen = set()
    queue = deque([(start, [])])
    while queue:
        q, path = queue.popleft()
        key = (q.rootset, q.offset, q.twist.c, q.shift)
        if key in seen:
            continue
        seen.add(key)
        out = broer_case_check(q.rootset, q.twist)
        if out.case == 1 and not want_vanish:
            return path, q, "broer case 1"
        if len(path) >= max_steps:
            continue
        gens = list(sommers_moves(q))
        if allow_demazure:
            gens += list(demazure_moves(q))
        for desc, nxt in gens:
            if nxt == "vanish":
                if want_vanish:
                    return path + [desc], None, "vanish"
                continue
            queue.append((nxt, path + [desc]))
    return None, None, "not found"


if __name__ == "__main__":
    import sys
    spec, offset, twist = sys.argv[1], int(sys.argv[2]), sys.argv[3]
    from nilcoh.subspaces import parse_rootset
    s = parse_rootset(RS, spec)
    want_vanish = len(sys.argv) > 4 and sys.argv[4] == "vanish"
    path, q, how = search_to_broer(s, offset, RS.parse_weight(twist),
                                   want_vanish=want_vanish)
    if path is None:
        print("# no path found")
    else:
        for line in path:
            print(line)
        print(f"# -> {how}: {q.describe() if q else ''}")
        if q is not None:
            print(f"# final offset {q.offset} twist {q.twist} shift {q.shift}")
