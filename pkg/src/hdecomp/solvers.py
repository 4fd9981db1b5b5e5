"""Vertex-deletion solvers on top of decompositions.

Branching solvers walk elimination forests top-down, annotating ancestors
(3-way for odd cycle transversal, 2-way for vertex cover and clique
deletion) and solving an annotated polynomial case in the base components.
Dynamic-programming solvers run over nice tree decompositions with numpy
tables indexed by base-3 (OCT) or base-2 (VC) encodings of the bag
partition.

The failure value bottom is represented by None and absorbs through unions.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .graphs import (
    Graph,
    GraphClassSpec,
    bits,
    mask_of,
    neighborhood_mask,
    proper_2_coloring,
    set_of,
)
from .decomposition import EliminationForest, NiceTreeHDecomposition
from .separators import min_vertex_separator

INF = np.int64(1) << 40


def union_bot(*parts):
    """Union with absorbing None."""
    out: set[int] = set()
    for p in parts:
        if p is None:
            return None
        out |= p
    return frozenset(out)


# ---------------------------------------------------------------------------
# annotated bipartite coloring
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AbcInstance:
    g: Graph
    B1: frozenset[int]
    B2: frozenset[int]
    k: int

    def __post_init__(self):
        if proper_2_coloring(self.g) is None:
            raise ValueError("annotated bipartite coloring needs a bipartite graph")
        if any(v < 0 or v >= self.g.n for v in self.B1 | self.B2):
            raise ValueError("annotation vertices out of range")


def _abc_within(
    g: Graph, within: frozenset[int], B1: frozenset[int], B2: frozenset[int], k: int
) -> Optional[frozenset[int]]:
    """ABC on G[within] via the reference-coloring cut characterization.

    Fix a proper 2-coloring f of G[within]; a deletion set X is feasible iff
    it separates T1 = (B1 & f^-1(2)) | (B2 & f^-1(1)) from
    T2 = (B1 & f^-1(1)) | (B2 & f^-1(2)), with terminals themselves
    deletable.  Deletability is modeled by two fresh non-deletable anchor
    vertices adjacent to T1 resp. T2.
    """
    f = proper_2_coloring(g, within)
    if f is None:
        raise ValueError("ABC instance graph must be bipartite")
    t1 = {v for v in B1 if f[v] == 2} | {v for v in B2 if f[v] == 1}
    t2 = {v for v in B1 if f[v] == 1} | {v for v in B2 if f[v] == 2}
    if not t1 or not t2:
        return frozenset()
    s, t = g.n, g.n + 1
    edges = [(u, v) for u, v in g.edges if u in within and v in within]
    edges += [(s, v) for v in sorted(t1)]
    edges += [(t, v) for v in sorted(t2)]
    aux = Graph(g.n + 2, edges)
    cut = min_vertex_separator(aux, {s}, {t}, k)
    return cut


def solve_abc(inst: AbcInstance) -> Optional[frozenset[int]]:
    """Minimum X such that G - X has a 2-coloring with B1 \\ X, B2 \\ X on
    opposite sides; None if the minimum exceeds k."""
    return _abc_within(
        inst.g, frozenset(range(inst.g.n)), inst.B1, inst.B2, inst.k
    )


# ---------------------------------------------------------------------------
# bipartite vertex cover (Koenig)
# ---------------------------------------------------------------------------


def _vc_bipartite_within(g: Graph, within: frozenset[int]) -> frozenset[int]:
    coloring = proper_2_coloring(g, within)
    if coloring is None:
        raise ValueError("vc_bipartite needs a bipartite graph")
    left = sorted(v for v in within if coloring[v] == 1)
    right = {v for v in within if coloring[v] == 2}
    match: dict[int, int] = {}  # right -> left
    match_left: dict[int, int] = {}

    def augment(u: int, seen: set[int]) -> bool:
        for w in g.neighbors(u):
            if w in right and w not in seen:
                seen.add(w)
                if w not in match or augment(match[w], seen):
                    match[w] = u
                    match_left[u] = w
                    return True
        return False

    for u in left:
        if u not in match_left:
            augment(u, set())
    # Koenig: alternating reachability from unmatched left vertices
    z: set[int] = {u for u in left if u not in match_left}
    frontier = list(z)
    while frontier:
        nxt = []
        for u in frontier:
            for w in g.neighbors(u):
                if w in right and w not in z:
                    z.add(w)
                    m = match.get(w)
                    if m is not None and m not in z:
                        z.add(m)
                        nxt.append(m)
        frontier = nxt
    return frozenset(u for u in left if u not in z) | frozenset(w for w in right if w in z)


def vc_bipartite(g: Graph) -> frozenset[int]:
    """Minimum vertex cover of a bipartite graph via maximum matching."""
    return _vc_bipartite_within(g, frozenset(range(g.n)))


# ---------------------------------------------------------------------------
# branching solvers on elimination forests
# ---------------------------------------------------------------------------


def _check_forest(g: Graph, forest: EliminationForest):
    errs = forest.validate(g)
    if errs:
        raise ValueError("invalid elimination forest: " + "; ".join(errs))


def _has_edge_within(g: Graph, vs: frozenset[int]) -> bool:
    m = mask_of(vs)
    return any(g.adj_mask(v) & m for v in vs)


def solve_oct_elim(g: Graph, forest: EliminationForest) -> frozenset[int]:
    """Minimum odd cycle transversal via 3-way branching on a bipartite-class
    elimination forest; base components solved as ABC instances with budget
    equal to the leaf depth."""
    _check_forest(g, forest)
    ch = forest.children()
    depths = forest.depths()

    def rec(t: int, s1: frozenset[int], s2: frozenset[int]) -> Optional[frozenset[int]]:
        node = forest.nodes[t]
        if node.leaf:
            if _has_edge_within(g, s1) or _has_edge_within(g, s2):
                return None
            bagmask = mask_of(node.bag)
            b1 = set_of(neighborhood_mask(g, mask_of(s1)) & bagmask)
            b2 = set_of(neighborhood_mask(g, mask_of(s2)) & bagmask)
            return _abc_within(g, node.bag, b1, b2, depths[t])
        v = next(iter(node.bag))
        kids = sorted(ch[t])
        xx = union_bot(frozenset({v}), *(rec(c, s1, s2) for c in kids))
        x1 = union_bot(*(rec(c, s1 | {v}, s2) for c in kids))
        x2 = union_bot(*(rec(c, s1, s2 | {v}) for c in kids))
        best = None
        for cand in (xx, x1, x2):
            if cand is not None and (best is None or len(cand) < len(best)):
                best = cand
        return best

    total: set[int] = set()
    for r in forest.roots():
        res = rec(r, frozenset(), frozenset())
        assert res is not None, "the all-deleted branch is always feasible"
        total |= res
    return frozenset(total)


def solve_vc_elim(
    g: Graph,
    forest: EliminationForest,
    base_solver: Callable[[Graph, frozenset], frozenset] = _vc_bipartite_within,
) -> frozenset[int]:
    """Minimum vertex cover via 2-way branching; base components are solved
    by `base_solver` after removing neighbors of the out-side annotation."""
    _check_forest(g, forest)
    ch = forest.children()

    def rec(t: int, s_o: frozenset[int]) -> Optional[frozenset[int]]:
        node = forest.nodes[t]
        if node.leaf:
            if _has_edge_within(g, s_o):
                return None
            bagmask = mask_of(node.bag)
            forced = set_of(neighborhood_mask(g, mask_of(s_o)) & bagmask)
            rest = node.bag - forced
            return base_solver(g, rest) | forced
        v = next(iter(node.bag))
        kids = sorted(ch[t])
        xi = union_bot(frozenset({v}), *(rec(c, s_o) for c in kids))
        xo = union_bot(*(rec(c, s_o | {v}) for c in kids))
        if xi is not None and (xo is None or len(xi) <= len(xo)):
            return xi
        return xo

    total: set[int] = set()
    for r in forest.roots():
        res = rec(r, frozenset())
        assert res is not None
        total |= res
    return frozenset(total)


# ---------------------------------------------------------------------------
# K_l-free deletion
# ---------------------------------------------------------------------------


def _find_clique(g: Graph, within_mask: int, ell: int) -> Optional[tuple[int, ...]]:
    """Lexicographically smallest K_ell inside G[within]."""
    vs = sorted(bits(within_mask))
    if len(vs) < ell:
        return None

    def extend(clique: list[int], cand: list[int]) -> Optional[tuple[int, ...]]:
        if len(clique) == ell:
            return tuple(clique)
        for i, v in enumerate(cand):
            if len(clique) + (len(cand) - i) < ell:
                return None
            nxt = [w for w in cand[i + 1 :] if g.has_edge(v, w)]
            res = extend(clique + [v], nxt)
            if res is not None:
                return res
        return None

    return extend([], vs)


def solve_klfree_fdfv(
    g: Graph,
    U: frozenset[int],
    k: int,
    ell: int,
    within: Optional[frozenset[int]] = None,
) -> Optional[frozenset[int]]:
    """Minimum X avoiding U with G[within] - X free of K_ell cliques and
    |X| <= k, by <= ell-way branching on a detected clique."""
    if ell < 2 or ell > 5:
        raise ValueError("ell must be between 2 and 5")
    wmask = g.full_mask() if within is None else mask_of(within)
    umask = mask_of(U)

    def packing_exceeds(mask: int, budget: int) -> bool:
        count = 0
        pool = mask
        while count <= budget:
            cl = _find_clique(g, pool, ell)
            if cl is None:
                return False
            count += 1
            pool &= ~mask_of(cl)
        return True

    def rec(mask: int, budget: int) -> Optional[frozenset[int]]:
        clique = _find_clique(g, mask, ell)
        if clique is None:
            return frozenset()
        if budget <= 0:
            return None
        if packing_exceeds(mask, budget):
            return None
        best = None
        for v in clique:
            if umask >> v & 1:
                continue
            sub = rec(mask & ~(1 << v), budget - 1)
            if sub is not None:
                cand = sub | {v}
                if best is None or len(cand) < len(best):
                    best = cand
        return best

    return rec(wmask, k)


def solve_klfree_elim(g: Graph, forest: EliminationForest, ell: int) -> frozenset[int]:
    """Minimum K_ell-free deletion set via 2-way branching; base components
    are finished by the forbidden-vertex branching solver with the leaf
    depth as budget."""
    _check_forest(g, forest)
    ch = forest.children()
    depths = forest.depths()

    def rec(t: int, s_o: frozenset[int]) -> Optional[frozenset[int]]:
        node = forest.nodes[t]
        if node.leaf:
            if _find_clique(g, mask_of(s_o), ell) is not None:
                return None
            return solve_klfree_fdfv(g, s_o, depths[t], ell, node.bag | s_o)
        v = next(iter(node.bag))
        kids = sorted(ch[t])
        xi = union_bot(frozenset({v}), *(rec(c, s_o) for c in kids))
        xo = union_bot(*(rec(c, s_o | {v}) for c in kids))
        if xi is not None and (xo is None or len(xi) <= len(xo)):
            return xi
        return xo

    total: set[int] = set()
    for r in forest.roots():
        res = rec(r, frozenset())
        assert res is not None
        total |= res
    return frozenset(total)


# ---------------------------------------------------------------------------
# dynamic programming over nice tree decompositions
# ---------------------------------------------------------------------------


def _check_nice(g: Graph, dec: NiceTreeHDecomposition):
    errs = dec.validate(g)
    if errs:
        raise ValueError("invalid nice tree decomposition: " + "; ".join(errs))


def _assign_edges(g: Graph, dec: NiceTreeHDecomposition) -> list[list[tuple[int, int]]]:
    """Deepest covering node per edge, smallest id on ties."""
    n_nodes = len(dec.parents)
    depth = [0] * n_nodes
    for i, p in enumerate(dec.parents):
        if p >= 0:
            depth[i] = depth[p] + 1
    assigned: list[list[tuple[int, int]]] = [[] for _ in range(n_nodes)]
    for u, v in sorted(g.edges):
        best = -1
        for i in range(n_nodes):
            if u in dec.bags[i] and v in dec.bags[i]:
                if best < 0 or depth[i] > depth[best]:
                    best = i
        assert best >= 0, "edge not covered"
        assigned[best].append((u, v))
    return assigned


@dataclass
class _NodePlan:
    bagvars: list[int]  # sorted bag minus L
    kind: str  # leaf / identity / introduce / forget / join
    child_pos: Optional[int] = None  # position of the changing vertex


def _plan_nodes(g: Graph, dec: NiceTreeHDecomposition) -> list[_NodePlan]:
    ch = dec.children()
    plans = []
    for t in range(len(dec.parents)):
        bagvars = sorted(dec.bags[t] - dec.L)
        kids = ch[t]
        if not kids:
            plans.append(_NodePlan(bagvars, "leaf"))
        elif len(kids) == 2:
            plans.append(_NodePlan(bagvars, "join"))
        else:
            c = kids[0]
            cvars = sorted(dec.bags[c] - dec.L)
            if cvars == bagvars:
                plans.append(_NodePlan(bagvars, "identity"))
            elif len(bagvars) == len(cvars) + 1:
                (v,) = set(bagvars) - set(cvars)
                plans.append(_NodePlan(bagvars, "introduce", bagvars.index(v)))
            else:
                (v,) = set(cvars) - set(bagvars)
                plans.append(_NodePlan(bagvars, "forget", cvars.index(v)))
    return plans


def _drop_index(idx: np.ndarray, pos: int, base: int) -> np.ndarray:
    low = idx % base**pos
    high = idx // base ** (pos + 1)
    return low + high * base**pos


def _digit(idx, pos: int, base: int):
    return (idx // base**pos) % base


def _digit_count(size: int, base: int, npos: int, digit: int) -> np.ndarray:
    idx = np.arange(size)
    out = np.zeros(size, dtype=np.int64)
    for p in range(npos):
        out += _digit(idx, p, base) == digit
    return out


def solve_oct_dp(
    g: Graph, dec: NiceTreeHDecomposition, tight_budget: bool = False
) -> tuple[int, frozenset[int]]:
    """Minimum odd cycle transversal by DP over bag triples (L_t, R_t, W_t).

    Digits per non-base bag vertex: 0 = left class, 1 = right class,
    2 = deleted.  Base parts are finished with ABC at the leaves (budget =
    base size, or width+1 under `tight_budget`).
    """
    _check_nice(g, dec)
    if dec.cls is None or dec.cls.kind != GraphClassSpec.BIPARTITE:
        raise ValueError("odd cycle transversal needs a bipartite-class decomposition")
    n_nodes = len(dec.parents)
    ch = dec.children()
    plans = _plan_nodes(g, dec)
    assigned = _assign_edges(g, dec)
    tables: list[np.ndarray] = [None] * n_nodes  # type: ignore[list-item]
    abc_memo: dict[tuple[int, frozenset, frozenset], Optional[frozenset]] = {}

    def leaf_abc(t: int, b1: frozenset[int], b2: frozenset[int]) -> Optional[frozenset[int]]:
        base = dec.bags[t] & dec.L
        key = (t, b1, b2)
        if key not in abc_memo:
            budget = (dec.width + 1) if tight_budget else len(base)
            abc_memo[key] = _abc_within(g, base, b1, b2, budget)
        return abc_memo[key]

    def violation_mask(t: int) -> np.ndarray:
        plan = plans[t]
        size = 3 ** len(plan.bagvars)
        idx = np.arange(size)
        bad = np.zeros(size, dtype=bool)
        pos = {v: i for i, v in enumerate(plan.bagvars)}
        for u, v in assigned[t]:
            if u in pos and v in pos:
                du, dv = _digit(idx, pos[u], 3), _digit(idx, pos[v], 3)
                bad |= (du == dv) & (du != 2)
        return bad

    def leaf_table(t: int) -> np.ndarray:
        plan = plans[t]
        b = len(plan.bagvars)
        size = 3**b
        f = np.full(size, INF, dtype=np.int64)
        bad = violation_mask(t)
        base = dec.bags[t] & dec.L
        basemask = mask_of(base)
        nbr = [g.adj_mask(v) & basemask for v in plan.bagvars]
        for idx in range(size):
            if bad[idx]:
                continue
            w = 0
            b1m = b2m = 0
            for p in range(b):
                d = idx // 3**p % 3
                if d == 2:
                    w += 1
                elif d == 0:
                    b1m |= nbr[p]
                else:
                    b2m |= nbr[p]
            sol = leaf_abc(t, set_of(b1m), set_of(b2m))
            if sol is not None:
                f[idx] = w + len(sol)
        return f

    for t in range(n_nodes - 1, -1, -1):
        plan = plans[t]
        size = 3 ** len(plan.bagvars)
        if plan.kind == "leaf":
            tables[t] = leaf_table(t)
            continue
        kids = ch[t]
        if plan.kind == "join":
            wcount = _digit_count(size, 3, len(plan.bagvars), 2)
            f = tables[kids[0]] + tables[kids[1]] - wcount
        elif plan.kind == "identity":
            f = tables[kids[0]].copy()
        elif plan.kind == "introduce":
            idx = np.arange(size)
            sub = _drop_index(idx, plan.child_pos, 3)
            f = tables[kids[0]][sub] + (_digit(idx, plan.child_pos, 3) == 2)
        else:  # forget
            cf = tables[kids[0]]
            cpos = plan.child_pos
            idx = np.arange(size)
            low = idx % 3**cpos
            high = idx // 3**cpos
            choices = [cf[low + d * 3**cpos + high * 3 ** (cpos + 1)] for d in range(3)]
            f = np.minimum(np.minimum(choices[0], choices[1]), choices[2])
        bad = violation_mask(t)
        f = np.where(bad, INF, f)
        f = np.minimum(f, INF)
        tables[t] = f

    root = dec.root()
    best_idx = int(np.argmin(tables[root]))
    best = int(tables[root][best_idx])
    assert best < INF

    # reconstruct by walking the argmin back down
    solution: set[int] = set()

    def walk(t: int, idx: int):
        plan = plans[t]
        for p, v in enumerate(plan.bagvars):
            if idx // 3**p % 3 == 2:
                solution.add(v)
        if plan.kind == "leaf":
            b = len(plan.bagvars)
            basemask = mask_of(dec.bags[t] & dec.L)
            b1m = b2m = 0
            for p in range(b):
                d = idx // 3**p % 3
                if d == 0:
                    b1m |= g.adj_mask(plan.bagvars[p]) & basemask
                elif d == 1:
                    b2m |= g.adj_mask(plan.bagvars[p]) & basemask
            sol = leaf_abc(t, set_of(b1m), set_of(b2m))
            assert sol is not None
            solution.update(sol)
            return
        kids = ch[t]
        if plan.kind == "join":
            walk(kids[0], idx)
            walk(kids[1], idx)
        elif plan.kind == "identity":
            walk(kids[0], idx)
        elif plan.kind == "introduce":
            walk(kids[0], int(_drop_index(np.int64(idx), plan.child_pos, 3)))
        else:
            cf = tables[kids[0]]
            cpos = plan.child_pos
            low = idx % 3**cpos
            high = idx // 3**cpos
            vals = [int(cf[low + d * 3**cpos + high * 3 ** (cpos + 1)]) for d in range(3)]
            d = vals.index(min(vals))
            walk(kids[0], low + d * 3**cpos + high * 3 ** (cpos + 1))

    walk(root, best_idx)
    assert len(solution) == best
    return best, frozenset(solution)


def solve_vc_dp(
    g: Graph,
    dec: NiceTreeHDecomposition,
    base_solver: Callable[[Graph, frozenset], frozenset] = _vc_bipartite_within,
) -> tuple[int, frozenset[int]]:
    """Minimum vertex cover by 0/1-assignment DP over nice decompositions;
    base parts are finished by `base_solver` after forcing the neighbors of
    out-vertices into the cover."""
    _check_nice(g, dec)
    n_nodes = len(dec.parents)
    ch = dec.children()
    plans = _plan_nodes(g, dec)
    assigned = _assign_edges(g, dec)
    tables: list[np.ndarray] = [None] * n_nodes  # type: ignore[list-item]
    leaf_memo: dict[tuple[int, int], frozenset[int]] = {}

    def leaf_solution(t: int, forced: int) -> frozenset[int]:
        key = (t, forced)
        if key not in leaf_memo:
            rest = (dec.bags[t] & dec.L) - set_of(forced)
            leaf_memo[key] = base_solver(g, rest) | set_of(forced)
        return leaf_memo[key]

    def violation_mask(t: int) -> np.ndarray:
        plan = plans[t]
        size = 2 ** len(plan.bagvars)
        idx = np.arange(size)
        bad = np.zeros(size, dtype=bool)
        pos = {v: i for i, v in enumerate(plan.bagvars)}
        for u, v in assigned[t]:
            if u in pos and v in pos:
                bad |= (_digit(idx, pos[u], 2) == 0) & (_digit(idx, pos[v], 2) == 0)
        return bad

    for t in range(n_nodes - 1, -1, -1):
        plan = plans[t]
        b = len(plan.bagvars)
        size = 2**b
        if plan.kind == "leaf":
            f = np.full(size, INF, dtype=np.int64)
            bad = violation_mask(t)
            basemask = mask_of(dec.bags[t] & dec.L)
            nbr = [g.adj_mask(v) & basemask for v in plan.bagvars]
            for idx in range(size):
                if bad[idx]:
                    continue
                ones = 0
                forced = 0
                for p in range(b):
                    if idx >> p & 1:
                        ones += 1
                    else:
                        forced |= nbr[p]
                f[idx] = ones + len(leaf_solution(t, forced))
            tables[t] = f
            continue
        kids = ch[t]
        if plan.kind == "join":
            onecount = _digit_count(size, 2, b, 1)
            f = tables[kids[0]] + tables[kids[1]] - onecount
        elif plan.kind == "identity":
            f = tables[kids[0]].copy()
        elif plan.kind == "introduce":
            idx = np.arange(size)
            sub = _drop_index(idx, plan.child_pos, 2)
            f = tables[kids[0]][sub] + (_digit(idx, plan.child_pos, 2) == 1)
        else:
            cf = tables[kids[0]]
            cpos = plan.child_pos
            idx = np.arange(size)
            low = idx % 2**cpos
            high = idx // 2**cpos
            f = np.minimum(
                cf[low + high * 2 ** (cpos + 1)],
                cf[low + 2**cpos + high * 2 ** (cpos + 1)],
            )
        bad = violation_mask(t)
        f = np.where(bad, INF, f)
        tables[t] = f

    root = dec.root()
    best_idx = int(np.argmin(tables[root]))
    best = int(tables[root][best_idx])
    assert best < INF

    solution: set[int] = set()

    def walk(t: int, idx: int):
        plan = plans[t]
        for p, v in enumerate(plan.bagvars):
            if idx >> p & 1:
                solution.add(v)
        if plan.kind == "leaf":
            forced = 0
            basemask = mask_of(dec.bags[t] & dec.L)
            for p, v in enumerate(plan.bagvars):
                if not idx >> p & 1:
                    forced |= g.adj_mask(v) & basemask
            solution.update(leaf_solution(t, forced))
            return
        kids = ch[t]
        if plan.kind == "join":
            walk(kids[0], idx)
            walk(kids[1], idx)
        elif plan.kind == "identity":
            walk(kids[0], idx)
        elif plan.kind == "introduce":
            walk(kids[0], int(_drop_index(np.int64(idx), plan.child_pos, 2)))
        else:
            cf = tables[kids[0]]
            cpos = plan.child_pos
            low = idx % 2**cpos
            high = idx // 2**cpos
            i0 = low + high * 2 ** (cpos + 1)
            i1 = low + 2**cpos + high * 2 ** (cpos + 1)
            walk(kids[0], i0 if cf[i0] <= cf[i1] else i1)

    walk(root, best_idx)
    assert len(solution) == best
    return best, frozenset(solution)


# ---------------------------------------------------------------------------
# output format
# ---------------------------------------------------------------------------


def solution_block(problem: str, X: frozenset[int]) -> str:
    lines = [f"SOLUTION {problem} {len(X)}"]
    lines += [str(v + 1) for v in sorted(X)]
    return "\n".join(lines) + "\n"
