"""Minimum vertex separators and important-separator enumeration.

The flow model splits each deletable vertex v into v_in -> v_out with unit
capacity; terminal vertices are not split (they are never deleted).  Edges
carry infinite capacity in both directions.  The farthest minimum cut is
extracted from the set of residual states that reach the sink; it is the
unique minimum separator S with R_S(X) inclusion-maximal.

All internal computations use vertex bitmasks for speed; the public API
speaks frozensets.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional

from .graphs import Graph, bits, mask_of, reach_mask, set_of


class InfeasibleSeparation(Exception):
    """Raised when an edge joins X and Y directly, so no separator exists."""


@dataclass(frozen=True)
class ImportantSeparatorQuery:
    X: frozenset[int]
    Y: frozenset[int]
    k: int

    def __post_init__(self):
        if self.X & self.Y:
            raise ValueError("X and Y must be disjoint")
        if self.k < 0:
            raise ValueError("k must be nonnegative")


@dataclass
class SearchStats:
    """Mutable counter for recursion-size instrumentation."""

    nodes: int = 0
    by_budget: dict[int, int] = field(default_factory=dict)

    def tick(self, budget: Optional[int] = None):
        self.nodes += 1
        if budget is not None:
            self.by_budget[budget] = self.by_budget.get(budget, 0) + 1


# -- flow kernel -------------------------------------------------------------
# states: 2*v = v_in, 2*v + 1 = v_out

_INFEASIBLE = "infeasible"


def _vertex_flow(g: Graph, alive: int, xmask: int, ymask: int, cap: int):
    """Min vertex (X,Y)-cut within G[alive], terminals non-deletable.

    Returns (lambda, farthest_cut_mask), or None when the minimum exceeds
    `cap`, or _INFEASIBLE when an edge joins X and Y inside `alive`.
    """
    adj = g._adj_masks
    xmask &= alive
    ymask &= alive
    for v in bits(xmask):
        if adj[v] & ymask:
            return _INFEASIBLE
    if cap < 0:
        return None
    free = alive & ~xmask & ~ymask
    used = 0  # vertices carrying one unit of flow
    eflow = [0] * g.n  # bit u of eflow[v]: one unit flows v -> u
    flow_value = 0
    nstates = 2 * g.n
    parent = [-2] * nstates
    while flow_value <= cap:
        # BFS for an augmenting path from X out-states to any Y in-state
        for i in range(nstates):
            parent[i] = -2
        queue = []
        for v in bits(xmask):
            queue.append(2 * v + 1)
            parent[2 * v + 1] = -1
        target = -1
        qi = 0
        while qi < len(queue) and target < 0:
            s = queue[qi]
            qi += 1
            v, is_out = s >> 1, s & 1
            if is_out:
                # forward edge arcs v_out -> u_in (infinite capacity)
                for u in bits(adj[v] & alive):
                    if ymask >> u & 1:
                        parent[2 * u] = s
                        target = 2 * u
                        break
                    t = 2 * u
                    if parent[t] == -2:
                        parent[t] = s
                        queue.append(t)
                if target >= 0:
                    break
                # reverse internal arc v_out -> v_in (when saturated)
                if used >> v & 1 and parent[2 * v] == -2:
                    parent[2 * v] = s
                    queue.append(2 * v)
            else:
                # forward internal arc v_in -> v_out (vertex still unused)
                if free >> v & 1 and not used >> v & 1:
                    t = 2 * v + 1
                    if parent[t] == -2:
                        parent[t] = s
                        queue.append(t)
                # reverse edge arcs v_in -> u_out (cancel flow u -> v)
                for u in bits(adj[v] & alive):
                    if eflow[u] >> v & 1:
                        t = 2 * u + 1
                        if parent[t] == -2:
                            parent[t] = s
                            queue.append(t)
        if target < 0:
            break
        flow_value += 1
        if flow_value > cap:
            return None
        # retrace and update flow
        s = target
        while parent[s] != -1:
            p = parent[s]
            pv, p_out = p >> 1, p & 1
            sv, s_out = s >> 1, s & 1
            if pv == sv:
                if p_out == 0:  # v_in -> v_out
                    used |= 1 << pv
                else:  # v_out -> v_in (reverse internal)
                    used &= ~(1 << pv)
            else:
                if p_out == 1 and s_out == 0:  # pv_out -> sv_in (edge forward)
                    if eflow[sv] >> pv & 1:
                        eflow[sv] &= ~(1 << pv)
                    else:
                        eflow[pv] |= 1 << sv
                else:  # pv_in -> sv_out (edge reverse, cancel sv -> pv)
                    eflow[sv] &= ~(1 << pv)
            s = p
    # farthest min cut: states that reach a sink in-state in the residual
    instate_b = ymask
    outstate_b = 0
    changed = True
    while changed:
        changed = False
        for v in bits(alive):
            vb = 1 << v
            if not outstate_b >> v & 1:
                # v_out -> u_in forward arcs
                if adj[v] & instate_b & alive:
                    outstate_b |= vb
                    changed = True
                # v_out -> v_in reverse internal
                elif used >> v & 1 and instate_b >> v & 1:
                    outstate_b |= vb
                    changed = True
            if not instate_b >> v & 1:
                # v_in -> v_out forward internal
                if free >> v & 1 and not used >> v & 1 and outstate_b >> v & 1:
                    instate_b |= vb
                    changed = True
                else:
                    # v_in -> u_out reverse edge arcs (flow u -> v present)
                    for u in bits(adj[v] & alive):
                        if eflow[u] >> v & 1 and outstate_b >> u & 1:
                            instate_b |= vb
                            changed = True
                            break
    cut = 0
    for v in bits(free):
        if outstate_b >> v & 1 and not instate_b >> v & 1:
            cut |= 1 << v
    return flow_value, cut


def reachable(g: Graph, X: Iterable[int], S: Iterable[int]) -> frozenset[int]:
    """Vertices reachable from X \\ S in G - S (includes X \\ S)."""
    smask = mask_of(S)
    return set_of(reach_mask(g, mask_of(X) & ~smask, g.full_mask() & ~smask))


def min_vertex_separator(
    g: Graph, X: Iterable[int], Y: Iterable[int], cap: int
) -> Optional[frozenset[int]]:
    """Minimum-size (X,Y)-separator of size <= cap, farthest from X.

    None when the minimum exceeds cap; raises InfeasibleSeparation when an
    edge joins X and Y directly (no separator exists at all).
    """
    xmask, ymask = mask_of(X), mask_of(Y)
    if xmask & ymask:
        raise ValueError("X and Y must be disjoint")
    res = _vertex_flow(g, g.full_mask(), xmask, ymask, cap)
    if res == _INFEASIBLE:
        raise InfeasibleSeparation("an edge joins X and Y")
    if res is None:
        return None
    _, cut = res
    return set_of(cut)


# -- important separators ----------------------------------------------------


def _is_important(g: Graph, alive: int, xmask: int, ymask: int, sep: int) -> bool:
    """Exact importance test per the definition (minimal + non-dominated)."""
    r = reach_mask(g, xmask, alive & ~sep)
    if r & ymask:
        return False
    for v in bits(sep):
        if not reach_mask(g, xmask, alive & ~(sep ^ (1 << v))) & ymask:
            return False  # not inclusion-minimal
    size = bin(sep).count("1")
    for v in bits(sep):
        res = _vertex_flow(g, alive, r | (1 << v), ymask, size)
        if res == _INFEASIBLE or res is None:
            continue  # no dominating separator through this vertex
        return False
    return True


def enumerate_important_separators(
    query: ImportantSeparatorQuery,
    g: Graph,
    emit: Callable[[frozenset[int]], None],
    stats: Optional[SearchStats] = None,
    within: Optional[Iterable[int]] = None,
) -> int:
    """Emit each important (X,Y)-separator of size <= k exactly once.

    Branch on the smallest-id vertex v of the current farthest min cut:
    left branch moves v into the separator (delete v, budget - 1), right
    branch moves v (and the cut's reachable region) into X.  Candidates are
    emitted through `emit`; memory stays bounded by the recursion depth.
    `within` restricts the instance to an induced subgraph.
    """
    xmask0, ymask0 = mask_of(query.X), mask_of(query.Y)
    alive0 = g.full_mask() if within is None else mask_of(within)
    count = 0

    def rec(alive: int, xmask: int, budget: int, acc: int):
        nonlocal count
        if stats is not None:
            stats.tick(budget)
        res = _vertex_flow(g, alive, xmask, ymask0, budget)
        if res == _INFEASIBLE or res is None:
            return
        lam, cut = res
        if lam == 0:
            if _is_important(g, alive0, xmask0, ymask0, acc):
                count += 1
                emit(set_of(acc))
            return
        v = cut & -cut
        rec(alive & ~v, xmask, budget - 1, acc | v)
        region = reach_mask(g, xmask, alive & ~cut)
        rec(alive, xmask | region | v, budget, acc)

    rec(alive0, xmask0, query.k, 0)
    return count


def brute_important_separators(
    g: Graph, X: Iterable[int], Y: Iterable[int], k: int
) -> frozenset[frozenset[int]]:
    """All important (X,Y)-separators of size <= k by exhaustive enumeration.

    Checks the definition directly: inclusion-minimal separators S with no
    separator S' satisfying |S'| <= |S| and R_S(X) strictly contained in
    R_S'(X).  Guarded to graphs on at most 16 vertices.
    """
    if g.n > 16:
        raise ValueError("brute_important_separators is guarded to n <= 16")
    xmask, ymask = mask_of(X), mask_of(Y)
    if xmask & ymask:
        raise ValueError("X and Y must be disjoint")
    full = g.full_mask()
    free = sorted(bits(full & ~xmask & ~ymask))
    seps = []  # (mask, size, reach)
    for size in range(0, k + 1):
        for combo in itertools.combinations(free, size):
            smask = mask_of(combo)
            r = reach_mask(g, xmask, full & ~smask)
            if not r & ymask:
                seps.append((smask, size, r))
    out = []
    for smask, size, r in seps:
        minimal = True
        for v in bits(smask):
            if not reach_mask(g, xmask, full & ~(smask ^ (1 << v))) & ymask:
                minimal = False
                break
        if not minimal:
            continue
        dominated = False
        for smask2, size2, r2 in seps:
            if size2 <= size and r & ~r2 == 0 and r != r2:
                dominated = True
                break
        if not dominated:
            out.append(set_of(smask))
    return frozenset(out)
