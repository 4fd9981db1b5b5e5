"""Brute-force ground truth: deletion numbers, elimination distance,
separability, and annotated bipartite coloring.

Everything here is definitional and slow on purpose; size guards keep the
enumerations at desk scale.  These oracles anchor every approximate or
clever routine elsewhere in the package.
"""

from __future__ import annotations

import itertools
from typing import Optional

from .graphs import (
    Graph,
    GraphClassSpec,
    bits,
    is_member,
    mask_of,
    proper_2_coloring,
    reach_mask,
    set_of,
)
from .separation import Separation


def brute_min_deletion(g: Graph, cls: GraphClassSpec) -> tuple[int, frozenset[int]]:
    """Minimum |X| with G - X in the class, by subset enumeration in size
    order; the witness is the lexicographically smallest optimum."""
    if g.n > 12:
        raise ValueError("brute_min_deletion is guarded to n <= 12")
    full = g.full_mask()
    for size in range(g.n + 1):
        for combo in itertools.combinations(range(g.n), size):
            keep = set_of(full & ~mask_of(combo))
            if is_member(g, cls, keep):
                return size, frozenset(combo)
    raise AssertionError("unreachable: deleting everything is always feasible")


def brute_ed(g: Graph, cls: GraphClassSpec) -> int:
    """Exact elimination distance to the class, by the recursive definition."""
    if g.n > 10:
        raise ValueError("brute_ed is guarded to n <= 10")
    memo: dict[int, int] = {}

    def ed_connected(mask: int) -> int:
        # mask induces a connected subgraph
        cached = memo.get(mask)
        if cached is not None:
            return cached
        if is_member(g, cls, set_of(mask)):
            memo[mask] = 0
            return 0
        best = g.n + 1
        for v in bits(mask):
            best = min(best, 1 + ed(mask & ~(1 << v)))
        memo[mask] = best
        return best

    def ed(mask: int) -> int:
        if mask == 0:
            return 0
        value = 0
        pool = mask
        while pool:
            comp = reach_mask(g, pool & -pool, pool)
            value = max(value, ed_connected(comp))
            pool &= ~comp
        return value

    return ed(g.full_mask())


def brute_separable(
    g: Graph,
    Z: frozenset[int],
    k: int,
    cls: GraphClassSpec,
    weak: bool = False,
) -> Optional[Separation]:
    """A witness (C,S)-separation covering Z (weakly if `weak`), or None.

    Enumerates all candidate separators S of size <= k; C is the union of
    components of G - S meeting Z (minimal by heredity, hence sufficient).
    """
    if g.n > 10:
        raise ValueError("brute_separable is guarded to n <= 10")
    if not Z:
        raise ValueError("Z must be nonempty")
    zmask = mask_of(Z)
    full = g.full_mask()
    pool = sorted(bits(full if weak else full & ~zmask))
    for size in range(0, min(k, len(pool)) + 1):
        for combo in itertools.combinations(pool, size):
            smask = mask_of(combo)
            seeds = zmask & ~smask
            if not weak and seeds != zmask:
                continue
            cmask = reach_mask(g, seeds, full & ~smask)
            if weak and (zmask & ~(cmask | smask)):
                continue
            if is_member(g, cls, set_of(cmask)):
                return Separation(set_of(cmask), set_of(smask), cls, k)
    return None


def brute_abc(
    g: Graph, B1: frozenset[int], B2: frozenset[int], k: int
) -> Optional[frozenset[int]]:
    """Minimum X such that G - X has a 2-coloring with B1 \\ X and B2 \\ X on
    opposite sides, or None if the minimum exceeds k."""
    if g.n > 12:
        raise ValueError("brute_abc is guarded to n <= 12")
    if proper_2_coloring(g) is None:
        raise ValueError("brute_abc needs a bipartite graph")
    full = g.full_mask()
    b1, b2 = mask_of(B1), mask_of(B2)

    def feasible(xmask: int) -> bool:
        keep = full & ~xmask
        coloring = proper_2_coloring(g, set_of(keep))
        assert coloring is not None  # induced subgraph of a bipartite graph
        pool = keep
        while pool:
            comp = reach_mask(g, pool & -pool, pool)
            pool &= ~comp
            # component is feasible if some flip puts B1 on side 1, B2 on 2
            ok_keep = ok_flip = True
            for v in bits(comp):
                c = coloring[v]
                if b1 >> v & 1:
                    if c == 2:
                        ok_keep = False
                    else:
                        ok_flip = False
                if b2 >> v & 1:
                    if c == 1:
                        ok_keep = False
                    else:
                        ok_flip = False
            if not ok_keep and not ok_flip:
                return False
        return True

    for size in range(min(k, g.n) + 1):
        for combo in itertools.combinations(range(g.n), size):
            xmask = mask_of(combo)
            if feasible(xmask):
                return frozenset(combo)
    return None


def brute_min_vertex_cover(g: Graph) -> tuple[int, frozenset[int]]:
    """Minimum vertex cover by subset enumeration (lexicographically smallest)."""
    if g.n > 12:
        raise ValueError("brute_min_vertex_cover is guarded to n <= 12")
    for size in range(g.n + 1):
        for combo in itertools.combinations(range(g.n), size):
            cmask = mask_of(combo)
            if all(cmask >> u & 1 or cmask >> v & 1 for u, v in g.edges):
                return size, frozenset(combo)
    raise AssertionError("unreachable")
