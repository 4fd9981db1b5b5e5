"""Exhaustive isomorphism-free enumeration of small graphs.

Graphs are encoded as adjacency bitmasks over the column-major upper
triangle (vertex j contributes bits for its adjacency to 0..j-1, see
Graph.from_edge_mask).  The canonical form of a graph is the maximum such
bitmask over all vertex orderings, computed by branch-and-bound: orderings
are grown one position at a time and only the orderings achieving the
current best prefix survive.
"""

from __future__ import annotations

from .graphs import Graph, bits

#: number of graphs on n vertices up to isomorphism (OEIS A000088)
GRAPH_COUNTS = [1, 1, 2, 4, 11, 34, 156, 1044, 12346]
#: number of connected graphs on n vertices up to isomorphism (OEIS A001349)
CONNECTED_GRAPH_COUNTS = [1, 1, 1, 2, 6, 21, 112, 853, 11117]


def canonical_mask(n: int, adj_masks: tuple[int, ...]) -> int:
    """Maximum adjacency bitmask of the graph over all vertex orderings."""
    if n <= 1:
        return 0
    # partial orderings achieving the best prefix so far; by induction all
    # entries share identical prefix bits, so only the new chunk is compared
    partials = [(v,) for v in range(n)]
    for pos in range(1, n):
        best = -1
        survivors = []
        for placed in partials:
            placed_set = set(placed)
            for v in range(n):
                if v in placed_set:
                    continue
                chunk = 0
                m = adj_masks[v]
                for i, u in enumerate(placed):
                    if m >> u & 1:
                        chunk |= 1 << i
                if chunk > best:
                    best = chunk
                    survivors = [placed + (v,)]
                elif chunk == best:
                    survivors.append(placed + (v,))
        partials = survivors
    # all survivors encode the same maximal bit string; rebuild it in the
    # column-major layout of Graph.edge_mask()
    order = partials[0]
    mask = 0
    posbit = 0
    for j in range(n):
        vj = order[j]
        for i in range(j):
            if adj_masks[vj] >> order[i] & 1:
                mask |= 1 << posbit
            posbit += 1
    return mask


def canonical_form(g: Graph) -> int:
    return canonical_mask(g.n, g._adj_masks)


def _extend(n: int, mask: int, nbrs: int) -> int:
    """Append vertex n with neighborhood `nbrs` (mask over 0..n-1)."""
    return mask | (nbrs << (n * (n - 1) // 2))


def all_graphs(n: int) -> list[int]:
    """Canonical edge-masks of all graphs on exactly n vertices, sorted."""
    if n == 0:
        return [0]
    prev = all_graphs(n - 1)
    seen = set()
    for mask in prev:
        g = Graph.from_edge_mask(n - 1, mask)
        adj = g._adj_masks + (0,)
        for nbrs in range(1 << (n - 1)):
            masks = tuple(
                (adj[v] | (1 << (n - 1) if nbrs >> v & 1 else 0)) if v < n - 1 else nbrs
                for v in range(n)
            )
            seen.add(canonical_mask(n, masks))
    return sorted(seen)


_cache: dict[int, list[int]] = {}


def graphs_up_to(n: int) -> dict[int, list[int]]:
    """Canonical masks of all graphs on 1..n vertices (memoized)."""
    for k in range(n + 1):
        if k not in _cache:
            _cache[k] = all_graphs(k)
    return {k: _cache[k] for k in range(1, n + 1)}


def connected_graphs(max_n: int, min_n: int = 1) -> list[Graph]:
    """All connected graphs with min_n..max_n vertices, one per iso class."""
    table = graphs_up_to(max_n)
    out = []
    for n in range(min_n, max_n + 1):
        for mask in table[n]:
            g = Graph.from_edge_mask(n, mask)
            if _is_connected(g):
                out.append(g)
    return out


def _is_connected(g: Graph) -> bool:
    if g.n == 0:
        return False
    full = g.full_mask()
    seen = 1
    frontier = 1
    while frontier:
        nxt = 0
        for v in bits(frontier):
            nxt |= g._adj_masks[v]
        nxt &= ~seen
        seen |= nxt
        frontier = nxt
    return seen == full
