#!/usr/bin/env python3
"""Demo: deletion number grows with pendant triangles while the elimination
distance to bipartite graphs stays fixed.

Builds the family (central triangle, p pendant triangles hung off vertex 0),
certifies ed_bip <= 2 with an explicit forest, and solves OCT three ways.
"""

import argparse

from hdecomp.graphs import Graph, GraphClassSpec
from hdecomp.decomposition import (
    EliminationForest,
    ForestNode,
    build_tree_h_decomposition,
    make_nice,
)
from hdecomp.oracles import brute_ed, brute_min_deletion
from hdecomp.solvers import solve_oct_dp, solve_oct_elim

BIP = GraphClassSpec.bipartite()


def pendant_triangle_graph(p: int) -> Graph:
    edges = [(0, 1), (0, 2), (1, 2)]
    n = 3
    for _ in range(p):
        a, b, c = n, n + 1, n + 2
        edges += [(a, b), (a, c), (b, c), (0, a)]
        n += 3
    return Graph(n, edges)


def certificate_forest(p: int) -> EliminationForest:
    nodes = [
        ForestNode(frozenset({0}), -1, False),
        ForestNode(frozenset({1, 2}), 0, True),
    ]
    for i in range(p):
        a = 3 + 3 * i
        nodes.append(ForestNode(frozenset({a}), 0, False))
        nodes.append(ForestNode(frozenset({a + 1, a + 2}), len(nodes) - 1, True))
    return EliminationForest(nodes, BIP)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-pendants", type=int, default=6)
    args = ap.parse_args()
    print(f"{'p':>3} {'n':>3} {'ed_bip':>7} {'oct(elim)':>10} {'oct(dp)':>8} {'brute':>6}")
    for p in range(1, args.max_pendants + 1):
        g = pendant_triangle_graph(p)
        forest = certificate_forest(p)
        assert not forest.validate(g)
        ed = str(brute_ed(g, BIP)) if g.n <= 10 else f"<={forest.depth}"
        oct_elim = len(solve_oct_elim(g, forest))
        nice = make_nice(build_tree_h_decomposition(g, 2, BIP).decomposition)
        oct_dp = solve_oct_dp(g, nice)[0]
        brute = str(brute_min_deletion(g, BIP)[0]) if g.n <= 12 else "-"
        print(f"{p:>3} {g.n:>3} {ed:>7} {oct_elim:>10} {oct_dp:>8} {brute:>6}")


if __name__ == "__main__":
    main()
