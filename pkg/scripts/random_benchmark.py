#!/usr/bin/env python3
"""Benchmark the full pipeline + solvers on seeded random graphs.

Prints per-graph timings and cross-checks every solver route against the
brute-force oracles while the graphs are small enough.
"""

import argparse
import itertools
import random
import time

from hdecomp.graphs import Graph, GraphClassSpec
from hdecomp.decomposition import build_ed_forest, build_tree_h_decomposition, make_nice
from hdecomp.oracles import brute_ed, brute_min_deletion, brute_min_vertex_cover
from hdecomp.solvers import solve_klfree_elim, solve_oct_dp, solve_oct_elim, solve_vc_dp, solve_vc_elim

BIP = GraphClassSpec.bipartite()
TRI = GraphClassSpec.triangle_free()


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--trials", type=int, default=25)
    ap.add_argument("--n", type=int, default=10)
    ap.add_argument("--p", type=float, default=0.4)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    for trial in range(args.trials):
        edges = [e for e in itertools.combinations(range(args.n), 2) if rng.random() < args.p]
        g = Graph(args.n, edges)
        t0 = time.time()
        kb = brute_ed(g, BIP)
        forest = build_ed_forest(g, kb, BIP).forest
        nice = make_nice(build_tree_h_decomposition(g, kb, BIP).decomposition)
        oct_e = len(solve_oct_elim(g, forest))
        oct_d = solve_oct_dp(g, nice)[0]
        vc_e = len(solve_vc_elim(g, forest))
        vc_d = solve_vc_dp(g, nice)[0]
        kt = brute_ed(g, TRI)
        tri = len(solve_klfree_elim(g, build_ed_forest(g, kt, TRI).forest, 3))
        assert oct_e == oct_d == brute_min_deletion(g, BIP)[0]
        assert vc_e == vc_d == brute_min_vertex_cover(g)[0]
        assert tri == brute_min_deletion(g, TRI)[0]
        print(
            f"trial {trial:>3}: m={len(edges):>3} ed_bip={kb} "
            f"oct={oct_e} vc={vc_e} tri-del={tri}  {time.time()-t0:.2f}s"
        )
    print("all routes agree with the oracles")


if __name__ == "__main__":
    main()
