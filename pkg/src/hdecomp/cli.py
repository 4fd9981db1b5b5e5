"""Command-line front end: decompose, solve, verify, oracle.

Exit codes: 0 success, 1 parse/validation failure (and oracle size-guard
violations, reported as TOO LARGE), 2 promise-violation warning (the
decomposition is still written and structurally valid).
"""

from __future__ import annotations

import argparse
import concurrent.futures
import os
import sys
from pathlib import Path

from .graphs import Graph, GraphClassSpec, parse_family, parse_gr
from .decomposition import (
    EliminationForest,
    NiceTreeHDecomposition,
    build_ed_forest,
    build_tree_h_decomposition,
    from_json,
    make_nice,
    to_json,
)
from .oracles import brute_abc, brute_ed, brute_min_deletion
from .separators import ImportantSeparatorQuery, enumerate_important_separators
from .solvers import (
    solution_block,
    solve_klfree_elim,
    solve_oct_dp,
    solve_oct_elim,
    solve_vc_dp,
    solve_vc_elim,
)


class CliError(Exception):
    pass


def _load_graph(path: str) -> Graph:
    try:
        return parse_gr(Path(path).read_text())
    except (OSError, ValueError) as e:
        raise CliError(f"cannot read graph {path}: {e}")


def _parse_class(spec: str) -> GraphClassSpec:
    if spec == "bip":
        return GraphClassSpec.bipartite()
    if spec.startswith("forbid:"):
        path = spec[len("forbid:") :]
        try:
            family = parse_family(Path(path).read_text())
            return GraphClassSpec.forbidden(*family)
        except (OSError, ValueError) as e:
            raise CliError(f"cannot read family {path}: {e}")
    raise CliError(f"unknown class {spec!r} (use bip or forbid:<path>)")


def _parse_vertices(arg: str) -> frozenset[int]:
    """Comma-separated 1-based vertex list; empty string means empty set."""
    if not arg:
        return frozenset()
    try:
        out = frozenset(int(x) - 1 for x in arg.split(","))
    except ValueError:
        raise CliError(f"malformed vertex list {arg!r}")
    if any(v < 0 for v in out):
        raise CliError("vertex ids are 1-based")
    return out


def _dot(obj, path: str):
    lines = ["digraph decomposition {"]
    if isinstance(obj, EliminationForest):
        for i, node in enumerate(obj.nodes):
            label = ",".join(str(v + 1) for v in sorted(node.bag)) or "()"
            shape = "box" if node.leaf else "ellipse"
            lines.append(f'  n{i} [label="{label}" shape={shape}];')
            if node.parent >= 0:
                lines.append(f"  n{node.parent} -> n{i};")
    else:
        for i in range(len(obj.parents)):
            bag = obj.bags[i]
            label = ",".join(str(v + 1) for v in sorted(bag)) or "()"
            shape = "box" if bag & obj.L else "ellipse"
            lines.append(f'  n{i} [label="{label}" shape={shape}];')
            if obj.parents[i] >= 0:
                lines.append(f"  n{obj.parents[i]} -> n{i};")
    lines.append("}")
    Path(path).write_text("\n".join(lines) + "\n")


def _decompose_one(path: str, cls: GraphClassSpec, mode: str, k: int):
    """Returns (message, decomposition, exit_code)."""
    g = _load_graph(path)
    if mode == "ed":
        res = build_ed_forest(g, k, cls)
        errs = res.forest.validate(g)
        if errs:
            raise CliError("internal: built forest invalid: " + "; ".join(errs))
        return f"DEPTH {res.forest.depth}", res.forest, 0 if res.promise_ok else 2
    res = build_tree_h_decomposition(g, k, cls)
    errs = res.decomposition.validate(g)
    if errs:
        raise CliError("internal: built decomposition invalid: " + "; ".join(errs))
    return (
        f"WIDTH {res.decomposition.width}",
        res.decomposition,
        0 if res.promise_ok else 2,
    )


def cmd_decompose(args) -> int:
    cls = _parse_class(args.cls)
    if args.batch:
        files = sorted(Path(args.batch).glob("*.gr"))
        if not files:
            raise CliError(f"no .gr files in {args.batch}")
        worst = 0
        with concurrent.futures.ProcessPoolExecutor(
            max_workers=min(len(files), os.cpu_count() or 1)
        ) as pool:
            futures = {
                f.name: pool.submit(_decompose_one, str(f), cls, args.mode, args.k)
                for f in files
            }
            for name in sorted(futures):
                try:
                    message, _, code = futures[name].result()
                except CliError as e:
                    print(f"{name}: ERROR {e}")
                    worst = max(worst, 1)
                    continue
                print(f"{name}: {message}")
                worst = max(worst, code)
        return worst
    message, dec, code = _decompose_one(args.graph, cls, args.mode, args.k)
    if args.out:
        Path(args.out).write_text(to_json(dec))
    if args.dot:
        _dot(dec, args.dot)
    print(message)
    if code == 2:
        print("warning: promise violated (quotient parameter exceeds k+1)", file=sys.stderr)
    return code


def _auto_forest(g: Graph, cls: GraphClassSpec) -> EliminationForest:
    for k in range(g.n + 2):
        res = build_ed_forest(g, k, cls)
        if res.promise_ok:
            return res.forest
    raise CliError("auto mode failed to satisfy the promise check")


def _auto_nice(g: Graph, cls: GraphClassSpec) -> NiceTreeHDecomposition:
    for k in range(g.n + 2):
        res = build_tree_h_decomposition(g, k, cls)
        if res.promise_ok:
            return make_nice(res.decomposition)
    raise CliError("auto mode failed to satisfy the promise check")


def cmd_solve(args) -> int:
    g = _load_graph(args.graph)
    if args.problem == "klfree":
        cls = GraphClassSpec.kl_free(args.l)
    else:
        cls = GraphClassSpec.bipartite()
    if args.via == "dp" and args.problem == "klfree":
        raise CliError("klfree supports --via elim only")
    decomp = None
    if args.decomp != "auto":
        try:
            decomp = from_json(Path(args.decomp).read_text())
        except (OSError, ValueError) as e:
            raise CliError(f"cannot read decomposition {args.decomp}: {e}")
        if decomp.cls != cls:
            raise CliError("decomposition class does not match the problem")
    if args.via == "elim":
        if decomp is None:
            forest = _auto_forest(g, cls)
        elif isinstance(decomp, EliminationForest):
            forest = decomp
        else:
            raise CliError("--via elim needs an elimination forest")
        errs = forest.validate(g)
        if errs:
            raise CliError("invalid decomposition: " + "; ".join(errs))
        if args.problem == "oct":
            x = solve_oct_elim(g, forest)
        elif args.problem == "vc":
            x = solve_vc_elim(g, forest)
        else:
            x = solve_klfree_elim(g, forest, args.l)
    else:
        if decomp is None:
            nice = _auto_nice(g, cls)
        elif isinstance(decomp, EliminationForest):
            raise CliError("--via dp needs a tree decomposition")
        elif isinstance(decomp, NiceTreeHDecomposition):
            nice = decomp
        else:
            errs = decomp.validate(g)
            if errs:
                raise CliError("invalid decomposition: " + "; ".join(errs))
            nice = make_nice(decomp)
        errs = nice.validate(g)
        if errs:
            raise CliError("invalid decomposition: " + "; ".join(errs))
        if args.problem == "oct":
            _, x = solve_oct_dp(g, nice)
        else:
            _, x = solve_vc_dp(g, nice)
    sys.stdout.write(solution_block(args.problem, x))
    return 0


def cmd_verify(args) -> int:
    g = _load_graph(args.graph)
    try:
        obj = from_json(Path(args.decomp).read_text())
    except (OSError, ValueError) as e:
        raise CliError(f"cannot read decomposition {args.decomp}: {e}")
    errs = obj.validate(g)
    if errs:
        for e in errs:
            print(e)
        return 1
    print("VALID")
    return 0


def cmd_oracle(args) -> int:
    g = _load_graph(args.graph)
    try:
        if args.what == "deletion":
            cls = _parse_class(args.cls)
            size, witness = brute_min_deletion(g, cls)
            sys.stdout.write(solution_block("deletion", witness))
        elif args.what == "ed":
            cls = _parse_class(args.cls)
            print(f"ED {brute_ed(g, cls)}")
        elif args.what == "abc":
            b1 = _parse_vertices(args.b1)
            b2 = _parse_vertices(args.b2)
            res = brute_abc(g, b1, b2, args.k)
            if res is None:
                print("NONE")
            else:
                sys.stdout.write(solution_block("abc", res))
        else:  # impsep
            x = _parse_vertices(args.x)
            y = _parse_vertices(args.y)
            out: list[frozenset[int]] = []
            q = ImportantSeparatorQuery(x, y, args.k)
            if g.n > 16:
                raise ValueError("graph too large for the oracle guard")
            enumerate_important_separators(q, g, out.append)
            print(f"IMPSEP {len(out)}")
            for s in sorted(out, key=sorted):
                print(" ".join(str(v + 1) for v in sorted(s)) or "-")
    except ValueError as e:
        if "guard" in str(e) or "too large" in str(e).lower():
            print("TOO LARGE", file=sys.stderr)
            return 1
        raise CliError(str(e))
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hdecomp",
        description="elimination forests, tree decompositions with class base "
        "components, and vertex-deletion solvers",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decompose", help="build a decomposition")
    p.add_argument("--class", dest="cls", required=True, help="bip or forbid:<path>")
    p.add_argument("--mode", choices=("ed", "tw"), required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--out", help="write the decomposition JSON here")
    p.add_argument("--dot", help="write a DOT rendering here")
    p.add_argument("--batch", help="process every .gr file in this directory")
    p.add_argument("graph", nargs="?", help="input graph (.gr)")
    p.set_defaults(fn=cmd_decompose)

    p = sub.add_parser("solve", help="solve a deletion problem")
    p.add_argument("--problem", choices=("oct", "vc", "klfree"), required=True)
    p.add_argument("--l", type=int, default=3, help="clique size for klfree")
    p.add_argument("--via", choices=("elim", "dp"), default="elim")
    p.add_argument("--decomp", default="auto", help="decomposition JSON or 'auto'")
    p.add_argument("graph")
    p.set_defaults(fn=cmd_solve)

    p = sub.add_parser("verify", help="validate a decomposition against a graph")
    p.add_argument("decomp", help="decomposition JSON")
    p.add_argument("graph")
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("oracle", help="brute-force ground truth")
    p.add_argument("--what", choices=("deletion", "ed", "abc", "impsep"), required=True)
    p.add_argument("--class", dest="cls", help="bip or forbid:<path>")
    p.add_argument("--b1", default="", help="comma-separated 1-based vertices")
    p.add_argument("--b2", default="", help="comma-separated 1-based vertices")
    p.add_argument("--x", default="", help="comma-separated 1-based vertices")
    p.add_argument("--y", default="", help="comma-separated 1-based vertices")
    p.add_argument("--k", type=int, default=0)
    p.add_argument("graph")
    p.set_defaults(fn=cmd_oracle)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code in (0, None) else 1
    try:
        if args.command == "decompose" and not args.batch and not args.graph:
            raise CliError("a graph file is required outside --batch mode")
        return args.fn(args)
    except CliError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
