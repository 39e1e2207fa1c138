"""Batch command-line front end.

Subcommands: gen, check, decompose, verify, tables, spectrum, xval, bench.
All file formats are JSON. Exit codes: 0 success/verified, 1 usage,
2 inadmissible, 3 attempted-but-failed verification, 4 non-convergence.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction

import numpy as np

from . import oracle, scheme, solver, spectral
from .graph_core import (
    GraphError,
    MultipartiteGraph,
    check_admissible,
    generate_admissible_instance,
    make_complete,
    threshold_c,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INADMISSIBLE = 2
EXIT_VERIFY_FAILED = 3
EXIT_NO_CONVERGENCE = 4

VERIFY_TOL = 1e-8


def _load_graph(args) -> MultipartiteGraph:
    if args.input:
        with open(args.input) as fh:
            return MultipartiteGraph.from_json(fh.read())
    if args.r is None or args.s is None or args.n is None:
        raise GraphError("need --input or all of -r, -s, -n")
    if args.defects:
        return generate_admissible_instance(
            args.r, args.s, args.n, args.defects, seed=args.seed)
    return make_complete(args.r, args.s, args.n)


def _write(path, text):
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def cmd_gen(args) -> int:
    if args.r is None or args.s is None or args.n is None:
        raise GraphError("gen needs all of -r, -s, -n")
    g = generate_admissible_instance(
        args.r, args.s, args.n, args.defects, seed=args.seed)
    _write(args.output, g.to_json())
    return EXIT_OK


def cmd_check(args) -> int:
    g = _load_graph(args)
    rep = check_admissible(g)
    out = {
        "nec1_ok": rep.nec1_ok,
        "nec1_violations": [[list(v), k] for v, k in rep.nec1_violations],
        "nec2_ok": rep.nec2_ok,
        "nec2_violations": [list(p) for p in rep.nec2_violations],
        "x_values": [str(x) for x in rep.x_values],
        "d_values": rep.d_values,
        "pair_counts": {f"{i},{j}": c for (i, j), c in rep.pair_counts.items()},
        "min_partite_degree": g.min_partite_degree(),
    }
    _write(args.output, json.dumps(out, indent=2))
    return EXIT_OK if rep.admissible else EXIT_INADMISSIBLE


def _weights_json(decomp: solver.FractionalDecomposition,
                  include_zero: bool) -> str:
    records = [
        {"clique": [list(v) for v in K], "weight": float(w)}
        for K, w in decomp.items()
        if include_zero or w != 0.0
    ]
    return json.dumps(records, indent=2)


def cmd_decompose(args) -> int:
    g = _load_graph(args)
    eta = Fraction(args.eta) if args.eta else None
    try:
        decomp, rep = solver.decompose(
            g, tol=args.tol, max_iter=args.max_iter, eta=eta, force=args.force)
    except solver.NonConvergence as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NO_CONVERGENCE
    except solver.SolveError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INADMISSIBLE
    _write(args.output, _weights_json(decomp, args.include_zero_weights))
    report_text = json.dumps(rep.to_dict(), indent=2)
    if args.report:
        _write(args.report, report_text)
    else:
        print(report_text, file=sys.stderr)
    return EXIT_OK if rep.max_edge_sum_error < VERIFY_TOL else EXIT_VERIFY_FAILED


def cmd_verify(args) -> int:
    with open(args.input) as fh:
        g = MultipartiteGraph.from_json(fh.read())
    with open(args.weights) as fh:
        records = json.load(fh)
    ed = g.indexing
    cover = np.zeros(ed.num_graph_edges)
    from itertools import combinations
    for rec in records:
        K = [tuple(v) for v in rec["clique"]]
        for u, v in combinations(K, 2):
            if not g.has_edge(u, v):
                print(f"clique {K} uses missing edge {u},{v}", file=sys.stderr)
                return EXIT_VERIFY_FAILED
            cover[ed.index((u, v) if u[0] < v[0] else (v, u))] += rec["weight"]
    err = np.abs(cover - 1.0)
    worst = int(err.argmax())
    result = {
        "max_edge_sum_error": float(err.max()),
        "worst_edge": [list(v) for v in ed.edge(worst)],
        "tolerance": VERIFY_TOL,
    }
    _write(args.output, json.dumps(result, indent=2))
    return EXIT_OK if err.max() < VERIFY_TOL else EXIT_VERIFY_FAILED


def cmd_tables(args) -> int:
    r, n = args.r, args.n
    em = scheme.eigenmatrices(r, n)
    tables = {
        f"p^{k}": [[scheme.intersection_number(i, j, k, r, n)
                    for j in range(6)] for i in range(6)]
        for k in range(6)
    }
    out = {
        "r": r, "n": n,
        "intersection_numbers": tables,
        "valencies": [scheme.valency(j, r, n) for j in range(6)],
        "C": [[str(x) for x in row] for row in em.C],
        "D": [[str(x) for x in row] for row in em.D],
    }
    _write(args.output, json.dumps(out, indent=2))
    if not args.output:
        for k in range(6):
            print(f"\np_ij^{k}:")
            for row in tables[f"p^{k}"]:
                print("  " + " ".join(f"{x:>8}" for x in row))
    return EXIT_OK


def cmd_spectrum(args) -> int:
    eta = Fraction(args.eta) if args.eta else None
    tab = spectral.spectrum(args.r, args.s, args.n, eta=eta)
    out = {
        "eigenvalues": [str(x) for x in tab.eigenvalues],
        "eigenvalues_float": [float(x) for x in tab.eigenvalues],
        "multiplicities": list(tab.multiplicities),
        "eta": str(tab.eta) if tab.eta is not None else None,
    }
    _write(args.output, json.dumps(out, indent=2))
    return EXIT_OK


def cmd_xval(args) -> int:
    """Run the dense-oracle cross-validation matrix for an (r, s, n) grid."""
    results = []
    ok = True
    for r in args.r_values:
        for s in args.s_values:
            for n in args.n_values:
                if not 3 <= s < r:
                    continue
                entry = {"r": r, "s": s, "n": n}
                try:
                    oracle.brute_relation_census(r, n, cap=args.oracle_cap)
                    entry["census"] = "pass"
                    tab = spectral.spectrum(r, s, n)
                    M = oracle.brute_mgamma(r, s, n, cap=args.oracle_cap)
                    got = oracle.group_spectrum(
                        oracle.numeric_spectrum(M), float(tab.eigenvalues[0]))
                    want = sorted(
                        (float(v), m)
                        for v, m in _merged_spectrum(tab).items())
                    match = len(got) == len(want) and all(
                        abs(a - b) < 1e-8 and ma == mb
                        for (a, ma), (b, mb) in zip(got, want))
                    entry["spectrum"] = "pass" if match else "FAIL"
                    ok = ok and match
                except oracle.SizeCapExceeded:
                    entry["skipped"] = "size cap"
                results.append(entry)
    _write(args.output, json.dumps(results, indent=2))
    return EXIT_OK if ok else EXIT_VERIFY_FAILED


def _merged_spectrum(tab: spectral.SpectrumTable) -> dict:
    merged: dict = {}
    for lam, mult in zip(tab.eigenvalues, tab.multiplicities):
        if mult > 0:
            merged[lam] = merged.get(lam, 0) + mult
    return merged


def cmd_bench(args) -> int:
    rows = []
    for n in args.n_values:
        g = (generate_admissible_instance(args.r, args.s, n, args.defects,
                                          seed=args.seed)
             if args.defects else make_complete(args.r, args.s, n))
        best = None
        iters = None
        for _ in range(3):
            t0 = time.perf_counter()
            _, rep = solver.decompose(g, tol=args.tol, max_iter=args.max_iter)
            dt = time.perf_counter() - t0
            best = dt if best is None else min(best, dt)
            iters = rep.iterations
        row = {"n": n, "edges": g.structure.num_edges,
               "matrix_free_s": best, "iterations": iters}
        try:
            t0 = time.perf_counter()
            oracle.dense_solve(g, cap=args.oracle_cap)
            row["dense_s"] = time.perf_counter() - t0
        except oracle.SizeCapExceeded:
            row["dense_s"] = None
        rows.append(row)
    _write(args.output, json.dumps(rows, indent=2))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="fracdecomp",
        description="Fractional clique decompositions of balanced multipartite graphs")
    sub = p.add_subparsers(dest="command", required=True)

    def add_common(sp, graph_input=True):
        sp.add_argument("-r", type=int, default=None)
        sp.add_argument("-s", type=int, default=None)
        sp.add_argument("-n", type=int, default=None)
        sp.add_argument("--output", default=None)
        if graph_input:
            sp.add_argument("--input", default=None, help="graph JSON file")
            sp.add_argument("--defects", type=int, default=0)
            sp.add_argument("--seed", type=int, default=0)

    sp = sub.add_parser("gen", help="generate an admissible instance")
    add_common(sp)
    sp.set_defaults(func=cmd_gen)

    sp = sub.add_parser("check", help="print the admissibility report")
    add_common(sp)
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("decompose", help="solve and write clique weights")
    add_common(sp)
    sp.add_argument("--report", default=None)
    sp.add_argument("--tol", type=float, default=1e-10)
    sp.add_argument("--max-iter", type=int, default=200)
    sp.add_argument("--eta", default=None)
    sp.add_argument("--force", action="store_true",
                    help="attempt beyond the certified threshold")
    sp.add_argument("--include-zero-weights", action="store_true")
    sp.add_argument("--workers", type=int, default=1)
    sp.set_defaults(func=cmd_decompose)

    sp = sub.add_parser("verify", help="recheck a weights file against a graph")
    sp.add_argument("--input", required=True)
    sp.add_argument("--weights", required=True)
    sp.add_argument("--output", default=None)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("tables", help="dump intersection numbers and eigenmatrices")
    sp.add_argument("-r", type=int, required=True)
    sp.add_argument("-n", type=int, required=True)
    sp.add_argument("--output", default=None)
    sp.set_defaults(func=cmd_tables)

    sp = sub.add_parser("spectrum", help="dump the closed-form spectrum table")
    sp.add_argument("-r", type=int, required=True)
    sp.add_argument("-s", type=int, required=True)
    sp.add_argument("-n", type=int, required=True)
    sp.add_argument("--eta", default=None)
    sp.add_argument("--output", default=None)
    sp.set_defaults(func=cmd_spectrum)

    sp = sub.add_parser("xval", help="dense-oracle cross-validation grid")
    sp.add_argument("--r-values", type=int, nargs="+", default=[4, 5, 6])
    sp.add_argument("--s-values", type=int, nargs="+", default=[3, 4])
    sp.add_argument("--n-values", type=int, nargs="+", default=[1, 2, 3])
    sp.add_argument("--oracle-cap", type=int, default=oracle.DEFAULT_SIZE_CAP)
    sp.add_argument("--output", default=None)
    sp.set_defaults(func=cmd_xval)

    sp = sub.add_parser("bench", help="time matrix-free vs dense solves")
    sp.add_argument("-r", type=int, required=True)
    sp.add_argument("-s", type=int, required=True)
    sp.add_argument("--n-values", type=int, nargs="+", required=True)
    sp.add_argument("--defects", type=int, default=0)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--tol", type=float, default=1e-10)
    sp.add_argument("--max-iter", type=int, default=200)
    sp.add_argument("--oracle-cap", type=int, default=oracle.DEFAULT_SIZE_CAP)
    sp.add_argument("--output", default=None)
    sp.set_defaults(func=cmd_bench)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (GraphError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
