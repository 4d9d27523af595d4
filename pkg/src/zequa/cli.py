"""Command-line interface.

Every command prints one RunReport (JSON text) on stdout. Exit status is 0
on success, 2 when a certificate fails re-verification, 1 on usage errors.
"""

import argparse
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__, reports
from .activation import (activation_report, bilinear_feasibility, check_activation,
                         family_membership, family_T, qubit_nonactivation_suite)
from .capacity import (GRAPH_RESIDUAL_TOL, CapacityReport, alpha_exact_qubit, capacity,
                       tensor_power_lower, verify_codebook)
from .errors import ZequaError
from .io import (dumps, load_corpus, resolve, save_corpus, subspace_document, write_subspace)
from .rankone import SearchConfig, capacity_is_zero, find_rank_one
from .subspaces import (NoncommGraph, complement, contains, is_noncomm_graph, max_dim, tensor,
                        tensor_power)

EXIT_OK, EXIT_USAGE, EXIT_VERIFY = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _common():
    p = argparse.ArgumentParser(add_help=False)
    d = SearchConfig()
    p.add_argument("--seed", type=int, default=d.seed)
    p.add_argument("--restarts", type=int, default=d.restarts)
    p.add_argument("--max-iters", type=int, default=d.max_iters)
    p.add_argument("--tol", type=float, default=d.tol)
    p.add_argument("--max-dim", type=int, default=None,
                   help="ambient dimension cap (default: $ZEQUA_MAX_DIM or 64)")
    p.add_argument("--json-out", type=Path, default=None, help="also write the report here")
    return p


def build_parser():
    common = _common()
    parser = _Parser(prog="zequa", description="Zero-error capacity of noncommutative graphs.")
    parser.add_argument("--version", action="version", version=f"zequa {__version__}")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    graph = sub.add_parser("graph", help="build or check a graph")
    gsub = graph.add_subparsers(dest="action", parser_class=_Parser)
    b = gsub.add_parser("build", parents=[common], help="build a canonical graph or load a file")
    b.add_argument("spec")
    b.add_argument("-o", "--output", type=Path, default=None, help="write a .ncg document")
    c = gsub.add_parser("check", parents=[common], help="check S = S^dag and I in S")
    c.add_argument("spec")

    r = sub.add_parser("rankone", parents=[common], help="search a subspace for rank-one elements")
    r.add_argument("spec")
    r.add_argument("--complement", action="store_true", help="search the orthogonal complement")

    cap = sub.add_parser("capacity", parents=[common], help="alpha and C0^(1) lower bounds")
    cap.add_argument("spec")
    cap.add_argument("--power", type=int, default=1)

    act = sub.add_parser("activation", parents=[common], help="test alpha(S x T) > alpha(S) alpha(T)")
    act.add_argument("spec_s")
    act.add_argument("spec_t")

    bil = sub.add_parser("bilinear", parents=[common], help="bilinear (A, B) feasibility search")
    bil.add_argument("spec_s")
    bil.add_argument("spec_t")

    fam = sub.add_parser("family", parents=[common], help="the activating family T_m")
    fam.add_argument("--m", type=int, required=True)
    fam.add_argument("--verify-all", action="store_true")

    suite = sub.add_parser("suite", parents=[common], help="built-in verification suites")
    suite.add_argument("name", choices=["qubit"])

    corpus = sub.add_parser("corpus", parents=[common], help="save or load the canonical corpus")
    corpus.add_argument("action", choices=["save", "load"])
    corpus.add_argument("path", type=Path)
    return parser


def _graph(spec):
    space, meta = resolve(spec)
    if not isinstance(space, NoncommGraph):
        raise UsageError(f"{spec}: not a noncommutative graph ({is_noncomm_graph(space).diagnostic})")
    return space


def _check_report(rep, graph):
    if rep.codebook is None:
        return False
    ortho, res = verify_codebook(graph, rep.codebook.vectors)
    return ortho < 1e-10 and res < GRAPH_RESIDUAL_TOL


def cmd_graph(args, cfg):
    space, meta = resolve(args.spec)
    if args.action == "build":
        result = {"spec": args.spec, "dim": space.dim, "ambient_rows": space.rows,
                  "ambient_cols": space.cols,
                  "is_noncomm_graph": isinstance(space, NoncommGraph)}
        if args.output is not None:
            write_subspace(space, args.output, {"name": meta.get("name", args.spec)})
            result["written"] = str(args.output)
        else:
            result["document"] = subspace_document(space, {"name": meta.get("name", args.spec)})
        return result, True
    check = is_noncomm_graph(space)
    return reports.graph_check(check, space), check.ok


def cmd_rankone(args, cfg):
    space, _ = resolve(args.spec)
    target = complement(space) if args.complement else space
    res = find_rank_one(target, cfg)
    ok = True
    if res.found:
        m = res.certificate.matrix(target)
        s = np.linalg.svd(m, compute_uv=False)
        ok = contains(target, m, 1e-8) and s[1] / s[0] < 1e-6
    out = {"searched": "complement" if args.complement else "subspace",
           "dim": target.dim, "result": reports.rank_one(res)}
    return out, ok


def cmd_capacity(args, cfg):
    g = _graph(args.spec)
    if args.power > 1:
        rep = tensor_power_lower(g, args.power, cfg)
        target = tensor_power(g, args.power)
    else:
        rep = capacity(g, cfg)
        target = g
    return reports.capacity(rep), _check_report(rep, target)


def cmd_activation(args, cfg):
    s, t = _graph(args.spec_s), _graph(args.spec_t)
    rep = check_activation(s, t, cfg)
    ok = _check_report(rep.alpha_combined, tensor(s, t))
    return reports.activation(rep), ok


def cmd_bilinear(args, cfg):
    s, _ = resolve(args.spec_s)
    t, _ = resolve(args.spec_t)
    w = bilinear_feasibility(s, t, cfg)
    return reports.bilinear(w), True


def cmd_family(args, cfg):
    fam = family_T(args.m)
    t = fam.T
    expected = 3 * args.m + 1
    out = {
        "m": args.m,
        "dim_T": t.dim,
        "expected_dim_T": expected,
        "spanning_complement": len(fam.spanning_complement),
        "is_noncomm_graph": bool(is_noncomm_graph(t)),
        "combined_ambient": fam.combined.rows,
        "codebook": reports.codebook(fam.codebook),
    }
    ok = t.dim == expected and fam.codebook.valid
    if args.verify_all:
        diag, perp = family_membership(args.m)
        zero = capacity_is_zero(t, cfg)
        rep_t = CapacityReport(1, "search", zero_evidence=zero,
                               notes=["alpha(T) = 1 rests on the rank-one search of the complement"])
        rep_c = CapacityReport(len(fam.codebook), "construction", codebook=fam.codebook)
        act = activation_report(alpha_exact_qubit(_graph("pauli:I2")), rep_t, rep_c)
        out.update({
            "diagonal_membership_residual": diag,
            "spanning_orthogonality_residual": perp,
            "complement_rank_one": reports.rank_one(zero.search),
            "activated": act.activated,
            "caveat": act.caveat,
        })
        ok = ok and diag < 1e-10 and perp < 1e-10 and not zero.search.found and act.activated
    return out, ok


def cmd_suite(args, cfg):
    summary = qubit_nonactivation_suite(cfg)
    return reports.suite(summary), summary.ok


def cmd_corpus(args, cfg):
    if args.action == "save":
        paths = save_corpus(args.path)
        return {"saved": [p.name for p in paths]}, True
    graphs = load_corpus(args.path)
    return {"loaded": {name: {"dim": g.dim, "n": g.rows} for name, g in graphs.items()}}, True


COMMANDS = {
    "graph": cmd_graph, "rankone": cmd_rankone, "capacity": cmd_capacity,
    "activation": cmd_activation, "bilinear": cmd_bilinear, "family": cmd_family,
    "suite": cmd_suite, "corpus": cmd_corpus,
}


def run(argv, stdout=None):
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None or (args.command == "graph" and args.action is None):
            raise UsageError("missing subcommand")
        cfg = SearchConfig(args.seed, args.restarts, args.max_iters, args.tol)
    except (UsageError, ValueError) as exc:
        print(f"zequa: {exc}", file=sys.stderr)
        return EXIT_USAGE
    saved = os.environ.get("ZEQUA_MAX_DIM")
    if args.max_dim is not None:
        os.environ["ZEQUA_MAX_DIM"] = str(args.max_dim)
    start = time.perf_counter()
    try:
        result, ok = COMMANDS[args.command](args, cfg)
        cap = max_dim()
    except (UsageError, ZequaError) as exc:
        print(f"zequa: {exc}", file=sys.stderr)
        return EXIT_USAGE
    finally:
        # the cap applies to this command only
        if saved is None:
            os.environ.pop("ZEQUA_MAX_DIM", None)
        else:
            os.environ["ZEQUA_MAX_DIM"] = saved
    report = {
        "command": " ".join(argv),
        "tool_version": __version__,
        "config": reports.search_config(cfg, cap),
        "status": "ok" if ok else "verification_failed",
        "result": result,
        "wall_time_ms": int(round(1000 * (time.perf_counter() - start))),
    }
    text = dumps(report) + "\n"
    stdout.write(text)
    if args.json_out is not None:
        args.json_out.write_text(text)
    return EXIT_OK if ok else EXIT_VERIFY


def main():
    sys.exit(run(sys.argv[1:]))
