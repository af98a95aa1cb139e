"""Command-line front end.

Subcommands
-----------
ri        select k columns of an isotropic system (restricted invertibility)
weaver    partition an isotropic system into two low-norm halves
lift      iterate signed 2-lifts of a bipartite Ramanujan graph
mixedchar mixed characteristic polynomial of a PSD list

Inputs are JSON (vector systems, matrix lists) or edge-list text
(graphs); ``-`` reads stdin.  Exit codes: 0 success, 1 certificate
invariant violated, 2 parse error, 3 precondition failure, 4 enumeration
budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .poly import real_roots, NotRealRootedError
from .matrices import SymMatrix
from .mixedchar import mixed_char, BudgetExceededError, DEFAULT_BUDGET
from .graphs import Graph, adjacency, signed_adjacency, is_ramanujan_bipartite, \
    two_lift
from .select import VectorSystem, restricted_invertibility_select, \
    restricted_invertibility_bound, weaver_partition, weaver_bound, signing_select

EXIT_OK = 0
EXIT_INVARIANT = 1
EXIT_PARSE = 2
EXIT_PRECONDITION = 3
EXIT_BUDGET = 4


class ParseFailure(Exception):
    pass


@dataclass
class RunConfig:
    mode: str = "float"
    tol: float = 1e-9
    budget: int = DEFAULT_BUDGET
    seed: int = 0

    def __post_init__(self):
        if self.mode not in ("float", "exact"):
            raise ValueError("mode must be 'float' or 'exact'")
        if not self.tol > 0:
            raise ValueError("tolerance must be positive")
        if self.budget < 1:
            raise ValueError("budget must be at least 1")

    def to_json(self) -> dict:
        return {"mode": self.mode, "tol": self.tol,
                "budget": self.budget, "seed": self.seed}


def _read_input(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise ParseFailure(f"cannot read {path}: {e}") from e


def _load_json(text: str, exact: bool):
    try:
        if exact:
            return json.loads(text, parse_float=Fraction, parse_int=int)
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseFailure(f"invalid JSON: {e}") from e


def _jsonify(value):
    """Recursive JSON-compatible conversion; Fractions become 'p/q' strings."""
    if isinstance(value, Fraction):
        return int(value) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating,)):
        return float(value)
    if isinstance(value, dict):
        return {k: _jsonify(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonify(v) for v in value]
    return value


def _emit(payload: dict, out_path):
    text = json.dumps(_jsonify(payload), indent=2) + "\n"
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _parse_vector_system(text: str, cfg: RunConfig) -> VectorSystem:
    data = _load_json(text, cfg.mode == "exact")
    if isinstance(data, dict):
        data = data.get("vectors")
    if not isinstance(data, list) or not data:
        raise ParseFailure("expected a nonempty JSON list under 'vectors'")
    try:
        if cfg.mode == "exact":
            arr = np.array([[Fraction(x) if not isinstance(x, Fraction) else x
                             for x in row] for row in data], dtype=object)
        else:
            arr = np.array(data, dtype=float)
        return VectorSystem(arr)
    except (TypeError, ValueError) as e:
        raise ParseFailure(f"malformed vector system: {e}") from e


def _parse_matrices(text: str, cfg: RunConfig) -> list[SymMatrix]:
    data = _load_json(text, cfg.mode == "exact")
    if isinstance(data, dict):
        data = data.get("matrices")
    if not isinstance(data, list):
        raise ParseFailure("expected a JSON list of matrices")
    if not data:
        raise ParseFailure("matrix list is empty")
    out = []
    for i, entry in enumerate(data):
        rows = entry.get("entries") if isinstance(entry, dict) else entry
        try:
            if cfg.mode == "exact":
                arr = np.array([[Fraction(x) if not isinstance(x, Fraction) else x
                                 for x in row] for row in rows], dtype=object)
            else:
                arr = np.array(rows, dtype=float)
            out.append(SymMatrix(arr))
        except (TypeError, ValueError) as e:
            raise ParseFailure(f"matrix {i} malformed: {e}") from e
    return out


# ----------------------------------------------------------------------
# Subcommands
# ----------------------------------------------------------------------


def cmd_ri(args, cfg: RunConfig) -> int:
    system = _parse_vector_system(_read_input(args.input), cfg)
    chosen, cert = restricted_invertibility_select(system, args.k, tol=max(cfg.tol, 1e-8))
    bound = restricted_invertibility_bound(system.dim, system.m, args.k)
    payload = {
        "command": "ri",
        "config": cfg.to_json(),
        "n": system.dim,
        "m": system.m,
        "k": args.k,
        "subset": chosen,
        "achieved": cert.achieved,
        "pledged": cert.pledged,
        "bound": bound,
        "levels": cert.levels,
        "final_poly": list(cert.final_poly.coeffs),
        "certificate_valid": cert.valid(),
    }
    _emit(payload, args.out)
    return EXIT_OK if cert.valid() else EXIT_INVARIANT


def cmd_weaver(args, cfg: RunConfig) -> int:
    system = _parse_vector_system(_read_input(args.input), cfg)
    alpha = args.alpha if args.alpha is not None else system.max_norm_sq()
    s1, s2, cert = weaver_partition(system, alpha, budget=cfg.budget,
                                    tol=max(cfg.tol, 1e-8))
    vec = system.vectors.astype(float)
    norms = []
    for side in (s1, s2):
        block = np.zeros((system.dim, system.dim))
        for i in side:
            block += np.outer(vec[i], vec[i])
        norms.append(float(np.max(np.abs(np.linalg.eigvalsh(block)))) if side else 0.0)
    payload = {
        "command": "weaver",
        "config": cfg.to_json(),
        "m": system.m,
        "dim": system.dim,
        "alpha": float(alpha),
        "bound": weaver_bound(alpha),
        "s1": s1,
        "s2": s2,
        "norm1": norms[0],
        "norm2": norms[1],
        "achieved": cert.achieved,
        "pledged": cert.pledged,
        "certificate_valid": cert.valid(),
    }
    _emit(payload, args.out)
    return EXIT_OK if cert.valid() else EXIT_INVARIANT


def cmd_lift(args, cfg: RunConfig) -> int:
    text = _read_input(args.input)
    try:
        g = Graph.from_edge_list(text)
    except ValueError as e:
        raise ParseFailure(str(e)) from e
    d = g.regularity()
    if d is None or d < 2:
        raise ValueError("input must be d-regular with d >= 2")
    if not is_ramanujan_bipartite(g):
        raise ValueError("input graph is not bipartite Ramanujan")
    steps = []
    ok = True
    for it in range(args.iterations):
        signing, cert = signing_select(g, budget=cfg.budget)
        a_s = signed_adjacency(g, signing)
        lam = float(np.max(a_s.eigenvalues()))
        threshold = 2.0 * math.sqrt(d - 1.0)
        lift = two_lift(g, signing)
        certified = is_ramanujan_bipartite(lift)
        ok = ok and cert.valid() and certified and lam <= threshold + max(cfg.tol, 1e-7)
        steps.append({
            "iteration": it,
            "n": g.n,
            "d": d,
            "signs": [signing.signs[e] for e in g.edges],
            "lambda_max_signed": lam,
            "threshold": threshold,
            "pledged": cert.pledged,
            "certificate_valid": cert.valid(),
            "lift_n": lift.n,
            "lift_ramanujan": certified,
            "lift_edges": [list(e) for e in lift.edges],
        })
        g = lift
        d = g.regularity()
    payload = {
        "command": "lift",
        "config": cfg.to_json(),
        "iterations": args.iterations,
        "steps": steps,
        "final_n": g.n,
    }
    _emit(payload, args.out)
    return EXIT_OK if ok else EXIT_INVARIANT


def cmd_mixedchar(args, cfg: RunConfig) -> int:
    mats = _parse_matrices(_read_input(args.input), cfg)
    poly = mixed_char(mats)
    try:
        roots = [float(r) for r in real_roots(poly)]
    except NotRealRootedError as e:  # impossible for PSD inputs; surfaced if reached
        raise ValueError(f"mixed characteristic polynomial not real-rooted: {e}") from e
    payload = {
        "command": "mixedchar",
        "config": cfg.to_json(),
        "m": len(mats),
        "d": mats[0].n,
        "poly": list(poly.coeffs),
        "roots": roots,
        "degree": poly.degree,
    }
    _emit(payload, args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="interlace",
        description="Greedy spectral selection with interlacing certificates.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--mode", choices=["float", "exact"], default="float",
                        help="arithmetic regime (default float)")
    common.add_argument("--tol", type=float, default=1e-9,
                        help="comparison tolerance (default 1e-9)")
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                        help="max enumerated outcomes per level (default 2^20)")
    common.add_argument("--seed", type=int, default=0,
                        help="seed recorded in output for reproducibility")
    common.add_argument("--out", default=None, help="write JSON here instead of stdout")

    sub = parser.add_subparsers(dest="command", required=True)

    p_ri = sub.add_parser("ri", parents=[common],
                          help="restricted invertibility column selection")
    p_ri.add_argument("input", help="JSON vector system ('-' for stdin)")
    p_ri.add_argument("-k", type=int, required=True, help="subset size")
    p_ri.set_defaults(func=cmd_ri)

    p_w = sub.add_parser("weaver", parents=[common],
                         help="two-block partition of an isotropic system")
    p_w.add_argument("input", help="JSON vector system ('-' for stdin)")
    p_w.add_argument("--alpha", type=float, default=None,
                     help="norm parameter (default: max squared vector norm)")
    p_w.set_defaults(func=cmd_weaver)

    p_l = sub.add_parser("lift", parents=[common],
                         help="iterated signed 2-lifts of a Ramanujan graph")
    p_l.add_argument("input", help="edge list file ('-' for stdin)")
    p_l.add_argument("--iterations", type=int, default=1,
                     help="number of successive lifts (default 1)")
    p_l.set_defaults(func=cmd_lift)

    p_m = sub.add_parser("mixedchar", parents=[common],
                         help="mixed characteristic polynomial of PSD matrices")
    p_m.add_argument("input", help="JSON list of matrices ('-' for stdin)")
    p_m.set_defaults(func=cmd_mixedchar)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse exits 2 on bad flags, which matches our parse-error code
        return int(e.code) if e.code else 0
    try:
        cfg = RunConfig(mode=args.mode, tol=args.tol,
                        budget=args.budget, seed=args.seed)
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARSE
    try:
        return args.func(args, cfg)
    except ParseFailure as e:
        print(f"parse error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except BudgetExceededError as e:
        print(f"budget exceeded: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except ValueError as e:
        print(f"precondition failed: {e}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
