"""Command-line interface: op-stream replay, benchmarks and data generation.

Stream grammar, one op per line (blank lines and ``#`` comments skipped)::

    I <id> <x1> ... <xd> [cat:<label>]
    D <id>
    Q kcenter <k> <eps> [gonzalez|ensemble:<m>]
    Q robust <k> <z> <eps>
    Q matroid <eps>
    Q div <edge|clique|tree|cycle> <k> <eps>

``run`` prints one JSON object per op. Exit codes: 0 ok, 1 usage or
configuration error, 2 I/O error, 3 invariant violation under
``--validate-every``.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field

from .bench import PATTERNS, run_bench
from .covertree import CoverTree, validate_invariants
from .datasets import (
    DatasetError,
    clustered_points,
    parse_point_tokens,
    read_dataset,
    uniform_points,
    write_dataset,
)
from .matroid import parse_matroid_config
from .metric import PointRecord
from .solvers import diversity_query, kcenter_query, matroid_center_query, robust_query

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_INVALID = 0, 1, 2, 3

METRICS = {"l2": "euclidean", "l1": "manhattan", "linf": "chebyshev"}
DIV_MEASURES = ("edge", "clique", "tree", "cycle")


class ParseError(ValueError):
    def __init__(self, lineno, msg):
        super().__init__(f"line {lineno}: {msg}")
        self.lineno = lineno


@dataclass(frozen=True)
class OpStreamLine:
    op: str  # "I", "D" or "Q"
    id: int | None = None
    coords: tuple = ()
    category: str | None = None
    query: str | None = None
    params: dict = field(default_factory=dict)
    text: str = ""


def _int(tok, lineno, what):
    try:
        return int(tok)
    except ValueError:
        raise ParseError(lineno, f"{what} must be an integer, got {tok!r}") from None


def _float(tok, lineno, what):
    try:
        return float(tok)
    except ValueError:
        raise ParseError(lineno, f"{what} must be a number, got {tok!r}") from None


def _arity(toks, n, lineno, usage):
    if len(toks) not in n:
        raise ParseError(lineno, f"expected '{usage}'")


def parse_op(line: str, lineno: int = 1) -> OpStreamLine | None:
    """Parse one stream line; returns ``None`` for blank and comment lines."""
    text = line.strip()
    if not text or text.startswith("#"):
        return None
    toks = text.split()
    head = toks[0]
    if head == "I":
        if len(toks) < 3:
            raise ParseError(lineno, "expected 'I <id> <x1> ... <xd> [cat:<label>]'")
        pid = _int(toks[1], lineno, "id")
        try:
            p = parse_point_tokens(toks[2:], pid)
        except DatasetError as exc:
            raise ParseError(lineno, str(exc)) from None
        return OpStreamLine("I", pid, p.coords, p.category, text=text)
    if head == "D":
        _arity(toks, {2}, lineno, "D <id>")
        return OpStreamLine("D", _int(toks[1], lineno, "id"), text=text)
    if head != "Q":
        raise ParseError(lineno, f"unknown op {head!r}")
    if len(toks) < 2:
        raise ParseError(lineno, "missing query kind")
    kind, args = toks[1], toks[2:]
    if kind == "kcenter":
        _arity(args, {2, 3}, lineno, "Q kcenter <k> <eps> [gonzalez|ensemble:<m>]")
        params = {"k": _int(args[0], lineno, "k"), "eps": _float(args[1], lineno, "eps"),
                  "mode": "gonzalez", "m": None}
        if len(args) == 3:
            mode, _, m = args[2].partition(":")
            if mode == "gonzalez" and not m:
                pass
            elif mode == "ensemble" and m:
                params.update(mode="ensemble", m=_int(m, lineno, "ensemble size"))
            else:
                raise ParseError(lineno, f"bad k-center mode {args[2]!r}")
    elif kind == "robust":
        _arity(args, {3}, lineno, "Q robust <k> <z> <eps>")
        params = {"k": _int(args[0], lineno, "k"), "z": _int(args[1], lineno, "z"),
                  "eps": _float(args[2], lineno, "eps")}
    elif kind == "matroid":
        _arity(args, {1}, lineno, "Q matroid <eps>")
        params = {"eps": _float(args[0], lineno, "eps")}
    elif kind == "div":
        _arity(args, {3}, lineno, "Q div <edge|clique|tree|cycle> <k> <eps>")
        if args[0] not in DIV_MEASURES:
            raise ParseError(lineno, f"unknown diversity measure {args[0]!r}")
        params = {"measure": args[0], "k": _int(args[1], lineno, "k"),
                  "eps": _float(args[2], lineno, "eps")}
    else:
        raise ParseError(lineno, f"unknown query kind {kind!r}")
    return OpStreamLine("Q", query=kind, params=params, text=text)


def apply_op(T: CoverTree, op: OpStreamLine, certify=False) -> dict:
    """Apply one op to the tree and return the ``result`` payload."""
    if op.op == "I":
        T.insert(PointRecord(op.id, op.coords, op.category))
        return {"n": len(T)}
    if op.op == "D":
        if op.id not in T:
            raise KeyError(f"no live point with id {op.id}")
        T.delete(op.id)
        return {"n": len(T)}
    if len(T) == 0:
        raise ValueError("query on an empty tree")
    p = op.params
    if op.query == "kcenter":
        sol = kcenter_query(T, p["k"], p["eps"], mode=p["mode"], m=p["m"], certify=certify)
    elif op.query == "robust":
        sol = robust_query(T, p["k"], p["z"], p["eps"], certify=certify)
    elif op.query == "matroid":
        sol = matroid_center_query(T, p["eps"], certify=certify)
    else:
        sol = diversity_query(T, p["measure"], p["k"], p["eps"])
    return {"query": op.query, **sol.to_dict()}


def _error_text(exc):
    if isinstance(exc, KeyError) and exc.args:
        return str(exc.args[0])
    return str(exc)


def iter_results(T, lines, certify=False, validate_every=0):
    """Yield one result dict per op line; raises ``AssertionError`` on an invariant violation."""
    seq = 0
    for lineno, line in enumerate(lines, 1):
        t0 = time.perf_counter_ns()
        try:
            op = parse_op(line, lineno)
            if op is None:
                continue
            echo = op.text
            out = {"status": "ok", "result": apply_op(T, op, certify)}
        except (ValueError, KeyError, TypeError) as exc:
            echo = line.strip()
            out = {"status": "error", "error": _error_text(exc)}
        elapsed = (time.perf_counter_ns() - t0) // 1000
        yield {"seq": seq, "op": echo, **out, "time_us": int(elapsed)}
        seq += 1
        if validate_every and seq % validate_every == 0:
            rep = validate_invariants(T)
            if not rep.ok:
                raise AssertionError(f"after op {seq - 1} (line {lineno}): {rep.violation}")


def _json_default(obj):
    if hasattr(obj, "item"):  # numpy scalars
        return obj.item()
    raise TypeError(f"not JSON serializable: {type(obj).__name__}")


# ------------------------------------------------------------------ commands


def _build_tree(args):
    oracle = parse_matroid_config(args.matroid)
    return CoverTree(METRICS[args.metric], oracle, args.alpha, args.beta)


def cmd_run(args, out):
    try:
        T = _build_tree(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO if isinstance(exc, OSError) else EXIT_USAGE
    try:
        if args.dataset:
            for p in read_dataset(args.dataset):
                T.insert(p)
        with open(args.stream) as fh:
            lines = fh.readlines()
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    try:
        for res in iter_results(T, lines, args.certify, args.validate_every):
            out.write(json.dumps(res, default=_json_default) + "\n")
    except AssertionError as exc:
        out.flush()
        print(f"invariant violation {exc}", file=sys.stderr)
        return EXIT_INVALID
    return EXIT_OK


def cmd_bench(args, out):
    try:
        points = read_dataset(args.dataset)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    if not points:
        print("error: empty dataset", file=sys.stderr)
        return EXIT_USAGE
    try:
        rep = run_bench(points, args.pattern, k=args.k, eps=args.eps, n_ops=args.ops,
                        query_every=args.query_every, compare=args.compare,
                        checkpoints=args.checkpoints, seed=args.seed or 0,
                        metric=METRICS[args.metric])
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.out:
        try:
            with open(args.out, "w", newline="") as fh:
                rep.write_csv(fh)
        except OSError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_IO
    else:
        rep.write_csv(out)
    if args.compare and "scratch" in rep.timings:
        upd, q, s = (rep.phase(n).get("mean_us", 0.0) for n in ("update", "query", "scratch"))
        print(f"mean per op: update {upd:.1f} us, query {q:.1f} us, scratch {s:.1f} us",
              file=sys.stderr)
    return EXIT_OK


def cmd_gen(args, out):
    if args.kind == "uniform":
        X = uniform_points(args.n, args.dim, seed=args.seed)
    else:
        X = clustered_points(args.n, args.dim, n_clusters=args.clusters, seed=args.seed)
    cats = None
    if args.labels:
        labels = args.labels.split(",")
        cats = [labels[i % len(labels)] for i in range(args.n)]
    try:
        write_dataset(args.out if args.out else out, X, cats)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive_int(text):
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return v


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--metric", choices=sorted(METRICS), default="l2")
    common.add_argument("--matroid", default="none", help="none | uniform:<K> | partition:<file>")
    common.add_argument("--alpha", type=float, default=2.0)
    common.add_argument("--beta", type=float, default=1.0)
    common.add_argument("--seed", type=int, default=None)

    parser = _Parser(prog="dyncover", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    run = sub.add_parser("run", parents=[common], help="replay an op stream")
    run.add_argument("stream")
    run.add_argument("--dataset", help="points inserted before the stream, ids 0.. in file order")
    run.add_argument("--certify", action="store_true", help="radii over all live points")
    run.add_argument("--validate-every", type=_positive_int, default=0, metavar="N")
    run.set_defaults(func=cmd_run)

    bench = sub.add_parser("bench", parents=[common], help="time a synthetic op pattern")
    bench.add_argument("dataset")
    bench.add_argument("--pattern", choices=PATTERNS, default="insert_ramp")
    bench.add_argument("--ops", type=_positive_int, default=None)
    bench.add_argument("--k", type=int, default=10)
    bench.add_argument("--eps", type=float, default=1.0)
    bench.add_argument("--query-every", type=_positive_int, default=0, metavar="N")
    bench.add_argument("--compare", action="store_true", help="also time from-scratch Gonzalez")
    bench.add_argument("--checkpoints", type=_positive_int, default=10)
    bench.add_argument("--out", help="CSV path (default stdout)")
    bench.set_defaults(func=cmd_bench)

    gen = sub.add_parser("gen", parents=[common], help="write a synthetic dataset")
    gen.add_argument("kind", choices=("uniform", "clustered"))
    gen.add_argument("n", type=_positive_int)
    gen.add_argument("--dim", type=int, default=2)
    gen.add_argument("--clusters", type=int, default=5)
    gen.add_argument("--labels", help="comma-separated labels assigned round-robin")
    gen.add_argument("--out")
    gen.set_defaults(func=cmd_gen)
    return parser


def main(argv=None, out=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args, out if out is not None else sys.stdout)


if __name__ == "__main__":
    sys.exit(main())
