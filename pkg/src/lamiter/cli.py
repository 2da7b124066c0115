"""``lam`` command-line front end.

Results go to stdout, diagnostics to stderr.  Exit status is 0 on success,
1 for domain errors (bad inputs, overflow, budget, unreadable tables) and 2
for usage errors.
"""

from __future__ import annotations

import argparse
import inspect
import json
import sys
from dataclasses import dataclass

from . import analysis, model, pratt, rangesieve, verify
from .arith import DEFAULT_BUDGET, is_prime
from .carmichael import Variant, big_L, carmichael_lambda, lambda_chain
from .errors import ResourceError, TableFormatError, TableKindError

MIN_BUDGET = 64 * 1024**2


@dataclass(frozen=True)
class Config:
    workers: int
    mem_budget: int
    variant: Variant
    fmt: str
    out: str | None = None

    def __post_init__(self):
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        if self.mem_budget < MIN_BUDGET:
            raise ValueError(f"memory budget must be at least {MIN_BUDGET} bytes")


def _int(text: str) -> int:
    """Parse ints, also accepting ``1e8`` and ``10**8``."""
    t = text.replace("_", "")
    try:
        return int(t)
    except ValueError:
        pass
    if "**" in t:
        base, exp = t.split("**", 1)
        return int(base) ** int(exp)
    v = float(t)
    if not v.is_integer():
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer")
    return int(v)


def _global_flags() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("global options")
    g.add_argument("--variant", choices=["standard", "two-adic"], default=argparse.SUPPRESS)
    g.add_argument("--workers", type=int, default=argparse.SUPPRESS)
    g.add_argument("--mem-budget", type=_int, default=argparse.SUPPRESS, metavar="BYTES")
    g.add_argument("--format", dest="fmt", choices=["text", "json", "csv", "dot"], default=argparse.SUPPRESS)
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _global_flags()
    parser = argparse.ArgumentParser(
        prog="lam",
        description="Iterated Carmichael lambda, Pratt trees and supporting statistics.",
        parents=[common],
    )
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    def cmd(name, help_):
        return sub.add_parser(name, help=help_, description=help_, parents=[common])

    cmd("lambda", "Carmichael lambda of n").add_argument("n", type=_int)
    cmd("chain", "the chain n, lambda(n), ..., 1").add_argument("n", type=_int)
    cmd("L", "number of lambda iterations needed to reach 1").add_argument("n", type=_int)
    cmd("pratt", "Pratt tree of a prime").add_argument("p", type=_int)
    cmd("height", "height of the Pratt tree, H(2) = 0").add_argument("p", type=_int)
    c = cmd("levels", "node count per depth of the Pratt tree")
    c.add_argument("p", type=_int)
    c.add_argument("--distinct", action="store_true", help="count each prime once per level")

    c = cmd("excess", "L(p) - H(p) for one prime, or a dyadic report with --limit")
    c.add_argument("p", type=_int, nargs="?")
    c.add_argument("--limit", type=_int)
    c.add_argument("--cutoff", type=_int, default=None, help="level threshold Y for head excess")
    c.add_argument("--csv", metavar="FILE", help="write the report CSV here ('-' for stdout)")

    c = cmd("sieve", "tabulate lambda, L or H over [1, N] into a binary file")
    c.add_argument("--kind", choices=["lambda", "L", "H"], required=True)
    c.add_argument("--limit", type=_int, required=True)
    c.add_argument("--out", required=True, metavar="FILE")
    c.add_argument("--segment", type=_int, default=rangesieve.DEFAULT_SEGMENT)

    c = cmd("stats", "per-decade distribution report as CSV")
    c.add_argument("--limit", type=_int, required=True)
    c.add_argument("--table", metavar="FILE", help="precomputed L table")
    c.add_argument("--csv", metavar="FILE", default="-")
    c.add_argument("--c", type=float, default=1.0, dest="c_const")
    c.add_argument("--gamma", type=float, default=0.9503)

    cmd("dickman", "Dickman rho(u)").add_argument("u", type=float)
    c = cmd("smooth", "Psi(x, z), count of z-smooth n <= x")
    c.add_argument("x", type=_int)
    c.add_argument("z", type=_int)
    c = cmd("btsum", "sum of 1/p over primes p <= x, p = 1 mod m")
    c.add_argument("x", type=_int)
    c.add_argument("m", type=_int)
    c = cmd("chains", "count n <= x reached by a prime chain from q^alpha")
    for a in ("x", "q", "alpha", "k"):
        c.add_argument(a, type=_int)
    c.add_argument("--bound-c", type=float, default=None, help="also print x (c y)^k / q^alpha")
    c.add_argument("--multiplicity", action="store_true", help="also print the count with multiplicity")
    c = cmd("powers", "count n <= x with p^a || n for some prime p > Y")
    for a in ("x", "Y", "a"):
        c.add_argument(a, type=_int)

    c = cmd("propbound", "the large-exponent bound and its ratio to x")
    c.add_argument("x", type=float, nargs="?")
    c.add_argument("gamma", type=float, nargs="?")
    c.add_argument("b", type=float, nargs="?")
    c.add_argument("psi", type=float, nargs="?")
    c.add_argument("c", type=float, nargs="?")
    c.add_argument("--sweep", action="store_true", help="ratio for x = 1e3..1e12, psi = 3 logloglog x")

    m = cmd("model", "heuristic coefficient and probability formulas")
    msub = m.add_subparsers(dest="model_command", metavar="WHAT")
    msub.required = True
    mc = msub.add_parser("coeff", parents=[common], help="c + c log(e/c)/D")
    mc.add_argument("c", type=float)
    mc.add_argument("D", type=float)
    msub.add_parser("coeffmax", parents=[common], help="maximise over c in (0, e]").add_argument("D", type=float)
    mp = msub.add_parser("prob", parents=[common], help="(1 - 1/phi(r^a))^N")
    for a in ("N", "r", "a"):
        mp.add_argument(a, type=_int)
    ml = msub.add_parser("levelsize", parents=[common], help="y^n / n!")
    ml.add_argument("y", type=float)
    ml.add_argument("n", type=_int)

    c = cmd("verify", "run a property suite")
    c.add_argument("--suite", required=True, choices=sorted(verify.SUITES) + ["all"])
    c.add_argument("--limit", type=_int, default=None, help="override the suite's range")
    return parser


def make_config(args) -> Config:
    workers = getattr(args, "workers", None)
    if workers is None:
        workers = rangesieve.default_workers()
    return Config(
        workers=workers,
        mem_budget=getattr(args, "mem_budget", DEFAULT_BUDGET),
        variant=Variant.parse(getattr(args, "variant", "standard")),
        fmt=getattr(args, "fmt", "text"),
        out=getattr(args, "out", None),
    )


def _emit(cfg: Config, value, out) -> None:
    if cfg.fmt == "json":
        out.write(json.dumps(value, separators=(",", ":")) + "\n")
    elif isinstance(value, (list, tuple)):
        out.write(" ".join(str(v) for v in value) + "\n")
    elif isinstance(value, dict):
        for k, v in value.items():
            out.write(f"{k} {v}\n")
    else:
        out.write(f"{value}\n")


def _need_prime(p: int) -> int:
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    return p


def _write_text(path: str, text: str, out) -> None:
    if path == "-":
        out.write(text)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)


def _render_text(node, indent: int = 0) -> list[str]:
    tag = f" (alpha={node.alpha})" if node.alpha and node.alpha > 1 else ""
    lines = ["  " * indent + f"{node.p}{tag}"]
    for child in node.children:
        lines.extend(_render_text(child, indent + 1))
    return lines


def dispatch(args, cfg: Config, out) -> int:
    v = cfg.variant
    c = args.command
    if c == "lambda":
        _emit(cfg, carmichael_lambda(args.n, v), out)
    elif c == "chain":
        _emit(cfg, list(lambda_chain(args.n, v).values), out)
    elif c == "L":
        _emit(cfg, big_L(args.n, v), out)
    elif c == "pratt":
        tree = pratt.build_tree(args.p)
        if cfg.fmt in ("json", "dot"):
            out.write(pratt.render_tree(tree, cfg.fmt).rstrip("\n") + "\n")
        else:
            out.write("\n".join(_render_text(tree)) + "\n")
    elif c == "height":
        _emit(cfg, pratt.height(args.p), out)
    elif c == "levels":
        _emit(cfg, pratt.level_counts(_need_prime(args.p), distinct=args.distinct), out)
    elif c == "excess":
        return _excess(args, cfg, out)
    elif c == "sieve":
        _sieve(args, cfg)
    elif c == "stats":
        _stats(args, cfg, out)
    elif c == "dickman":
        _emit(cfg, repr(analysis.dickman_rho(args.u)) if cfg.fmt == "text" else analysis.dickman_rho(args.u), out)
    elif c == "smooth":
        _emit(cfg, analysis.smooth_count(args.x, args.z), out)
    elif c == "btsum":
        r = analysis.bt_recip_sum(args.x, args.m)
        _emit(cfg, {"sum": r.total, "count": r.count} if cfg.fmt == "json" else [repr(r.total), r.count], out)
    elif c == "chains":
        res = {"count": analysis.chain_count(args.x, args.q, args.alpha, args.k)}
        if args.multiplicity:
            res["with_multiplicity"] = analysis.chain_sum(args.x, args.q, args.alpha, args.k)
        if args.bound_c is not None:
            res["bound"] = analysis.chain_bound(args.x, args.q, args.alpha, args.k, args.bound_c)
        _emit(cfg, res if len(res) > 1 or cfg.fmt == "json" else res["count"], out)
    elif c == "powers":
        _emit(cfg, analysis.power_exact_divisor_count(args.x, args.Y, args.a), out)
    elif c == "propbound":
        _propbound(args, cfg, out)
    elif c == "model":
        _model(args, cfg, out)
    elif c == "verify":
        return _verify(args, out)
    return 0


def _excess(args, cfg, out) -> int:
    if args.limit is None:
        if args.p is None:
            raise ValueError("give a prime p or --limit N")
        p = _need_prime(args.p)
        L, H = big_L(p, cfg.variant), pratt.height(p)
        _emit(cfg, {"L": L, "H": H, "L_minus_H": L - H, "branch_excess": pratt.branch_excess(p)}, out)
        return 0
    rep = model.excess_report(args.limit, cfg.variant, args.cutoff, workers=cfg.workers)
    if cfg.fmt == "json":
        _emit(cfg, {"histogram": rep.histogram(), "mean": rep.mean_excess, "cutoff": rep.cutoff}, out)
    else:
        _write_text(args.csv or "-", rep.to_csv(), out)
    return 0


def _sieve(args, cfg) -> None:
    kw = dict(budget=cfg.mem_budget)
    if args.kind == "lambda":
        t = rangesieve.sieve_lambda(args.limit, cfg.variant, workers=cfg.workers, segment=args.segment, **kw)
    elif args.kind == "L":
        t = rangesieve.sieve_L(args.limit, cfg.variant, workers=cfg.workers, segment=args.segment, **kw)
    else:
        t = rangesieve.sieve_heights(args.limit, **kw)
    rangesieve.write_table(t, args.out)
    print(f"wrote {args.kind} table for N={args.limit} to {args.out}", file=sys.stderr)


def _stats(args, cfg, out) -> None:
    if args.table:
        L = rangesieve.read_table(args.table)
        if L.kind is not rangesieve.Kind.L8:
            raise TableKindError(f"{args.table} is not an L table")
        if L.limit != args.limit:
            raise TableKindError(f"{args.table} covers N={L.limit}, not {args.limit}")
    else:
        L = rangesieve.sieve_L(args.limit, cfg.variant, workers=cfg.workers, budget=cfg.mem_budget)
    H = rangesieve.sieve_heights(args.limit, budget=cfg.mem_budget)
    rep = analysis.distribution_report(L, H, c=args.c_const, gamma=args.gamma)
    _write_text(args.csv, rep.to_csv(), out)
    hist = " ".join(f"{d}:{n}" for d, n in sorted(rep.excess_histogram.items()))
    print(f"L(p)-H(p) histogram {hist}", file=sys.stderr)


def _propbound(args, cfg, out) -> None:
    if args.sweep:
        rows = analysis.prop_sweep([10.0**k for k in range(3, 13)])
        if cfg.fmt == "json":
            _emit(cfg, [{"x": x, "ratio": r} for x, r in rows], out)
        else:
            out.write("x,ratio\n" + "".join(f"{x:.6g},{r:.6g}\n" for x, r in rows))
        return
    vals = (args.x, args.gamma, args.b, args.psi, args.c)
    if any(v is None for v in vals):
        raise ValueError("propbound needs x gamma b psi c, or --sweep")
    value = analysis.prop_bound_eval(*vals)
    ratio = analysis.prop_bound_ratio(*vals)
    _emit(cfg, {"value": value, "ratio": ratio}, out)


def _model(args, cfg, out) -> None:
    w = args.model_command
    if w == "coeff":
        _emit(cfg, model.coefficient(args.c, args.D), out)
    elif w == "coeffmax":
        m = model.coefficient_max(args.D)
        _emit(cfg, {"c_star": m.c_star, "f_star": m.f_star, "boundary": m.boundary}, out)
    elif w == "prob":
        _emit(cfg, model.prob_no_hit(args.N, args.r, args.a), out)
    elif w == "levelsize":
        _emit(cfg, model.expected_level_size(args.y, args.n), out)


def _verify(args, out) -> int:
    kwargs = {}
    if args.limit is not None and args.suite != "all":
        if "limit" not in inspect.signature(verify.SUITES[args.suite]).parameters:
            raise ValueError(f"suite {args.suite!r} has no adjustable limit")
        kwargs["limit"] = args.limit
    checks = verify.run_suite(args.suite, **kwargs)
    for chk in checks:
        out.write(chk.line() + "\n")
    return 0 if all(c.passed for c in checks) else 1


def main(argv: list[str] | None = None, out=None) -> int:
    out = out if out is not None else sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = make_config(args)
        return dispatch(args, cfg, out)
    except (ValueError, ArithmeticError, ResourceError, TableFormatError, OSError) as exc:
        print(f"lam: error: {exc}", file=sys.stderr)
        return 1


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
