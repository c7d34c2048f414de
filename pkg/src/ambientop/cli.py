"""Command-line front end: coefficient tables, verification suites, model tests.

Exit codes: 0 when every check passes, 1 on a verification failure or a
malformed command line, 2 when the parameters are invalid (parity, pole or
truncation violations).
"""

from __future__ import annotations

import argparse
import random
import sys
import time
from fractions import Fraction
from typing import Optional, Sequence

from . import __version__
from .coefficients import (
    ParamSpec,
    expand_coefficient,
    linear_coefficient,
    or_coefficient,
    renormalized_coefficients,
    tangential_coefficient,
    verify_decompositions,
    verify_tangential_recursion,
)
from .errors import ParityError, PoleError, TruncationError, WeightMismatchError
from .opalgebra import verify_commutator
from .poincare import (
    random_rational,
    sample_points,
    verify_composition,
    verify_expand_Df,
    verify_reindex,
    verify_shift_expansion,
)
from .ratfunc import n as n_sym, w as w_sym, wp as wp_sym
from .report import Report

SUITES = ("recursion", "commutator", "reindex", "shift", "composition", "expand-df", "decompose")
MODEL_TESTS = ("fsa", "tangential", "covariance", "gjms", "rewrite")
KINDS = ("or", "linear", "tangential", "expand")
FAMILIES = ("or", "generalized", "linear")

INVALID = (ParityError, PoleError, TruncationError, WeightMismatchError)


class ArgumentError(Exception):
    pass


class Parser(argparse.ArgumentParser):
    """argparse with exit status 1 for malformed command lines."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def fraction_arg(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not an exact rational: {text!r}")


def perturb_arg(text: str) -> tuple:
    name, sep, delta = text.partition("=")
    if not sep or not name:
        raise argparse.ArgumentTypeError("expected NAME=DELTA")
    return name.strip(), fraction_arg(delta)


def index_arg(text: str) -> tuple:
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


class Perturbation(dict):
    """Perturbation table that remembers which names were looked up."""

    def __init__(self, *a, used: Optional[set] = None, **kw):
        super().__init__(*a, **kw)
        self.used = set() if used is None else used

    def get(self, name, default=None):
        self.used.add(name)
        return super().get(name, default)

    def without(self, name: str) -> Perturbation:
        return Perturbation({k: v for k, v in self.items() if k != name}, used=self.used)

    def unused(self) -> list:
        return sorted(set(self) - self.used)


def _perturb(args) -> Optional[Perturbation]:
    if not args.perturb:
        return None
    out = Perturbation()
    for name, delta in args.perturb:
        out[name] = dict.get(out, name, 0) + delta
    args.perturbation = out
    return out


def build_parser() -> Parser:
    common = Parser(add_help=False)
    common.add_argument("--json-out", metavar="PATH", help="write the report here instead of stdout")
    common.add_argument("--no-timing", action="store_true", help="omit timing from the report")
    common.add_argument("--perturb", action="append", type=perturb_arg, metavar="NAME=DELTA",
                        help="test hook: add DELTA to the named coefficient")

    parser = Parser(prog="ambientop", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=Parser)

    c = sub.add_parser("coeffs", parents=[common], help="print a coefficient family exactly")
    c.add_argument("--kind", choices=KINDS, required=True)
    c.add_argument("--n", type=fraction_arg, help="dimension (symbolic when omitted)")
    c.add_argument("--k", type=int, required=True)
    c.add_argument("--ell", type=int)
    c.add_argument("--w", type=fraction_arg, help="weight (symbolic when omitted)")
    c.add_argument("--wprime", type=fraction_arg, help="multiplier weight (symbolic when omitted)")
    c.add_argument("--indices", type=index_arg, help="one index tuple, e.g. 1,0,0")

    v = sub.add_parser("verify", parents=[common], help="run a symbolic verification suite")
    v.add_argument("--suite", choices=SUITES, required=True)
    v.add_argument("--k-max", type=int, default=4)
    v.add_argument("--k", type=int, help="run only this k")
    v.add_argument("--ell", type=int, help="largest ell for the decompose suite (default 3)")
    v.add_argument("--n", type=fraction_arg, help="fix n instead of keeping it symbolic")
    v.add_argument("--mode", choices=("symbolic", "sampled"), default="symbolic")
    v.add_argument("--samples", type=int, default=10)
    v.add_argument("--seed", type=int, default=0)

    m = sub.add_parser("model", parents=[common], help="run an exact test on the torus models")
    m.add_argument("--test", choices=MODEL_TESTS, required=True)
    m.add_argument("--family", choices=FAMILIES, default="or")
    m.add_argument("--n", type=int, default=3)
    m.add_argument("--k", type=int, default=1)
    m.add_argument("--ell", type=int)
    m.add_argument("--wprime", type=fraction_arg)
    m.add_argument("--w", type=fraction_arg)
    m.add_argument("--degree", type=int, default=1)
    m.add_argument("--rho-order", type=int)
    m.add_argument("--eps-order", type=int)
    m.add_argument("--trials", type=int, default=10)
    m.add_argument("--seed", type=int, default=0)

    e = sub.add_parser("evaluate", parents=[common], help="evaluate one operator from a case file")
    e.add_argument("--case", required=True, metavar="FILE")
    return parser


# coefficients -----------------------------------------------------------------


def _symbolic_or(value, symbol):
    return symbol if value is None else value


def cmd_coeffs(args) -> Report:
    perturb = _perturb(args)
    kind, k = args.kind, args.k
    if k < 0:
        raise ArgumentError("k must be nonnegative")
    rep = Report("coeffs", {"kind": kind, "n": args.n, "k": k, "ell": args.ell, "w": args.w,
                            "wprime": args.wprime, "indices": args.indices})
    table: dict = {}
    if kind == "or":
        if args.n is None:
            raise ArgumentError("--n is required for kind=or")
        p = ParamSpec(n=args.n, k=k)
        p.check_or()
        wanted = [args.indices] if args.indices else [
            (r, s, k - r - s) for r in range(k, -1, -1) for s in range(k - r, -1, -1)]
        for r, s, t in wanted:
            table[(r, s, t)] = or_coefficient(p, r, s, t, perturb)
    elif kind == "linear":
        if args.ell is None:
            raise ArgumentError("--ell is required for kind=linear")
        p = ParamSpec(n=_symbolic_or(args.n, n_sym), k=k, ell=args.ell)
        wanted = [args.indices] if args.indices else [(r, k - r) for r in range(k, -1, -1)]
        for r, s in wanted:
            table[(r, s)] = linear_coefficient(p, r, s, perturb)
    elif kind == "tangential":
        nn = _symbolic_or(args.n, n_sym)
        wp = _symbolic_or(args.wprime, wp_sym)
        wanted = [args.indices] if args.indices else [(j,) for j in range(k + 1)]
        if args.w is None and args.n is not None and args.wprime is not None:
            coeffs = renormalized_coefficients(nn, k, wp, perturb)
            rep.data["weight"] = ParamSpec(n=nn, k=k).poincare_weight(wp)
            for (j,) in wanted:
                table[(j,)] = coeffs[j]
        else:
            p = ParamSpec(n=nn, k=k, w=_symbolic_or(args.w, w_sym), wp=wp)
            for (j,) in wanted:
                table[(j,)] = tangential_coefficient(p, j, perturb)
    else:
        p = ParamSpec(n=_symbolic_or(args.n, n_sym), k=k, w=_symbolic_or(args.w, w_sym))
        wanted = [args.indices] if args.indices else [(i, j) for i in range(k + 1) for j in range(k - i + 1)]
        for i, j in wanted:
            table[(i, j)] = expand_coefficient(p, i, j, perturb)
    rep.data["coefficients"] = {",".join(str(x) for x in key): value for key, value in table.items()}
    rep.checks = len(table)
    return rep


# verification suites ----------------------------------------------------------


def _k_values(args, start: int) -> list:
    if args.k is not None:
        return [args.k]
    return list(range(start, args.k_max + 1))


def _nw_points(args) -> list:
    """(n, w) pairs: symbolic, or seeded rational samples."""
    if args.mode == "symbolic":
        return [(n_sym if args.n is None else args.n, w_sym)]
    return [(args.n if args.n is not None else n, w) for n, w in sample_points(args.samples, args.seed)]


def cmd_verify(args) -> Report:
    perturb = _perturb(args)
    suite = args.suite
    rep = Report(suite, {"suite": suite, "k_max": args.k_max, "k": args.k, "mode": args.mode,
                         "samples": args.samples if args.mode == "sampled" else None,
                         "seed": args.seed if args.mode == "sampled" else None,
                         "n": args.n, "ell": args.ell,
                         "perturb": {a: str(b) for a, b in sorted(perturb.items())} if perturb else None})
    points = _nw_points(args)
    rng = random.Random(args.seed)
    if suite == "recursion":
        for k in _k_values(args, 1):
            for nn, ww in points:
                wp = wp_sym if args.mode == "symbolic" else random_rational(rng)
                rep.absorb(verify_tangential_recursion(k, perturb, ParamSpec(n=nn, k=k, w=ww, wp=wp)))
    elif suite == "commutator":
        for k in _k_values(args, 0):
            for nn, ww in points:
                wp = wp_sym if args.mode == "symbolic" else random_rational(rng)
                rep.absorb(verify_commutator(k, perturb, ParamSpec(n=nn, k=k, w=ww, wp=wp)))
    elif suite == "reindex":
        for k in _k_values(args, 0):
            for j in range(k + 1):
                for nn, ww in points:
                    verify_reindex(k, j, ww, nn, perturb, rep)
    elif suite == "shift":
        for j in _k_values(args, 0):
            for nn, ww in points:
                verify_shift_expansion(j, ww, nn, perturb, rep)
    elif suite == "composition":
        total = _k_values(args, 0)
        for s in total:
            for i in range(s + 1):
                for nn, ww in points:
                    verify_composition(i, s - i, ww, nn, perturb, rep)
    elif suite == "expand-df":
        for k in _k_values(args, 0):
            for nn, ww in points:
                verify_expand_Df(k, nn, ww, perturb, rep)
    elif suite == "decompose":
        ell_max = 3 if args.ell is None else args.ell
        for k in _k_values(args, 0):
            if args.mode == "symbolic":
                ns = [args.n]
            else:
                # odd dimensions above 2k keep every Gamma argument positive
                ns = [args.n] if args.n is not None else [2 * k + 1 + 2 * rng.randint(0, 20)
                                                         for _ in range(args.samples)]
            for nn in ns:
                for ell in range(1, ell_max + 1):
                    rep.absorb(verify_decompositions(k, ell, nn, perturb))
    return rep


# models -----------------------------------------------------------------------


def _model_family(args, perturb):
    from .models.suites import make_family

    kind = args.family
    wp = args.wprime
    if kind == "linear":
        if args.ell is None:
            raise ArgumentError("--ell is required for the linear family")
    elif kind == "generalized" and wp is None:
        wp = Fraction(-2 if args.ell is None else -2 * args.ell)
    return make_family(kind, args.n, args.k, wp=wp, w=args.w, ell=args.ell, perturb=perturb)


def cmd_model(args) -> Report:
    from .models import suites

    perturb = _perturb(args)
    k = args.k
    if k < 0 or args.n < 1 or args.trials < 0 or args.degree < 0:
        raise ArgumentError("need k >= 0, n >= 1, trials >= 0 and degree >= 0")
    rho_order = k if args.rho_order is None else args.rho_order
    if args.test != "rewrite" and rho_order < k:
        raise TruncationError(f"an operator of order {2 * k} needs --rho-order >= {k}, got {rho_order}")
    test = args.test
    if test == "covariance":
        eps_order = 2 if args.eps_order is None else args.eps_order
        offset = Fraction(0)
        coeff_perturb = None
        if perturb:
            offset = perturb.get("weight", Fraction(0))
            coeff_perturb = perturb.without("weight")
        ParamSpec(n=args.n, k=k).check_or()
        if k > 2:
            raise TruncationError("the covariance test supports k <= 2")
        return suites.conformal_covariance_test(args.n, k, args.trials, args.seed, args.degree,
                                                eps_order, offset, coeff_perturb or None)
    eps_order = 0 if args.eps_order is None else args.eps_order
    if test == "gjms":
        return suites.gjms_test(args.n, k, args.trials, args.seed, args.degree, perturb)
    if test == "rewrite":
        return suites.rewriting_consistency_test(args.n, k, args.trials, args.seed, args.degree, perturb)
    family = _model_family(args, perturb)
    if test == "fsa":
        return suites.self_adjointness_test(family, args.trials, args.seed, args.degree, rho_order, eps_order)
    return suites.tangentiality_test(family, args.trials, args.seed, args.degree, rho_order, eps_order)


def cmd_evaluate(args) -> Report:
    from .models.casefile import build_case, load_case
    from .models.ambient import evaluate_operator
    from .models.trigjet import jet_to_json

    with open(args.case, encoding="utf-8") as fh:
        case = load_case(fh.read())
    rep = Report("evaluate", {"case": case})
    family, fns, g = build_case(case)
    out = evaluate_operator(family, fns, g)
    rep.data["output_weight"] = family.output_weight
    rep.data["result"] = jet_to_json(out)
    rep.checks = 1
    return rep


COMMANDS = {"coeffs": cmd_coeffs, "verify": cmd_verify, "model": cmd_model, "evaluate": cmd_evaluate}


def _emit(rep: Report, args) -> None:
    text = rep.to_json(timing=not args.no_timing)
    if args.json_out:
        with open(args.json_out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
        print(f"{rep.suite}: {rep.status} ({rep.checks} checks, {len(rep.witnesses)} witnesses)")
    else:
        print(text)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    command = COMMANDS[args.command]
    rep = Report(args.command, {"argv": list(argv) if argv is not None else sys.argv[1:]})
    start = time.perf_counter()
    try:
        rep = command(args)
        rep.timing_ms = int(round((time.perf_counter() - start) * 1000))
        unused = getattr(args, "perturbation", Perturbation()).unused()
        if unused:
            raise ArgumentError(f"perturbation never applied: {', '.join(unused)}")
    except ArgumentError as exc:
        parser.print_usage(sys.stderr)
        print(f"ambientop: error: {exc}", file=sys.stderr)
        return 1
    except INVALID as exc:
        rep.status = "error"
        rep.data["error"] = f"{type(exc).__name__}: {exc}"
        print(f"ambientop: {type(exc).__name__}: {exc}", file=sys.stderr)
        _emit(rep, args)
        return 2
    except (OSError, ValueError) as exc:
        print(f"ambientop: error: {exc}", file=sys.stderr)
        return 1
    _emit(rep, args)
    return 0 if rep.passed else 1


if __name__ == "__main__":
    sys.exit(main())
