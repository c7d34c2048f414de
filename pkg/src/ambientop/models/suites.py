"""Randomised exact test suites on the torus models.

Every suite draws its data from ``random.Random`` seeded per trial, so a
(seed, trial) pair identifies a failing case completely.  All comparisons
are exact equalities of jets or of complex rationals.
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import permutations
from typing import Mapping, Optional

from ..coefficients import ParamSpec
from ..opalgebra import OpPoly, build_generalized, normal_order, raw_commutator_with_Q
from ..ratfunc import n as n_sym, w as w_sym, wp as wp_sym
from ..report import Report, timed
from .ambient import (
    AmbientFn,
    GeneralizedFamily,
    ORFamily,
    evaluate_operator,
    dirichlet_pairing,
    interpret,
    linear_family,
    or_direct,
)
from .metric import MetricJet, conformal_model
from .trigjet import TrigJet, cq_render, exp_series


def trial_rng(seed: int, trial: int) -> random.Random:
    return random.Random(seed * 1_000_003 + trial)


def _component(rng: random.Random, degree: int) -> int:
    # half the components vanish so that products of few modes overlap often
    if degree == 0 or rng.random() < 0.5:
        return 0
    return rng.choice([m for m in range(-degree, degree + 1) if m])


def mode_pool(rng: random.Random, n: int, degree: int, size: int = 3) -> list:
    """Modes of max-degree <= ``degree`` built from a few random base vectors.

    Base vectors have entries in {-1, 0, 1}; the pool holds them, their
    pairwise sums and differences, and the zero mode.  Drawing every function
    of a trial from one pool makes the products of a few modes overlap, so
    the integrals being compared are rarely zero.
    """
    step = min(degree, 1)
    base = []
    while len(base) < size:
        b = tuple(_component(rng, step) for _ in range(n))
        if any(b):
            base.append(b)
    pool = {(0,) * n}
    for i, a in enumerate(base):
        pool.add(a)
        for b in base[i + 1:]:
            for sign in (1, -1):
                c = tuple(x + sign * y for x, y in zip(a, b))
                if max(abs(x) for x in c) <= degree:
                    pool.add(c)
    return sorted(pool)


def random_trig(rng: random.Random, n: int, degree: int, rho_order: int, eps_order: int = 0,
                terms: int = 3, rho_from: int = 0, rho_to: Optional[int] = None,
                eps_level: int = 0, bound: int = 3, pool: Optional[list] = None) -> TrigJet:
    """Real trigonometric jet: ``terms`` random modes (plus conjugates) per rho-order.

    Data is placed at rho-orders ``rho_from..rho_to`` and eps-order ``eps_level``;
    the declared truncation orders are ``rho_order`` and ``eps_order``.  Modes
    come from ``pool`` when given, otherwise have independent random entries.
    """
    rho_to = rho_order if rho_to is None else rho_to
    entries = []
    for p in range(rho_from, rho_to + 1):
        for _ in range(terms):
            if pool is not None:
                mode = rng.choice(pool)
            else:
                mode = tuple(_component(rng, degree) for _ in range(n))
            re, im = rng.randint(-bound, bound), rng.randint(-bound, bound)
            entries.append((mode, p, eps_level, (Fraction(re), Fraction(im))))
            entries.append((tuple(-x for x in mode), p, eps_level, (Fraction(re), Fraction(-im))))
    return TrigJet.from_entries(n, entries, rho_order, eps_order)


def random_phi(rng: random.Random, n: int, degree: int, eps_order: int) -> TrigJet:
    """Conformal factor data: a real trig polynomial sitting at eps^1, without constant term."""
    while True:
        phi = random_trig(rng, n, degree, 0, max(eps_order, 1), terms=2, eps_level=1, bound=2)
        zero = (0,) * n
        phi = TrigJet(n, 0, phi.E, {key: {m: v for m, v in modes.items() if m != zero}
                                     for key, modes in phi.data.items()})
        if not phi.is_zero():
            return phi


def _drawer(rng: random.Random, n: int, degree: int):
    """random_trig bound to one trial's generator and mode pool."""
    pool = mode_pool(rng, n, degree)

    def draw(rho_order: int, eps_order: int = 0, **kwargs) -> TrigJet:
        return random_trig(rng, n, degree, rho_order, eps_order, pool=pool, **kwargs)

    return draw


def _make_model(rng, n: int, degree: int, rho_order: int, eps_order: int) -> MetricJet:
    if eps_order == 0:
        return MetricJet.flat_torus(n)
    return conformal_model(random_phi(rng, n, min(degree, 1), eps_order), rho_order, eps_order)


def make_family(kind: str, n: int, k: int, wp=None, w=None, ell=None, multiplier=None,
                perturb: Optional[Mapping] = None):
    """Operator description for ``kind`` in {or, generalized, linear}."""
    if kind == "or":
        family = ORFamily(n, k, perturb)
    elif kind == "generalized":
        wp = Fraction(0 if wp is None else wp)
        if ell is None and wp <= 0 and wp.denominator == 1 and wp % 2 == 0:
            ell = int(-wp / 2)
        family = GeneralizedFamily(n=n, k=k, wp=wp, multiplier=multiplier,
                                   w=None if w is None else Fraction(w), perturb=perturb, ell=ell)
    elif kind == "linear":
        if ell is None:
            raise ValueError("linear family needs ell")
        family = linear_family(n, k, ell, multiplier, perturb)
    else:
        raise ValueError(f"unknown family {kind!r}")
    family.validate()
    return family


def _with_multiplier(family, multiplier):
    if isinstance(family, GeneralizedFamily):
        return GeneralizedFamily(n=family.n, k=family.k, wp=family.wp, multiplier=multiplier, w=family.w,
                                 coefficient_override=family.coefficient_override,
                                 perturb=family.perturb, ell=family.ell)
    return family


def _random_args(draw, family, rho_order, eps_order):
    return [AmbientFn(family.arg_weight, draw(rho_order, eps_order))
            for _ in range(family.arity)]


def _random_multiplier(draw, family, rho_order, eps_order):
    if isinstance(family, GeneralizedFamily):
        jet = draw(rho_order, eps_order)
        return _with_multiplier(family, AmbientFn(family.wp, jet))
    return family


def _params(family, **extra) -> dict:
    out = {"family": type(family).__name__, "n": family.n, "k": family.k}
    if isinstance(family, GeneralizedFamily):
        out["wp"] = str(family.wp)
        out["w"] = str(family.arg_weight)
    if family.perturb:
        out["perturb"] = {key: str(v) for key, v in sorted(family.perturb.items())}
    out.update(extra)
    return out


def _describe_value(values) -> list:
    return [cq_render(v) for v in values]


def tangentiality_test(family, trials: int = 10, seed: int = 0, degree: int = 1,
                       rho_order: Optional[int] = None, eps_order: int = 0) -> Report:
    """Restricted output is unchanged when the rho >= 1 data of each argument is altered."""
    n, k = family.n, family.k
    rho_order = k if rho_order is None else rho_order
    rep = Report("tangential", _params(family, trials=trials, seed=seed, degree=degree,
                                       rho_order=rho_order, eps_order=eps_order))
    detected = 0
    with timed(rep):
        for trial in range(trials):
            rng = trial_rng(seed, trial)
            draw = _drawer(rng, n, degree)
            g = _make_model(rng, n, degree, rho_order, eps_order)
            fam = _random_multiplier(draw, family, rho_order, eps_order)
            args = _random_args(draw, fam, rho_order, eps_order)
            base = evaluate_operator(fam, args, g)
            changed = False
            for idx in range(len(args)):
                if rho_order < 1:
                    break
                shifted = list(args)
                bump = draw(rho_order, eps_order, rho_from=1)
                shifted[idx] = AmbientFn(args[idx].weight, args[idx].jet + bump)
                out = evaluate_operator(fam, shifted, g)
                ok = out == base
                changed = changed or not ok
                rep.check(ok, {"seed": seed, "trial": trial, "argument": idx},
                          "unchanged", f"{len(out - base)} differing coefficients")
            detected += changed
    rep.data["trials_with_change"] = detected
    return rep


def _integrals(family, args, g, test_fn):
    return dirichlet_pairing(test_fn.jet, evaluate_operator(family, args, g), g.volume_at_boundary())


def self_adjointness_test(family, trials: int = 20, seed: int = 0, degree: int = 2,
                          rho_order: Optional[int] = None, eps_order: int = 0) -> Report:
    """Formal self-adjointness through the Dirichlet form, per eps-order.

    OR family: the six permutations of (u, v, w) -> int u D(v, w) agree.
    Generalized family: int (v D u - u D v) = 0 with a random multiplier jet.
    """
    n, k = family.n, family.k
    rho_order = k if rho_order is None else rho_order
    rep = Report("fsa", _params(family, trials=trials, seed=seed, degree=degree,
                                rho_order=rho_order, eps_order=eps_order))
    nonzero = 0
    with timed(rep):
        for trial in range(trials):
            rng = trial_rng(seed, trial)
            draw = _drawer(rng, n, degree)
            g = _make_model(rng, n, degree, rho_order, eps_order)
            if isinstance(family, ORFamily):
                fns = [AmbientFn(family.arg_weight, draw(rho_order, eps_order))
                       for _ in range(3)]
                values = {}
                for perm in permutations(range(3)):
                    a, b, c = (fns[i] for i in perm)
                    values[perm] = _integrals(family, [b, c], g, a)
                ref = values[(0, 1, 2)]
                nonzero += any(v[0] or v[1] for v in ref)
                for perm, val in values.items():
                    rep.check(val == ref, {"seed": seed, "trial": trial, "permutation": list(perm)},
                              _describe_value(ref), _describe_value(val))
            else:
                fam = _random_multiplier(draw, family, rho_order, eps_order)
                u, v = (AmbientFn(fam.arg_weight, draw(rho_order, eps_order))
                        for _ in range(2))
                lhs = _integrals(fam, [u], g, v)
                rhs = _integrals(fam, [v], g, u)
                diff = [(x[0] - y[0], x[1] - y[1]) for x, y in zip(lhs, rhs)]
                nonzero += any(v[0] or v[1] for v in lhs)
                zero = all(not d[0] and not d[1] for d in diff)
                rep.check(zero, {"seed": seed, "trial": trial, "quantity": "int(vDu - uDv)"},
                          ["0"] * len(diff), _describe_value(diff))
    # trials whose compared integrals are not all zero
    rep.data["nonzero_trials"] = nonzero
    return rep


def conformal_covariance_test(n: int = 3, k: int = 1, trials: int = 10, seed: int = 0, degree: int = 1,
                              eps_order: int = 2, weight_offset: Fraction = Fraction(0),
                              perturb: Optional[Mapping] = None) -> Report:
    """OR family in the flat metric versus the representative e^{2 eps phi} delta.

    Arguments are rescaled by e^{w eps phi}, w = -(n-2k)/3; the flat output is
    rescaled by e^{w_out eps phi}, w_out = 2w - 2k (+ ``weight_offset``, a control).
    """
    family = ORFamily(n, k, perturb)
    family.validate()
    rep = Report("covariance", {"n": n, "k": k, "trials": trials, "seed": seed, "degree": degree,
                                "eps_order": eps_order, "weight_offset": str(weight_offset),
                                **({"perturb": {a: str(b) for a, b in perturb.items()}} if perturb else {})})
    w_in = family.arg_weight
    w_out = family.output_weight + Fraction(weight_offset)
    flat = MetricJet.flat_torus(n, eps_order)
    with timed(rep):
        for trial in range(trials):
            rng = trial_rng(seed, trial)
            draw = _drawer(rng, n, degree)
            phi = random_phi(rng, n, degree, eps_order)
            g = conformal_model(phi, k, eps_order)
            s = phi.with_orders(k, eps_order)
            up_in = exp_series(s, w_in)
            data = [draw(k, eps_order, rho_to=0) for _ in range(2)]
            flat_out = evaluate_operator(family, [AmbientFn(w_in, d) for d in data], flat)
            curved_out = evaluate_operator(family, [AmbientFn(w_in, up_in * d) for d in data], g)
            expected = exp_series(s, w_out).restrict() * flat_out
            diff = curved_out - expected
            orders = sorted({q for (_, q) in diff.data})
            rep.check(diff.is_zero(), {"seed": seed, "trial": trial},
                      "equal through eps^%d" % eps_order,
                      f"mismatch at eps^{orders[0]}" if orders else "equal")
    return rep


def gjms_test(n: int, k: int, trials: int = 5, seed: int = 0, degree: int = 2,
              perturb: Optional[Mapping] = None) -> Report:
    """f = 1, wp = 0 on rho-independent data gives Delta_x^k on the flat torus."""
    family = make_family("generalized", n, k, wp=0, perturb=perturb)
    rep = Report("gjms", {"n": n, "k": k, "trials": trials, "seed": seed, "degree": degree,
                          **({"perturb": {a: str(b) for a, b in perturb.items()}} if perturb else {})})
    rep.data["coefficients"] = [str(a) for a in family.coefficients()]
    g = MetricJet.flat_torus(n)
    with timed(rep):
        for trial in range(trials):
            rng = trial_rng(seed, trial)
            draw = _drawer(rng, n, degree)
            u0 = draw(k, rho_to=0)
            out = evaluate_operator(family, [AmbientFn(family.arg_weight, u0)], g)
            expected = u0.restrict()
            for _ in range(k):
                expected = expected.flat_laplacian_x()
            rep.check(out == expected, {"seed": seed, "trial": trial},
                      f"Delta^{k} u", f"{len(out - expected)} differing coefficients")
    return rep


def _random_words(rng, k: int, count: int) -> list:
    letters = ["D"] * rng.randint(1, max(k, 1)) + ["F"] + ["Q"] * rng.randint(1, 2)
    words = set()
    for _ in range(count):
        word = letters[:]
        rng.shuffle(word)
        words.add(tuple(word))
    return sorted(words)


def rewriting_consistency_test(n: int = 3, k_max: int = 3, seeds: int = 5, seed: int = 0, degree: int = 1,
                               perturb: Optional[Mapping] = None) -> Report:
    """Interpreting an operator word sum before and after normal ordering agrees on the flat model.

    Two kinds of expression per (k, seed): the raw commutator [D_{2k,w,f}, Q] of
    the tangential family, and a random combination of words with Q not leftmost.
    Weights w and wp are random rationals; the multiplier is a random jet.
    """
    rep = Report("rewrite", {"n": n, "k_max": k_max, "seeds": seeds, "seed": seed, "degree": degree,
                             **({"perturb": {a: str(b) for a, b in perturb.items()}} if perturb else {})})
    g = MetricJet.flat_torus(n)
    with timed(rep):
        for k in range(k_max + 1):
            for trial in range(seeds):
                rng = trial_rng(seed + 7919 * k, trial)
                draw = _drawer(rng, n, degree)
                values = {"n": n,
                          "w": Fraction(rng.randint(-12, 12), rng.randint(1, 6)),
                          "wp": Fraction(rng.randint(-12, 12), rng.randint(1, 6))}
                comm = raw_commutator_with_Q(build_generalized(ParamSpec.symbolic(k), perturb))
                words = _random_words(rng, k, 3)
                combo = OpPoly({word: Fraction(rng.randint(-5, 5) or 1, rng.randint(1, 3)) for word in words},
                               input_weight=w_sym, n=n_sym, wp=wp_sym)
                for label, raw in (("commutator", comm), ("words", combo)):
                    depth = max(word.count("D") for word in raw.terms)
                    u = AmbientFn(values["w"] if label == "words" else values["w"] - 2,
                                  draw(depth))
                    f = AmbientFn(values["wp"], draw(depth))
                    canon = normal_order(raw)
                    lhs = interpret(raw, u, g, f, values)
                    rhs = interpret(canon, u, g, f, values) if canon.terms else None
                    ok = lhs.restrict().is_zero() if rhs is None else (lhs.jet == rhs.jet and lhs.weight == rhs.weight)
                    if label == "commutator":
                        # tangentiality: the canonical commutator is zero
                        ok = ok and canon.is_zero()
                    rep.check(ok, {"k": k, "seed": seed, "trial": trial, "expression": label,
                                   "canonical": str(canon)}, "raw == canonical", "differ")
    return rep


def or_evaluation_order_test(n: int, k: int, trials: int = 3, seed: int = 0, degree: int = 1) -> Report:
    """Horner-style evaluation of the OR family equals the direct term-by-term sum."""
    family = ORFamily(n, k)
    family.validate()
    g = MetricJet.flat_torus(n)
    rep = Report("or-order", {"n": n, "k": k, "trials": trials, "seed": seed})
    for trial in range(trials):
        rng = trial_rng(seed, trial)
        draw = _drawer(rng, n, degree)
        args = [AmbientFn(family.arg_weight, draw(k)) for _ in range(2)]
        a = family.apply(args, g)
        b = or_direct(family, args, g)
        rep.check(a.jet == b.jet, {"trial": trial}, "equal", "differ")
    return rep
