from fractions import Fraction

import pytest

from ambientop.coefficients import ParamSpec
from ambientop.errors import ParityError, TruncationError, WeightMismatchError
from ambientop.models.ambient import (
    AmbientFn,
    GeneralizedFamily,
    ORFamily,
    ambient_laplacian,
    dirichlet_pairing,
    evaluate_operator,
    interpret,
    or_direct,
    q_multiply,
)
from ambientop.models.casefile import case_to_json, evaluate_case, load_case
from ambientop.models.metric import MetricJet, _matmul, conformal_model
from ambientop.models.suites import (
    conformal_covariance_test,
    gjms_test,
    make_family,
    mode_pool,
    or_evaluation_order_test,
    random_phi,
    random_trig,
    rewriting_consistency_test,
    self_adjointness_test,
    tangentiality_test,
    trial_rng,
)
from ambientop.models.trigjet import TrigJet, cq
from ambientop.opalgebra import OpPoly, normal_order

N = 3
FLAT = MetricJet.flat_torus(N)


def mode(m, p=0, value=1, P=2, E=0):
    return TrigJet.from_entries(N, [(m, p, 0, value)], P, E)


def test_laplacian_examples():
    w = Fraction(2, 5)
    out = ambient_laplacian(AmbientFn(w, mode((1, 2, 0))), FLAT)
    assert out.weight == w - 2
    assert out.jet == mode((1, 2, 0), value=-5, P=1)
    out = ambient_laplacian(AmbientFn(w, mode((0, 0, 0), p=1)), FLAT)
    assert out.jet == mode((0, 0, 0), value=2 * w + N - 2, P=1)
    assert ambient_laplacian(AmbientFn(w, mode((0, 0, 0))), FLAT).jet.is_zero()


def test_laplacian_needs_rho_order():
    with pytest.raises(TruncationError):
        ambient_laplacian(AmbientFn(0, mode((1, 0, 0), P=0)), FLAT)


def test_q_multiply():
    out = q_multiply(AmbientFn(1, mode((0, 0, 0))))
    assert out.weight == 3
    assert out.jet == mode((0, 0, 0), p=1, value=2, P=3)
    assert out.restrict().is_zero()


def test_laplacian_q_commutator_on_model():
    rng = trial_rng(3, 0)
    for w in (Fraction(0), Fraction(-7, 3), Fraction(5, 2)):
        f = AmbientFn(w, random_trig(rng, N, 2, 3))
        lhs = ambient_laplacian(q_multiply(f), FLAT) - q_multiply(ambient_laplacian(f, FLAT))
        assert lhs.jet == f.jet.scale(4 * w + 2 * N + 4).truncate(P=lhs.jet.P)


def test_weight_mismatch():
    with pytest.raises(WeightMismatchError):
        AmbientFn(0, mode((0, 0, 0))) + AmbientFn(1, mode((0, 0, 0)))
    fam = ORFamily(N, 1)
    with pytest.raises(WeightMismatchError):
        evaluate_operator(fam, [AmbientFn(0, mode((1, 0, 0))), AmbientFn(0, mode((1, 0, 0)))], FLAT)


def test_or_k1_example():
    fam = ORFamily(N, 1)
    rng = trial_rng(1, 1)
    u0, v0 = (random_trig(rng, N, 1, 1, rho_to=0) for _ in range(2))
    w = fam.arg_weight
    out = evaluate_operator(fam, [AmbientFn(w, u0), AmbientFn(w, v0)], FLAT)
    lap = lambda j: j.flat_laplacian_x()
    expected = (lap(u0 * v0) + lap(u0) * v0 + u0 * lap(v0)).restrict()
    assert out == expected


def test_or_k0_is_product():
    fam = ORFamily(5, 0)
    u = random_trig(trial_rng(0, 0), 5, 1, 0)
    v = random_trig(trial_rng(0, 1), 5, 1, 0)
    assert evaluate_operator(fam, [AmbientFn(fam.arg_weight, u), AmbientFn(fam.arg_weight, v)],
                             MetricJet.flat_torus(5)) == (u * v).restrict()


def test_or_evaluation_orders_agree():
    assert or_evaluation_order_test(3, 2).passed
    assert or_evaluation_order_test(5, 3, trials=2).passed


def test_parity_and_truncation_errors():
    with pytest.raises(ParityError):
        evaluate_operator(ORFamily(4, 3), [], FLAT)
    fam = ORFamily(N, 2)
    u = AmbientFn(fam.arg_weight, mode((1, 0, 0), P=1))
    with pytest.raises(TruncationError):
        evaluate_operator(fam, [u, u], FLAT)
    with pytest.raises(ParityError):
        make_family("generalized", 4, 3, wp=-2)


def test_generalized_direct_sum_oracle():
    """Horner evaluation against the literal sum of a_j D^{k-j}(f D^j u)."""
    rng = trial_rng(9, 0)
    for n, k, wp in ((3, 2, -2), (4, 1, -4), (5, 3, -2)):
        g = MetricJet.flat_torus(n)
        f = AmbientFn(wp, random_trig(rng, n, 1, k))
        fam = make_family("generalized", n, k, wp=wp, multiplier=f)
        u = AmbientFn(fam.arg_weight, random_trig(rng, n, 1, k))
        total = None
        for j, a in enumerate(fam.coefficients()):
            t = u
            for _ in range(j):
                t = ambient_laplacian(t, g)
            t = f * t
            for _ in range(k - j):
                t = ambient_laplacian(t, g)
            t = t * a
            total = t if total is None else total + t
        assert evaluate_operator(fam, [u], g) == total.restrict()


def test_dirichlet_pairing():
    m = (1, -1, 2)
    plus, minus = mode(m, P=0), mode(tuple(-x for x in m), P=0)
    assert dirichlet_pairing(plus, minus) == [cq(1)]
    assert dirichlet_pairing(plus, plus) == [cq(0)]
    rng = trial_rng(0, 5)
    a, b = random_trig(rng, N, 2, 0), random_trig(rng, N, 2, 0)
    assert dirichlet_pairing(a, b) == dirichlet_pairing(b, a)


def test_integrand_weight_is_minus_n():
    for n, k in ((3, 1), (5, 2)):
        fam = ORFamily(n, k)
        assert fam.arg_weight + fam.output_weight == -n
        gen = make_family("generalized", n, k, wp=-2)
        assert gen.arg_weight + gen.output_weight == -n


def test_conformal_model_basics():
    zero = conformal_model(TrigJet.zero(N, 0, 1), 2, 2)
    ident = [[TrigJet.constant(N, int(i == j), 2, 2) for j in range(N)] for i in range(N)]
    assert all(zero.entries[i][j] == ident[i][j] for i in range(N) for j in range(N))
    phi = random_phi(trial_rng(4, 0), N, 1, 2)
    g = conformal_model(phi, 2, 2)
    prod = _matmul(g.entries, g.inverse)
    assert all(prod[i][j] == ident[i][j] for i in range(N) for j in range(N))
    # eps^1, rho^0 part is 2 phi Id
    for i in range(N):
        eps1 = TrigJet(N, 0, 1, {(0, 1): g.entries[i][i].data.get((0, 1), {})})
        assert eps1 == phi.scale(2)
    with pytest.raises(TruncationError):
        conformal_model(phi, 4, 2)
    with pytest.raises(TruncationError):
        conformal_model(phi, 1, 4)


def test_gjms_reduction():
    for n, k in ((3, 1), (5, 2), (3, 3), (6, 3)):
        assert gjms_test(n, k, trials=3).passed
    assert not gjms_test(5, 2, trials=2, perturb={"a:1": 1}).passed


def test_fsa_small():
    assert self_adjointness_test(ORFamily(3, 1), trials=5, seed=1).passed
    assert self_adjointness_test(make_family("generalized", 4, 2, wp=-2), trials=5, seed=1).passed
    assert self_adjointness_test(make_family("linear", 5, 2, ell=1), trials=3, seed=2).passed
    assert self_adjointness_test(make_family("linear", 5, 2, ell=0), trials=3, seed=2).passed
    assert not self_adjointness_test(make_family("generalized", 3, 1, wp=-2, perturb={"a:1": 1}),
                                     trials=5, seed=1).passed
    assert not self_adjointness_test(ORFamily(3, 1, {"or:1,0,0": 1}), trials=5, seed=1).passed


def test_fsa_curved_model():
    # the Dirichlet form carries the volume density of e^{2 eps phi} delta
    rep = self_adjointness_test(ORFamily(3, 1), trials=2, seed=5, degree=1, eps_order=1)
    assert rep.passed, rep.witnesses
    rep = self_adjointness_test(make_family("generalized", 3, 1, wp=-2), trials=2, seed=5, degree=1, eps_order=1)
    assert rep.passed, rep.witnesses


def test_tangentiality_small():
    rep = tangentiality_test(ORFamily(5, 2), trials=3, seed=1)
    assert rep.passed and rep.data["trials_with_change"] == 0
    rep = tangentiality_test(make_family("generalized", 3, 1, wp=-2, perturb={"a:1": 1}), trials=4, seed=1)
    assert not rep.passed and rep.data["trials_with_change"] == 4
    rep = tangentiality_test(ORFamily(3, 1), trials=2, seed=2, eps_order=2)
    assert rep.passed


def test_tangentiality_at_free_weight():
    # the lemma's coefficients are tangential for any weight w
    fam = make_family("generalized", 3, 2, wp=Fraction(-1, 3), w=Fraction(5, 7))
    assert tangentiality_test(fam, trials=3, seed=8).passed


def test_covariance_small():
    assert conformal_covariance_test(trials=2, seed=3).passed
    rep = conformal_covariance_test(trials=2, seed=3, weight_offset=1)
    assert not rep.passed
    assert rep.witnesses[0]["actual"] == "mismatch at eps^1"


def test_interpret_matches_direct_semantics():
    g = FLAT
    rng = trial_rng(2, 2)
    u = AmbientFn(Fraction(1, 3), random_trig(rng, N, 1, 2))
    f = AmbientFn(Fraction(-1, 2), random_trig(rng, N, 1, 2))
    op = OpPoly({("D", "Q", "F"): 1})
    out = interpret(op, u, g, f, {"n": N, "w": Fraction(1, 3), "wp": Fraction(-1, 2)})
    assert out.jet == ambient_laplacian(q_multiply(f * u), g).jet
    canon = normal_order(op)
    out2 = interpret(canon, u, g, f, {"n": N, "w": Fraction(1, 3), "wp": Fraction(-1, 2)})
    assert out.jet == out2.jet


def test_rewriting_consistency_small():
    assert rewriting_consistency_test(k_max=2, seeds=2).passed
    assert not rewriting_consistency_test(k_max=2, seeds=1, perturb={"a:0": 1}).passed


def test_mode_pool_respects_degree():
    pool = mode_pool(trial_rng(0, 0), 5, 2)
    assert (0,) * 5 in pool
    assert all(max(abs(x) for x in m) <= 2 for m in pool)


def test_case_file_round_trip(tmp_path):
    rng = trial_rng(6, 0)
    u, v = random_trig(rng, N, 1, 1), random_trig(rng, N, 1, 1)
    text = case_to_json(N, "or", 1, [u, v], 1)
    case = load_case(text)
    fam = ORFamily(N, 1)
    direct = evaluate_operator(fam, [AmbientFn(fam.arg_weight, u), AmbientFn(fam.arg_weight, v)], FLAT)
    assert evaluate_case(case) == direct
    with pytest.raises(ValueError):
        load_case('{"n": 3}')
