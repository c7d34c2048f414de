from fractions import Fraction

import pytest

from ambientop.errors import TruncationError
from ambientop.models.trigjet import TrigJet, cq, exp_series, jet_from_json, jet_to_json

N = 2


def e(mode, p=0, q=0, value=1, P=2, E=0):
    return TrigJet.from_entries(N, [(mode, p, q, value)], P, E)


def test_product_is_convolution():
    prod = e((1, 0)) * e((0, -1), p=1)
    assert prod.entries() == [((1, -1), 1, 0, cq(1))]
    assert (e((1, 0), p=2) * e((0, 1), p=1)).is_zero()  # beyond rho^2


def test_truncation_orders_combine():
    a = e((1, 0), P=3)
    b = e((0, 1), P=1)
    assert (a + b).P == 1 and (a * b).P == 1
    assert e((0, 0), p=1).d_rho().P == 1
    assert e((0, 0)).times_rho().P == 3


def test_calculus():
    assert e((2, 1)).d_x(0) == e((2, 1), value=(0, 2))
    assert e((2, 1)).flat_laplacian_x() == e((2, 1), value=-5)
    assert e((0, 0), p=2, value=3).d_rho() == e((0, 0), p=1, value=6, P=1)


def test_coefficient_beyond_order_raises():
    with pytest.raises(TruncationError):
        e((0, 0), P=1).coefficient((0, 0), p=2)
    with pytest.raises(TruncationError):
        TrigJet.zero(N, -1).restrict()


def test_hermitian_and_conj():
    real = TrigJet.from_entries(N, [((1, 0), 0, 0, (1, 2)), ((-1, 0), 0, 0, (1, -2))], 0)
    assert real.is_hermitian()
    assert real.conj() == real
    assert not e((1, 0), value=(1, 2)).is_hermitian()


def test_exp_series_nilpotent():
    x = e((1, 0), q=1, P=0, E=2)
    out = exp_series(x, 2)
    assert out == TrigJet.from_entries(N, [((0, 0), 0, 0, 1), ((1, 0), 0, 1, 2), ((2, 0), 0, 2, 2)], 0, 2)
    with pytest.raises(ValueError):
        exp_series(e((0, 0)))


def test_json_round_trip():
    jet = TrigJet.from_entries(N, [((1, -1), 1, 0, (Fraction(1, 3), Fraction(-2, 7))), ((0, 0), 0, 1, 5)], 2, 1)
    items = jet_to_json(jet)
    assert all(isinstance(item["re"], str) for item in items)
    assert jet_from_json(N, items, 2, 1) == jet


def test_zero_mode():
    jet = TrigJet.from_entries(N, [((0, 0), 0, 0, 3), ((0, 0), 0, 1, (0, 1)), ((1, 0), 0, 0, 9)], 0, 1)
    assert jet.zero_mode() == [cq(3), cq(0, 1)]
