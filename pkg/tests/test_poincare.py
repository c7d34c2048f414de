import random
from fractions import Fraction

import pytest

from ambientop.poincare import (
    BiPoly,
    UniPoly,
    build_P,
    expand_Df_sides,
    quadratic_root,
    sample_points,
    shift_expansion,
    verify_composition,
    verify_expand_Df,
    verify_reindex,
    verify_shift_expansion,
)
from ambientop.ratfunc import R, n, w


def test_build_P_examples():
    assert build_P(0, w) == UniPoly([1])
    assert build_P(1, w) == UniPoly([-w * (n + w), 1])
    assert build_P(2, w) == UniPoly([-w * (n + w), 1]) * UniPoly([-(w - 2) * (n + w - 2), 1])


@pytest.mark.parametrize("j", range(0, 7))
def test_build_P_monic_with_quoted_roots(j):
    p = build_P(j, w)
    assert p.degree == j
    assert p.coeffs[-1] == 1
    for i in range(j):
        # evaluate at each root by Horner
        root = quadratic_root(i, w)
        acc = R(0)
        for c in reversed(p.coeffs):
            acc = acc * root + c
        assert acc == 0


def test_reindex_all():
    for k in range(7):
        for j in range(k + 1):
            assert verify_reindex(k, j).passed
    assert verify_reindex(6, 0, w=Fraction(-2), n=Fraction(7)).passed


def test_shift_examples():
    assert verify_shift_expansion(0).passed
    lhs = build_P(1, w - 2)
    assert lhs == build_P(1, w) + UniPoly([4 * (n / 2 + w - 1)])
    assert shift_expansion(1, w) == lhs
    for j in range(7):
        assert verify_shift_expansion(j).passed


def test_composition():
    for total in range(7):
        for i in range(total + 1):
            assert verify_composition(i, total - i).passed


def test_expand_df_k1_by_hand():
    left, right = expand_Df_sides(1)
    c00 = 4 * (n / 2 + w - 1) ** 2
    c10 = n / 2 + w - 1
    expected = (BiPoly.outer(UniPoly([1]), UniPoly([1]), c00)
                + BiPoly.outer(build_P(1, w), UniPoly([1]), c10)
                + BiPoly.outer(UniPoly([1]), build_P(1, w), c10))
    assert right == expected
    assert left == right


@pytest.mark.parametrize("k", range(0, 5))
def test_expand_df_symbolic(k):
    assert verify_expand_Df(k).passed


def test_expand_df_sampled_k6():
    for nv, wv in sample_points(10, seed=11):
        assert verify_expand_Df(6, nv, wv).passed


def test_controls():
    assert not verify_reindex(3, 1, perturb={"root:0": 1}).passed
    assert not verify_shift_expansion(2, perturb={"shift:1": 1}).passed
    assert not verify_composition(1, 1, perturb={"root:0": 1}).passed
    assert not verify_expand_Df(2, perturb={"c:1,0": 1}).passed
    assert not verify_expand_Df(2, perturb={"a:1": 1}).passed


def test_sample_points_deterministic():
    assert sample_points(5, 3) == sample_points(5, 3)
