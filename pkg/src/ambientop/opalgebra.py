"""Noncommutative operator words in Delta, F and Q with weight-tracked T.

Words are tuples over the letters ``"D"`` (ambient Laplacian, weight -2),
``"F"`` (multiplication by a fixed function of weight wp) and ``"Q"``
(multiplication by |T|^2, weight +2), read as compositions: the rightmost
letter acts first.  The Euler operator T never appears; wherever the
commutation rule produces it, it is replaced by the weight of its operand.

The only relations are

    D Q = Q D + 2 (2T + n + 2)          F Q = Q F

and the canonical form moves every Q to the left.  Each step lowers the
number of (D or F, Q) inversions, so rewriting terminates.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping

from .coefficients import ParamSpec, Perturb, tangential_coefficient
from .ratfunc import R, RatFunc, is_zero, n as n_sym, render, w as w_sym, wp as wp_sym
from .report import Report

LETTERS = ("D", "F", "Q")


def weight_shift(letter: str, wp):
    if letter == "D":
        return -2
    if letter == "Q":
        return 2
    if letter == "F":
        return wp
    raise ValueError(f"unknown generator {letter!r}")


class OpPoly:
    """Finite linear combination of words acting on functions of one weight."""

    __slots__ = ("terms", "input_weight", "n", "wp")

    def __init__(self, terms: Mapping[tuple, object], input_weight=w_sym, n=n_sym, wp=wp_sym):
        self.terms = {tuple(word): c for word, c in terms.items() if not is_zero(c)}
        self.input_weight = input_weight
        self.n = n
        self.wp = wp

    def _like(self, terms, input_weight=None) -> OpPoly:
        return OpPoly(terms, self.input_weight if input_weight is None else input_weight, self.n, self.wp)

    @classmethod
    def word(cls, word, coeff=1, **ctx) -> OpPoly:
        return cls({tuple(word): coeff}, **ctx)

    def operand_weight(self, word: tuple, position: int):
        """Weight of the function that the letter at ``position`` acts on."""
        weight = self.input_weight
        for letter in word[position + 1:]:
            weight = weight + weight_shift(letter, self.wp)
        return weight

    def total_shift(self, word: tuple):
        shift = 0
        for letter in word:
            shift = shift + weight_shift(letter, self.wp)
        return shift

    def __add__(self, other: OpPoly) -> OpPoly:
        out = dict(self.terms)
        for word, c in other.terms.items():
            out[word] = out[word] + c if word in out else c
        return self._like(out)

    def __neg__(self) -> OpPoly:
        return self._like({word: -c for word, c in self.terms.items()})

    def __sub__(self, other: OpPoly) -> OpPoly:
        return self + (-other)

    def scale(self, c) -> OpPoly:
        return self._like({word: c * v for word, v in self.terms.items()})

    def __rmul__(self, c) -> OpPoly:
        return self.scale(c)

    def compose(self, other: OpPoly) -> OpPoly:
        """``self`` applied after ``other``; the input weight is other's."""
        out: dict = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                word = w1 + w2
                c = c1 * c2
                out[word] = out[word] + c if word in out else c
        return OpPoly(out, other.input_weight, self.n, self.wp)

    def is_zero(self) -> bool:
        return not self.terms

    def is_canonical(self) -> bool:
        for word in self.terms:
            seen_other = False
            for letter in word:
                if letter == "Q" and seen_other:
                    return False
                if letter != "Q":
                    seen_other = True
        return True

    def q_free_part(self) -> OpPoly:
        return self._like({word: c for word, c in self.terms.items() if "Q" not in word})

    def evaluate(self, **values) -> OpPoly:
        """Substitute numbers for n, w, wp in coefficients and weights."""
        from .ratfunc import substitute

        return OpPoly(
            {word: substitute(c, **values) for word, c in self.terms.items()},
            substitute(self.input_weight, **values),
            substitute(self.n, **values),
            substitute(self.wp, **values),
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, OpPoly):
            return NotImplemented
        diff = self - other
        return all(is_zero(RatFunc.coerce(c)) for c in diff.terms.values())

    def __repr__(self):
        return f"OpPoly({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for word in sorted(self.terms, key=lambda wd: (len(wd), wd)):
            parts.append(f"({render(self.terms[word])})*{''.join(word) or 'Id'}")
        return " + ".join(parts)


def normal_order(e: OpPoly) -> OpPoly:
    """Rewrite to the canonical form with every Q leftmost and no T."""
    out: dict = {}
    stack = list(e.terms.items())
    while stack:
        word, c = stack.pop()
        for i in range(len(word) - 1):
            if word[i + 1] == "Q" and word[i] != "Q":
                break
        else:
            out[word] = out[word] + c if word in out else c
            continue
        swapped = word[:i] + ("Q", word[i]) + word[i + 2:]
        stack.append((swapped, c))
        if word[i] == "D":
            # [D, Q] g = 2 (2 W + n + 2) g with W the weight of g
            weight = e.operand_weight(word, i + 1)
            stack.append((word[:i] + word[i + 2:], c * (4 * weight + 2 * e.n + 4)))
    return e._like(out)


def build_generalized(p: ParamSpec, perturb: Perturb = None) -> OpPoly:
    """sum_j a_j D^{k-j} F D^j on functions of weight p.w."""
    k = p.k
    w = p.w if p.w is not None else p.poincare_weight()
    terms = {}
    for j in range(k + 1):
        terms[("D",) * (k - j) + ("F",) + ("D",) * j] = tangential_coefficient(p, j, perturb)
    return OpPoly(terms, input_weight=w, n=p.n, wp=p.wp)


def raw_commutator_with_Q(D: OpPoly) -> OpPoly:
    """D Q - Q D as unreduced words, acting on weight D.input_weight - 2."""
    terms: dict = {}
    for word, c in D.terms.items():
        terms[word + ("Q",)] = c
        terms[("Q",) + word] = -c
    return OpPoly(terms, D.input_weight - 2, D.n, D.wp)


def commutator_with_Q(D: OpPoly) -> OpPoly:
    return normal_order(raw_commutator_with_Q(D))


def verify_commutator(k: int, perturb: Perturb = None, p: ParamSpec | None = None) -> Report:
    """[D_{2k,w,f}, Q] = 0 on functions of weight w - 2."""
    p = p or ParamSpec.symbolic(k)
    rep = Report("commutator", {"k": k, **p.describe()})
    comm = commutator_with_Q(build_generalized(p, perturb))
    if comm.is_zero():
        rep.check(True, {"k": k}, 0, 0)
    words = sorted(comm.terms, key=lambda wd: ("Q" in wd, len(wd), wd))
    for word in words:
        rep.check(False, {"k": k, "word": "".join(word) or "Id", "q_free": "Q" not in word},
                  0, comm.terms[word])
    return rep
