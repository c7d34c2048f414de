"""JSON test-case documents for single operator evaluations.

A case looks like::

    {
      "n": 3,
      "family": "or",              # or | generalized | linear
      "k": 1,
      "ell": 1,                    # linear family only
      "wp": "-2",                  # generalized family only
      "w": "1/2",                  # optional, generalized family only
      "rho_order": 1,
      "eps_order": 0,
      "phi": [ ... ],              # optional conformal factor (eps^1 data)
      "args": [[ ... ], [ ... ]],  # one entry list per argument
      "multiplier": [ ... ]        # optional, generalized and linear families
    }

Entry lists hold ``{"mode": [..], "rho": p, "eps": q, "re": "p/q", "im": "p/q"}``.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any, Mapping

from .ambient import AmbientFn, evaluate_operator
from .metric import MetricJet, conformal_model
from .suites import make_family
from .trigjet import TrigJet, jet_from_json, jet_to_json


def _fraction(value) -> Fraction | None:
    return None if value is None else Fraction(str(value))


def load_case(text: str) -> dict:
    case = json.loads(text)
    if not isinstance(case, dict):
        raise ValueError("case file must hold a JSON object")
    for key in ("n", "family", "k", "args"):
        if key not in case:
            raise ValueError(f"case file is missing {key!r}")
    return case


def build_case(case: Mapping[str, Any]):
    """Return (family, arguments, metric) for a parsed case document."""
    n = int(case["n"])
    k = int(case["k"])
    rho_order = int(case.get("rho_order", k))
    eps_order = int(case.get("eps_order", 0))
    kind = case["family"]
    ell = case.get("ell")
    wp = _fraction(case.get("wp"))
    if kind == "linear":
        wp = Fraction(-2 * int(ell))
    multiplier = None
    if case.get("multiplier") is not None:
        multiplier = AmbientFn(wp if wp is not None else 0,
                               jet_from_json(n, case["multiplier"], rho_order, eps_order))
    family = make_family(kind, n, k, wp=wp, w=_fraction(case.get("w")),
                         ell=None if ell is None else int(ell), multiplier=multiplier)
    args = [AmbientFn(family.arg_weight, jet_from_json(n, items, rho_order, eps_order))
            for items in case["args"]]
    if case.get("phi"):
        phi = jet_from_json(n, case["phi"], 0, max(eps_order, 1))
        g = conformal_model(phi, rho_order, eps_order)
    else:
        g = MetricJet.flat_torus(n, eps_order)
    return family, args, g


def evaluate_case(case: Mapping[str, Any]) -> TrigJet:
    family, args, g = build_case(case)
    return evaluate_operator(family, args, g)


def case_to_json(n: int, family: str, k: int, args, rho_order: int, eps_order: int = 0, **extra) -> str:
    """Serialise a case; ``args`` are TrigJets, ``extra`` may hold ell, wp, w, phi, multiplier."""
    doc: dict = {"n": n, "family": family, "k": k, "rho_order": rho_order, "eps_order": eps_order,
                 "args": [jet_to_json(a) for a in args]}
    for key, value in extra.items():
        if value is None:
            continue
        doc[key] = jet_to_json(value) if isinstance(value, TrigJet) else (
            str(value) if isinstance(value, Fraction) else value)
    return json.dumps(doc, indent=2, sort_keys=True)
