"""Bundled regression suites run by ``rtc verify-all``.

``paper`` holds worked values with known closed-form answers; ``properties``
samples random finite theories and checks the currency theorems on them.
Each case returns a :class:`Case`.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Any, Callable

import numpy as np

from . import crafted
from .core import Monotone, Truth, is_complete_family, is_monotone
from .currency import random_theory, synthesize_currency
from .locc import Bell, SchmidtVector, bell_currency
from .thermal import BlockDiagState, Ladder, Wallet, gibbs, work_currency
from .unital import (
    DensityMatrix,
    QuantumSpec,
    UnitalTheory,
    alt_currencies,
    cost_unital,
    stage1_currency,
    yield_unital,
)

__all__ = ["Case", "SUITES", "run_suite"]


@dataclass
class Case:
    name: str
    expected: Any
    value: Any
    ok: bool


def _two_basis_states(d: int = 2) -> QuantumSpec:
    return QuantumSpec.finite([DensityMatrix.basis(d, 0), DensityMatrix.basis(d, 1)])


def qubit_values() -> Case:
    vals = sorted(set(stage1_currency(2).values), reverse=True)
    return Case("unital.stage1.qubit-values", [1.0, 0.0], vals, vals == [1.0, 0.0])


def qubit_currency_axioms() -> Case:
    C = stage1_currency(2)
    got = [C.check_order().passed, C.check_value().passed, C.check_universality().passed]
    return Case("unital.stage1.axioms", [True] * 3, got, got == [True] * 3)


def two_states_cost() -> Case:
    c = cost_unital(_two_basis_states())
    return Case("unital.cost.two-basis-states", 1.0, c, c == 1.0)


def two_states_yield() -> Case:
    y = yield_unital(_two_basis_states())
    return Case("unital.yield.two-basis-states", 0.0, y, y == 0.0)


def two_states_not_tight() -> Case:
    V = _two_basis_states()
    C = stage1_currency(2, targets=[V])
    tight = C.tight_set()
    ok = V not in tight and all(e in tight for e in C.elements)
    return Case("unital.tight.flat-states", True, ok, ok)


def ball_yield_zero() -> Case:
    ys = [yield_unital(QuantumSpec.ball(DensityMatrix.diag([0.9, 0.1]), e)) for e in (0.01, 0.2, 0.5)]
    return Case("unital.yield.ball", [0.0] * 3, ys, ys == [0.0] * 3)


def hull_equivalent() -> Case:
    _, _, rep = alt_currencies(4)
    ok = all(rep["equivalent"].values())
    return Case("unital.alt.hull-equivalent", True, rep["equivalent"], ok)


def flat_not_to_basis_set() -> Case:
    _, _, rep = alt_currencies(2)
    ce = rep["counterexample"]
    ok = ce["reaches"] is False and ce["cost_sets"] == 1.0 and ce["cost_flat"] == 0.0
    return Case("unital.alt.counterexample", {"reaches": False, "costs": [0.0, 1.0]}, ce, ok)


def thermal_top_reaches_all() -> Case:
    E = [0.0, 1.0]
    rng = np.random.default_rng(3)
    states = [BlockDiagState.pure(0, E), BlockDiagState.pure(1, E), gibbs(E, 1.0)]
    states += [BlockDiagState(p, E) for p in rng.dirichlet([1, 1], size=12)]
    C = work_currency(Ladder(4, 1.0, 1.0), E, states)
    top = Wallet(3)
    ok = all(C.reach(top, V) is Truth.TRUE for V in C.target)
    return Case("thermal.work.top-reaches-all", True, ok, ok)


def bell_order() -> Case:
    C = bell_currency(4)
    r = C.reach(Bell(3), Bell(2))
    return Case("locc.bell.order", True, r.to_json(), r is Truth.TRUE)


def bell_axioms() -> Case:
    targets = [SchmidtVector([0.5, 0.25, 0.25]), SchmidtVector([1.0]), SchmidtVector([0.4, 0.3, 0.2, 0.1])]
    C = bell_currency(4, targets)
    got = [
        C.check_order().passed,
        C.check_value().passed,
        C.check_universality().passed,
        C.check_independence().passed,
    ]
    return Case("locc.bell.axioms", [True] * 4, got, got == [True] * 4)


def fair_balance_constant() -> Case:
    C = crafted.fair_wallet()
    V, W = C.target[1], C.target[2]
    window = C.balance_window(V, W)
    bals = {C.balance(V, W, c) for c in window}
    ok = len(bals) == 1 and C.check_fairness()[0] == "fair"
    return Case("abstract.fair.balance-constant", 1, len(bals), ok)


def fair_balance_cost_yield() -> Case:
    r = crafted.fair_wallet().check_balance_cost_yield()
    return Case("abstract.fair.balance-cost-yield", True, r.passed, r.passed is True)


def cost_yield_monotone() -> Case:
    C = crafted.fair_wallet()
    r = C.check_conversion_theorem()
    return Case("abstract.conversion-theorem", True, r.passed, r.passed is True)


def cost_yield_are_monotones() -> Case:
    C = crafted.fair_wallet()
    got = [
        is_monotone(Monotone("cost", C.cost), C.theory, C.target).passed,
        is_monotone(Monotone("yield", C.yield_), C.theory, C.target).passed,
    ]
    return Case("abstract.monotones", [True, True], got, got == [True, True])


def tight_family_complete() -> Case:
    C = stage1_currency(3, targets=[QuantumSpec.finite([DensityMatrix.diag([0.5, 0.5, 0.0])])])
    tight = C.tight_set()
    r = is_complete_family([Monotone("cost", C.cost), Monotone("yield", C.yield_)], C.theory, tight)
    return Case("unital.tight.complete-family", True, r.passed, r.passed is True)


WORKED: list[Callable[[], Case]] = [
    qubit_values,
    qubit_currency_axioms,
    two_states_cost,
    two_states_yield,
    two_states_not_tight,
    ball_yield_zero,
    hull_equivalent,
    flat_not_to_basis_set,
    thermal_top_reaches_all,
    bell_order,
    bell_axioms,
    fair_balance_constant,
    fair_balance_cost_yield,
    cost_yield_monotone,
    cost_yield_are_monotones,
    tight_family_complete,
]


def _property_cases(seed: int, n: int = 20) -> list[Case]:
    rng = random.Random(seed)
    out = []
    for i in range(n):
        C = synthesize_currency(random_theory(rng), rng)
        reps = [
            C.check_order(),
            C.check_value(),
            C.check_universality(),
            C.check_conversion_theorem(),
            C.check_tight_order(),
            C.check_value_operational(independent=False),
        ]
        failed = [r.check for r in reps if r.passed is not True]
        out.append(Case(f"abstract.random[{i}]", [], failed, not failed))
    return out


SUITES = ("paper", "properties")


def run_suite(name: str, seed: int = 0) -> list[Case]:
    if name == "paper":
        return [case() for case in WORKED]
    if name == "properties":
        return _property_cases(seed)
    raise ValueError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
