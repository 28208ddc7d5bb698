import json
import random
from fractions import Fraction
from itertools import product

import pytest

from rtcurrency import crafted
from rtcurrency.core import FiniteTheory, IndeterminateError, Monotone, Transformation, is_monotone
from rtcurrency.currency import (
    UNAFFORDABLE,
    BalanceQuery,
    Currency,
    DomainError,
    balance,
    load_currency,
    random_theory,
    synthesize_currency,
)


def chain_theory():
    """a -> b -> c, with the corresponding three-level currency."""
    T = FiniteTheory(["a", "b", "c"], [Transformation("f", {"a": "b", "b": "c"})])
    C = Currency(T, [T.spec("a"), T.spec("b"), T.omega], [2, 1, 0], [T.omega, T.spec("a"), T.spec("b")])
    return T, C


def test_single_element_currency():
    T = FiniteTheory(["a", "b"])
    C = Currency(T, [T.omega], [0], [T.omega])
    assert C.check_order().passed
    assert C.check_value().passed
    assert C.check_universality().passed
    assert C.check_independence().passed
    assert C.check_fairness()[0] == "fair"
    assert C.cost(T.omega) == 0 and C.yield_(T.omega) == 0
    assert C.tight_set() == [T.omega]


def test_omega_must_have_value_zero():
    T = FiniteTheory(["a", "b"])
    with pytest.raises(ValueError):
        Currency(T, [T.omega], [1], [T.omega])
    with pytest.raises(ValueError):
        Currency(T, [T.spec("a")], [0], [T.omega])


def test_incomparable_elements_fail_order():
    T = FiniteTheory(["a", "b", "c"])
    C = Currency(T, [T.spec("a"), T.spec("b"), T.omega], [1, 1, 0], [T.omega])
    rep = C.check_order()
    assert rep.passed is False
    assert [["a"], ["b"]] in rep.counterexamples


def test_chain_cost_yield():
    T, C = chain_theory()
    b = T.spec("b")
    assert C.cost(b) == 1
    assert C.yield_(b) == 1
    assert C.cost(T.omega) == 0
    with pytest.raises(DomainError):
        C.cost(T.spec("c"))


def test_chain_passes_all_checks():
    _, C = chain_theory()
    for rep in (C.check_order(), C.check_value(), C.check_universality(), C.check_conversion_theorem(),
                C.check_value_operational(), C.check_tight_order()):
        assert rep.passed is True, rep.to_dict()


def test_swapped_values_fail_value_check():
    T, C = chain_theory()
    bad = C.with_values([1, 2, 0])
    assert bad.check_value().passed is False
    assert bad.check_conversion_theorem().passed is False
    assert bad.check_value_operational().passed is False


def test_unreachable_target_fails_universality():
    T = FiniteTheory(["a", "b", "c"], [Transformation("f", {"a": "b"})])
    C = Currency(T, [T.spec("a"), T.omega], [1, 0], [T.omega, T.spec("c")])
    rep = C.check_universality()
    assert rep.passed is False
    assert C.cost(T.spec("c")) == float("inf")


def test_disjoint_singletons_fail_independence():
    T = FiniteTheory(["a", "b"], [Transformation("f", {"b": "a"})])
    C = Currency(T, [T.spec("a"), T.omega], [1, 0], [T.omega, T.spec("b")])
    rep = C.check_independence()
    assert rep.passed is False
    assert rep.counterexamples[0]["rule"] == "compatible"


def test_unknown_reachability_propagates():
    labels = list(range(6))
    T = FiniteTheory(labels, [Transformation("s", {i: i + 1 for i in range(5)})], budget=2)
    C = Currency(T, [T.spec(0), T.omega], [1, 0], [T.omega, T.spec(5)])
    with pytest.raises(IndeterminateError):
        C.cost(T.spec(5))
    assert C.check_universality().passed is None


def test_thresholds():
    C = crafted.fair_wallet()
    th = C.thresholds()
    assert th.c_min == 0 and th.c_sat == Fraction(1, 2) and th.c_sup == 2


# --------------------------------------------------------------------------
# balance


def brute_balance(C, V, W, K):
    """Enumerate the closure of V ∩ K directly and read off the best final wallet."""
    T = C.theory
    start = V & K
    images, complete = T.images(start)
    assert complete
    best = None
    for img in images:
        for Kp, vp in zip(C.elements, C.values):
            end = W & Kp
            if end is not None and img <= end:
                g = vp - C.value(K)
                best = g if best is None else max(best, g)
    return UNAFFORDABLE if best is None else best


def test_balance_matches_brute_force_on_small_wallet():
    C = crafted.fair_wallet(N=1)
    assert len(C.theory.space) == 4
    for V, W in product(C.target, repeat=2):
        for K in C.elements:
            assert C.balance(V, W, K) == brute_balance(C, V, W, K)


def test_balance_with_identity_is_non_negative():
    C = crafted.fair_wallet()
    for V in C.target:
        for K in C.elements:
            assert C.balance(V, V, K) >= 0


def test_balance_unaffordable_and_final_wallet():
    C = crafted.fair_wallet()
    Va, Vb = C.target[1], C.target[2]
    c0 = C.elements[1]
    assert C.balance(Vb, Va, c0) is UNAFFORDABLE
    assert C.balance(Vb, Va, C.elements[2]) == Fraction(-1, 2)
    # conditioned on the final wallet
    assert C.balance(Va, Vb, C.elements[2], final=True) == Fraction(1, 2)
    assert balance(C, BalanceQuery(Va, Vb, c0)) == Fraction(1, 2)


def test_fair_wallet_balance_constant_in_window():
    C = crafted.fair_wallet(N=5)
    for V, W in product(C.target, repeat=2):
        window = C.balance_window(V, W)
        values = {C.balance(V, W, K) for K in window}
        assert len(values) <= 1
        if window:
            assert values == {C.unique_balance(V, W)}


def test_fair_wallet_properties():
    C = crafted.fair_wallet()
    cls, rep = C.check_fairness()
    assert cls == "fair"
    assert rep.details["balance_monotonicity_violations"] == []
    for r in (C.check_order(), C.check_value(), C.check_universality(), C.check_independence(),
              C.check_balance_bounds(), C.check_balance_cost_yield(), C.check_value_operational()):
        assert r.passed is True, r.to_dict()
    assert len(C.tight_set()) == len(C.target)
    assert C.detect_pathology() == []


def top_only_theory(N=3):
    """The target swap p -> q is free, but only with a full wallet."""
    tokens = ["p", "q"]
    labels = [crafted.label(w, t) for w in range(N + 1) for t in tokens]
    swap = Transformation("swap", {crafted.label(N, "p"): crafted.label(N, "q")})
    caps = [Transformation(f"cap{k}", {crafted.label(w, t): crafted.label(min(w, k), t) for w in range(N + 1) for t in tokens}) for k in range(N)]
    T = FiniteTheory(labels, [swap] + caps)
    elements = [T.omega] + [crafted.wallet_spec(N, w, tokens) for w in range(N + 1)]
    return Currency(T, elements, [0] + list(range(N + 1)), [T.omega, crafted.target_spec(N, "p"), crafted.target_spec(N, "q")])


def test_top_only_transformation_is_good_for_rich():
    C = top_only_theory()
    cls, rep = C.check_fairness()
    assert cls == "good-for-rich"
    assert all(e["direction"] == "poor" for e in rep.counterexamples)
    assert rep.details["balance_monotonicity_violations"] == []


def test_money_pump_is_pathological():
    C = crafted.money_pump()
    assert C.check_value().passed is False
    found = C.detect_pathology()
    Vp = crafted.target_spec(4, "p")
    assert any(r.resource == Vp and r.gain > 0 for r in found)
    assert {r.classification for r in found} == {"pathological"}


def test_midas_closure():
    C = crafted.midas_closure()
    assert C.check_fairness()[0] == "fair"
    found = C.detect_pathology()
    Vp = crafted.target_spec(4, "p")
    hits = [r for r in found if r.resource == Vp]
    assert hits and all(r.classification == "midas" for r in found)
    assert C.cost(Vp) == 0
    assert all(all(r.checks.values()) for r in found)


def test_renormalization_quotients_interconvertible():
    C = crafted.money_pump()
    R = C.renormalized()
    assert R.check_value().passed is True
    groups = C.equivalence_classes()
    for g in groups:
        assert len({R.values[i] for i in g}) == 1


def test_value_monotone_alone_does_not_exclude_pathology():
    # the renormalized pump has monotone values but is not fair, and still pumps
    R = crafted.money_pump().renormalized()
    assert R.check_value().passed is True
    assert R.check_fairness()[0] != "fair"
    assert R.detect_pathology()


def test_load_currency(tmp_path):
    T = FiniteTheory(["a", "b", "c"], [Transformation("f", {"a": "b", "b": "c"})])
    path = tmp_path / "c.json"
    path.write_text(json.dumps({"elements": [{"spec": ["a"], "val": 2}, {"spec": ["b"], "val": "1/2"}], "target": [["b"]]}))
    C = load_currency(T, path)
    assert C.omega in C.elements and C.omega in C.target
    assert C.cost(T.spec("b")) == Fraction(1, 2)
    with pytest.raises(ValueError):
        load_currency(T, {"elements": [{"spec": ["a"]}]})


@pytest.mark.parametrize("seed", range(10))
def test_cost_and_yield_are_monotones(seed):
    rng = random.Random(seed)
    C = synthesize_currency(random_theory(rng), rng)
    for M in (Monotone("cost", C.cost), Monotone("yield", C.yield_)):
        assert is_monotone(M, C.theory, C.target).passed
    for V in C.target:
        assert C.cost(V) >= C.yield_(V) >= 0
