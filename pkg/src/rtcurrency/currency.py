"""Currencies: order, value, universality, cost/yield, independence, balance, fairness.

Everything here is written against a reachability oracle (``theory.reaches``)
and a combiner for currency and target knowledge (``theory.intersect``), so the
same checks run on explicit finite theories and on the quantum
instantiations in :mod:`rtcurrency.unital`, :mod:`rtcurrency.thermal` and
:mod:`rtcurrency.locc`.

Currencies are finite, so every infimum and supremum is attained.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from pathlib import Path
from typing import Any, Iterable, Mapping, Sequence

from .core import (
    CheckReport,
    FiniteTheory,
    IndeterminateError,
    Spec,
    Theory,
    Transformation,
    Truth,
    UnsupportedRepresentation,
    _read_json,
)

__all__ = [
    "Currency",
    "Thresholds",
    "BalanceQuery",
    "PathologyReport",
    "DomainError",
    "UNAFFORDABLE",
    "FAIRNESS_CLASSES",
    "check_order",
    "check_value",
    "check_universality",
    "cost",
    "yield_",
    "check_conversion_theorem",
    "tight_set",
    "check_tight_order",
    "check_independence",
    "balance",
    "unique_balance",
    "check_fairness",
    "check_balance_bounds",
    "check_balance_cost_yield",
    "detect_pathology",
    "check_value_operational",
    "renormalized",
    "load_currency",
    "random_theory",
    "synthesize_currency",
]

TOL = 1e-12

FAIRNESS_CLASSES = ("fair", "good-for-rich", "good-for-poor", "neither")


class DomainError(ValueError):
    """The specification is not in the currency's target."""


class _Unaffordable:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "UNAFFORDABLE"

    def __bool__(self) -> bool:
        return False

    def __reduce__(self):
        return (_Unaffordable, ())


#: Result of :func:`balance` when no final wallet admits the transformation.
UNAFFORDABLE = _Unaffordable()


@dataclass(frozen=True)
class Thresholds:
    c_min: float
    c_sat: float
    c_sup: float


@dataclass(frozen=True)
class BalanceQuery:
    source: Any
    dest: Any
    wallet: Any


@dataclass
class PathologyReport:
    resource: Any
    wallet: Any
    gain: float
    classification: str
    checks: dict = field(default_factory=dict)

    def to_dict(self, theory: Theory) -> dict:
        return {
            "resource": theory.describe(self.resource),
            "wallet": theory.describe(self.wallet),
            "gain": self.gain,
            "classification": self.classification,
            "checks": self.checks,
        }


def _ge(a, b) -> bool:
    return a >= b - TOL


def _eq(a, b) -> bool:
    return abs(a - b) <= TOL


class Currency:
    """An ordered family of specifications with a value function and a target.

    Nothing is assumed about order, value monotonicity or universality; they
    are checked by the ``check_*`` methods. ``Val(Ω) = 0`` is required.
    """

    def __init__(
        self,
        theory: Theory,
        elements: Sequence,
        values: Sequence[float],
        target: Sequence,
        name: str = "currency",
    ):
        if len(elements) != len(values):
            raise ValueError("one value per currency element")
        if not elements:
            raise ValueError("a currency has at least one element")
        self.theory = theory
        self.elements = list(elements)
        self.values = list(values)
        self.target = list(target)
        self.name = name
        omega = theory.omega
        if omega not in self.elements:
            raise ValueError("Ω must be a currency element")
        for v in self.values:
            if v < 0:
                raise ValueError("currency values are non-negative")
        if not _eq(self.values[self.elements.index(omega)], 0):
            raise ValueError("Val(Ω) must be 0")
        self._reach: dict = {}
        self._meet: dict = {}

    # ------------------------------------------------------------------
    # helpers

    @property
    def omega(self):
        return self.theory.omega

    def __len__(self) -> int:
        return len(self.elements)

    def __repr__(self) -> str:
        return f"Currency({self.name!r}, {len(self.elements)} elements, {len(self.target)} targets)"

    def reach(self, a, b) -> Truth:
        key = (a, b)
        r = self._reach.get(key)
        if r is None:
            r = self.theory.reaches(a, b)
            self._reach[key] = r
        return r

    def meet(self, a, b):
        key = (a, b)
        if key not in self._meet:
            self._meet[key] = self.theory.intersect(a, b)
        return self._meet[key]

    def value(self, element) -> float:
        return self.values[self.elements.index(element)]

    def d(self, spec) -> Any:
        return self.theory.describe(spec)

    def thresholds(self) -> Thresholds:
        sat = max((self.cost(v) for v in self.target), default=0)
        return Thresholds(0, sat, max(self.values))

    @property
    def c_sup(self):
        return max(self.values)

    def _require_target(self, V) -> None:
        if V not in self.target:
            raise DomainError(f"{self.d(V)} is not in the target")

    def equivalence_classes(self) -> list[list[int]]:
        """Indices of mutually interconvertible elements (decided pairs only)."""
        n = len(self.elements)
        parent = list(range(n))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for i in range(n):
            for j in range(i + 1, n):
                if (
                    self.reach(self.elements[i], self.elements[j]) is Truth.TRUE
                    and self.reach(self.elements[j], self.elements[i]) is Truth.TRUE
                ):
                    parent[find(i)] = find(j)
        groups: dict[int, list[int]] = {}
        for i in range(n):
            groups.setdefault(find(i), []).append(i)
        return sorted(groups.values())

    # ------------------------------------------------------------------
    # Stage I

    def check_order(self) -> CheckReport:
        rep = CheckReport("order")
        if self.omega not in self.elements:
            rep.counterexamples.append({"missing": "Ω"})
        els = self.elements
        for i in range(len(els)):
            for j in range(i + 1, len(els)):
                r = self.reach(els[i], els[j]) | self.reach(els[j], els[i])
                if r is Truth.FALSE:
                    rep.counterexamples.append([self.d(els[i]), self.d(els[j])])
                elif r is Truth.UNKNOWN:
                    rep.indeterminate.append([self.d(els[i]), self.d(els[j])])
        rep.details["classes"] = len(self.equivalence_classes())
        return rep

    def check_value(self) -> CheckReport:
        """``Val(C') >= Val(C)  <=>  C' -> C`` on every ordered pair."""
        rep = CheckReport("value")
        els, vals = self.elements, self.values
        for i, j in product(range(len(els)), repeat=2):
            if i == j:
                continue
            r = self.reach(els[i], els[j])
            if r is Truth.UNKNOWN:
                rep.indeterminate.append([self.d(els[i]), self.d(els[j])])
            elif bool(r) != _ge(vals[i], vals[j]):
                rep.counterexamples.append(
                    {
                        "from": self.d(els[i]),
                        "to": self.d(els[j]),
                        "values": [vals[i], vals[j]],
                        "reaches": bool(r),
                    }
                )
        return rep

    def check_universality(self) -> CheckReport:
        rep = CheckReport("universality")
        if self.omega not in self.target:
            rep.counterexamples.append({"missing": "Ω in target"})
        for V in self.target:
            into = Truth.FALSE
            out = Truth.FALSE
            for c in self.elements:
                into = into | self.reach(c, V)
                out = out | self.reach(V, c)
            for direction, r in (("buy", into), ("sell", out)):
                if r is Truth.FALSE:
                    rep.counterexamples.append({"target": self.d(V), "missing": direction})
                elif r is Truth.UNKNOWN:
                    rep.indeterminate.append({"target": self.d(V), "undecided": direction})
        return rep

    def cost(self, V) -> float:
        """Least value of a currency element that reaches ``V`` (``inf`` if none)."""
        self._require_target(V)
        best = math.inf
        pending = []
        for c, val in zip(self.elements, self.values):
            r = self.reach(c, V)
            if r is Truth.TRUE:
                best = min(best, val)
            elif r is Truth.UNKNOWN:
                pending.append(val)
        if any(p < best - TOL for p in pending):
            raise IndeterminateError(f"cost of {self.d(V)} depends on undecided reachability")
        return best

    def yield_(self, V) -> float:
        """Largest value of a currency element that ``V`` reaches."""
        self._require_target(V)
        best = -math.inf
        pending = []
        for c, val in zip(self.elements, self.values):
            r = self.reach(V, c)
            if r is Truth.TRUE:
                best = max(best, val)
            elif r is Truth.UNKNOWN:
                pending.append(val)
        if any(p > best + TOL for p in pending):
            raise IndeterminateError(f"yield of {self.d(V)} depends on undecided reachability")
        return best

    def _cost_yield_table(self, rep: CheckReport) -> dict:
        table = {}
        for V in self.target:
            try:
                table[V] = (self.cost(V), self.yield_(V))
            except IndeterminateError:
                rep.indeterminate.append({"target": self.d(V), "undecided": "cost/yield"})
        return table

    def check_conversion_theorem(self) -> CheckReport:
        """Sufficient condition, monotonicity of cost and yield, and cost >= yield."""
        rep = CheckReport("conversion-theorem")
        table = self._cost_yield_table(rep)
        for V, (cv, yv) in table.items():
            if not _ge(cv, yv):
                rep.counterexamples.append({"rule": "cost>=yield", "target": self.d(V), "cost": cv, "yield": yv})
        for V, W in product(table, repeat=2):
            cv, yv = table[V]
            cw, yw = table[W]
            r = self.reach(V, W)
            if yv > cw + TOL and r is not Truth.TRUE:
                entry = {"rule": "yield>cost=>reach", "from": self.d(V), "to": self.d(W)}
                (rep.indeterminate if r is Truth.UNKNOWN else rep.counterexamples).append(entry)
            if r is Truth.TRUE and not (_ge(cv, cw) and _ge(yv, yw)):
                rep.counterexamples.append(
                    {"rule": "monotone", "from": self.d(V), "to": self.d(W), "cost": [cv, cw], "yield": [yv, yw]}
                )
        return rep

    def tight_set(self) -> list:
        """Targets with ``Cost = Yield`` (finite, hence attained)."""
        out = []
        for V in self.target:
            try:
                c, y = self.cost(V), self.yield_(V)
            except IndeterminateError:
                continue
            if math.isfinite(c) and _eq(c, y):
                out.append(V)
        return out

    def check_tight_order(self) -> CheckReport:
        """On the tight set, ``V -> W  <=>  Cost(V) >= Cost(W)``."""
        rep = CheckReport("tight-order")
        tight = self.tight_set()
        costs = {V: self.cost(V) for V in tight}
        for V, W in product(tight, repeat=2):
            r = self.reach(V, W)
            if r is Truth.UNKNOWN:
                rep.indeterminate.append([self.d(V), self.d(W)])
            elif bool(r) != _ge(costs[V], costs[W]):
                rep.counterexamples.append({"from": self.d(V), "to": self.d(W), "costs": [costs[V], costs[W]]})
        rep.details["size"] = len(tight)
        return rep

    def check_value_operational(self, independent: bool | None = None) -> CheckReport:
        """Higher-valued elements do everything lower-valued ones do.

        With ``independent`` (default: whenever the currency passes
        :meth:`check_independence`) the intersected form over triples of
        elements is checked as well.
        """
        rep = CheckReport("value-operational")
        els, vals = self.elements, self.values
        n = len(els)
        for i, j in product(range(n), repeat=2):
            if not _ge(vals[i], vals[j]):
                continue
            C, Cp = els[i], els[j]
            for A in self.target:
                self._implication(rep, self.reach(Cp, A), self.reach(C, A), ["buy", self.d(C), self.d(Cp), self.d(A)])
                self._implication(rep, self.reach(A, C), self.reach(A, Cp), ["sell", self.d(C), self.d(Cp), self.d(A)])
        if independent is None:
            try:
                independent = self.check_independence().passed is True
            except UnsupportedRepresentation:
                independent = False
        if independent:
            # Val(C') >= Val(C):  V∩C -> W∩C''  =>  V∩C' -> W∩C''
            #                    V∩C'' -> W∩C'  =>  V∩C'' -> W∩C
            for i, j in product(range(n), repeat=2):
                if not _ge(vals[j], vals[i]):
                    continue
                C, Cp = els[i], els[j]
                for k in range(n):
                    Cpp = els[k]
                    for V, W in product(self.target, repeat=2):
                        a = self.meet(V, C)
                        b = self.meet(W, Cpp)
                        c = self.meet(V, Cp)
                        if a is not None and b is not None and c is not None:
                            self._implication(
                                rep, self.reach(a, b), self.reach(c, b),
                                ["independent-start"] + [self.d(x) for x in (V, W, C, Cp, Cpp)],
                            )
                        a = self.meet(V, Cpp)
                        b = self.meet(W, Cp)
                        c = self.meet(W, C)
                        if a is not None and b is not None and c is not None:
                            self._implication(
                                rep, self.reach(a, b), self.reach(a, c),
                                ["independent-end"] + [self.d(x) for x in (V, W, C, Cp, Cpp)],
                            )
        return rep

    @staticmethod
    def _implication(rep: CheckReport, premise: Truth, conclusion: Truth, witness) -> None:
        if premise is Truth.FALSE or conclusion is Truth.TRUE:
            return
        if premise is Truth.TRUE and conclusion is Truth.FALSE:
            rep.counterexamples.append(witness)
        else:
            rep.indeterminate.append(witness)

    # ------------------------------------------------------------------
    # Stage II

    def check_independence(self, symmetric: bool = False) -> CheckReport:
        """Compatibility (``C ∩ V ≠ ∅``) and non-disturbance of the target.

        ``symmetric`` adds ``A -> B  =>  A∩C -> B∩C``.
        """
        rep = CheckReport("independence")
        for C in self.elements:
            for V in self.target:
                if self.meet(V, C) is None:
                    rep.counterexamples.append({"rule": "compatible", "element": self.d(C), "target": self.d(V)})
        for C, Cp in product(self.elements, repeat=2):
            r = self.reach(C, Cp)
            if r is Truth.FALSE:
                continue
            for V in self.target:
                a, b = self.meet(V, C), self.meet(V, Cp)
                if a is None or b is None:
                    continue
                self._implication(rep, r, self.reach(a, b), {"rule": "non-disturbance", "from": self.d(C), "to": self.d(Cp), "target": self.d(V)})
        if symmetric:
            for A, B in product(self.target, repeat=2):
                r = self.reach(A, B)
                if r is Truth.FALSE:
                    continue
                for C in self.elements:
                    a, b = self.meet(A, C), self.meet(B, C)
                    if a is None or b is None:
                        continue
                    self._implication(rep, r, self.reach(a, b), {"rule": "symmetric", "from": self.d(A), "to": self.d(B), "element": self.d(C)})
        return rep

    def balance(self, V, W, C, final: bool = False):
        """Best currency gain of ``V -> W`` starting from wallet ``C``.

        Returns :data:`UNAFFORDABLE` when no wallet pairing admits the
        transformation. With ``final=True`` the wallet ``C`` is the one held
        at the end instead (the starred variant).
        """
        self._require_target(V)
        self._require_target(W)
        if C not in self.elements:
            raise DomainError(f"{self.d(C)} is not a currency element")
        vc = self.value(C)
        best = None
        pending = []
        for Cp, vp in zip(self.elements, self.values):
            if final:
                a, b, gain = self.meet(V, Cp), self.meet(W, C), vc - vp
            else:
                a, b, gain = self.meet(V, C), self.meet(W, Cp), vp - vc
            if a is None or b is None:
                continue
            r = self.reach(a, b)
            if r is Truth.TRUE:
                best = gain if best is None else max(best, gain)
            elif r is Truth.UNKNOWN:
                pending.append(gain)
        if pending and (best is None or any(g > best + TOL for g in pending)):
            raise IndeterminateError(f"balance {self.d(V)}->{self.d(W)} | {self.d(C)} is undecided")
        return UNAFFORDABLE if best is None else best

    def unique_balance(self, V, W):
        """Supremum of the conditional balance over all starting wallets."""
        vals = [b for C in self.elements if (b := self.balance(V, W, C)) is not UNAFFORDABLE]
        return max(vals) if vals else UNAFFORDABLE

    def balance_window(self, V, W) -> list:
        """Wallets inside the fairness bounds of ``V -> W``: ``-B <= Val(C) < c_sup - B``."""
        B = self.unique_balance(V, W)
        if B is UNAFFORDABLE:
            return []
        sup = self.c_sup
        return [C for C, v in zip(self.elements, self.values) if _ge(v, -B) and v < sup - B - TOL]

    # ------------------------------------------------------------------
    # Stage III

    def _witnessed(self):
        """All ``(V, W, i, j)`` with ``V ∩ C_i -> W ∩ C_j``."""
        out = []
        for V, W in product(self.target, repeat=2):
            for i, j in product(range(len(self.elements)), repeat=2):
                a, b = self.meet(V, self.elements[i]), self.meet(W, self.elements[j])
                if a is None or b is None:
                    continue
                r = self.reach(a, b)
                if r is not Truth.FALSE:
                    out.append((V, W, i, j, r))
        return out

    def _exists_gap(self, V, W, k: int | None, l: int | None, delta) -> Truth:
        """Is there a partner element with gap ``delta`` given one fixed end?"""
        els, vals = self.elements, self.values
        result = Truth.FALSE
        if k is not None:
            a = self.meet(V, els[k])
            if a is None:
                return Truth.FALSE
            for m in range(len(els)):
                if _eq(vals[m] - vals[k], delta):
                    b = self.meet(W, els[m])
                    if b is not None:
                        result = result | self.reach(a, b)
        else:
            b = self.meet(W, els[l])
            if b is None:
                return Truth.FALSE
            for m in range(len(els)):
                if _eq(vals[l] - vals[m], delta):
                    a = self.meet(V, els[m])
                    if a is not None:
                        result = result | self.reach(a, b)
            return result
        return result

    def _fairness_scan(self) -> dict:
        """Violations of each fairness clause, split by direction."""
        vals = self.values
        sup = self.c_sup
        found = {"rich": [], "poor": [], "indeterminate": []}
        for V, W, i, j, r in self._witnessed():
            if r is Truth.UNKNOWN:
                found["indeterminate"].append([self.d(V), self.d(W), self.d(self.elements[i]), self.d(self.elements[j])])
                continue
            delta = vals[j] - vals[i]
            for k in range(len(self.elements)):
                # clause 1: alternative start C'_1
                if not (_ge(vals[k], -delta) and vals[k] < sup - delta - TOL):
                    continue
                t = self._exists_gap(V, W, k, None, delta)
                if t is Truth.TRUE:
                    continue
                entry = {"clause": 1, "from": self.d(V), "to": self.d(W), "witness": [vals[i], vals[j]], "alternative": vals[k]}
                if t is Truth.UNKNOWN:
                    found["indeterminate"].append(entry)
                    continue
                if vals[k] >= vals[i] - TOL:
                    found["rich"].append(entry)
                if vals[k] <= vals[i] + TOL:
                    found["poor"].append(entry)
            for l in range(len(self.elements)):
                # clause 2: alternative end C'_2 (its partner must stay below c_sup)
                if not (_ge(vals[l], delta) and vals[l] - delta <= sup + TOL):
                    continue
                t = self._exists_gap(V, W, None, l, delta)
                if t is Truth.TRUE:
                    continue
                entry = {"clause": 2, "from": self.d(V), "to": self.d(W), "witness": [vals[i], vals[j]], "alternative": vals[l]}
                if t is Truth.UNKNOWN:
                    found["indeterminate"].append(entry)
                    continue
                if vals[l] >= vals[j] - TOL:
                    found["rich"].append(entry)
                if vals[l] <= vals[j] + TOL:
                    found["poor"].append(entry)
        return found

    def check_fairness(self) -> tuple[str, CheckReport]:
        """Classify the currency as fair, good for the rich/poor only, or neither.

        The report also records violations of balance monotonicity in the
        wallet value, which must be empty for whichever direction holds.
        """
        scan = self._fairness_scan()
        rich, poor = not scan["rich"], not scan["poor"]
        if rich and poor:
            cls = "fair"
        elif rich:
            cls = "good-for-rich"
        elif poor:
            cls = "good-for-poor"
        else:
            cls = "neither"
        rep = CheckReport("fairness")
        rep.counterexamples = [dict(e, direction="rich") for e in scan["rich"]] + [
            dict(e, direction="poor") for e in scan["poor"]
        ]
        rep.indeterminate = scan["indeterminate"]
        rep.details["classification"] = cls
        rep.details["balance_monotonicity_violations"] = self._balance_monotonicity(rich, poor)
        return cls, rep

    def _balance_monotonicity(self, rich: bool, poor: bool) -> list:
        if not (rich or poor):
            return []
        out = []
        sup = self.c_sup
        els, vals = self.elements, self.values
        for V, W in product(self.target, repeat=2):
            bal = [self._try_balance(V, W, C) for C in els]
            for i, b1 in enumerate(bal):
                if b1 is None or b1 is UNAFFORDABLE:
                    continue
                for k, b2 in enumerate(bal):
                    if k == i or b2 is None:
                        continue
                    if not (_ge(vals[k], -b1) and vals[k] < sup - b1 - TOL):
                        continue
                    richer = vals[k] >= vals[i] - TOL
                    poorer = vals[k] <= vals[i] + TOL
                    if (rich and richer) or (poor and poorer):
                        if b2 is UNAFFORDABLE or b2 < b1 - TOL:
                            out.append({"from": self.d(V), "to": self.d(W), "wallets": [vals[i], vals[k]], "balances": [b1, None if b2 is UNAFFORDABLE else b2]})
        return out

    def _try_balance(self, V, W, C):
        try:
            return self.balance(V, W, C)
        except IndeterminateError:
            return None

    def check_balance_bounds(self) -> CheckReport:
        """``Balance(V->W) >= Yield(V) - Cost(W)``, with equality on tight pairs."""
        rep = CheckReport("balance-bounds")
        cls, _ = self.check_fairness()
        rep.details["fairness"] = cls
        tight = set(self.tight_set())
        table = self._cost_yield_table(rep)
        for V, W in product(table, repeat=2):
            try:
                B = self.unique_balance(V, W)
            except IndeterminateError:
                rep.indeterminate.append([self.d(V), self.d(W)])
                continue
            bound = table[V][1] - table[W][0]
            ok = B is not UNAFFORDABLE and _ge(B, bound)
            if math.isinf(bound) and bound < 0:
                ok = True
            if not ok:
                rep.counterexamples.append({"rule": "lower-bound", "from": self.d(V), "to": self.d(W), "balance": None if B is UNAFFORDABLE else B, "bound": bound})
            elif V in tight and W in tight and not _eq(B, bound):
                rep.counterexamples.append({"rule": "tight-equality", "from": self.d(V), "to": self.d(W), "balance": B, "bound": bound})
        return rep

    def check_balance_cost_yield(self) -> CheckReport:
        """``Balance(Ω -> V) = -Cost(V)`` and ``Balance(V -> Ω) = Yield(V)``."""
        rep = CheckReport("balance-cost-yield")
        table = self._cost_yield_table(rep)
        for V, (c, y) in table.items():
            try:
                into = self.unique_balance(self.omega, V)
                out = self.unique_balance(V, self.omega)
            except IndeterminateError:
                rep.indeterminate.append(self.d(V))
                continue
            if into is UNAFFORDABLE or not _eq(into, -c):
                rep.counterexamples.append({"rule": "buy", "target": self.d(V), "balance": None if into is UNAFFORDABLE else into, "cost": c})
            if out is UNAFFORDABLE or not _eq(out, y):
                rep.counterexamples.append({"rule": "sell", "target": self.d(V), "balance": None if out is UNAFFORDABLE else out, "yield": y})
        return rep

    def detect_pathology(self) -> list[PathologyReport]:
        """All ``(V, C)`` with ``Balance(V -> V | C) > 0``, classified.

        In a fair currency the resource is a Midas resource and must have zero
        cost and yield at least ``c_sup - α`` (α the smallest positive value).
        In a good-for-the-rich currency the gain must reach
        ``c_sup - Val(C) - α`` with α the gap to the next higher value.
        """
        cls, _ = self.check_fairness()
        sup = self.c_sup
        positive = sorted({v for v in self.values if v > TOL})
        reports = []
        for V in self.target:
            for C, vc in zip(self.elements, self.values):
                b = self._try_balance(V, V, C)
                if b is None or b is UNAFFORDABLE or b <= TOL:
                    continue
                checks: dict = {}
                if cls == "fair":
                    alpha = positive[0] if positive else 0
                    checks["cost_zero"] = _eq(self.cost(V), 0)
                    checks["yield_near_top"] = _ge(self.yield_(V), sup - alpha)
                    kind = "midas"
                else:
                    kind = "pathological"
                if cls in ("fair", "good-for-rich"):
                    higher = [v for v in positive if v > vc + TOL]
                    alpha = (higher[0] - vc) if higher else 0
                    checks["gain_near_top"] = _ge(b, sup - vc - alpha) and _ge(sup - vc, b)
                if cls in ("fair", "good-for-poor"):
                    checks["yield_dominates_gain"] = _ge(self.yield_(V), b)
                    checks["cost_zero"] = _eq(self.cost(V), 0)
                reports.append(PathologyReport(V, C, b, kind, checks))
        return reports

    # ------------------------------------------------------------------

    def renormalized(self) -> "Currency":
        """Identify interconvertible elements: each class takes its largest value.

        The class containing Ω is pinned to 0. The result may still violate
        value monotonicity; run :meth:`check_value` on it.
        """
        values = list(self.values)
        omega_i = self.elements.index(self.omega)
        for cls in self.equivalence_classes():
            v = 0 if omega_i in cls else max(self.values[i] for i in cls)
            for i in cls:
                values[i] = v
        return Currency(self.theory, self.elements, values, self.target, name=self.name + "/renormalized")

    def with_values(self, values: Sequence[float]) -> "Currency":
        return Currency(self.theory, self.elements, values, self.target, name=self.name)

    def to_dict(self) -> dict:
        return {
            "elements": [{"spec": self.d(e), "val": v} for e, v in zip(self.elements, self.values)],
            "target": [self.d(t) for t in self.target],
        }


# spec-facing function names
check_order = Currency.check_order
check_value = Currency.check_value
check_universality = Currency.check_universality
cost = Currency.cost
yield_ = Currency.yield_
check_conversion_theorem = Currency.check_conversion_theorem
tight_set = Currency.tight_set
check_tight_order = Currency.check_tight_order
check_independence = Currency.check_independence
unique_balance = Currency.unique_balance
check_fairness = Currency.check_fairness
check_balance_bounds = Currency.check_balance_bounds
check_balance_cost_yield = Currency.check_balance_cost_yield
detect_pathology = Currency.detect_pathology
check_value_operational = Currency.check_value_operational
renormalized = Currency.renormalized


def balance(C: Currency, q: BalanceQuery, final: bool = False):
    return C.balance(q.source, q.dest, q.wallet, final=final)


# --------------------------------------------------------------------------
# currency description files


def _parse_spec(theory: FiniteTheory, raw) -> Spec:
    if isinstance(raw, str):
        if raw.lower() in ("omega", "Ω"):
            return theory.omega
        return theory.spec(raw)
    if isinstance(raw, list) and raw:
        return theory.spec(*raw)
    raise ValueError(f"cannot read specification {raw!r}")


def load_currency(theory: FiniteTheory, source: str | Path | Mapping) -> Currency:
    """``{"elements": [{"spec": [...], "val": x}], "target": [[...], "omega"]}``.

    Ω is added to elements (value 0) and target when missing.
    """
    data = _read_json(source)
    elements, values = [], []
    for i, e in enumerate(data.get("elements", [])):
        if "spec" not in e or "val" not in e:
            raise ValueError(f"element #{i} needs 'spec' and 'val'")
        elements.append(_parse_spec(theory, e["spec"]))
        values.append(_number(e["val"]))
    if theory.omega not in elements:
        elements.append(theory.omega)
        values.append(0)
    target = [_parse_spec(theory, t) for t in data.get("target", [])]
    if theory.omega not in target:
        target.append(theory.omega)
    return Currency(theory, elements, values, target, name=str(data.get("name", "currency")))


def _number(raw):
    if isinstance(raw, str):
        return Fraction(raw)
    if isinstance(raw, bool) or not isinstance(raw, (int, float)):
        raise ValueError(f"value {raw!r} is not a number")
    return raw


# --------------------------------------------------------------------------
# random finite theories with synthesized currencies


def random_theory(rng: random.Random, max_states: int = 5, max_generators: int = 4) -> FiniteTheory:
    n = rng.randint(2, max_states)
    labels = [chr(ord("a") + i) for i in range(n)]
    gens = []
    for g in range(rng.randint(1, max_generators)):
        mapping = {}
        for s in labels:
            if rng.random() < 0.4:
                continue
            size = 1 if rng.random() < 0.8 else 2
            mapping[s] = frozenset(rng.sample(labels, size))
        gens.append(Transformation(f"g{g}", mapping))
    return FiniteTheory(labels, gens)


def synthesize_currency(
    theory: FiniteTheory, rng: random.Random, max_elements: int = 5, max_target: int = 8
) -> Currency:
    """Random chain through the preorder containing Ω, with monotone rational values.

    The target is drawn from specifications the chain's top element reaches.
    """
    specs = theory.all_specs()
    rng.shuffle(specs)
    chain = [theory.omega]
    for s in specs:
        if len(chain) >= max_elements:
            break
        if s in chain:
            continue
        up = [theory.reaches(s, c) is Truth.TRUE for c in chain]
        down = [theory.reaches(c, s) is Truth.TRUE for c in chain]
        if not all(u or d for u, d in zip(up, down)):
            continue
        # mostly skip copies of classes already present
        if any(u and d for u, d in zip(up, down)) and rng.random() < 0.8:
            continue
        chain.append(s)
    # rank by how many chain members each reaches; equal counts are equivalent
    rank = {c: sum(theory.reaches(c, x) is Truth.TRUE for x in chain) for c in chain}
    levels = sorted(set(rank.values()))
    bottom = rank[theory.omega]
    level_value = {}
    acc = Fraction(0)
    for lvl in levels:
        if lvl > bottom:
            acc += Fraction(rng.randint(1, 4), rng.randint(1, 3))
        level_value[lvl] = acc if lvl > bottom else Fraction(0)
    values = [level_value[rank[c]] for c in chain]
    top = max(chain, key=lambda c: rank[c])
    reachable = [s for s in theory.all_specs() if theory.reaches(top, s) is Truth.TRUE]
    rng.shuffle(reachable)
    target = [theory.omega] + [s for s in reachable if s != theory.omega][: max_target - 1]
    return Currency(theory, chain, values, target, name="synthesized")


def report_json(reports: Iterable[CheckReport]) -> str:
    return json.dumps([r.to_dict() for r in reports], default=str)
