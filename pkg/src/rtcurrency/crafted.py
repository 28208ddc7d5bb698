"""Small hand-built wallet theories with known fairness behaviour.

States are labelled ``"w:t"``: a wallet holding ``w`` units next to a target
register in state ``t``. The currency elements are ``C^w = {w:t for all t}``
worth ``w`` and the targets are ``V_t = {w:t for all w}``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping

from .core import FiniteTheory, Spec, Transformation
from .currency import Currency

__all__ = ["label", "wallet_spec", "target_spec", "fair_wallet", "money_pump", "midas_closure"]


def label(w: int, t: str) -> str:
    return f"{w}:{t}"


def wallet_spec(N: int, w: int, tokens) -> Spec:
    return Spec.of(*(label(w, t) for t in tokens))


def target_spec(N: int, t: str) -> Spec:
    return Spec.of(*(label(w, t) for w in range(N + 1)))


def _caps(N: int, tokens) -> list[Transformation]:
    return [
        Transformation(f"cap{k}", {label(w, t): label(min(w, k), t) for w in range(N + 1) for t in tokens})
        for k in range(N)
    ]


def _currency(theory: FiniteTheory, N: int, tokens, unit) -> Currency:
    elements = [theory.omega] + [wallet_spec(N, w, tokens) for w in range(N + 1)]
    values = [Fraction(0)] + [unit * w for w in range(N + 1)]
    target = [theory.omega] + [target_spec(N, t) for t in tokens]
    return Currency(theory, elements, values, target)


def fair_wallet(N: int = 4, energies: Mapping[str, int] | None = None, unit=Fraction(1, 2)) -> Currency:
    """Swapping the target ``t -> s`` moves ``e(t) - e(s)`` units into the wallet.

    Paying never overdraws (the swap is refused) and surplus above ``N`` is
    burnt. Balances equal the energy differences inside the fairness window.
    """
    energies = dict(energies or {"a": 1, "b": 0})
    tokens = sorted(energies)
    labels = [label(w, t) for w in range(N + 1) for t in tokens]
    gens = []
    for s in tokens:
        mapping = {}
        for w in range(N + 1):
            for t in tokens:
                nw = w + energies[t] - energies[s]
                mapping[label(w, t)] = label(min(nw, N), s) if nw >= 0 else label(w, t)
        gens.append(Transformation(f"prep_{s}", mapping))
    theory = FiniteTheory(labels, gens + _caps(N, tokens))
    C = _currency(theory, N, tokens, unit)
    C.name = "fair-wallet"
    return C


def money_pump(N: int = 4) -> Currency:
    """A pump adds a unit to any wallet already holding one while the target is ``p``.

    Preparing ``p`` from ``q`` costs a unit. Wallet values are not monotone:
    ``C^2 -> C^3``.
    """
    tokens = ["p", "q"]
    labels = [label(w, t) for w in range(N + 1) for t in tokens]
    pump = Transformation("pump", {label(w, "p"): label(w + 1, "p") for w in range(1, N)})
    prep = Transformation("prep_p", {label(w, "q"): label(w - 1, "p") for w in range(1, N + 1)})
    theory = FiniteTheory(labels, [pump, prep] + _caps(N, tokens))
    C = _currency(theory, N, tokens, Fraction(1))
    # nothing prepares q, so only V_p is a target
    C.target = [theory.omega, target_spec(N, "p")]
    C.name = "money-pump"
    return C


def midas_closure(N: int = 4) -> Currency:
    """The pump made fair: free relabelling of the target and pumping from every level."""
    tokens = ["p", "q"]
    labels = [label(w, t) for w in range(N + 1) for t in tokens]
    pump = Transformation("pump", {label(w, "p"): label(min(w + 1, N), "p") for w in range(N + 1)})
    to_p = Transformation("prep_p", {label(w, "q"): label(w, "p") for w in range(N + 1)})
    to_q = Transformation("prep_q", {label(w, "p"): label(w, "q") for w in range(N + 1)})
    theory = FiniteTheory(labels, [pump, to_p, to_q] + _caps(N, tokens))
    C = _currency(theory, N, tokens, Fraction(1))
    C.name = "midas"
    return C
