"""Thermo-majorization of block-diagonal states and the work currency.

Energies are in units where ``β`` multiplies them directly, so with ``β = 1``
they are in units of ``kT``. Wallet values are the wallet energies ``kΔ``.

Specifications over wallet ⊗ system are represented by their least useful
member, which every other member reaches by thermalizing what is left
unspecified:

* ``Wallet(k)``  -> ``|k⟩ ⊗ γ_S``
* ``Local(ρ)``   -> ``|0⟩ ⊗ ρ``
* ``Joint(k, ρ)`` -> ``|k⟩ ⊗ ρ``
* ``Ω``          -> ``|0⟩ ⊗ γ_S``, i.e. Ω is identified with the ground wallet.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import Theory, Truth, UnsupportedRepresentation
from .currency import Currency

__all__ = [
    "BlockDiagState",
    "LorenzCurve",
    "Ladder",
    "WorkTheory",
    "lorenz",
    "thermo_majorizes",
    "gibbs",
    "work_currency",
    "work_cost",
    "work_yield",
]

TOL = 1e-12


class BlockDiagState:
    """Populations over energy levels. Immutable."""

    __slots__ = ("p", "E")

    def __init__(self, p: Sequence[float], E: Sequence[float]):
        p = np.array(p, dtype=float)
        E = np.array(E, dtype=float)
        if p.ndim != 1 or p.shape != E.shape or len(p) < 1:
            raise ValueError("populations and energies must be vectors of equal length")
        if np.any(p < -1e-9) or abs(p.sum() - 1) > 1e-9:
            raise ValueError("populations must form a probability vector")
        p = np.clip(p, 0, None)
        p.setflags(write=False)
        E.setflags(write=False)
        self.p = p
        self.E = E

    @property
    def d(self) -> int:
        return len(self.p)

    @classmethod
    def pure(cls, i: int, E: Sequence[float]) -> "BlockDiagState":
        p = np.zeros(len(E))
        p[i] = 1
        return cls(p, E)

    def tensor(self, other: "BlockDiagState") -> "BlockDiagState":
        return BlockDiagState(np.kron(self.p, other.p), np.add.outer(self.E, other.E).ravel())

    def __repr__(self) -> str:
        return f"BlockDiagState(p={np.round(self.p, 6).tolist()}, E={self.E.tolist()})"

    def to_json(self) -> dict:
        return {"p": [float(x) for x in self.p], "E": [float(x) for x in self.E]}


def gibbs(E: Sequence[float], beta: float) -> BlockDiagState:
    E = np.asarray(E, dtype=float)
    w = np.exp(-beta * (E - E.min()))
    return BlockDiagState(w / w.sum(), E)


@dataclass(frozen=True)
class LorenzCurve:
    """Piecewise-linear concave curve through ``points``, from ``(0, 0)`` to ``(Z, 1)``."""

    xs: tuple[float, ...]
    ys: tuple[float, ...]

    @property
    def points(self) -> list[tuple[float, float]]:
        return list(zip(self.xs, self.ys))

    @property
    def Z(self) -> float:
        return self.xs[-1]

    def __call__(self, x) -> np.ndarray:
        return np.interp(x, self.xs, self.ys)


def lorenz(s: BlockDiagState, beta: float) -> LorenzCurve:
    """Order levels by ``p e^{βE}`` descending and accumulate ``(e^{-βE}, p)``."""
    g = np.exp(-beta * s.E)
    order = np.argsort(-s.p / g, kind="stable")
    xs = np.concatenate([[0.0], np.cumsum(g[order])])
    ys = np.concatenate([[0.0], np.cumsum(s.p[order])])
    return LorenzCurve(tuple(xs.tolist()), tuple(ys.tolist()))


def thermo_majorizes(a: BlockDiagState, b: BlockDiagState, beta: float) -> bool:
    """Does the Lorenz curve of ``a`` lie on or above that of ``b``?"""
    if a.E.shape != b.E.shape or not np.allclose(a.E, b.E, rtol=0, atol=1e-12):
        raise ValueError("thermo-majorization compares states with identical energies")
    la, lb = lorenz(a, beta), lorenz(b, beta)
    xs = np.union1d(la.xs, lb.xs)
    return bool(np.all(la(xs) >= lb(xs) - TOL))


@dataclass(frozen=True)
class Ladder:
    """Wallet Hamiltonian ``Σ_k kΔ |k⟩⟨k|``."""

    levels: int
    spacing: float
    beta: float = 1.0

    def __post_init__(self) -> None:
        if self.levels < 2:
            raise ValueError("a ladder has at least two levels")
        if self.spacing <= 0 or self.beta <= 0:
            raise ValueError("spacing and β must be positive")

    @property
    def energies(self) -> np.ndarray:
        return self.spacing * np.arange(self.levels)

    def level(self, k: int) -> BlockDiagState:
        return BlockDiagState.pure(k, self.energies)


# --------------------------------------------------------------------------
# specifications on wallet ⊗ system


@dataclass(frozen=True)
class TOmega:
    def __repr__(self) -> str:
        return "Ω"


@dataclass(frozen=True)
class Wallet:
    k: int


@dataclass(frozen=True, eq=False)
class Local:
    rho: BlockDiagState


@dataclass(frozen=True, eq=False)
class Joint:
    k: int
    local: Local

    def __eq__(self, other) -> bool:
        return isinstance(other, Joint) and other.k == self.k and other.local is self.local

    def __hash__(self) -> int:
        return hash((self.k, id(self.local)))


_T_OMEGA = TOmega()


class WorkTheory(Theory):
    """Thermal operations on a ladder wallet next to a block-diagonal system."""

    def __init__(self, ladder: Ladder, E_S: Sequence[float]):
        self.ladder = ladder
        self.E_S = np.asarray(E_S, dtype=float)
        if len(self.E_S) > ladder.levels:
            raise ValueError("wallet ladder needs at least as many levels as the system")
        self.gamma_S = gibbs(self.E_S, ladder.beta)

    @property
    def omega(self) -> TOmega:
        return _T_OMEGA

    def local(self, rho: BlockDiagState) -> Local:
        if rho.E.shape != self.E_S.shape or not np.allclose(rho.E, self.E_S):
            raise ValueError("system state has the wrong energies")
        return Local(rho)

    def representative(self, X) -> BlockDiagState:
        if isinstance(X, TOmega):
            return self.ladder.level(0).tensor(self.gamma_S)
        if isinstance(X, Wallet):
            return self.ladder.level(X.k).tensor(self.gamma_S)
        if isinstance(X, Local):
            return self.ladder.level(0).tensor(X.rho)
        if isinstance(X, Joint):
            return self.ladder.level(X.k).tensor(X.local.rho)
        raise UnsupportedRepresentation(f"not a wallet/system specification: {X!r}")

    def reaches(self, A, B) -> Truth:
        if A == B:
            return Truth.TRUE
        return Truth.of(thermo_majorizes(self.representative(A), self.representative(B), self.ladder.beta))

    def intersect(self, A, B):
        if isinstance(A, TOmega):
            return B
        if isinstance(B, TOmega):
            return A
        if A == B:
            return A
        if isinstance(A, Local) and isinstance(B, Wallet):
            A, B = B, A
        if isinstance(A, Wallet) and isinstance(B, Local):
            return Joint(A.k, B)
        if isinstance(A, Wallet) and isinstance(B, Wallet):
            return None
        raise UnsupportedRepresentation(f"no intersection rule for {A!r} and {B!r}")

    def describe(self, X):
        if isinstance(X, TOmega):
            return "omega"
        if isinstance(X, Wallet):
            return {"wallet": X.k}
        if isinstance(X, Local):
            return {"local": X.rho.to_json()}
        return {"wallet": X.k, "local": X.local.rho.to_json()}


def work_currency(ladder: Ladder, E_S: Sequence[float], targets: Sequence[BlockDiagState] = ()) -> Currency:
    """Wallet levels ``C^k`` worth ``kΔ``; targets are local block-diagonal states."""
    theory = WorkTheory(ladder, E_S)
    elements = [theory.omega] + [Wallet(k) for k in range(ladder.levels)]
    values = [0.0] + [k * ladder.spacing for k in range(ladder.levels)]
    target = [theory.omega] + [theory.local(r) for r in targets]
    return Currency(theory, elements, values, target, name="work")


def _scan(rho: BlockDiagState, ladder: Ladder, forward: bool) -> float:
    theory = WorkTheory(ladder, rho.E)
    spec = theory.local(rho)
    ks = range(ladder.levels) if forward else range(ladder.levels - 1, -1, -1)
    for k in ks:
        if forward and theory.reaches(Wallet(k), spec) is Truth.TRUE:
            return k * ladder.spacing
        if not forward and theory.reaches(spec, Wallet(k)) is Truth.TRUE:
            return k * ladder.spacing
    return math.inf if forward else 0.0


def work_cost(rho: BlockDiagState, ladder: Ladder) -> float:
    """Least wallet energy that forms ``rho``; ``inf`` if the ladder is too short."""
    return _scan(rho, ladder, forward=True)


def work_yield(rho: BlockDiagState, ladder: Ladder) -> float:
    """Most wallet energy extractable from ``rho``."""
    return _scan(rho, ladder, forward=False)
