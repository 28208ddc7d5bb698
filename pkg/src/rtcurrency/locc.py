"""Bell-pair currency for pure bipartite states under LOCC.

Convertibility of pure states is decided by Nielsen's criterion: ``ψ -> φ``
exactly when the Schmidt coefficients of ``ψ`` are majorized by those of
``φ``. The criterion is not derived here; it is the oracle that makes cost and
yield computable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import Theory, Truth, UnsupportedRepresentation
from .currency import Currency
from .unital import majorizes

__all__ = [
    "SchmidtVector",
    "LoccTheory",
    "Bell",
    "Pure",
    "schmidt",
    "nielsen_convertible",
    "bell_cost",
    "bell_yield",
    "bell_currency",
    "bell_state",
]

RANK_TOL = 1e-9


class SchmidtVector:
    """Squared Schmidt coefficients, non-increasing."""

    __slots__ = ("lam",)

    def __init__(self, lam: Sequence[float]):
        lam = np.sort(np.asarray(lam, dtype=float))[::-1]
        if lam.ndim != 1 or len(lam) < 1:
            raise ValueError("Schmidt vector must be a non-empty vector")
        if lam[-1] < -1e-9 or abs(lam.sum() - 1) > 1e-9:
            raise ValueError("Schmidt coefficients must form a probability vector")
        lam = np.clip(lam, 0, None)
        lam.setflags(write=False)
        self.lam = lam

    @property
    def rank(self) -> int:
        return int(np.sum(self.lam > RANK_TOL))

    @property
    def lambda_max(self) -> float:
        return float(self.lam[0])

    def __len__(self) -> int:
        return len(self.lam)

    def __repr__(self) -> str:
        return f"SchmidtVector({np.round(self.lam, 6).tolist()})"

    def to_json(self) -> list:
        return [float(x) for x in self.lam]


def bell_state(n: int) -> SchmidtVector:
    """``n`` Bell pairs: flat on ``2**n`` coefficients."""
    return SchmidtVector(np.full(2**n, 2.0**-n))


def schmidt(amplitudes) -> SchmidtVector:
    """Squared singular values of the amplitude matrix ``ψ_{ij}``."""
    a = np.asarray(amplitudes, dtype=complex)
    if a.ndim != 2:
        raise ValueError("amplitudes form a matrix")
    norm = np.linalg.norm(a)
    if abs(norm - 1) > 1e-9:
        raise ValueError(f"state is not normalized (norm {norm:.6g})")
    s = np.linalg.svd(a, compute_uv=False)
    return SchmidtVector(s**2 / np.sum(s**2))


def nielsen_convertible(psi: SchmidtVector, phi: SchmidtVector) -> bool:
    """``ψ -> φ`` by LOCC iff ``λ_ψ`` is majorized by ``λ_φ``."""
    return majorizes(phi.lam, psi.lam)


def bell_cost(psi: SchmidtVector) -> int:
    """Fewest Bell pairs that form ``ψ``: ``ceil(log2 rank)``."""
    return (psi.rank - 1).bit_length()


def bell_yield(psi: SchmidtVector) -> int:
    """Most Bell pairs distillable from one copy: ``floor(-log2 λ_max)``."""
    n = int(math.floor(-math.log2(psi.lambda_max) + 1e-12))
    return max(n, 0)


# --------------------------------------------------------------------------
# wallet (Bell pairs) ⊗ target (pure state) specifications


@dataclass(frozen=True)
class LOmega:
    def __repr__(self) -> str:
        return "Ω"


@dataclass(frozen=True)
class Bell:
    """States holding ``n`` Bell pairs in the wallet registers."""

    n: int


@dataclass(frozen=True, eq=False)
class Pure:
    """States whose target registers hold the pure state with Schmidt vector ``psi``."""

    psi: SchmidtVector


@dataclass(frozen=True)
class LJoint:
    n: int
    target: Pure


_L_OMEGA = LOmega()


class LoccTheory(Theory):
    """Specifications are represented by their least entangled member."""

    def __init__(self, N: int):
        if N < 1:
            raise ValueError("wallet capacity must be >= 1")
        self.N = N

    @property
    def omega(self) -> LOmega:
        return _L_OMEGA

    def target(self, psi: SchmidtVector) -> Pure:
        if psi.rank > 2**self.N:
            raise ValueError(f"target Schmidt rank {psi.rank} exceeds 2**N = {2**self.N}")
        return Pure(psi)

    def representative(self, X) -> np.ndarray:
        if isinstance(X, LOmega):
            return np.ones(1)
        if isinstance(X, Bell):
            return bell_state(X.n).lam
        if isinstance(X, Pure):
            return X.psi.lam
        if isinstance(X, LJoint):
            return np.kron(bell_state(X.n).lam, X.target.psi.lam)
        raise UnsupportedRepresentation(f"not a Bell-wallet specification: {X!r}")

    def reaches(self, A, B) -> Truth:
        if A == B:
            return Truth.TRUE
        return Truth.of(majorizes(self.representative(B), self.representative(A)))

    def intersect(self, A, B):
        if isinstance(A, LOmega):
            return B
        if isinstance(B, LOmega):
            return A
        if A == B:
            return A
        if isinstance(A, Pure) and isinstance(B, Bell):
            A, B = B, A
        if isinstance(A, Bell) and isinstance(B, Pure):
            return LJoint(A.n, B) if A.n else B
        if isinstance(A, Bell) and isinstance(B, Bell):
            return None
        raise UnsupportedRepresentation(f"no intersection rule for {A!r} and {B!r}")

    def describe(self, X):
        if isinstance(X, LOmega):
            return "omega"
        if isinstance(X, Bell):
            return {"bell": X.n}
        if isinstance(X, Pure):
            return {"schmidt": X.psi.to_json()}
        return {"bell": X.n, "schmidt": X.target.psi.to_json()}


def bell_currency(N: int, targets: Sequence[SchmidtVector] = ()) -> Currency:
    """``Ψ^n`` for ``n = 0..N`` worth ``n``, with ``Ψ^0 = Ω``."""
    theory = LoccTheory(N)
    elements = [theory.omega] + [Bell(n) for n in range(1, N + 1)]
    values = list(range(N + 1))
    target = [theory.omega] + [theory.target(t) for t in targets]
    return Currency(theory, elements, values, target, name=f"bell-{N}")
