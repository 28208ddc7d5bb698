"""Resource theory of unital channels: majorization, Stage I and Stage II currencies.

Values are in bits. Floors of ``1/λ_max`` carry a 1e-12 guard and ranks count
eigenvalues above 1e-9.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np
from scipy.optimize import linprog

from .core import Theory, Truth, UnsupportedRepresentation
from .currency import Currency

__all__ = [
    "DensityMatrix",
    "QuantumSpec",
    "UnitalTheory",
    "Stage2Layout",
    "UnitalStage2Theory",
    "spectrum",
    "majorizes",
    "h_min",
    "h_zero",
    "h_min_eps",
    "d_eff",
    "min_lambda_max",
    "cost_unital",
    "yield_unital",
    "stage1_currency",
    "stage2_currency",
    "stage2_cost",
    "stage2_yield",
    "alt_currencies",
    "convertible_unital",
    "trace_distance",
]

VALID_TOL = 1e-9
RANK_TOL = 1e-9
FLOOR_GUARD = 1e-12
MAJ_TOL = 1e-12


class DensityMatrix:
    """A validated density operator. Immutable; the spectrum is cached."""

    __slots__ = ("_m", "__dict__")

    def __init__(self, matrix):
        m = np.array(matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
            raise ValueError("a density matrix is square with positive dimension")
        if np.max(np.abs(m - m.conj().T)) > VALID_TOL:
            raise ValueError("density matrix is not Hermitian")
        if abs(np.trace(m).real - 1) > VALID_TOL:
            raise ValueError(f"density matrix has trace {np.trace(m).real:.6g}, not 1")
        m = (m + m.conj().T) / 2
        m.setflags(write=False)
        self._m = m
        if self.spectrum[-1] < -VALID_TOL:
            raise ValueError("density matrix has a negative eigenvalue")

    @property
    def matrix(self) -> np.ndarray:
        return self._m

    @property
    def d(self) -> int:
        return self._m.shape[0]

    @cached_property
    def spectrum(self) -> np.ndarray:
        w = np.linalg.eigvalsh(self._m)[::-1].copy()
        w.setflags(write=False)
        return w

    @property
    def lambda_max(self) -> float:
        return float(self.spectrum[0])

    @cached_property
    def rank(self) -> int:
        return int(np.sum(self.spectrum > RANK_TOL))

    @cached_property
    def is_diagonal(self) -> bool:
        off = self._m - np.diag(np.diag(self._m))
        return bool(np.max(np.abs(off), initial=0) <= 1e-12)

    @property
    def diagonal(self) -> np.ndarray:
        return np.diag(self._m).real.copy()

    def close_to(self, other: "DensityMatrix", tol: float = VALID_TOL) -> bool:
        return self.d == other.d and bool(np.max(np.abs(self._m - other._m)) <= tol)

    def __repr__(self) -> str:
        if self.is_diagonal:
            return "diag(" + ", ".join(f"{x:.6g}" for x in self.diagonal) + ")"
        return f"DensityMatrix(d={self.d}, spectrum={np.round(self.spectrum, 6).tolist()})"

    # constructors ---------------------------------------------------------
    @classmethod
    def diag(cls, p: Sequence[float]) -> "DensityMatrix":
        return cls(np.diag(np.asarray(p, dtype=float)))

    @classmethod
    def pure(cls, vec: Sequence[complex]) -> "DensityMatrix":
        v = np.asarray(vec, dtype=complex)
        v = v / np.linalg.norm(v)
        return cls(np.outer(v, v.conj()))

    @classmethod
    def basis(cls, d: int, i: int) -> "DensityMatrix":
        p = np.zeros(d)
        p[i] = 1
        return cls.diag(p)

    @classmethod
    def maximally_mixed(cls, d: int) -> "DensityMatrix":
        return cls(np.eye(d) / d)

    @classmethod
    def uniform(cls, d: int, k: int) -> "DensityMatrix":
        """``Π^k / k``: flat on the first ``k`` basis vectors."""
        if not 1 <= k <= d:
            raise ValueError("need 1 <= k <= d")
        p = np.zeros(d)
        p[:k] = 1 / k
        return cls.diag(p)

    def to_json(self) -> list:
        return [[[float(z.real), float(z.imag)] for z in row] for row in self._m]


def spectrum(rho: DensityMatrix) -> np.ndarray:
    """Eigenvalues, non-increasing."""
    return rho.spectrum


def _sorted_padded(p, q) -> tuple[np.ndarray, np.ndarray]:
    p = np.sort(np.asarray(p, dtype=float))[::-1]
    q = np.sort(np.asarray(q, dtype=float))[::-1]
    n = max(len(p), len(q))
    return np.pad(p, (0, n - len(p))), np.pad(q, (0, n - len(q)))


def majorizes(p, q) -> bool:
    """``p ≻ q``: every partial sum of sorted ``p`` dominates that of ``q``."""
    p, q = _sorted_padded(p, q)
    return bool(np.all(np.cumsum(p) >= np.cumsum(q) - MAJ_TOL))


def h_min(rho) -> float:
    lam = rho.lambda_max if isinstance(rho, DensityMatrix) else float(np.max(rho))
    return -math.log2(lam)


def h_zero(rho) -> float:
    r = rho.rank if isinstance(rho, DensityMatrix) else int(np.sum(np.asarray(rho) > RANK_TOL))
    return math.log2(r)


def _guarded_floor(x: float) -> int:
    return int(math.floor(x + FLOOR_GUARD))


def h_min_eps(p: Sequence[float], eps: float) -> float:
    """Largest min-entropy within total-variation distance ``eps`` of ``p``.

    The top entries are cut to a common level ``t`` spending ``eps`` of mass,
    which is spread below ``t``; the level never drops below ``1/d``.
    """
    p = np.sort(np.asarray(p, dtype=float))[::-1]
    if np.any(p < -VALID_TOL) or abs(p.sum() - 1) > VALID_TOL:
        raise ValueError("not a probability vector")
    if not 0 <= eps < 1:
        raise ValueError("eps must lie in [0, 1)")
    d = len(p)
    if eps == 0:
        return -math.log2(p[0])
    t = 1 / d
    s = 0.0
    for k in range(1, d + 1):
        s += p[k - 1]
        level = (s - eps) / k
        nxt = p[k] if k < d else 0.0
        if level >= nxt:
            t = max(level, 1 / d)
            break
    return -math.log2(t)


def trace_distance(a: DensityMatrix, b: DensityMatrix) -> float:
    return 0.5 * float(np.sum(np.abs(np.linalg.eigvalsh(a.matrix - b.matrix))))


# --------------------------------------------------------------------------
# specifications


class QuantumSpec:
    """A set of density matrices: explicit finite, convex hull, ε-ball, or all.

    Identity is by object; :meth:`omega` returns one shared instance per
    dimension.
    """

    _omegas: dict[int, "QuantumSpec"] = {}

    def __init__(self, kind: str, d: int, states: tuple = (), center=None, eps: float = 0.0):
        if kind not in ("finite", "hull", "ball", "omega"):
            raise ValueError(f"unknown specification kind {kind!r}")
        self.kind = kind
        self.d = int(d)
        self.states = tuple(states)
        self.center = center
        self.eps = float(eps)
        if kind in ("finite", "hull"):
            if not self.states:
                raise ValueError("specifications are non-empty")
            if any(s.d != self.d for s in self.states):
                raise ValueError("all states must share one dimension")
        if kind == "ball":
            if not 0 <= self.eps <= 1:
                raise ValueError("eps must lie in [0, 1]")
            if center.d != self.d:
                raise ValueError("ball center has the wrong dimension")

    @classmethod
    def finite(cls, states: Iterable[DensityMatrix]) -> "QuantumSpec":
        states = tuple(states)
        if not states:
            raise ValueError("specifications are non-empty")
        return cls("finite", states[0].d, states)

    @classmethod
    def hull(cls, states) -> "QuantumSpec":
        if isinstance(states, QuantumSpec):
            if states.kind in ("hull", "finite"):
                return cls("hull", states.d, states.states)
            raise UnsupportedRepresentation("hulls are taken of explicit finite sets")
        states = tuple(states)
        if not states:
            raise ValueError("specifications are non-empty")
        return cls("hull", states[0].d, states)

    @classmethod
    def ball(cls, center: DensityMatrix, eps: float) -> "QuantumSpec":
        return cls("ball", center.d, center=center, eps=eps)

    @classmethod
    def omega(cls, d: int) -> "QuantumSpec":
        if d not in cls._omegas:
            cls._omegas[d] = cls("omega", d)
        return cls._omegas[d]

    @property
    def singleton(self) -> DensityMatrix | None:
        if self.kind in ("finite", "hull"):
            first = self.states[0]
            if all(s.close_to(first) for s in self.states[1:]):
                return first
        if self.kind == "ball" and self.eps == 0:
            return self.center
        return None

    def contains(self, rho: DensityMatrix) -> bool:
        if self.kind == "omega":
            return True
        if self.kind == "finite":
            return any(rho.close_to(s) for s in self.states)
        if self.kind == "ball":
            return trace_distance(rho, self.center) <= self.eps + VALID_TOL
        return _in_hull(rho, self.states)

    def to_json(self) -> dict:
        if self.kind == "omega":
            return {"kind": "omega", "d": self.d}
        if self.kind == "ball":
            return {"kind": "ball", "center": _describe_state(self.center), "eps": self.eps}
        return {"kind": self.kind, "states": [_describe_state(s) for s in self.states]}

    def __repr__(self) -> str:
        if self.kind == "omega":
            return f"Ω[{self.d}]"
        if self.kind == "ball":
            return f"B({self.center!r}, {self.eps:g})"
        inner = ", ".join(map(repr, self.states))
        return ("hull{" if self.kind == "hull" else "{") + inner + "}"


def _describe_state(rho: DensityMatrix):
    if rho.is_diagonal:
        return {"diag": [round(float(x), 12) for x in rho.diagonal]}
    return {"spectrum": [round(float(x), 12) for x in rho.spectrum]}


def _common_diagonal(states: Sequence[DensityMatrix]) -> np.ndarray:
    """Rows are the diagonals of ``states`` in a shared eigenbasis.

    Raises :class:`UnsupportedRepresentation` if the states do not commute.
    """
    if all(s.is_diagonal for s in states):
        return np.array([s.diagonal for s in states])
    mats = [s.matrix for s in states]
    for i in range(len(mats)):
        for j in range(i + 1, len(mats)):
            if np.max(np.abs(mats[i] @ mats[j] - mats[j] @ mats[i])) > 1e-9:
                raise UnsupportedRepresentation("hull of non-commuting states needs semidefinite optimization")
    coeffs = np.sqrt(np.arange(2, len(mats) + 2))
    _, basis = np.linalg.eigh(sum(c * m for c, m in zip(coeffs, mats)))
    rows = []
    for m in mats:
        t = basis.conj().T @ m @ basis
        if np.max(np.abs(t - np.diag(np.diag(t)))) > 1e-8:
            raise UnsupportedRepresentation("could not find a common eigenbasis")
        rows.append(np.diag(t).real)
    return np.array(rows)


def _in_hull(rho: DensityMatrix, states: Sequence[DensityMatrix]) -> bool:
    n = len(states)
    cols = [np.concatenate([s.matrix.real.ravel(), s.matrix.imag.ravel()]) for s in states]
    A = np.vstack([np.array(cols).T, np.ones((1, n))])
    b = np.concatenate([rho.matrix.real.ravel(), rho.matrix.imag.ravel(), [1.0]])
    # feasibility with slack: minimise the L1 residual
    m = A.shape[0]
    c = np.concatenate([np.zeros(n), np.ones(2 * m)])
    A_eq = np.hstack([A, np.eye(m), -np.eye(m)])
    res = linprog(c, A_eq=A_eq, b_eq=b, bounds=[(0, None)] * (n + 2 * m), method="highs")
    return bool(res.status == 0 and res.fun <= 1e-8)


def _hull_min_lambda(states: Sequence[DensityMatrix]) -> float:
    P = _common_diagonal(states)
    n, d = P.shape
    # minimise t subject to sum_i w_i P[i, j] <= t, sum w = 1
    c = np.concatenate([np.zeros(n), [1.0]])
    A_ub = np.hstack([P.T, -np.ones((d, 1))])
    A_eq = np.concatenate([np.ones(n), [0.0]])[None, :]
    res = linprog(c, A_ub=A_ub, b_ub=np.zeros(d), A_eq=A_eq, b_eq=[1.0],
                  bounds=[(0, None)] * n + [(None, None)], method="highs")
    if res.status != 0:  # pragma: no cover - LP is always feasible
        raise RuntimeError(res.message)
    return float(res.fun)


def _majorized_point_in(p: np.ndarray, W: QuantumSpec) -> bool:
    """Is some state of ``W`` majorized by the spectrum ``p``?"""
    d = len(p)
    if W.kind == "omega":
        return True
    if W.kind == "finite":
        return any(majorizes(p, s.spectrum) for s in W.states)
    # the majorization set of p is {D p : D doubly stochastic}; pinching lets
    # us restrict to states diagonal in the target's basis
    nD = d * d
    rows_eq, rhs_eq = [], []
    for i in range(d):  # doubly stochastic
        r = np.zeros(nD)
        r[i * d:(i + 1) * d] = 1
        rows_eq.append(r)
        rhs_eq.append(1.0)
        r = np.zeros(nD)
        r[i::d] = 1
        rows_eq.append(r)
        rhs_eq.append(1.0)
    Dp = np.zeros((d, nD))
    for i in range(d):
        Dp[i, i * d:(i + 1) * d] = p
    if W.kind == "hull":
        Q = _common_diagonal(W.states)
        n = len(Q)
        A = [np.concatenate([r, np.zeros(n)]) for r in rows_eq]
        b = list(rhs_eq)
        for i in range(d):
            A.append(np.concatenate([Dp[i], -Q[:, i]]))
            b.append(0.0)
        A.append(np.concatenate([np.zeros(nD), np.ones(n)]))
        b.append(1.0)
        res = linprog(np.zeros(nD + n), A_eq=np.array(A), b_eq=b, bounds=[(0, None)] * (nD + n), method="highs")
        return res.status == 0
    # ball: TV distance from the (diagonal) center to {D p}
    if not W.center.is_diagonal:
        raise UnsupportedRepresentation("balls need a diagonal center")
    c0 = W.center.diagonal
    A_eq = [np.concatenate([r, np.zeros(d)]) for r in rows_eq]
    A_ub, b_ub = [], []
    for i in range(d):
        A_ub.append(np.concatenate([Dp[i], -np.eye(d)[i]]))
        b_ub.append(c0[i])
        A_ub.append(np.concatenate([-Dp[i], -np.eye(d)[i]]))
        b_ub.append(-c0[i])
    cost = np.concatenate([np.zeros(nD), 0.5 * np.ones(d)])
    res = linprog(cost, A_ub=np.array(A_ub), b_ub=b_ub, A_eq=np.array(A_eq), b_eq=rhs_eq,
                  bounds=[(0, None)] * (nD + d), method="highs")
    return res.status == 0 and res.fun <= W.eps + VALID_TOL


def min_lambda_max(V: QuantumSpec) -> float:
    """Smallest largest eigenvalue attained in ``V`` (ε-balls: smoothed)."""
    if V.kind == "omega":
        return 1 / V.d
    if V.kind == "finite":
        return min(s.lambda_max for s in V.states)
    if V.kind == "hull":
        return _hull_min_lambda(V.states)
    if not V.center.is_diagonal:
        raise UnsupportedRepresentation("smoothing is implemented for diagonal centers only")
    return 2 ** -h_min_eps(V.center.diagonal, V.eps)


def d_eff(V: QuantumSpec) -> int:
    """Rank of the joint support: the rank of the average of the members."""
    if V.kind == "omega":
        return V.d
    if V.kind == "ball":
        return V.center.rank if V.eps == 0 else V.d
    mean = sum(s.matrix for s in V.states) / len(V.states)
    return int(np.sum(np.linalg.eigvalsh(mean) > RANK_TOL))


def cost_unital(V: QuantumSpec, d: int | None = None) -> float:
    d = V.d if d is None else d
    k = _guarded_floor(1 / min_lambda_max(V))
    return math.log2(d) - math.log2(min(k, d))


def yield_unital(V: QuantumSpec, d: int | None = None) -> float:
    d = V.d if d is None else d
    return math.log2(d) - math.log2(d_eff(V))


def convertible_unital(rho: DensityMatrix, sigma: DensityMatrix) -> bool:
    if rho.d != sigma.d:
        raise ValueError("dimension mismatch")
    return majorizes(rho.spectrum, sigma.spectrum)


def _flat_rank(rho: DensityMatrix) -> int | None:
    """``r`` if the nonzero spectrum of ``rho`` is flat with ``r`` entries."""
    lam = rho.spectrum
    r = rho.rank
    if np.all(np.abs(lam[:r] - 1 / r) <= 1e-9):
        return r
    return None


# --------------------------------------------------------------------------
# Stage I theory


class UnitalTheory(Theory):
    """Specifications of a ``d``-level system under unital channels.

    Exact rules are used where the preorder is known (singleton sources,
    flat singleton targets, Ω, inclusion); otherwise cost and yield are used as
    necessary and sufficient tests, and anything in between is ``UNKNOWN``.
    """

    def __init__(self, d: int):
        if d < 1:
            raise ValueError("dimension must be >= 1")
        self.d = d

    @property
    def omega(self) -> QuantumSpec:
        return QuantumSpec.omega(self.d)

    def describe(self, V) -> dict:
        return V.to_json()

    def _subset(self, V: QuantumSpec, W: QuantumSpec) -> bool:
        if V is W or W.kind == "omega":
            return True
        if V.kind in ("finite", "hull"):
            if V.kind == "hull" and W.kind == "finite" and V.singleton is None:
                return False
            return all(W.contains(s) for s in V.states)
        if V.kind == "ball" and V.eps == 0:
            return W.contains(V.center)
        return False

    def reaches(self, V: QuantumSpec, W: QuantumSpec) -> Truth:
        if V.d != self.d or W.d != self.d:
            raise ValueError("dimension mismatch")
        if self._subset(V, W):
            return Truth.TRUE
        if V.kind == "omega":
            return Truth.of(W.contains(DensityMatrix.maximally_mixed(self.d)))
        rho = V.singleton
        if rho is not None:
            try:
                return Truth.of(_majorized_point_in(rho.spectrum, W))
            except UnsupportedRepresentation:
                pass
        sigma = W.singleton
        if sigma is not None and (r := _flat_rank(sigma)) is not None:
            return Truth.of(r >= d_eff(V))
        try:
            cv, yv = cost_unital(V), yield_unital(V)
            cw, yw = cost_unital(W), yield_unital(W)
        except UnsupportedRepresentation:
            return Truth.UNKNOWN
        if yv > cw + MAJ_TOL:
            return Truth.TRUE
        if cv < cw - MAJ_TOL or yv < yw - MAJ_TOL:
            return Truth.FALSE
        return Truth.UNKNOWN


def stage1_currency(d: int, targets: Sequence[QuantumSpec] = ()) -> Currency:
    """``C^k = {Π^k/k}`` with ``Val = log d - log k``, plus Ω."""
    theory = UnitalTheory(d)
    elements = [QuantumSpec.finite([DensityMatrix.uniform(d, k)]) for k in range(1, d + 1)]
    values = [math.log2(d) - math.log2(k) for k in range(1, d + 1)]
    elements.append(theory.omega)
    values.append(0.0)
    target = [theory.omega, *elements[:-1], *targets]
    return Currency(theory, elements, values, target, name=f"unital-stage1-d{d}")


def alt_currencies(d: int) -> tuple[Currency, Currency, dict]:
    """Hull-of-basis-states currency (equivalent to Stage I) and its hull-free variant.

    The hull-free family is ordered by inclusion but is not equivalent: the
    flat state on ``k >= 2`` levels cannot reach the set of ``k`` basis states.
    Its values ``log((d+1)/k)`` keep every element above Ω.
    """
    theory = UnitalTheory(d)
    base = stage1_currency(d)
    c2 = [QuantumSpec.hull([DensityMatrix.basis(d, i) for i in range(k)]) for k in range(1, d + 1)]
    c3 = [QuantumSpec.finite([DensityMatrix.basis(d, i) for i in range(k)]) for k in range(1, d + 1)]
    v2 = [math.log2(d) - math.log2(k) for k in range(1, d + 1)]
    v3 = [math.log2((d + 1) / k) for k in range(1, d + 1)]
    C2 = Currency(theory, [*c2, theory.omega], [*v2, 0.0], [theory.omega, *c2], name="unital-hull")
    C3 = Currency(theory, [*c3, theory.omega], [*v3, 0.0], [theory.omega, *c3], name="unital-basis-sets")
    equivalent = {}
    for k in range(1, d + 1):
        ck = base.elements[k - 1]
        equivalent[k] = (theory.reaches(ck, c2[k - 1]), theory.reaches(c2[k - 1], ck))
    report = {
        "equivalent": {k: (a is Truth.TRUE and b is Truth.TRUE) for k, (a, b) in equivalent.items()},
        "counterexample": None,
    }
    if d >= 2:
        flat, sets = base.elements[1], c3[1]
        report["counterexample"] = {
            "reaches": theory.reaches(flat, sets).to_json(),
            "cost_flat": cost_unital(flat),
            "cost_sets": cost_unital(sets),
        }
    return C2, C3, report


# --------------------------------------------------------------------------
# Stage II: log-dimension wallet W next to the system S


@dataclass(frozen=True)
class Stage2Layout:
    dW: int
    dS: int

    def __post_init__(self) -> None:
        if self.dS < 1 or self.dW < self.dS:
            raise ValueError(f"layout needs dW >= dS >= 1, got dW={self.dW}, dS={self.dS}")


@dataclass(frozen=True)
class S2Omega:
    def __repr__(self) -> str:
        return "Ω"


@dataclass(frozen=True)
class Wallet:
    """States whose wallet marginal is ``Π^k/k``."""

    k: int


@dataclass(frozen=True)
class Local:
    """States whose system marginal lies in ``V``."""

    V: QuantumSpec


@dataclass(frozen=True)
class Joint:
    k: int
    V: QuantumSpec


_S2_OMEGA = S2Omega()


def stage2_cost(V: QuantumSpec, layout: Stage2Layout) -> float:
    k = _guarded_floor(layout.dW / (layout.dS * min_lambda_max(V)))
    return math.log2(layout.dW) - math.log2(min(k, layout.dW))


def stage2_yield(V: QuantumSpec, layout: Stage2Layout) -> float:
    """Exact yield ``log dW - log ceil(dW d_eff / dS)``.

    Equals ``log dS - H_0`` whenever ``dS`` divides ``dW · d_eff``.
    """
    k = -(-layout.dW * d_eff(V) // layout.dS)
    return math.log2(layout.dW) - math.log2(k)


class UnitalStage2Theory(Theory):
    """Wallet-and-system specifications with the reachability rules that are exact here."""

    def __init__(self, layout: Stage2Layout):
        self.layout = layout
        self.local = UnitalTheory(layout.dS)

    @property
    def omega(self) -> S2Omega:
        return _S2_OMEGA

    def describe(self, X):
        if isinstance(X, S2Omega):
            return "omega"
        if isinstance(X, Wallet):
            return {"wallet": X.k}
        if isinstance(X, Local):
            return {"local": X.V.to_json()}
        return {"wallet": X.k, "local": X.V.to_json()}

    def intersect(self, A, B):
        if isinstance(A, S2Omega):
            return B
        if isinstance(B, S2Omega):
            return A
        if A == B:
            return A
        if isinstance(A, Local) and isinstance(B, Wallet):
            A, B = B, A
        if isinstance(A, Wallet) and isinstance(B, Local):
            return Joint(A.k, B.V)
        raise UnsupportedRepresentation(f"no intersection rule for {A!r} and {B!r}")

    def _local_reaches(self, V: QuantumSpec, W: QuantumSpec) -> Truth:
        r = self.local.reaches(V, W)
        if r is Truth.TRUE or V.singleton is not None:
            return r
        try:
            if stage2_cost(V, self.layout) < stage2_cost(W, self.layout) - MAJ_TOL:
                return Truth.FALSE
            if stage2_yield(V, self.layout) < stage2_yield(W, self.layout) - MAJ_TOL:
                return Truth.FALSE
        except UnsupportedRepresentation:
            pass
        return Truth.UNKNOWN

    def reaches(self, A, B) -> Truth:
        dW, dS = self.layout.dW, self.layout.dS
        if isinstance(B, S2Omega) or A == B:
            return Truth.TRUE
        if isinstance(A, S2Omega):
            if isinstance(B, Wallet):
                return Truth.of(B.k == dW)
            if isinstance(B, Local):
                return Truth.of(B.V.contains(DensityMatrix.maximally_mixed(dS)))
            return Truth.of(B.k == dW and B.V.contains(DensityMatrix.maximally_mixed(dS)))
        if isinstance(A, Wallet):
            if isinstance(B, Wallet):
                return Truth.of(B.k >= A.k)
            if isinstance(B, Local):
                return Truth.of(min_lambda_max(B.V) <= dW / (A.k * dS) + MAJ_TOL)
            return Truth.UNKNOWN
        if isinstance(A, Local):
            if isinstance(B, Wallet):
                return Truth.of(dS * B.k >= dW * d_eff(A.V))
            if isinstance(B, Local):
                return self._local_reaches(A.V, B.V)
            if B.k == dW and B.V is A.V:
                return Truth.TRUE
            return Truth.UNKNOWN
        # A is a Joint specification
        if isinstance(B, Joint):
            return Truth.TRUE if (B.V is A.V and B.k >= A.k) else Truth.UNKNOWN
        if isinstance(B, Wallet):
            return Truth.TRUE if B.k >= A.k else Truth.UNKNOWN
        if self.reaches(Wallet(A.k), B) is Truth.TRUE or self.reaches(Local(A.V), B) is Truth.TRUE:
            return Truth.TRUE
        return Truth.UNKNOWN


def stage2_currency(layout: Stage2Layout, targets: Sequence[QuantumSpec] = ()) -> Currency:
    """Wallets ``C^k`` (k = 1..dW) worth ``log dW - log k``; targets are local specifications."""
    theory = UnitalStage2Theory(layout)
    dW = layout.dW
    elements = [Wallet(k) for k in range(1, dW + 1)] + [theory.omega]
    values = [math.log2(dW) - math.log2(k) for k in range(1, dW + 1)] + [0.0]
    target = [theory.omega] + [Local(V) for V in targets]
    return Currency(theory, elements, values, target, name=f"unital-stage2-{dW}x{layout.dS}")
