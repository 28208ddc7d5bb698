"""Specification spaces, element-wise transformations and the accessibility preorder.

A *specification* is a non-empty set of states. A transformation acts on single
states and is lifted to specifications by taking the union of the per-state
images. ``V -> W`` holds when some composition of generators maps ``V`` inside
``W``; since forgetting is free this is a preorder.

Reachability is three-valued: a closure that runs out of budget answers
:attr:`Truth.UNKNOWN`, never ``FALSE``.
"""

from __future__ import annotations

import enum
import json
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Hashable, Iterable, Mapping, Sequence

__all__ = [
    "Truth",
    "IndeterminateError",
    "UnsupportedRepresentation",
    "AbstractSpace",
    "QuantumSpace",
    "Spec",
    "Transformation",
    "Theory",
    "FiniteTheory",
    "Monotone",
    "CheckReport",
    "lift",
    "reaches",
    "preorder_matrix",
    "is_monotone",
    "is_complete_family",
    "load_theory",
    "DEFAULT_BUDGET",
]

DEFAULT_BUDGET = 10_000


class IndeterminateError(RuntimeError):
    """Raised when an undecided reachability is coerced to a plain boolean."""


class UnsupportedRepresentation(ValueError):
    """A specification representation the operation cannot handle."""


class Truth(enum.Enum):
    FALSE = 0
    TRUE = 1
    UNKNOWN = 2

    def __bool__(self) -> bool:
        if self is Truth.UNKNOWN:
            raise IndeterminateError("reachability is undecided")
        return self is Truth.TRUE

    @classmethod
    def of(cls, value: bool) -> "Truth":
        return cls.TRUE if value else cls.FALSE

    @property
    def known(self) -> bool:
        return self is not Truth.UNKNOWN

    def __and__(self, other: "Truth") -> "Truth":
        if self is Truth.FALSE or other is Truth.FALSE:
            return Truth.FALSE
        if self is Truth.TRUE and other is Truth.TRUE:
            return Truth.TRUE
        return Truth.UNKNOWN

    def __or__(self, other: "Truth") -> "Truth":
        if self is Truth.TRUE or other is Truth.TRUE:
            return Truth.TRUE
        if self is Truth.FALSE and other is Truth.FALSE:
            return Truth.FALSE
        return Truth.UNKNOWN

    def to_json(self) -> bool | None:
        return None if self is Truth.UNKNOWN else self is Truth.TRUE


# --------------------------------------------------------------------------
# state spaces and specifications


@dataclass(frozen=True)
class AbstractSpace:
    """Finite set of opaque, hashable state labels."""

    labels: tuple[Hashable, ...]

    def __post_init__(self) -> None:
        labels = tuple(self.labels)
        if not labels:
            raise ValueError("an abstract state space needs at least one label")
        if len(set(labels)) != len(labels):
            raise ValueError("state labels must be distinct")
        object.__setattr__(self, "labels", labels)

    def __len__(self) -> int:
        return len(self.labels)

    def __contains__(self, label: object) -> bool:
        return label in self.labels


@dataclass(frozen=True)
class QuantumSpace:
    """Density operators on a ``d``-dimensional Hilbert space."""

    d: int

    def __post_init__(self) -> None:
        if int(self.d) < 1:
            raise ValueError("dimension must be >= 1")


def _label_key(label: Hashable) -> tuple[str, str]:
    return (type(label).__name__, repr(label))


@dataclass(frozen=True)
class Spec:
    """An explicit finite specification over an abstract space."""

    states: frozenset

    def __post_init__(self) -> None:
        states = frozenset(self.states)
        if not states:
            raise ValueError("specifications are non-empty")
        object.__setattr__(self, "states", states)

    @classmethod
    def of(cls, *labels: Hashable) -> "Spec":
        return cls(frozenset(labels))

    def sorted(self) -> list:
        """Canonical ordering of the labels (used for hashing keys and output)."""
        return sorted(self.states, key=_label_key)

    def __le__(self, other: "Spec") -> bool:
        return self.states <= other.states

    def __and__(self, other: "Spec") -> "Spec | None":
        common = self.states & other.states
        return Spec(common) if common else None

    def __or__(self, other: "Spec") -> "Spec":
        return Spec(self.states | other.states)

    def __len__(self) -> int:
        return len(self.states)

    def __iter__(self):
        return iter(self.sorted())

    def __repr__(self) -> str:
        return "{" + ",".join(map(str, self.sorted())) + "}"

    def to_json(self) -> list:
        return [s if isinstance(s, (str, int)) else str(s) for s in self.sorted()]


# --------------------------------------------------------------------------
# transformations and theories


@dataclass(frozen=True)
class Transformation:
    """Element-wise map from states to non-empty sets of states.

    ``mapping`` need not be total; missing states are left in place.
    """

    name: str
    mapping: Mapping[Hashable, frozenset] = field(default_factory=dict)

    def __post_init__(self) -> None:
        mapping = {}
        for state, image in dict(self.mapping).items():
            image = frozenset([image]) if isinstance(image, (str, int)) else frozenset(image)
            if not image:
                raise ValueError(f"{self.name}: image of {state!r} is empty")
            mapping[state] = image
        object.__setattr__(self, "mapping", mapping)

    def __call__(self, state: Hashable) -> frozenset:
        return self.mapping.get(state, frozenset([state]))

    @classmethod
    def identity(cls) -> "Transformation":
        return cls("id", {})

    @classmethod
    def from_function(cls, name: str, labels: Iterable[Hashable], fn: Callable) -> "Transformation":
        mapping = {}
        for s in labels:
            out = fn(s)
            mapping[s] = frozenset([out]) if not isinstance(out, (set, frozenset, list, tuple)) else frozenset(out)
        return cls(name, mapping)


def lift(f: Transformation, V: Spec) -> Spec:
    """Image of ``V`` under ``f``: the union of the per-state images."""
    if not isinstance(V, Spec):
        raise UnsupportedRepresentation(
            f"lift needs an explicit finite specification, got {type(V).__name__}"
        )
    out: set = set()
    for state in V.states:
        out |= f(state)
    return Spec(frozenset(out))


class Theory:
    """Interface shared by the finite theories here and the quantum instantiations.

    Subclasses provide ``omega`` (the full state space as a specification),
    ``reaches`` and, when a composition of currency and target exists,
    ``intersect``.
    """

    omega: Any

    def reaches(self, V, W) -> Truth:  # pragma: no cover - interface
        raise NotImplementedError

    def intersect(self, V, W):
        """``V ∩ W``, or ``None`` when the intersection is empty."""
        raise UnsupportedRepresentation(f"{type(self).__name__} has no intersection")

    def describe(self, V) -> Any:
        return repr(V)


class FiniteTheory(Theory):
    """A resource theory on an explicit finite state space.

    Reachability is decided by breadth-first search over the images of ``V``
    under compositions of generators. The identity is always a generator.
    Closures are memoized per starting specification.
    """

    def __init__(
        self,
        space: AbstractSpace | Sequence[Hashable],
        generators: Iterable[Transformation] = (),
        budget: int = DEFAULT_BUDGET,
    ):
        if not isinstance(space, AbstractSpace):
            space = AbstractSpace(tuple(space))
        if budget < 1:
            raise ValueError("closure budget must be positive")
        self.space = space
        self.budget = int(budget)
        gens = [g for g in generators if g.name != "id" or g.mapping]
        for g in gens:
            for state, image in g.mapping.items():
                if state not in space or not image <= set(space.labels):
                    raise ValueError(f"generator {g.name!r} leaves the state space at {state!r}")
        self.generators: tuple[Transformation, ...] = (Transformation.identity(), *gens)
        self._bit = {label: 1 << i for i, label in enumerate(space.labels)}
        self._image_masks = [
            [self._mask(g(label)) for label in space.labels] for g in self.generators[1:]
        ]
        self._closures: dict[int, tuple[set[int], bool]] = {}

    # masks ------------------------------------------------------------
    def _mask(self, states: Iterable[Hashable]) -> int:
        m = 0
        for s in states:
            try:
                m |= self._bit[s]
            except KeyError:
                raise ValueError(f"state {s!r} is not in the state space") from None
        return m

    def _lift_mask(self, images: list[int], mask: int) -> int:
        out = 0
        i = 0
        while mask:
            if mask & 1:
                out |= images[i]
            mask >>= 1
            i += 1
        return out

    def _closure(self, start: int) -> tuple[set[int], bool]:
        cached = self._closures.get(start)
        if cached is not None:
            return cached
        seen = {start}
        queue = deque([start])
        expansions = 0
        complete = True
        while queue:
            current = queue.popleft()
            for images in self._image_masks:
                if expansions >= self.budget:
                    complete = False
                    break
                expansions += 1
                nxt = self._lift_mask(images, current)
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
            if not complete:
                break
        result = (seen, complete)
        self._closures[start] = result
        return result

    # interface ----------------------------------------------------------
    @property
    def omega(self) -> Spec:
        return Spec(frozenset(self.space.labels))

    def spec(self, *labels: Hashable) -> Spec:
        s = Spec.of(*labels)
        self._mask(s.states)
        return s

    def all_specs(self) -> list[Spec]:
        """Every non-empty subset of the state space, smallest first."""
        labels = self.space.labels
        n = len(labels)
        out = []
        for m in range(1, 1 << n):
            out.append(Spec(frozenset(labels[i] for i in range(n) if m >> i & 1)))
        out.sort(key=lambda s: (len(s), [_label_key(x) for x in s.sorted()]))
        return out

    def images(self, V: Spec) -> tuple[list[Spec], bool]:
        """All specifications ``g(V)`` found by the closure, and whether it finished."""
        seen, complete = self._closure(self._mask(V.states))
        labels = self.space.labels
        specs = [
            Spec(frozenset(labels[i] for i in range(len(labels)) if m >> i & 1)) for m in seen
        ]
        return specs, complete

    def reaches(self, V: Spec, W: Spec) -> Truth:
        if not isinstance(V, Spec) or not isinstance(W, Spec):
            raise UnsupportedRepresentation("finite theories work on explicit specifications")
        v = self._mask(V.states)
        w = self._mask(W.states)
        if v & ~w == 0:
            return Truth.TRUE
        seen, complete = self._closure(v)
        notw = ~w
        for m in seen:
            if m & notw == 0:
                return Truth.TRUE
        return Truth.FALSE if complete else Truth.UNKNOWN

    def intersect(self, V: Spec, W: Spec) -> Spec | None:
        return V & W

    def describe(self, V: Spec) -> Any:
        return V.to_json()

    def __repr__(self) -> str:
        names = [g.name for g in self.generators]
        return f"FiniteTheory(states={len(self.space)}, generators={names})"


def reaches(theory: Theory, V, W) -> Truth:
    return theory.reaches(V, W)


def preorder_matrix(theory: Theory, specs: Sequence) -> list[list[Truth]]:
    """``M[i][j] = reaches(specs[i], specs[j])``; undecided entries stay ``UNKNOWN``."""
    return [[theory.reaches(a, b) for b in specs] for a in specs]


# --------------------------------------------------------------------------
# reports and monotones


@dataclass
class CheckReport:
    """Outcome of an exhaustive property check.

    ``passed`` is ``None`` when no counterexample was found but some entries
    could not be decided.
    """

    check: str
    counterexamples: list = field(default_factory=list)
    indeterminate: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool | None:
        if self.counterexamples:
            return False
        if self.indeterminate:
            return None
        return True

    def __bool__(self) -> bool:
        return self.passed is True

    def to_dict(self) -> dict:
        out = {
            "check": self.check,
            "pass": self.passed,
            "counterexamples": self.counterexamples,
            "indeterminate": self.indeterminate,
        }
        if self.details:
            out["details"] = self.details
        return out


@dataclass(frozen=True)
class Monotone:
    name: str
    fn: Callable[[Any], float]

    def __call__(self, V) -> float:
        return self.fn(V)


_CMP_TOL = 1e-12


def is_monotone(M: Monotone, theory: Theory, specs: Sequence) -> CheckReport:
    """Check ``V -> W  =>  M(V) >= M(W)`` on every pair of ``specs``."""
    report = CheckReport(f"monotone:{M.name}")
    values = [M(s) for s in specs]
    matrix = preorder_matrix(theory, specs)
    for i, row in enumerate(matrix):
        for j, r in enumerate(row):
            if r is Truth.UNKNOWN:
                report.indeterminate.append([theory.describe(specs[i]), theory.describe(specs[j])])
            elif r is Truth.TRUE and values[i] < values[j] - _CMP_TOL:
                report.counterexamples.append(
                    [theory.describe(specs[i]), theory.describe(specs[j])]
                )
    return report


def is_complete_family(Ms: Sequence[Monotone], theory: Theory, specs: Sequence) -> CheckReport:
    """Check ``V -> W  <=>  M_k(V) >= M_k(W)`` for all ``k``, on every pair."""
    report = CheckReport("complete-family:" + ",".join(m.name for m in Ms))
    table = [[m(s) for m in Ms] for s in specs]
    matrix = preorder_matrix(theory, specs)
    for i, row in enumerate(matrix):
        for j, r in enumerate(row):
            dominated = all(a >= b - _CMP_TOL for a, b in zip(table[i], table[j]))
            if r is Truth.UNKNOWN:
                report.indeterminate.append([theory.describe(specs[i]), theory.describe(specs[j])])
            elif bool(r) != dominated:
                report.counterexamples.append(
                    [theory.describe(specs[i]), theory.describe(specs[j])]
                )
    return report


# --------------------------------------------------------------------------
# theory description files


def load_theory(source: str | Path | Mapping) -> FiniteTheory:
    """Build a :class:`FiniteTheory` from its JSON description.

    ``{"space": {"kind": "abstract", "labels": [...]},
       "generators": [{"name": ..., "map": {"a": ["b"], ...}}],
       "budget": 10000}``
    """
    data = _read_json(source)
    space = data.get("space")
    if not isinstance(space, Mapping) or space.get("kind", "abstract") != "abstract":
        raise ValueError("theory files describe abstract spaces: space.kind must be 'abstract'")
    labels = space.get("labels")
    if not isinstance(labels, list) or not labels:
        raise ValueError("space.labels must be a non-empty list")
    gens = []
    for i, g in enumerate(data.get("generators", [])):
        if "map" not in g:
            raise ValueError(f"generator #{i} has no 'map'")
        mapping = {}
        for state, image in g["map"].items():
            if isinstance(image, (str, int)):
                image = [image]
            mapping[state] = frozenset(image)
        gens.append(Transformation(str(g.get("name", f"g{i}")), mapping))
    return FiniteTheory(AbstractSpace(tuple(labels)), gens, int(data.get("budget", DEFAULT_BUDGET)))


def _read_json(source: str | Path | Mapping) -> Mapping:
    if isinstance(source, Mapping):
        return source
    text = Path(source).read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"{source}: line {exc.lineno}: {exc.msg}") from None
