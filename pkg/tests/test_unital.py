import math
from itertools import permutations

import numpy as np
import pytest
from scipy.stats import unitary_group

from rtcurrency.core import Truth, UnsupportedRepresentation
from rtcurrency.unital import (
    DensityMatrix,
    QuantumSpec,
    Stage2Layout,
    UnitalTheory,
    alt_currencies,
    convertible_unital,
    cost_unital,
    d_eff,
    h_min,
    h_min_eps,
    h_zero,
    majorizes,
    spectrum,
    stage1_currency,
    stage2_cost,
    stage2_currency,
    stage2_yield,
    yield_unital,
)

D = DensityMatrix


def random_density(d, rng, rank=None):
    rank = d if rank is None else rank
    G = rng.normal(size=(d, rank)) + 1j * rng.normal(size=(d, rank))
    M = G @ G.conj().T
    return D(M / np.trace(M).real)


def finite(*ps):
    return QuantumSpec.finite([D.diag(p) for p in ps])


# --------------------------------------------------------------------------
# spectra and majorization


def test_spectrum_examples():
    assert np.allclose(spectrum(D.maximally_mixed(2)), [0.5, 0.5])
    assert np.allclose(spectrum(D.diag([0.1, 0.9])), [0.9, 0.1])


@pytest.mark.parametrize("seed", range(5))
def test_spectrum_matches_characteristic_roots(seed):
    rho = random_density(3, np.random.default_rng(seed))
    roots = np.sort(np.roots(np.poly(rho.matrix)).real)[::-1]
    assert np.allclose(spectrum(rho), roots, atol=1e-8)
    lam = spectrum(rho)
    _, vecs = np.linalg.eigh(rho.matrix)
    rebuilt = vecs @ np.diag(lam[::-1]) @ vecs.conj().T
    assert np.max(np.abs(rebuilt - rho.matrix)) <= 1e-8


@pytest.mark.parametrize("seed", range(5))
def test_spectrum_unitary_invariance(seed):
    rng = np.random.default_rng(seed)
    rho = random_density(4, rng)
    U = unitary_group.rvs(4, random_state=seed)
    assert np.allclose(spectrum(D(U @ rho.matrix @ U.conj().T)), spectrum(rho), atol=1e-10)


@pytest.mark.parametrize(
    "matrix",
    [
        [[0.5, 0.1], [0.0, 0.5]],
        [[1.2, 0], [0, -0.2]],
        [[0.5, 0], [0, 0.4]],
    ],
)
def test_invalid_density_matrices(matrix):
    with pytest.raises(ValueError):
        D(matrix)


@pytest.mark.parametrize(
    "p, q, expected",
    [
        ([0.3, 0.7], [0.3, 0.7], True),
        ([1, 0], [0.5, 0.5], True),
        ([0.5, 0.5], [1, 0], False),
        ([0.6, 0.3, 0.1], [0.5, 0.4, 0.1], True),
        ([1.0], [0.5, 0.5], True),
    ],
)
def test_majorizes(p, q, expected):
    assert majorizes(p, q) is expected


def test_entropies():
    for d in (2, 3, 5):
        mm = D.maximally_mixed(d)
        assert h_min(mm) == pytest.approx(math.log2(d))
        assert h_zero(mm) == pytest.approx(math.log2(d))
    pure = D.pure([1, 1j, 0])
    assert h_min(pure) == pytest.approx(0, abs=1e-12) and h_zero(pure) == 0
    rho = D.diag([0.75, 0.25])
    assert h_min(rho) == pytest.approx(0.415, abs=5e-4)
    assert h_zero(rho) == 1


@pytest.mark.parametrize(
    "rho, sigma, expected",
    [
        (D.pure([1, 1]), D.diag([0.3, 0.7]), True),
        (D.maximally_mixed(2), D.basis(2, 0), False),
        (D.diag([0.6, 0.3, 0.1]), D.diag([0.5, 0.4, 0.1]), True),
    ],
)
def test_convertible_unital(rho, sigma, expected):
    assert convertible_unital(rho, sigma) is expected


def test_convertible_dimension_mismatch():
    with pytest.raises(ValueError):
        convertible_unital(D.basis(2, 0), D.basis(3, 0))


# --------------------------------------------------------------------------
# Stage I


@pytest.mark.parametrize(
    "d, values",
    [(1, [0.0]), (2, [1.0, 0.0]), (4, [2.0, 1.0, 0.415, 0.0])],
)
def test_stage1_values(d, values):
    C = stage1_currency(d)
    got = sorted(set(round(v, 3) for v in C.values), reverse=True)
    assert got == values
    assert C.check_order().passed and C.check_value().passed and C.check_universality().passed


def test_stage1_uniform_states_are_tight():
    C = stage1_currency(4, targets=[finite([0.5, 0.5, 0, 0], [0, 0, 0.5, 0.5])])
    tight = C.tight_set()
    assert all(e in tight for e in C.elements)
    assert C.target[-1] not in tight


def test_cost_examples():
    assert cost_unital(finite([0.4, 0.3, 0.2, 0.1])) == 1
    assert cost_unital(QuantumSpec.finite([D.maximally_mixed(3), D.basis(3, 0)])) == 0
    assert cost_unital(finite([1, 0], [0, 1])) == 1
    # the floor guard keeps 1/0.5 from rounding down
    assert cost_unital(finite([0.5, 0.5, 0, 0])) == 1


def test_yield_examples():
    assert yield_unital(finite([1, 0], [0, 1])) == 0
    assert yield_unital(QuantumSpec.finite([D.pure([1, 2, 0])])) == pytest.approx(math.log2(3))
    assert yield_unital(finite([1, 0, 0], [0, 1, 0])) == pytest.approx(math.log2(3) - 1)
    for eps in (1e-6, 0.1, 0.9):
        assert yield_unital(QuantumSpec.ball(D.diag([0.98, 0.01, 0.01]), eps)) == 0


def test_currency_cost_agrees_with_closed_form():
    targets = [finite([0.4, 0.3, 0.2, 0.1]), finite([1, 0, 0, 0], [0, 0, 0.5, 0.5]), finite([0.7, 0.3, 0, 0])]
    C = stage1_currency(4, targets=targets)
    for V in targets:
        assert C.cost(V) == pytest.approx(cost_unital(V))
        assert C.yield_(V) == pytest.approx(yield_unital(V))
    assert C.check_conversion_theorem().passed is not False


def random_diag_spec(d, rng, n):
    return QuantumSpec.finite([D.diag(p) for p in rng.dirichlet(np.ones(d) * 0.5, size=n)])


def random_unital_classical(d, rng):
    perms = [np.eye(d)[list(p)] for p in permutations(range(d))]
    w = rng.dirichlet(np.ones(len(perms)))
    return sum(wi * P for wi, P in zip(w, perms))


@pytest.mark.parametrize("seed", range(20))
def test_cost_yield_monotone_under_channels(seed):
    rng = np.random.default_rng(seed)
    d = int(rng.integers(2, 5))
    V = random_diag_spec(d, rng, int(rng.integers(1, 4)))
    M = random_unital_classical(d, rng)
    image = QuantumSpec.finite([D.diag(M @ s.diagonal) for s in V.states])
    assert cost_unital(image) <= cost_unital(V) + 1e-12
    assert yield_unital(image) <= yield_unital(V) + 1e-12
    assert cost_unital(V) >= yield_unital(V)
    assert UnitalTheory(d).reaches(V, image) is not Truth.FALSE


@pytest.mark.parametrize("seed", range(10))
def test_hull_invariance(seed):
    rng = np.random.default_rng(seed)
    V = random_diag_spec(3, rng, 3)
    H = QuantumSpec.hull(V)
    assert yield_unital(H) == yield_unital(V)
    assert cost_unital(H) <= cost_unital(V)
    assert QuantumSpec.hull(H).states == V.states


def test_hull_cost_can_be_lower():
    V = finite([1, 0], [0, 1])
    assert cost_unital(V) == 1
    assert cost_unital(QuantumSpec.hull(V)) == 0


def test_commuting_hull_in_rotated_basis():
    U = unitary_group.rvs(3, random_state=1)
    rot = [D(U @ np.diag(p) @ U.conj().T) for p in ([1, 0, 0], [0, 1, 0])]
    assert cost_unital(QuantumSpec.hull(rot)) == pytest.approx(math.log2(3) - 1)


def test_noncommuting_hull_is_unsupported():
    V = QuantumSpec.hull([D.basis(2, 0), D.pure([1, 1])])
    with pytest.raises(UnsupportedRepresentation):
        cost_unital(V)


def test_quantum_ball_is_unsupported():
    with pytest.raises(UnsupportedRepresentation):
        cost_unital(QuantumSpec.ball(D.pure([1, 1]), 0.1))


# --------------------------------------------------------------------------
# smoothing


def test_h_min_eps_examples():
    assert h_min_eps([0.9, 0.1], 0) == pytest.approx(h_min(D.diag([0.9, 0.1])))
    assert h_min_eps([0.9, 0.1], 0.2) == pytest.approx(-math.log2(0.7))
    for eps in (0, 0.3, 0.9):
        assert h_min_eps([0.25] * 4, eps) == pytest.approx(2)


@pytest.mark.parametrize("seed", range(20))
def test_h_min_eps_monotone_in_eps(seed):
    rng = np.random.default_rng(seed)
    p = rng.dirichlet(np.ones(int(rng.integers(2, 6))))
    values = [h_min_eps(p, e) for e in np.linspace(0, 0.95, 40)]
    assert all(b >= a - 1e-12 for a, b in zip(values, values[1:]))
    assert values[-1] <= math.log2(len(p)) + 1e-12


def test_ball_cost_uses_smoothing():
    V = QuantumSpec.ball(D.diag([0.9, 0.1]), 0.2)
    # 2**0.515 floors to 1, so smoothing this little does not help a qubit
    assert cost_unital(V) == 1
    assert cost_unital(QuantumSpec.ball(D.diag([0.9, 0.1]), 0.4)) == 0


def test_ball_reachability_from_singleton():
    T = UnitalTheory(2)
    ball = QuantumSpec.ball(D.diag([0.9, 0.1]), 0.05)
    assert T.reaches(QuantumSpec.finite([D.diag([0.8, 0.2])]), ball) is Truth.FALSE
    assert T.reaches(QuantumSpec.finite([D.diag([0.86, 0.14])]), ball) is Truth.TRUE


# --------------------------------------------------------------------------
# alternative currencies


def test_alt_currencies():
    for d in (2, 3, 4):
        C2, C3, rep = alt_currencies(d)
        assert all(rep["equivalent"].values())
        for C in (C2, C3):
            assert C.check_order().passed and C.check_value().passed and C.check_universality().passed
    _, _, rep = alt_currencies(2)
    assert rep["counterexample"] == {"reaches": False, "cost_flat": 0.0, "cost_sets": 1.0}


def test_alt_first_element_is_pure_state():
    C2, _, _ = alt_currencies(3)
    assert C2.elements[0].singleton.close_to(stage1_currency(3).elements[0].singleton)


# --------------------------------------------------------------------------
# Stage II


def test_stage2_examples():
    rho = finite([0.7, 0.3])
    assert stage2_cost(rho, Stage2Layout(8, 2)) == pytest.approx(3 - math.log2(5))
    assert stage2_cost(QuantumSpec.finite([D.maximally_mixed(2)]), Stage2Layout(8, 2)) == 0
    target = 1 - h_min(D.diag([0.7, 0.3]))
    # floor(64 / 1.4) = 45, so dW = 64 is still 0.023 bits away; 128 is the first power within 0.01
    assert stage2_cost(rho, Stage2Layout(64, 2)) == pytest.approx(6 - math.log2(45))
    assert abs(stage2_cost(rho, Stage2Layout(64, 2)) - target) > 0.01
    assert abs(stage2_cost(rho, Stage2Layout(128, 2)) - target) <= 0.01


def test_stage2_layout_error():
    with pytest.raises(ValueError):
        Stage2Layout(2, 4)


@pytest.mark.parametrize("lam", [0.55, 0.7, 0.9, 0.99])
def test_stage2_sandwich_and_convergence(lam):
    rho = finite([lam, 1 - lam])
    hmin = -math.log2(lam)
    prev_gap = math.inf
    for dW in (2, 4, 8, 16, 32, 64, 128, 256):
        c = stage2_cost(rho, Stage2Layout(dW, 2))
        assert 1 - hmin - 1e-12 <= c <= math.log2(2 / math.floor(2**hmin + 1e-12)) + 1e-12
        gap = c - (1 - hmin)
        assert gap <= prev_gap + 1e-12
        prev_gap = gap


def test_stage2_yield():
    layout = Stage2Layout(8, 2)
    assert stage2_yield(finite([1, 0]), layout) == 1
    assert stage2_yield(finite([1, 0], [0, 1]), layout) == 0
    # dS does not divide dW * d_eff: the exact yield sits below log dS - H_0
    odd = Stage2Layout(4, 3)
    V = QuantumSpec.finite([D.basis(3, 0)])
    assert stage2_yield(V, odd) == pytest.approx(2 - math.log2(2))
    assert stage2_yield(V, odd) < math.log2(3)


def test_stage2_currency_checks():
    targets = [finite([0.7, 0.3]), finite([1, 0], [0, 1]), QuantumSpec.finite([D.maximally_mixed(2)])]
    C = stage2_currency(Stage2Layout(8, 2), targets)
    for rep in (C.check_order(), C.check_value(), C.check_universality(), C.check_independence()):
        assert rep.passed is True, rep.to_dict()
    for V, T in zip(C.target[1:], targets):
        assert C.cost(V) == pytest.approx(stage2_cost(T, Stage2Layout(8, 2)))
        assert C.yield_(V) == pytest.approx(stage2_yield(T, Stage2Layout(8, 2)))


def test_d_eff():
    assert d_eff(finite([1, 0, 0], [0.5, 0.5, 0])) == 2
    assert d_eff(QuantumSpec.omega(3)) == 3
    assert d_eff(QuantumSpec.ball(D.basis(3, 0), 0.0)) == 1
