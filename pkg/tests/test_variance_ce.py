import numpy as np
import pytest

from dynsym_entanglement.errors import DimensionMismatchError, MissingCasimirError
from dynsym_entanglement.hilbert_core import (
    StateVector, basis_state, local_unitary_conjugate, random_state, random_unitary)
from dynsym_entanglement.lie_observables import (
    custom_set, gell_mann_set, pauli_set, remix, spin1_set, two_level_pair_set)
from dynsym_entanglement.structure_maps import fixture
from dynsym_entanglement.variance_ce import (
    FLOOR_CACHE, NotFound, ce_check, coherent_floor, find_ce, remoteness, total_variance,
    variance)


def test_spin1_zero_state_is_ce():
    report = total_variance(spin1_set(), fixture("spin1:0"))
    assert abs(report.total - 2.0) < 1e-12
    assert report.casimir == 2.0
    assert report.is_ce


def test_spin1_top_state_is_coherent():
    report = total_variance(spin1_set(), fixture("spin1:1"))
    assert abs(report.total - 1.0) < 1e-12
    assert abs(report.residual - 1.0) < 1e-12
    assert not report.is_ce


@pytest.mark.parametrize("name", ["bell:phi+", "bell:psi+"])
def test_bell_states_reach_two_qubit_casimir(name):
    report = total_variance(pauli_set(2), fixture(name))
    assert abs(report.total - 6.0) < 1e-12
    assert report.is_ce


def test_su3_residual_is_constant_on_qutrits(seeded):
    obs_set = gell_mann_set()
    for seed in range(200):
        psi = random_state((3,), seeded(seed))
        report = total_variance(obs_set, psi)
        assert abs(report.residual - 4.0 / 3.0) < 1e-9
        assert abs(report.total - 4.0) < 1e-9


def test_total_variance_matches_casimir_shortcut(rng):
    obs_set = pauli_set(3)
    for _ in range(10):
        psi = random_state(obs_set.shape, rng)
        report = total_variance(obs_set, psi)
        assert abs(report.total - (9.0 - report.residual)) < 1e-9
        per_observable = sum(variance(x, psi) for x in obs_set)
        assert abs(report.total - per_observable) < 1e-9


def test_total_variance_invariant_under_basis_remix(rng):
    q, _ = np.linalg.qr(rng.normal(size=(6, 6)))
    psi = random_state((2, 2), rng)
    original = total_variance(pauli_set(2), psi)
    mixed = total_variance(remix(pauli_set(2), q), psi)
    assert abs(original.total - mixed.total) < 1e-10
    assert abs(original.residual - mixed.residual) < 1e-10


def test_pair_set_casimir_only_on_support():
    obs_set = two_level_pair_set((1, 3))
    qutrit = fixture("spin1:+")
    outside = basis_state((3, 3), (1, 0))
    assert total_variance(obs_set, outside).casimir is None
    psi = basis_state((3, 3), (2, 0))
    assert total_variance(obs_set, psi).casimir == 6.0
    with pytest.raises(DimensionMismatchError):
        total_variance(obs_set, qutrit)


def test_ce_check_uses_max_expectation():
    is_ce, residual = ce_check(pauli_set(3), fixture("ghz"))
    assert is_ce and residual < 1e-20
    is_ce, residual = ce_check(pauli_set(3), fixture("w"))
    assert not is_ce
    # W has <sz> = 1/3 on each qubit
    assert abs(residual - 3.0 / 9.0) < 1e-12


@pytest.mark.parametrize("n_sites", [2, 3])
def test_find_ce_for_qubits(n_sites):
    obs_set = pauli_set(n_sites)
    result = find_ce(obs_set, n_starts=32, seed=0)
    assert not isinstance(result, NotFound)
    is_ce, residual = ce_check(obs_set, result)
    assert is_ce and residual < 1e-8
    assert abs(total_variance(obs_set, result).total - 3.0 * n_sites) < 1e-8


@pytest.mark.parametrize("obs_set", [pauli_set(2), pauli_set(3), spin1_set()],
                         ids=["pauli:2", "pauli:3", "spin1"])
def test_find_ce_meets_tolerance_for_any_seed(obs_set):
    for seed in (1, 2):
        result = find_ce(obs_set, seed=seed)
        assert not isinstance(result, NotFound)
        assert ce_check(obs_set, result, tol=1e-8)[0]


def test_find_ce_pair_set_returns_state_on_support():
    obs_set = two_level_pair_set((1, 3))
    for seed in (0, 1):
        result = find_ce(obs_set, n_starts=8, seed=seed)
        assert not isinstance(result, NotFound)
        p = obs_set.casimir_support.entries
        weight = np.vdot(result.amplitudes, p @ result.amplitudes).real
        assert abs(weight - 1.0) < 1e-12
        report = total_variance(obs_set, result)
        assert report.casimir == 6.0
        assert abs(report.total - 6.0) < 1e-8


def test_find_ce_is_deterministic():
    first = find_ce(spin1_set(), n_starts=4, seed=7)
    second = find_ce(spin1_set(), n_starts=4, seed=7)
    assert np.array_equal(first.amplitudes, second.amplitudes)


def test_find_ce_workers_do_not_change_result():
    serial = find_ce(pauli_set(2), n_starts=4, seed=3)
    pooled = find_ce(pauli_set(2), n_starts=4, seed=3, workers=3)
    assert np.array_equal(serial.amplitudes, pooled.amplitudes)


def test_su3_has_no_ce_state():
    result = find_ce(gell_mann_set(), seed=0)
    assert isinstance(result, NotFound)
    assert abs(result.best_residual - 4.0 / 3.0) < 1e-6


def test_coherent_floors():
    FLOOR_CACHE.clear()
    assert abs(coherent_floor(gell_mann_set(), n_starts=2) - 4.0) < 1e-9
    assert abs(coherent_floor(spin1_set(), n_starts=4) - 1.0) < 1e-6
    assert abs(coherent_floor(pauli_set(2), n_starts=4) - 4.0) < 1e-6
    assert ("pauli:2", 4, 0, 5000) in FLOOR_CACHE


def test_floor_cache_is_bounded():
    FLOOR_CACHE.clear()
    for seed in range(3):
        coherent_floor(pauli_set(1), n_starts=1, seed=seed, cache_size=2)
    assert len(FLOOR_CACHE) == 2
    assert ("pauli:1", 1, 0, 5000) not in FLOOR_CACHE


def test_remoteness_between_coherent_and_ce():
    assert abs(remoteness(pauli_set(2), fixture("bell:phi+"), n_starts=4) - 1.0) < 1e-6
    assert remoteness(pauli_set(2), basis_state((2, 2), (0, 0)), n_starts=4) < 1e-6
    assert remoteness(spin1_set(), fixture("spin1:1"), n_starts=4) < 1e-6


def test_remoteness_needs_casimir():
    z12 = np.diag([1, -1, 0])
    x23 = np.array([[0, 0, 0], [0, 0, 1], [0, 1, 0]])
    reducible = custom_set([z12, x23], (3,))
    with pytest.raises(MissingCasimirError):
        remoteness(reducible, fixture("spin1:0"))
    with pytest.raises(MissingCasimirError):
        coherent_floor(reducible)


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        total_variance(pauli_set(2), fixture("spin1:0"))


@pytest.mark.parametrize("n_sites", [2, 3])
def test_total_variance_invariant_under_local_unitaries_and_phase(seeded, n_sites):
    obs_set = pauli_set(n_sites)
    for seed in range(20):
        rng = seeded(seed)
        psi = random_state(obs_set.shape, rng)
        total = total_variance(obs_set, psi).total
        rotated = local_unitary_conjugate(psi, [random_unitary(2, rng) for _ in range(n_sites)])
        assert abs(total_variance(obs_set, rotated).total - total) < 1e-9
        phased = StateVector(psi.shape, np.exp(1j * rng.uniform(0, 2 * np.pi)) * psi.amplitudes)
        assert abs(total_variance(obs_set, phased).total - total) < 1e-9


@pytest.mark.parametrize("obs_set", [pauli_set(2), pauli_set(3), spin1_set(), gell_mann_set()],
                         ids=["pauli:2", "pauli:3", "spin1", "su3"])
def test_total_variance_bounded_by_casimir(rng, obs_set):
    for _ in range(200):
        report = total_variance(obs_set, random_state(obs_set.shape, rng))
        assert -1e-9 <= report.total <= obs_set.casimir_scalar + 1e-9
        assert abs(report.total - (obs_set.casimir_scalar - report.residual)) < 1e-9


def test_ce_states_reach_casimir():
    cases = [(spin1_set(), "spin1:0"), (spin1_set(), "spin1:+"), (spin1_set(), "spin1:-"),
             (pauli_set(2), "bell:phi+"), (pauli_set(2), "bell:psi+"), (pauli_set(3), "ghz")]
    for seed in range(3):
        cases.append((pauli_set(2), find_ce(pauli_set(2), seed=seed)))
    for obs_set, psi in cases:
        psi = fixture(psi) if isinstance(psi, str) else psi
        is_ce, _ = ce_check(obs_set, psi)
        assert is_ce
        assert abs(total_variance(obs_set, psi).total - obs_set.casimir_scalar) < 1e-8
