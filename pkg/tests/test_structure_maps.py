import numpy as np
import pytest
from scipy.linalg import expm

from dynsym_entanglement.errors import ParseError, ShapeError
from dynsym_entanglement.hilbert_core import StateVector, random_state
from dynsym_entanglement.lie_observables import SPIN1, gell_mann_set, pauli_set, spin1_set
from dynsym_entanglement.slocc_measures import concurrence
from dynsym_entanglement.structure_maps import (
    EMBEDDING, FIXTURE_NAMES, antisymmetric_state, biphoton_basis, embed, fixture,
    qutrit_to_two_qubits, spin_intertwining_check, swap_sites)
from dynsym_entanglement.variance_ce import ce_check, find_ce


def test_embedding_is_an_isometry():
    assert np.abs(EMBEDDING.conj().T @ EMBEDDING - np.eye(3)).max() < 1e-15


def test_embedding_preserves_inner_products(rng):
    for _ in range(100):
        a, b = random_state((3,), rng), random_state((3,), rng)
        before = np.vdot(a.amplitudes, b.amplitudes)
        after = np.vdot(embed(a).amplitudes, embed(b).amplitudes)
        assert abs(after - before) < 1e-12


def test_spin_zero_maps_to_bell_state():
    report = qutrit_to_two_qubits(fixture("spin1:0"))
    assert np.abs(report.output.amplitudes - fixture("bell:psi+").amplitudes).max() < 1e-15
    assert abs(report.concurrence_of_image - 1.0) < 1e-12


def test_concurrence_of_images():
    assert qutrit_to_two_qubits(fixture("spin1:1")).concurrence_of_image < 1e-15
    assert abs(qutrit_to_two_qubits(fixture("spin1:+")).concurrence_of_image - 1.0) < 1e-12


def test_images_are_swap_symmetric(rng):
    psi = embed(random_state((3,), rng))
    assert np.abs(swap_sites(psi).amplitudes - psi.amplitudes).max() < 1e-15
    antisym = antisymmetric_state()
    assert np.abs(swap_sites(antisym).amplitudes + antisym.amplitudes).max() < 1e-15
    assert abs(concurrence(antisym) - 1.0) < 1e-12


def test_embedding_intertwines_spin(rng):
    for _ in range(100):
        assert spin_intertwining_check(random_state((3,), rng)) < 1e-12


def test_spin1_ce_states_map_to_two_qubit_ce_states():
    psi = find_ce(spin1_set(), n_starts=4, seed=1)
    assert ce_check(spin1_set(), psi)[0]
    assert ce_check(pauli_set(2), embed(psi))[0]


def test_biphoton_zero_is_bell_psi_plus():
    basis = biphoton_basis()
    assert set(basis) == {"1", "0", "-1"}
    assert np.abs(basis["0"].amplitudes - fixture("biphoton:0").amplitudes).max() == 0


def test_embed_needs_a_qutrit():
    with pytest.raises(ShapeError):
        embed(fixture("bell:phi+"))


def test_fixtures():
    for name in ("spin1:0", "spin1:+", "spin1:-", "biphoton:0", "bell:phi+", "ghz", "w",
                 "pion:0"):
        assert name in FIXTURE_NAMES
        assert fixture(name).is_normalized()
    assert np.array_equal(fixture("pion:0").amplitudes, fixture("spin1:0").amplitudes)
    with pytest.raises(ParseError):
        fixture("nope")


@pytest.mark.parametrize("name", ["spin1:0", "spin1:+", "spin1:-"])
def test_ce_depends_on_the_observables(name):
    psi = fixture(name)
    assert ce_check(spin1_set(), psi)[0]
    is_ce, residual = ce_check(gell_mann_set(), psi)
    assert not is_ce
    assert residual >= 4.0 / 3.0 - 1e-6


def test_rotated_top_states_have_product_images(rng):
    for _ in range(100):
        axis = rng.normal(size=3)
        axis = axis / np.linalg.norm(axis)
        generator = sum(a * SPIN1[name] for a, name in zip(axis, ("Sx", "Sy", "Sz")))
        rotation = expm(-1j * rng.uniform(0, 2 * np.pi) * generator)
        psi = StateVector(fixture("spin1:1").shape, rotation @ fixture("spin1:1").amplitudes)
        assert qutrit_to_two_qubits(psi).concurrence_of_image < 1e-9
