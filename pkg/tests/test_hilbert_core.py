import numpy as np
import pytest

from dynsym_entanglement.errors import (
    DimensionMismatchError, NormalizationError, ShapeError, SiteError)
from dynsym_entanglement.hilbert_core import (
    HilbertShape, Operator, StateVector, basis_state, expectation, lift_local,
    local_unitary_conjugate, random_state, random_unitary, reduced_density, tensor_product)

SIGMA_Z = Operator(np.diag([1.0, -1.0]))


def test_last_index_varies_fastest():
    psi = basis_state((2, 3), (1, 2))
    assert psi.amplitudes[5] == 1
    assert psi.tensor()[1, 2] == 1


def test_shape_rejects_trivial_sites():
    with pytest.raises(ShapeError):
        HilbertShape((2, 1))
    with pytest.raises(ShapeError):
        HilbertShape(())


def test_unnormalized_state_needs_flag():
    with pytest.raises(NormalizationError):
        StateVector(HilbertShape((2,)), [1.0, 1.0])
    psi = StateVector(HilbertShape((2,)), [1.0, 1.0], unnormalized=True)
    assert abs(psi.norm_sq - 2.0) < 1e-15
    assert psi.normalized().is_normalized()


def test_amplitude_count_must_match_shape():
    with pytest.raises(DimensionMismatchError):
        StateVector(HilbertShape((2, 2)), [1.0, 0.0, 0.0])


def test_lift_local_acts_on_one_site():
    psi = basis_state((2, 2), (0, 1))
    shape = psi.shape
    assert abs(expectation(lift_local(SIGMA_Z, 0, shape), psi) - 1) < 1e-15
    assert abs(expectation(lift_local(SIGMA_Z, 1, shape), psi) + 1) < 1e-15


def test_lift_local_errors():
    shape = HilbertShape((2, 3))
    with pytest.raises(SiteError):
        lift_local(SIGMA_Z, 2, shape)
    with pytest.raises(DimensionMismatchError):
        lift_local(SIGMA_Z, 1, shape)


def test_reduced_density_of_bell_state_is_maximally_mixed():
    bell = StateVector.from_amplitudes([1, 0, 0, 1], dims=(2, 2), normalize=True)
    for site in (0, 1):
        rho = reduced_density(bell, {site}).entries
        assert np.abs(rho - np.eye(2) / 2).max() < 1e-15


def test_reduced_density_keeps_sites_in_order(rng):
    a = random_state((2,), rng)
    b = random_state((3,), rng)
    c = random_state((2,), rng)
    psi = tensor_product(tensor_product(a, b), c)
    rho = reduced_density(psi, {2, 0}).entries
    expected = np.outer(np.kron(a.amplitudes, c.amplitudes),
                        np.kron(a.amplitudes, c.amplitudes).conj())
    assert np.abs(rho - expected).max() < 1e-12


def test_tensor_product_needs_matching_kinds():
    with pytest.raises(TypeError):
        tensor_product(SIGMA_Z, basis_state((2,), (0,)))


def test_random_unitary_and_local_conjugation(rng):
    u = random_unitary(3, rng)
    assert np.abs(u.conj().T @ u - np.eye(3)).max() < 1e-12
    psi = random_state((3, 2), rng)
    image = local_unitary_conjugate(psi, [u, random_unitary(2, rng)])
    assert image.is_normalized(1e-12)
    with pytest.raises(DimensionMismatchError):
        local_unitary_conjugate(psi, [u])


def test_tensor_product_is_associative(rng):
    a, b, c = (random_state((d,), rng) for d in (2, 3, 2))
    left = tensor_product(tensor_product(a, b), c)
    right = tensor_product(a, tensor_product(b, c))
    assert left.dims == right.dims == (2, 3, 2)
    assert np.abs(left.amplitudes - right.amplitudes).max() < 1e-15
    x, y, z = (Operator(random_unitary(d, rng)) for d in (2, 2, 3))
    ops_left = tensor_product(tensor_product(x, y), z).entries
    ops_right = tensor_product(x, tensor_product(y, z)).entries
    assert np.abs(ops_left - ops_right).max() < 1e-15


def test_expectation_of_hermitian_is_real(rng):
    for _ in range(100):
        a = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
        h = Operator(a + a.conj().T)
        value = expectation(h, random_state((2, 3), rng))
        assert abs(value.imag) < 1e-12


def test_reduced_density_of_all_sites_is_the_projector(rng):
    psi = random_state((2, 3, 2), rng)
    rho = reduced_density(psi, [0, 1, 2]).entries
    assert np.abs(rho - np.outer(psi.amplitudes, psi.amplitudes.conj())).max() < 1e-12
