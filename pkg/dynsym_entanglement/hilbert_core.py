#!/usr/bin/env python3

"""Dense complex linear algebra for small tensor-factored Hilbert spaces.

Index convention: amplitudes are stored row-major with the LAST site index
varying fastest, so the coefficient psi_{ijk} of |i>|j>|k> sits at
``i*d1*d2 + j*d2 + k``.
"""

from dataclasses import dataclass, field
from functools import reduce
import logging

import numpy as np

from dynsym_entanglement.errors import (
    DimensionMismatchError, NormalizationError, ShapeError, SiteError)

NORM_TOL = 1e-12


def _frozen(array):
    array = np.array(array, dtype=np.complex128)
    array.flags.writeable = False
    return array


@dataclass(frozen=True)
class HilbertShape:
    dims: tuple

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if not dims:
            raise ShapeError("HilbertShape needs at least one site")
        for d in dims:
            if d < 2:
                raise ShapeError("Local dimension {} is below 2 in {}".format(d, dims))
        object.__setattr__(self, "dims", dims)

    @property
    def dim(self):
        return int(np.prod(self.dims))

    @property
    def n_sites(self):
        return len(self.dims)

    def check_site(self, site):
        if not 0 <= site < self.n_sites:
            raise SiteError("Site {} out of range for shape {}".format(site, self.dims))
        return site

    def __add__(self, other):
        return HilbertShape(self.dims + other.dims)


@dataclass(frozen=True, eq=False)
class Operator:
    entries: np.ndarray

    def __post_init__(self):
        entries = _frozen(self.entries)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise ShapeError("Operator needs a square matrix, got {}".format(entries.shape))
        if not np.all(np.isfinite(entries)):
            raise ValueError("Operator entries must be finite")
        object.__setattr__(self, "entries", entries)

    @property
    def dim(self):
        return self.entries.shape[0]

    def dagger(self):
        return Operator(self.entries.conj().T)

    def is_hermitian(self, tol=NORM_TOL):
        return bool(np.abs(self.entries - self.entries.conj().T).max(initial=0.0) < tol)

    def __matmul__(self, other):
        if isinstance(other, Operator):
            _check_dims(self.dim, other.dim)
            return Operator(self.entries @ other.entries)
        return NotImplemented


@dataclass(frozen=True, eq=False)
class StateVector:
    shape: HilbertShape
    amplitudes: np.ndarray
    unnormalized: bool = False
    label: str = field(default="")

    def __post_init__(self):
        if not isinstance(self.shape, HilbertShape):
            object.__setattr__(self, "shape", HilbertShape(self.shape))
        amplitudes = _frozen(self.amplitudes).reshape(-1)
        if amplitudes.size != self.shape.dim:
            raise DimensionMismatchError("{} amplitudes do not fit shape {}".format(
                amplitudes.size, self.shape.dims))
        if not np.all(np.isfinite(amplitudes)):
            raise ValueError("State amplitudes must be finite")
        object.__setattr__(self, "amplitudes", amplitudes)
        if not self.unnormalized and abs(self.norm_sq - 1.0) > NORM_TOL:
            raise NormalizationError(
                "State has squared norm {!r}; pass unnormalized=True for intermediates".format(
                    self.norm_sq))

    @classmethod
    def from_amplitudes(cls, amplitudes, dims=None, normalize=False, label=""):
        amplitudes = np.asarray(amplitudes, dtype=np.complex128).reshape(-1)
        if dims is None:
            dims = (amplitudes.size,)
        if normalize:
            norm = np.linalg.norm(amplitudes)
            if norm == 0:
                raise NormalizationError("Cannot normalize the zero vector")
            amplitudes = amplitudes / norm
        return cls(HilbertShape(dims), amplitudes, label=label)

    @classmethod
    def from_tensor(cls, tensor, unnormalized=True):
        tensor = np.asarray(tensor, dtype=np.complex128)
        return cls(HilbertShape(tensor.shape), tensor.reshape(-1), unnormalized=unnormalized)

    @property
    def dims(self):
        return self.shape.dims

    @property
    def norm_sq(self):
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    def is_normalized(self, tol=NORM_TOL):
        return abs(self.norm_sq - 1.0) <= tol

    def normalized(self):
        norm = np.sqrt(self.norm_sq)
        if norm == 0:
            raise NormalizationError("Cannot normalize the zero vector")
        return StateVector(self.shape, self.amplitudes / norm, label=self.label)

    def tensor(self):
        """Coefficient tensor psi_{ij...}, one axis per site."""
        return self.amplitudes.reshape(self.dims)


def _check_dims(expected, got):
    if expected != got:
        raise DimensionMismatchError("Dimension mismatch: {} vs {}".format(expected, got))


def require_normalized(psi):
    if not psi.is_normalized():
        raise NormalizationError("Analysis needs a normalized state, squared norm is {!r}".format(
            psi.norm_sq))
    return psi


def tensor_product(a, b):
    if isinstance(a, Operator) and isinstance(b, Operator):
        return Operator(np.kron(a.entries, b.entries))
    if isinstance(a, StateVector) and isinstance(b, StateVector):
        unnormalized = a.unnormalized or b.unnormalized
        return StateVector(a.shape + b.shape, np.kron(a.amplitudes, b.amplitudes),
                           unnormalized=unnormalized)
    raise TypeError("tensor_product needs two Operators or two StateVectors, got {} and {}".format(
        type(a).__name__, type(b).__name__))


def identity(dim):
    return Operator(np.eye(dim, dtype=np.complex128))


def lift_local(op, site, shape):
    shape.check_site(site)
    if op.dim != shape.dims[site]:
        raise DimensionMismatchError("Operator of dim {} cannot act on site {} of shape {}".format(
            op.dim, site, shape.dims))
    factors = [op.entries if j == site else np.eye(d, dtype=np.complex128)
               for j, d in enumerate(shape.dims)]
    return Operator(reduce(np.kron, factors))


def apply(op, psi):
    _check_dims(op.dim, psi.shape.dim)
    return op.entries @ psi.amplitudes


def expectation(op, psi):
    require_normalized(psi)
    return complex(np.vdot(psi.amplitudes, apply(op, psi)))


def reduced_density(psi, keep):
    keep = sorted(set(keep))
    if not keep:
        raise SiteError("reduced_density needs at least one site to keep")
    for site in keep:
        psi.shape.check_site(site)
    rest = [site for site in range(psi.shape.n_sites) if site not in keep]
    kept_dim = int(np.prod([psi.dims[site] for site in keep]))
    matrix = psi.tensor().transpose(keep + rest).reshape(kept_dim, -1)
    rho = matrix @ matrix.conj().T
    # trace is the squared norm, exactly 1 for accepted states
    rho = rho / np.trace(rho).real
    return Operator((rho + rho.conj().T) / 2)


def basis_state(dims, indices, label=""):
    """Computational basis product state, e.g. basis_state((2, 2), (0, 1)) = |01>."""
    shape = HilbertShape(dims)
    amplitudes = np.zeros(shape.dim, dtype=np.complex128)
    amplitudes[np.ravel_multi_index(tuple(indices), shape.dims)] = 1.0
    return StateVector(shape, amplitudes, label=label)


def random_state(shape, rng):
    if not isinstance(shape, HilbertShape):
        shape = HilbertShape(shape)
    amplitudes = rng.normal(size=shape.dim) + 1j * rng.normal(size=shape.dim)
    return StateVector(shape, amplitudes / np.linalg.norm(amplitudes))


def random_unitary(dim, rng):
    # QR of a Ginibre matrix with the phase fix gives Haar measure
    z = (rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    return q * (np.diagonal(r) / np.abs(np.diagonal(r)))


def local_unitary_conjugate(psi, unitaries):
    """(U_0 x U_1 x ...) psi for one unitary per site."""
    if len(unitaries) != psi.shape.n_sites:
        raise DimensionMismatchError("Need {} local unitaries, got {}".format(
            psi.shape.n_sites, len(unitaries)))
    full = reduce(np.kron, [np.asarray(u, dtype=np.complex128) for u in unitaries])
    _check_dims(full.shape[0], psi.shape.dim)
    return StateVector(psi.shape, full @ psi.amplitudes, unnormalized=psi.unnormalized)


def test():
    bell = StateVector.from_amplitudes([1, 0, 0, 1], dims=(2, 2), normalize=True)
    sigma_z = Operator(np.diag([1.0, -1.0]))
    logging.info("<sz x 1> = {}".format(expectation(lift_local(sigma_z, 0, bell.shape), bell)))
    print(reduced_density(bell, {0}).entries)


if (__name__ == '__main__'):
    test()
