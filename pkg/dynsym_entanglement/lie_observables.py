#!/usr/bin/env python3

"""Observable bases of the Lie algebra of a dynamic symmetry group.

Sets keep the physics normalization of Pauli, spin-1 and Gell-Mann matrices:
the basis is orthogonal with one common Hilbert-Schmidt norm per set, not
orthonormal. Total variances are therefore comparable only within one set
convention; with Pauli matrices two qubits have Casimir 6.
"""

from dataclasses import dataclass
import logging
import re

import numpy as np

from dynsym_entanglement.errors import ObservableSetError
from dynsym_entanglement.hilbert_core import HilbertShape, Operator, lift_local

HERMITIAN_TOL = 1e-12
HS_TOL = 1e-10
CASIMIR_TOL = 1e-10

# lifted sets are stored as dense full-space matrices: len(set) * dim**2 entries
MAX_DENSE_ENTRIES = 2 ** 24

SQRT2 = np.sqrt(2.0)

PAULI = {
    "x": np.array([[0, 1], [1, 0]], dtype=np.complex128),
    "y": np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    "z": np.array([[1, 0], [0, -1]], dtype=np.complex128),
}

# basis order |1>, |0>, |-1>
SPIN1 = {
    "Sx": np.array([[0, 1, 0], [1, 0, 1], [0, 1, 0]], dtype=np.complex128) / SQRT2,
    "Sy": 1j * np.array([[0, -1, 0], [1, 0, -1], [0, 1, 0]], dtype=np.complex128) / SQRT2,
    "Sz": np.diag([1, 0, -1]).astype(np.complex128),
}

GELL_MANN = [
    np.array([[0, 1, 0], [1, 0, 0], [0, 0, 0]], dtype=np.complex128),
    np.array([[0, -1j, 0], [1j, 0, 0], [0, 0, 0]], dtype=np.complex128),
    np.array([[1, 0, 0], [0, -1, 0], [0, 0, 0]], dtype=np.complex128),
    np.array([[0, 0, 1], [0, 0, 0], [1, 0, 0]], dtype=np.complex128),
    np.array([[0, 0, -1j], [0, 0, 0], [1j, 0, 0]], dtype=np.complex128),
    np.array([[0, 0, 0], [0, 0, 1], [0, 1, 0]], dtype=np.complex128),
    np.array([[0, 0, 0], [0, 0, -1j], [0, 1j, 0]], dtype=np.complex128),
    np.diag([1, 1, -2]).astype(np.complex128) / np.sqrt(3.0),
]


@dataclass(frozen=True, eq=False)
class Observable:
    matrix: Operator
    site: object = None
    label: str = ""

    def __post_init__(self):
        if not isinstance(self.matrix, Operator):
            object.__setattr__(self, "matrix", Operator(self.matrix))
        if not self.matrix.is_hermitian(HERMITIAN_TOL):
            raise ObservableSetError("Observable {} is not Hermitian".format(self.label or "?"))


@dataclass(frozen=True, eq=False)
class ObservableSet:
    """Orthogonal, uniformly scaled basis of observables on one Hilbert space.

    casimir_scalar is attached only when sum X_i^2 acts as that scalar; on the
    subspace given by casimir_support when a support projector is present.
    """
    shape: HilbertShape
    observables: tuple
    casimir_scalar: object = None
    casimir_support: object = None
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "observables", tuple(self.observables))
        validate_basis(self.shape, self.observables)
        if self.casimir_scalar is not None:
            defect = casimir_defect(self, self.casimir_scalar)
            if defect >= CASIMIR_TOL:
                raise ObservableSetError(
                    "Casimir scalar {} does not hold for set {} (defect {:.3g})".format(
                        self.casimir_scalar, self.name or "?", defect))

    def __len__(self):
        return len(self.observables)

    def __iter__(self):
        return iter(self.observables)

    @property
    def labels(self):
        return [x.label for x in self.observables]

    def matrices(self):
        return np.array([x.matrix.entries for x in self.observables])


def validate_basis(shape, observables):
    if not observables:
        raise ObservableSetError("Observable set is empty")
    for x in observables:
        if x.matrix.dim != shape.dim:
            raise ObservableSetError("Observable {} has dim {}, shape needs {}".format(
                x.label, x.matrix.dim, shape.dim))
    matrices = np.array([x.matrix.entries for x in observables])
    # Tr(X_i X_j) for Hermitian X equals the HS product
    gram = np.einsum("iab,jba->ij", matrices, matrices).real
    off_diagonal = gram - np.diag(np.diagonal(gram))
    if np.abs(off_diagonal).max(initial=0.0) >= HS_TOL:
        i, j = np.unravel_index(np.abs(off_diagonal).argmax(), gram.shape)
        raise ObservableSetError("Observables {} and {} are not orthogonal: Tr = {:.3g}".format(
            observables[i].label, observables[j].label, gram[i, j]))
    norms = np.diagonal(gram)
    if norms.max() - norms.min() >= HS_TOL:
        raise ObservableSetError("Observables have unequal HS norms {}".format(norms))


def casimir_operator(obs_set):
    matrices = obs_set.matrices()
    return Operator(np.einsum("iab,ibc->ac", matrices, matrices))


def casimir_defect(obs_set, scalar):
    c = casimir_operator(obs_set).entries - scalar * np.eye(obs_set.shape.dim)
    if obs_set.casimir_support is not None:
        p = obs_set.casimir_support.entries
        c = p @ c @ p
    return float(np.abs(c).max())


def _scalar_casimir(matrices, dim):
    c = np.einsum("iab,ibc->ac", matrices, matrices)
    scalar = np.trace(c).real / dim
    if np.abs(c - scalar * np.eye(dim)).max() < CASIMIR_TOL:
        return float(scalar)
    return None


def _check_dense_size(count, shape, name):
    entries = count * shape.dim ** 2
    if entries > MAX_DENSE_ENTRIES:
        raise ObservableSetError(
            "Set {} needs {} dense matrix entries, the limit is {}".format(
                name, entries, MAX_DENSE_ENTRIES))


def pauli_set(n_sites):
    """Pauli matrices of every qubit; at most 9 sites fit the dense limit."""
    if n_sites < 1:
        raise ObservableSetError("pauli_set needs at least one site, got {}".format(n_sites))
    shape = HilbertShape((2,) * n_sites)
    _check_dense_size(3 * n_sites, shape, "pauli:{}".format(n_sites))
    observables = []
    for site in range(n_sites):
        for axis, matrix in PAULI.items():
            observables.append(Observable(lift_local(Operator(matrix), site, shape), site,
                                          "s{}[{}]".format(axis, site)))
    return ObservableSet(shape, observables, casimir_scalar=3.0 * n_sites,
                         name="pauli:{}".format(n_sites))


def spin1_set():
    shape = HilbertShape((3,))
    observables = [Observable(Operator(m), 0, label) for label, m in SPIN1.items()]
    return ObservableSet(shape, observables, casimir_scalar=2.0, name="spin1")


def gell_mann_set():
    shape = HilbertShape((3,))
    observables = [Observable(Operator(m), 0, "l{}".format(a + 1)) for a, m in enumerate(GELL_MANN)]
    return ObservableSet(shape, observables, casimir_scalar=16.0 / 3.0, name="su3")


def _embedded_pauli(lower, upper):
    # levels are 1-based, |1> is index 0 of an atom
    a, b = lower - 1, upper - 1
    sx = np.zeros((3, 3), dtype=np.complex128)
    sx[b, a] = sx[a, b] = 1
    sy = np.zeros((3, 3), dtype=np.complex128)
    sy[b, a] = -1j
    sy[a, b] = 1j
    sz = np.zeros((3, 3), dtype=np.complex128)
    sz[b, b] = 1
    sz[a, a] = -1
    return {"x": sx, "y": sy, "z": sz}


def two_level_pair_set(levels, n_atoms=2):
    """Pauli operators of each atom on one pair of its three levels.

    On the full space sum X_i^2 is not scalar; the Casimir 3*n_atoms holds on
    the pair x pair subspace, which is stored as casimir_support.
    """
    levels = tuple(int(level) for level in levels)
    if len(levels) != 2 or levels[0] == levels[1] or not set(levels) <= {1, 2, 3}:
        raise ObservableSetError("Invalid level pair {}, need two distinct of 1, 2, 3".format(
            levels))
    lower, upper = sorted(levels)
    shape = HilbertShape((3,) * n_atoms)
    _check_dense_size(3 * n_atoms, shape, "pair:{}{}".format(lower, upper))
    observables = []
    for site in range(n_atoms):
        for axis, matrix in _embedded_pauli(lower, upper).items():
            observables.append(Observable(
                lift_local(Operator(matrix), site, shape), site,
                "s{}^({}{})[{}]".format(axis, lower, upper, site)))
    local_projector = np.zeros((3, 3), dtype=np.complex128)
    local_projector[lower - 1, lower - 1] = local_projector[upper - 1, upper - 1] = 1
    support = np.array([[1.0 + 0j]])
    for _ in range(n_atoms):
        support = np.kron(support, local_projector)
    return ObservableSet(shape, observables, casimir_scalar=3.0 * n_atoms,
                         casimir_support=Operator(support),
                         name="pair:{}{}".format(lower, upper))


def custom_set(matrices, shape, labels=None, name=""):
    if not isinstance(shape, HilbertShape):
        shape = HilbertShape(shape)
    arrays = [m.entries if isinstance(m, Operator) else np.asarray(m, dtype=np.complex128)
              for m in matrices]
    labels = labels or ["X{}".format(i + 1) for i in range(len(arrays))]
    observables = [Observable(Operator(m), None, label) for m, label in zip(arrays, labels)]
    validate_basis(shape, observables)
    scalar = _scalar_casimir(np.array(arrays), shape.dim)
    if scalar is None:
        logging.info("Set {} has no scalar Casimir, treated as reducible".format(name or "?"))
    return ObservableSet(shape, observables, casimir_scalar=scalar, name=name)


def remix(obs_set, orthogonal):
    """New basis X'_i = sum_j O_ij X_j for a real orthogonal O."""
    orthogonal = np.asarray(orthogonal, dtype=float)
    n = len(obs_set)
    if orthogonal.shape != (n, n):
        raise ObservableSetError("Mixing matrix must be {0}x{0}".format(n))
    if np.abs(orthogonal @ orthogonal.T - np.eye(n)).max() > 1e-10:
        raise ObservableSetError("Mixing matrix is not orthogonal")
    mixed = np.einsum("ij,jab->iab", orthogonal, obs_set.matrices())
    observables = [Observable(Operator(m), None, "{}'".format(i + 1)) for i, m in enumerate(mixed)]
    return ObservableSet(obs_set.shape, observables, casimir_scalar=obs_set.casimir_scalar,
                         casimir_support=obs_set.casimir_support, name="")


SET_ID_PATTERN = re.compile(r"^(pauli:(?P<n>\d+)|spin1|su3|pair:(?P<a>[123])(?P<b>[123]))$")


def parse_set_id(text):
    match = SET_ID_PATTERN.match(text.strip())
    if match is None:
        raise ObservableSetError(
            "Unknown observable set '{}', use pauli:<n>, spin1, su3 or pair:<a><b>".format(text))
    if match.group("n") is not None:
        return pauli_set(int(match.group("n")))
    if match.group("a") is not None:
        return two_level_pair_set((int(match.group("a")), int(match.group("b"))))
    return spin1_set() if text.strip() == "spin1" else gell_mann_set()
