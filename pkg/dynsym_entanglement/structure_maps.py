#!/usr/bin/env python3

"""Qutrit <-> two-qubit Clebsch-Gordan maps and the named state fixtures.

Spin-1 basis order is |1>, |0>, |-1>; qubit basis order is up, down. The
embedding sends |1> -> |up up>, |0> -> (|up down> + |down up>)/sqrt 2,
|-1> -> |down down> with all plus signs.
"""

from dataclasses import dataclass

import numpy as np

from dynsym_entanglement.errors import ParseError, ShapeError
from dynsym_entanglement.hilbert_core import HilbertShape, StateVector, require_normalized
from dynsym_entanglement.lie_observables import PAULI, SPIN1
from dynsym_entanglement.slocc_measures import concurrence

SQRT2 = np.sqrt(2.0)
TWO_QUBITS = HilbertShape((2, 2))

EMBEDDING = np.array([
    [1, 0, 0],
    [0, 1 / SQRT2, 0],
    [0, 1 / SQRT2, 0],
    [0, 0, 1],
], dtype=np.complex128)

SWAP = np.array([
    [1, 0, 0, 0],
    [0, 0, 1, 0],
    [0, 1, 0, 0],
    [0, 0, 0, 1],
], dtype=np.complex128)

# total spin (sigma_i x 1 + 1 x sigma_i) / 2 in the same axis order as SPIN1
TOTAL_SPIN = {
    name: (np.kron(PAULI[axis], np.eye(2)) + np.kron(np.eye(2), PAULI[axis])) / 2
    for name, axis in (("Sx", "x"), ("Sy", "y"), ("Sz", "z"))
}


@dataclass
class EmbeddingReport:
    input: StateVector
    output: StateVector
    concurrence_of_image: float


def _require_qutrit(psi):
    if psi.dims != (3,):
        raise ShapeError("Expected a single qutrit, got shape {}".format(list(psi.dims)))


def embed(psi):
    _require_qutrit(psi)
    return StateVector(TWO_QUBITS, EMBEDDING @ psi.amplitudes,
                       unnormalized=psi.unnormalized, label=psi.label)


def qutrit_to_two_qubits(psi):
    _require_qutrit(psi)
    require_normalized(psi)
    image = embed(psi)
    return EmbeddingReport(input=psi, output=image, concurrence_of_image=concurrence(image))


def swap_sites(psi):
    if psi.dims != (2, 2):
        raise ShapeError("swap_sites needs two qubits, got {}".format(list(psi.dims)))
    return StateVector(psi.shape, SWAP @ psi.amplitudes, unnormalized=psi.unnormalized)


def antisymmetric_state():
    return StateVector(TWO_QUBITS, np.array([0, 1, -1, 0]) / SQRT2, label="antisym")


def biphoton_basis():
    """Polarization states |x,x>, (|x,y>+|y,x>)/sqrt 2, |y,y> with x -> up, y -> down."""
    return {
        "1": StateVector(TWO_QUBITS, EMBEDDING[:, 0], label="biphoton:1"),
        "0": StateVector(TWO_QUBITS, EMBEDDING[:, 1], label="biphoton:0"),
        "-1": StateVector(TWO_QUBITS, EMBEDDING[:, 2], label="biphoton:-1"),
    }


def spin_intertwining_check(psi):
    """max_i || embed(S_i psi) - J_i embed(psi) || over the three axes."""
    _require_qutrit(psi)
    image = EMBEDDING @ psi.amplitudes
    return max(float(np.linalg.norm(EMBEDDING @ (SPIN1[name] @ psi.amplitudes)
                                    - TOTAL_SPIN[name] @ image))
               for name in SPIN1)


def _state(amplitudes, dims, label):
    return StateVector.from_amplitudes(amplitudes, dims=dims, normalize=True, label=label)


def _spin1(amplitudes, label):
    return _state(amplitudes, (3,), label)


FIXTURES = {
    "spin1:1": lambda: _spin1([1, 0, 0], "spin1:1"),
    "spin1:0": lambda: _spin1([0, 1, 0], "spin1:0"),
    "spin1:-1": lambda: _spin1([0, 0, 1], "spin1:-1"),
    "spin1:+": lambda: _spin1([1, 0, 1], "spin1:+"),
    "spin1:-": lambda: _spin1([1, 0, -1], "spin1:-"),
    # isotriplet pi+ = |1>, pi0 = |0>, pi- = |-1>
    "pion:+": lambda: _spin1([1, 0, 0], "pion:+"),
    "pion:0": lambda: _spin1([0, 1, 0], "pion:0"),
    "pion:-": lambda: _spin1([0, 0, 1], "pion:-"),
    "biphoton:0": lambda: biphoton_basis()["0"],
    "bell:phi+": lambda: _state([1, 0, 0, 1], (2, 2), "bell:phi+"),
    "bell:psi+": lambda: _state([0, 1, 1, 0], (2, 2), "bell:psi+"),
    "antisym": antisymmetric_state,
    "ghz": lambda: _state([1, 0, 0, 0, 0, 0, 0, 1], (2, 2, 2), "ghz"),
    "w": lambda: _state([0, 1, 1, 0, 1, 0, 0, 0], (2, 2, 2), "w"),
    "bisep:001+010": lambda: _state([0, 1, 1, 0, 0, 0, 0, 0], (2, 2, 2), "bisep:001+010"),
    "product:000": lambda: _state([1, 0, 0, 0, 0, 0, 0, 0], (2, 2, 2), "product:000"),
}

FIXTURE_NAMES = tuple(FIXTURES)


def fixture(name):
    try:
        return FIXTURES[name]()
    except KeyError:
        raise ParseError("Unknown fixture '{}', known: {}".format(
            name, ", ".join(FIXTURE_NAMES))) from None
