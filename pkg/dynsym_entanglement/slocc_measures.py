#!/usr/bin/env python3

"""SLOCC actions and entanglement measures of qubit states.

SLOCC operations are the action of the complexified dynamic group; for qubits
that is one SL(2, C) matrix per site. Measures: concurrence 2|det[psi]|, the
3-tangle 4|Det psi| from the Cayley hyperdeterminant, and the orbit-minimum
measure (squared length of the shortest vector in the closure of the orbit).
"""

from dataclasses import dataclass
import logging

import numpy as np
from scipy.linalg import expm
from scipy.optimize import minimize

from dynsym_entanglement.errors import NormalizationError, ShapeError, SloccError
from dynsym_entanglement.hilbert_core import (
    HilbertShape, StateVector, random_state, reduced_density, require_normalized)
from dynsym_entanglement.lie_observables import PAULI

DET_TOL = 1e-10
SINGULAR_TOL = 1e-12
TANGLE_FLOOR = 1e-14

GHZ = "GHZ"
W = "W"
BISEPARABLE = "biseparable"
SEPARABLE = "completely-separable"
CLASS_LABELS = (GHZ, W, BISEPARABLE, SEPARABLE)


@dataclass(frozen=True, eq=False)
class SloccElement:
    shape: HilbertShape
    locals: tuple

    def __post_init__(self):
        if not isinstance(self.shape, HilbertShape):
            object.__setattr__(self, "shape", HilbertShape(self.shape))
        mats = tuple(np.array(m, dtype=np.complex128) for m in self.locals)
        if len(mats) != self.shape.n_sites:
            raise SloccError("Need {} local factors, got {}".format(self.shape.n_sites, len(mats)))
        for site, (m, d) in enumerate(zip(mats, self.shape.dims)):
            if m.shape != (d, d):
                raise SloccError("Local factor {} has shape {}, site needs {}x{}".format(
                    site, m.shape, d, d))
            det = np.linalg.det(m)
            if abs(det) < SINGULAR_TOL:
                raise SloccError("Local factor {} is not invertible (det {:.3g})".format(
                    site, abs(det)))
            if abs(det - 1.0) > DET_TOL:
                raise SloccError("Local factor {} has det {:.6g}, SLOCC needs det 1".format(
                    site, det))
            m.flags.writeable = False
        object.__setattr__(self, "locals", mats)

    @classmethod
    def from_invertible(cls, shape, matrices):
        if not isinstance(shape, HilbertShape):
            shape = HilbertShape(shape)
        scaled = []
        for site, m in enumerate(matrices):
            m = np.asarray(m, dtype=np.complex128)
            det = np.linalg.det(m)
            if abs(det) < SINGULAR_TOL:
                raise SloccError("Local factor {} is not invertible (det {:.3g})".format(
                    site, abs(det)))
            scaled.append(m / det ** (1.0 / m.shape[0]))
        return cls(shape, tuple(scaled))

    @classmethod
    def identity(cls, shape):
        if not isinstance(shape, HilbertShape):
            shape = HilbertShape(shape)
        return cls(shape, tuple(np.eye(d) for d in shape.dims))

    def condition_number(self):
        return max(np.linalg.cond(m) for m in self.locals)


@dataclass(frozen=True)
class SloccClass:
    label: str
    split: object = None

    def __str__(self):
        if self.split is None:
            return self.label
        single, rest = self.split
        return "{} {{{}}}|{{{}}}".format(self.label, ",".join(map(str, single)),
                                          ",".join(map(str, rest)))


def _act(locals_, tensor):
    for site, m in enumerate(locals_):
        tensor = np.moveaxis(np.tensordot(m, tensor, axes=([1], [site])), 0, site)
    return tensor


def apply_slocc(g, psi, renormalize=False):
    """(g_0 x g_1 x ...) psi; returns (state, norm of the transformed vector)."""
    if g.shape != psi.shape:
        raise ShapeError("SLOCC element for {} applied to state of shape {}".format(
            g.shape.dims, psi.dims))
    amplitudes = _act(g.locals, psi.tensor()).reshape(-1)
    norm = float(np.linalg.norm(amplitudes))
    if renormalize:
        if norm == 0:
            raise NormalizationError("SLOCC image is the zero vector")
        return StateVector(psi.shape, amplitudes / norm, label=psi.label), norm
    return StateVector(psi.shape, amplitudes, unnormalized=True, label=psi.label), norm


def generate_entangled(ce_state, g):
    """psi_E = g psi_CE, renormalized."""
    state, _ = apply_slocc(g, ce_state, renormalize=True)
    return state


def random_slocc_element(shape, rng, max_condition=10.0, scale=0.4):
    """det-1 locals exp(A) with random traceless A, redrawn until well conditioned."""
    if not isinstance(shape, HilbertShape):
        shape = HilbertShape(shape)
    while True:
        mats = []
        for d in shape.dims:
            a = scale * (rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d)))
            a = a - np.trace(a) / d * np.eye(d)
            mats.append(expm(a))
        g = SloccElement.from_invertible(shape, mats)
        if g.condition_number() < max_condition:
            return g


def _require_qubits(psi, n_sites, name):
    if psi.dims != (2,) * n_sites:
        raise ShapeError("{} needs shape {}, got {}".format(name, [2] * n_sites, list(psi.dims)))


def coefficient_determinant(psi):
    _require_qubits(psi, 2, "coefficient_determinant")
    return complex(np.linalg.det(psi.tensor()))


def concurrence(psi):
    _require_qubits(psi, 2, "concurrence")
    require_normalized(psi)
    return float(min(1.0, 2.0 * abs(coefficient_determinant(psi))))


def _cayley(p):
    # Cayley hyperdeterminant expanded term by term
    value = (p[0, 0, 0] ** 2 * p[1, 1, 1] ** 2 + p[0, 0, 1] ** 2 * p[1, 1, 0] ** 2
             + p[0, 1, 0] ** 2 * p[1, 0, 1] ** 2 + p[1, 0, 0] ** 2 * p[0, 1, 1] ** 2)
    value -= 2 * (p[0, 0, 0] * p[0, 0, 1] * p[1, 1, 0] * p[1, 1, 1]
                  + p[0, 0, 0] * p[0, 1, 0] * p[1, 0, 1] * p[1, 1, 1]
                  + p[0, 0, 0] * p[1, 0, 0] * p[0, 1, 1] * p[1, 1, 1]
                  + p[0, 0, 1] * p[0, 1, 0] * p[1, 0, 1] * p[1, 1, 0]
                  + p[0, 0, 1] * p[1, 0, 0] * p[0, 1, 1] * p[1, 1, 0]
                  + p[0, 1, 0] * p[1, 0, 0] * p[0, 1, 1] * p[1, 0, 1])
    value += 4 * (p[0, 0, 0] * p[0, 1, 1] * p[1, 0, 1] * p[1, 1, 0]
                  + p[0, 0, 1] * p[0, 1, 0] * p[1, 0, 0] * p[1, 1, 1])
    return value


def hyperdeterminant(psi, allow_unnormalized=False):
    _require_qubits(psi, 3, "hyperdeterminant")
    if not allow_unnormalized:
        require_normalized(psi)
    return float(abs(_cayley(psi.tensor())))


def three_tangle(psi):
    tau = 4.0 * hyperdeterminant(psi)
    return 0.0 if tau < TANGLE_FLOOR else tau


def classify_three_qubit(psi, tol=1e-9):
    _require_qubits(psi, 3, "classify_three_qubit")
    require_normalized(psi)
    if three_tangle(psi) > tol:
        return SloccClass(GHZ)
    ranks = []
    for site in range(3):
        eigenvalues = np.linalg.eigvalsh(reduced_density(psi, {site}).entries)
        ranks.append(2 if eigenvalues[0] > tol else 1)
    pure_sites = [site for site, rank in enumerate(ranks) if rank == 1]
    if not pure_sites:
        return SloccClass(W)
    if len(pure_sites) == 1:
        site = pure_sites[0]
        rest = tuple(s for s in range(3) if s != site)
        return SloccClass(BISEPARABLE, ((site,), rest))
    if len(pure_sites) == 2:
        logging.warning("Reduced ranks {} are inconsistent for a pure state, "
                        "classified as separable".format(ranks))
    return SloccClass(SEPARABLE)


@dataclass
class NormalForm:
    state: StateVector
    norm_sq: float
    converged: bool
    iterations: int = 0


def sl_normal_form(psi, max_iter=10000, tol=1e-10, collapse_norm=1e-6):
    """Local filtering towards the minimal vector of the SL orbit closure.

    Each site factor is replaced by the det-1 rescaling of rho_k^{-1/2}, which
    makes rho_k maximally mixed and multiplies the squared norm by
    2 sqrt(det rho_k) <= 1. Collapse below collapse_norm marks the null cone.
    """
    n_sites = psi.shape.n_sites
    if psi.dims != (2,) * n_sites:
        raise ShapeError("sl_normal_form needs qubits, got shape {}".format(list(psi.dims)))
    tensor = psi.tensor() / np.sqrt(psi.norm_sq)
    norm_sq = 1.0
    for iteration in range(max_iter):
        worst = 0.0
        for site in range(n_sites):
            moved = np.moveaxis(tensor, site, 0).reshape(2, -1)
            rho = moved @ moved.conj().T / norm_sq
            rho = (rho + rho.conj().T) / 2
            worst = max(worst, float(np.abs(rho - np.eye(2) / 2).max()))
            eigenvalues, vectors = np.linalg.eigh(rho)
            shrink = 2.0 * np.sqrt(max(eigenvalues[0], 0.0) * eigenvalues[1])
            if norm_sq * shrink < collapse_norm:
                logging.debug("Orbit collapsed at iteration {} site {}".format(iteration, site))
                return NormalForm(StateVector.from_tensor(tensor), 0.0, False, iteration)
            # rho^{-1/2} (det rho)^{1/4}
            weights = (eigenvalues.prod() ** 0.25) / np.sqrt(eigenvalues)
            g = (vectors * weights) @ vectors.conj().T
            tensor = np.moveaxis(np.tensordot(g, tensor, axes=([1], [site])), 0, site)
            norm_sq = float(np.vdot(tensor, tensor).real)
        if worst < tol:
            return NormalForm(StateVector.from_tensor(tensor), norm_sq, True, iteration)
    logging.warning("sl_normal_form hit the iteration cap {} at squared norm {!r}".format(
        max_iter, norm_sq))
    return NormalForm(StateVector.from_tensor(tensor), norm_sq, False, max_iter)


def orbit_measure(psi, max_iter=10000, tol=1e-10, collapse_norm=1e-6):
    result = sl_normal_form(psi, max_iter=max_iter, tol=tol, collapse_norm=collapse_norm)
    return result.norm_sq if result.converged else 0.0


def _sl2_from_params(params):
    c = params[:3] + 1j * params[3:]
    return expm(c[0] * PAULI["x"] + c[1] * PAULI["y"] + c[2] * PAULI["z"])


def orbit_minimum_bruteforce(psi, n_starts=8, seed=0, scale=0.5):
    """Direct minimization of ||(g_0 x g_1 x ...) psi||^2 over det-1 locals exp(c . sigma)."""
    n_sites = psi.shape.n_sites
    if psi.dims != (2,) * n_sites:
        raise ShapeError("orbit_minimum_bruteforce needs qubits, got {}".format(list(psi.dims)))
    tensor = psi.tensor() / np.sqrt(psi.norm_sq)

    def objective(x):
        mats = [_sl2_from_params(x[6 * k:6 * k + 6]) for k in range(n_sites)]
        image = _act(mats, tensor)
        return float(np.vdot(image, image).real)

    best = objective(np.zeros(6 * n_sites))
    rng = np.random.default_rng(seed)
    for start in range(n_starts):
        x0 = np.zeros(6 * n_sites) if start == 0 else scale * rng.normal(size=6 * n_sites)
        result = minimize(objective, x0, method="BFGS", options={"gtol": 1e-10})
        best = min(best, float(result.fun))
    return best


def test():
    ghz = StateVector.from_amplitudes([1, 0, 0, 0, 0, 0, 0, 1], dims=(2, 2, 2), normalize=True)
    w = StateVector.from_amplitudes([0, 1, 1, 0, 1, 0, 0, 0], dims=(2, 2, 2), normalize=True)
    for psi in (ghz, w):
        print(three_tangle(psi), classify_three_qubit(psi), orbit_measure(psi))
    print(random_state((2, 2), np.random.default_rng(0)).amplitudes)


if (__name__ == '__main__'):
    test()
