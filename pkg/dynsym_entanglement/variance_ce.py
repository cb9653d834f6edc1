#!/usr/bin/env python3

"""Variances, total variance and completely entangled (CE) states.

A state is CE for a set of basic observables when every expectation
vanishes; with a Casimir scalar C this is the same as total variance C.
find_ce searches for such states by minimizing the residual
sum_i <X_i>^2 over the unit sphere.
"""

from collections import OrderedDict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
import logging

import numpy as np

from dynsym_entanglement.errors import DimensionMismatchError, MissingCasimirError
from dynsym_entanglement.hilbert_core import StateVector, random_state, require_normalized

CROSS_CHECK_TOL = 1e-9
SUPPORT_TOL = 1e-9
ARMIJO = 1e-4
MIN_STEP = 1e-16
MAX_STEP = 10.0

FLOOR_CACHE = OrderedDict()


@dataclass
class VarianceReport:
    per_observable: list
    total: float
    casimir: object
    residual: float
    is_ce: bool
    expectations: list = field(default_factory=list)
    tolerance: float = 1e-8

    def as_dict(self):
        return {
            "per_observable": [{"label": label, "variance": v} for label, v in self.per_observable],
            "total": self.total,
            "casimir": self.casimir,
            "residual": self.residual,
            "is_ce": self.is_ce,
            "tolerance": self.tolerance,
        }


@dataclass
class NotFound:
    best_residual: float
    best_state: object = None
    n_starts: int = 0


def _check(obs_set, psi):
    if obs_set.shape.dim != psi.shape.dim:
        raise DimensionMismatchError("Set {} acts on dim {}, state has dim {}".format(
            obs_set.name or "?", obs_set.shape.dim, psi.shape.dim))
    require_normalized(psi)


def _expectations(matrices, amplitudes):
    applied = matrices @ amplitudes
    values = np.einsum("d,nd->n", amplitudes.conj(), applied).real
    return values, applied


def variance(x, psi):
    if x.matrix.dim != psi.shape.dim:
        raise DimensionMismatchError("Observable {} has dim {}, state has dim {}".format(
            x.label, x.matrix.dim, psi.shape.dim))
    require_normalized(psi)
    applied = x.matrix.entries @ psi.amplitudes
    mean = np.vdot(psi.amplitudes, applied).real
    return max(0.0, float(np.vdot(applied, applied).real - mean ** 2))


def applicable_casimir(obs_set, psi):
    """Casimir scalar valid for psi, None when the set has none or psi leaves its support."""
    if obs_set.casimir_scalar is None:
        return None
    if obs_set.casimir_support is not None:
        p = obs_set.casimir_support.entries
        weight = np.vdot(psi.amplitudes, p @ psi.amplitudes).real
        if abs(weight - 1.0) > SUPPORT_TOL:
            logging.debug("State weight {:.6g} on Casimir support of {}, no Casimir".format(
                weight, obs_set.name))
            return None
    return obs_set.casimir_scalar


def total_variance(obs_set, psi, tol=1e-8):
    _check(obs_set, psi)
    values, applied = _expectations(obs_set.matrices(), psi.amplitudes)
    second_moments = np.einsum("nd,nd->n", applied.conj(), applied).real
    variances = np.maximum(second_moments - values ** 2, 0.0)
    residual = float(values @ values)
    total = float(variances.sum())
    casimir = applicable_casimir(obs_set, psi)
    if casimir is not None and abs(total - (casimir - residual)) > CROSS_CHECK_TOL:
        logging.warning("Total variance {!r} disagrees with Casimir shortcut {!r} for {}".format(
            total, casimir - residual, obs_set.name or "set"))
    return VarianceReport(
        per_observable=list(zip(obs_set.labels, variances.tolist())),
        total=total,
        casimir=casimir,
        residual=residual,
        is_ce=residual < tol,
        expectations=values.tolist(),
        tolerance=tol)


def ce_check(obs_set, psi, tol=1e-8):
    _check(obs_set, psi)
    values, _ = _expectations(obs_set.matrices(), psi.amplitudes)
    return bool(np.abs(values).max() < tol), float(values @ values)


def _residual_and_gradient(matrices, amplitudes):
    values, applied = _expectations(matrices, amplitudes)
    residual = float(values @ values)
    # tangent gradient 4 sum_i <X_i> (X_i psi - <X_i> psi)
    gradient = 4.0 * (values @ applied - residual * amplitudes)
    return residual, gradient


def sphere_descent(matrices, amplitudes, sign=1.0, target=0.0, max_iter=5000, grad_tol=1e-12):
    """Armijo gradient descent of sign*residual on the unit sphere.

    sign=+1 drives towards CE states, sign=-1 towards minimum-variance
    (coherent) states. Returns (amplitudes, residual, iterations).
    """
    psi = amplitudes / np.linalg.norm(amplitudes)
    residual, gradient = _residual_and_gradient(matrices, psi)
    step = 0.1
    iteration = 0
    for iteration in range(max_iter):
        if sign > 0 and residual < target:
            break
        direction = sign * gradient
        slope = np.vdot(direction, direction).real
        if slope < grad_tol ** 2:
            break
        objective = sign * residual
        step = min(2.0 * step, MAX_STEP)
        while step > MIN_STEP:
            trial = psi - step * direction
            trial = trial / np.linalg.norm(trial)
            trial_residual, trial_gradient = _residual_and_gradient(matrices, trial)
            if sign * trial_residual <= objective - ARMIJO * step * slope:
                break
            step = 0.5 * step
        else:
            logging.debug("Line search stalled at residual {!r}".format(residual))
            break
        psi, residual, gradient = trial, trial_residual, trial_gradient
    return psi, residual, iteration


def _starts(obs_set, n_starts, seed):
    """Random unit starts, restricted to the Casimir support when the set has one.

    The observables act within the support, so descent from a start inside
    it never leaves it.
    """
    children = np.random.SeedSequence(seed).spawn(n_starts)
    starts = [random_state(obs_set.shape, np.random.default_rng(child)).amplitudes
              for child in children]
    if obs_set.casimir_support is None:
        return starts
    p = obs_set.casimir_support.entries
    projected = [p @ start for start in starts]
    return [start / np.linalg.norm(start) for start in projected]


def _run_starts(job, starts, workers):
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(job, starts))
    return [job(start) for start in starts]


def find_ce(obs_set, n_starts=32, tol=1e-8, max_iter=5000, seed=None, workers=1):
    """CE state with every |<X_i>| < tol, or NotFound carrying the best residual."""
    matrices = obs_set.matrices()
    # every expectation below tol needs the residual well below tol**2
    target = (0.1 * tol) ** 2

    def job(start):
        return sphere_descent(matrices, start, 1.0, target, max_iter)

    starts = _starts(obs_set, n_starts, seed)
    best = None
    if workers > 1:
        results = _run_starts(job, starts, workers)
    else:
        results = (job(start) for start in starts)
    for index, (psi, residual, iterations) in enumerate(results):
        logging.debug("find_ce start {}: residual {:.3g} after {} iterations".format(
            index, residual, iterations))
        if residual < tol and np.abs(_expectations(matrices, psi)[0]).max() < tol:
            state = StateVector(obs_set.shape, psi / np.linalg.norm(psi),
                                label="ce:{}".format(obs_set.name or "custom"))
            # zero expectations off the support carry no Casimir, skip them
            if obs_set.casimir_scalar is None or applicable_casimir(obs_set, state) is not None:
                return state
            logging.debug("find_ce start {} left the Casimir support".format(index))
        if best is None or residual < best[1]:
            best = (psi, residual)
    logging.info("No CE state for {} in {} starts, best residual {!r}".format(
        obs_set.name or "set", n_starts, best[1]))
    return NotFound(best_residual=best[1],
                    best_state=StateVector(obs_set.shape, best[0] / np.linalg.norm(best[0])),
                    n_starts=n_starts)


def coherent_floor(obs_set, n_starts=8, seed=0, max_iter=5000, cache_size=16, workers=1):
    """Minimum total variance, attained on generalized coherent states."""
    if obs_set.casimir_scalar is None:
        raise MissingCasimirError("Set {} has no Casimir scalar".format(obs_set.name or "?"))
    key = (obs_set.name, n_starts, seed, max_iter)
    if obs_set.name and key in FLOOR_CACHE:
        FLOOR_CACHE.move_to_end(key)
        return FLOOR_CACHE[key]
    matrices = obs_set.matrices()

    def job(start):
        return sphere_descent(matrices, start, -1.0, max_iter=max_iter)

    results = _run_starts(job, _starts(obs_set, n_starts, seed), workers)
    floor = obs_set.casimir_scalar - max(residual for _, residual, _ in results)
    if obs_set.name and cache_size > 0:
        if len(FLOOR_CACHE) >= cache_size:
            FLOOR_CACHE.popitem(last=False)
        FLOOR_CACHE[key] = floor
    return floor


def remoteness(obs_set, psi, n_starts=8, seed=0, cache_size=16):
    """(total - coherent floor) / (Casimir - floor), 0 on coherent and 1 on CE states."""
    report = total_variance(obs_set, psi)
    if report.casimir is None:
        raise MissingCasimirError("Remoteness needs a Casimir scalar valid for this state")
    floor = coherent_floor(obs_set, n_starts=n_starts, seed=seed, cache_size=cache_size)
    span = report.casimir - floor
    if span < 1e-12:
        return 0.0
    return float(np.clip((report.total - floor) / span, 0.0, 1.0))


def test():
    from dynsym_entanglement.lie_observables import spin1_set, gell_mann_set
    for obs_set in (spin1_set(), gell_mann_set()):
        result = find_ce(obs_set, n_starts=4, seed=1)
        print(obs_set.name, result if isinstance(result, NotFound) else result.amplitudes)


if (__name__ == '__main__'):
    test()
