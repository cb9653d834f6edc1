#!/usr/bin/env python3

"""State files and simulation parameter files.

A state file is JSON:
    {"format_version": 1, "dims": [2, 2], "amplitudes": [[re, im], ...],
     "label": "...", "unnormalized": false}
with amplitudes in the last-index-fastest order of hilbert_core.
"""

from configparser import ConfigParser, Error as ConfigError
import json
import logging
import os

import numpy as np

from dynsym_entanglement.errors import ParseError, QdsysError
from dynsym_entanglement.hilbert_core import HilbertShape, StateVector
from dynsym_entanglement.stabilization_sim import LambdaParams
from dynsym_entanglement.structure_maps import FIXTURES, fixture

FORMAT_VERSION = 1


def state_to_dict(psi):
    payload = {
        "format_version": FORMAT_VERSION,
        "dims": list(psi.dims),
        "amplitudes": [[float(a.real), float(a.imag)] for a in psi.amplitudes],
    }
    if psi.label:
        payload["label"] = psi.label
    if psi.unnormalized:
        payload["unnormalized"] = True
    return payload


def state_from_dict(payload):
    try:
        version = payload.get("format_version", FORMAT_VERSION)
        if version != FORMAT_VERSION:
            raise ParseError("Unsupported state file format_version {}".format(version))
        dims = [int(d) for d in payload["dims"]]
        pairs = np.asarray(payload["amplitudes"], dtype=float)
        if pairs.ndim != 2 or pairs.shape[1] != 2:
            raise ParseError("Amplitudes must be a list of [re, im] pairs")
        amplitudes = pairs[:, 0] + 1j * pairs[:, 1]
        return StateVector(HilbertShape(dims), amplitudes,
                           unnormalized=bool(payload.get("unnormalized", False)),
                           label=str(payload.get("label", "")))
    except QdsysError:
        raise
    except (KeyError, TypeError, ValueError, AttributeError) as e:
        raise ParseError("Malformed state file: {}".format(e)) from None


def write_state(psi, path):
    with open(path, "w") as f:
        json.dump(state_to_dict(psi), f, indent=1)
        f.write("\n")
    logging.info("Wrote state to {}".format(path))


def read_state(path):
    try:
        with open(path) as f:
            payload = json.load(f)
    except OSError as e:
        raise ParseError("Cannot read state file {}: {}".format(path, e)) from None
    except json.JSONDecodeError as e:
        raise ParseError("State file {} is not valid JSON: {}".format(path, e)) from None
    return state_from_dict(payload)


def load_state(name_or_path):
    """A fixture name like 'ghz' or the path of a state file."""
    if name_or_path in FIXTURES:
        return fixture(name_or_path)
    if not os.path.exists(name_or_path):
        raise ParseError("'{}' is neither a fixture nor an existing state file".format(
            name_or_path))
    return read_state(name_or_path)


def read_params(configs, path=None, **overrides):
    """LambdaParams from the [Stabilization] defaults, a params file and overrides."""
    merged = ConfigParser()
    merged.read_dict({"Stabilization": dict(configs["Stabilization"])})
    if path is not None:
        user = ConfigParser()
        try:
            if not user.read(path):
                raise ParseError("Cannot read params file {}".format(path))
        except ConfigError as e:
            raise ParseError("Params file {} is malformed: {}".format(path, e)) from None
        if not user.has_section("Stabilization"):
            raise ParseError("Params file {} has no [Stabilization] section".format(path))
        for key, value in user["Stabilization"].items():
            merged["Stabilization"][key] = value
    return LambdaParams.from_section(merged["Stabilization"], **overrides)
