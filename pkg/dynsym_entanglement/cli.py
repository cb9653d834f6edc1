#!/usr/bin/env python3

"""Command line: state analysis, CE search, SLOCC measures and cavity runs.

Exit codes: 0 success, 2 parse or parameter error, 3 shape or dimension
mismatch, 4 no CE state found, 5 Fock cutoff overflow, 1 any other error.
"""

import argparse
import logging

from dynsym_entanglement.config_helper import load_config, setup_logging
from dynsym_entanglement.errors import (
    CutoffOverflowError, DimensionMismatchError, NormalizationError, ObservableSetError,
    ParamsError, ParseError, QdsysError, ShapeError, SiteError)
from dynsym_entanglement.lie_observables import parse_set_id
from dynsym_entanglement.output_objects import ReportTable, to_json
from dynsym_entanglement.slocc_measures import (
    classify_three_qubit, concurrence, orbit_measure, sl_normal_form, three_tangle)
from dynsym_entanglement.stabilization_sim import energy_ledger, export_jump_table, run_ensemble
from dynsym_entanglement.state_file_helper import load_state, read_params, state_to_dict, write_state
from dynsym_entanglement.structure_maps import FIXTURE_NAMES, qutrit_to_two_qubits
from dynsym_entanglement.variance_ce import NotFound, ce_check, find_ce, remoteness, total_variance

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_PARSE = 2
EXIT_SHAPE = 3
EXIT_NOT_FOUND = 4
EXIT_OVERFLOW = 5

EXIT_CODES = (
    ((ParseError, ParamsError, ObservableSetError, NormalizationError), EXIT_PARSE),
    ((DimensionMismatchError, ShapeError, SiteError), EXIT_SHAPE),
    ((CutoffOverflowError,), EXIT_OVERFLOW),
)

MEASURE_KINDS = ("concurrence", "tangle", "orbit")


def exit_code_for(error):
    for classes, code in EXIT_CODES:
        if isinstance(error, classes):
            return code
    return EXIT_ERROR


def default_set_id(psi):
    dims = psi.dims
    if dims == (3,):
        return "spin1"
    if set(dims) == {2}:
        return "pauli:{}".format(len(dims))
    if dims == (3, 3):
        return "pair:13"
    raise ParseError("No default observable set for shape {}, pass --obs".format(list(dims)))


def _observables(args, psi=None):
    set_id = args.obs if args.obs else default_set_id(psi)
    return parse_set_id(set_id)


def _tolerance(args, configs):
    return args.tol if args.tol is not None else configs["VarianceCE"].getfloat("Tolerance")


def _emit(args, table, payload):
    if args.json:
        print(to_json(payload))
    else:
        print(table.render())


def cmd_variance(args, configs):
    psi = load_state(args.state)
    obs_set = _observables(args, psi)
    report = total_variance(obs_set, psi, tol=_tolerance(args, configs))
    table = ReportTable("variance of {} under {}".format(psi.label or args.state, obs_set.name),
                        configs["Output"])
    table.set_header("observable", "variance", "mean")
    for (label, value), mean in zip(report.per_observable, report.expectations):
        table.add_row(label, value, mean)
    for key in ("total", "casimir", "residual", "is_ce"):
        table.add_summary(key, getattr(report, key))
    payload = report.as_dict()
    payload["set"] = obs_set.name
    if args.remoteness:
        settings = configs["VarianceCE"]
        payload["remoteness"] = remoteness(
            obs_set, psi, n_starts=settings.getint("FloorStarts"),
            seed=args.seed if args.seed is not None else 0,
            cache_size=settings.getint("FloorCacheSize"))
        table.add_summary("remoteness", payload["remoteness"])
    _emit(args, table, payload)
    return EXIT_OK


def cmd_ce_check(args, configs):
    psi = load_state(args.state)
    obs_set = _observables(args, psi)
    tol = _tolerance(args, configs)
    is_ce, residual = ce_check(obs_set, psi, tol=tol)
    table = ReportTable("ce-check under {}".format(obs_set.name), configs["Output"])
    table.add_summary("is_ce", is_ce)
    table.add_summary("residual", residual)
    table.add_summary("tolerance", tol)
    _emit(args, table, {"set": obs_set.name, "is_ce": is_ce, "residual": residual,
                        "tolerance": tol})
    return EXIT_OK


def cmd_find_ce(args, configs):
    if not args.obs:
        raise ParseError("find-ce needs --obs")
    settings = configs["VarianceCE"]
    obs_set = parse_set_id(args.obs)
    starts = args.starts if args.starts is not None else settings.getint("Starts")
    result = find_ce(obs_set, n_starts=starts, tol=_tolerance(args, configs),
                     max_iter=settings.getint("MaxIter"),
                     seed=args.seed if args.seed is not None else 0,
                     workers=settings.getint("Workers"))
    table = ReportTable("find-ce under {}".format(obs_set.name), configs["Output"])
    if isinstance(result, NotFound):
        table.add_summary("found", False)
        table.add_summary("best_residual", result.best_residual)
        table.add_summary("starts", result.n_starts)
        _emit(args, table, {"set": obs_set.name, "found": False,
                            "best_residual": result.best_residual, "starts": result.n_starts})
        return EXIT_NOT_FOUND
    _, residual = ce_check(obs_set, result)
    table.set_header("index", "re", "im")
    for index, amplitude in enumerate(result.amplitudes):
        table.add_row(index, amplitude.real, amplitude.imag)
    table.add_summary("found", True)
    table.add_summary("residual", residual)
    if args.export:
        write_state(result, args.export)
        table.add_summary("written", args.export)
    _emit(args, table, {"set": obs_set.name, "found": True, "residual": residual,
                        "state": state_to_dict(result)})
    return EXIT_OK


def cmd_measure(args, configs):
    psi = load_state(args.state)
    settings = configs["SloccMeasures"]
    if args.kind == "concurrence":
        value = concurrence(psi)
    elif args.kind == "tangle":
        value = three_tangle(psi)
    else:
        value = orbit_measure(psi, max_iter=settings.getint("NormalFormMaxIter"),
                              tol=settings.getfloat("NormalFormTolerance"),
                              collapse_norm=settings.getfloat("CollapseNorm"))
    table = ReportTable("measure", configs["Output"])
    table.add_summary(args.kind, value)
    _emit(args, table, {"kind": args.kind, "value": value})
    return EXIT_OK


def cmd_classify(args, configs):
    psi = load_state(args.state)
    tol = args.tol if args.tol is not None else configs["SloccMeasures"].getfloat(
        "ClassifyTolerance")
    result = classify_three_qubit(psi, tol=tol)
    if args.json:
        split = [list(part) for part in result.split] if result.split else None
        print(to_json({"class": result.label, "split": split}))
    else:
        print(result)
    return EXIT_OK


def cmd_embed(args, configs):
    psi = load_state(args.state)
    report = qutrit_to_two_qubits(psi)
    table = ReportTable("qutrit to two qubits", configs["Output"])
    table.set_header("index", "re", "im")
    for index, amplitude in enumerate(report.output.amplitudes):
        table.add_row(index, amplitude.real, amplitude.imag)
    table.add_summary("concurrence", report.concurrence_of_image)
    if args.export:
        write_state(report.output, args.export)
        table.add_summary("written", args.export)
    _emit(args, table, {"concurrence": report.concurrence_of_image,
                        "state": state_to_dict(report.output)})
    return EXIT_OK


def cmd_normal_form(args, configs):
    psi = load_state(args.state)
    settings = configs["SloccMeasures"]
    result = sl_normal_form(psi, max_iter=settings.getint("NormalFormMaxIter"),
                            tol=settings.getfloat("NormalFormTolerance"),
                            collapse_norm=settings.getfloat("CollapseNorm"))
    table = ReportTable("normal form", configs["Output"])
    table.add_summary("norm_sq", result.norm_sq)
    table.add_summary("converged", result.converged)
    table.add_summary("iterations", result.iterations)
    if args.export:
        write_state(result.state, args.export)
        table.add_summary("written", args.export)
    _emit(args, table, {"norm_sq": result.norm_sq, "converged": result.converged,
                        "iterations": result.iterations, "state": state_to_dict(result.state)})
    return EXIT_OK


def cmd_simulate(args, configs):
    p = read_params(configs, args.params, seed=args.seed,
                    individual_jumps=True if args.individual_jumps else None)
    report = run_ensemble(p, args.trajectories, workers=args.workers)
    table = ReportTable("{} trajectories, {} Stokes jumps".format(
        report.n_trajectories, report.n_stokes), configs["Output"])
    for key, value in report.as_dict().items():
        table.add_summary(key, value)
    for key, value in energy_ledger(p).items():
        table.add_summary(key, value)
    if args.export:
        export_jump_table(report, args.export)
        table.add_summary("written", args.export)
    payload = report.as_dict()
    payload["energy_ledger"] = energy_ledger(p)
    _emit(args, table, payload)
    return EXIT_OK


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--obs", help="observable set: pauli:<n>, spin1, su3 or pair:<a><b>")
    common.add_argument("--tol", type=float, help="tolerance, defaults from config.ini")
    common.add_argument("--seed", type=int, help="seed for multi-starts and trajectories")
    common.add_argument("--json", action="store_true", help="print a JSON payload")
    common.add_argument("--export", help="write the resulting state file or jump table")
    common.add_argument("--verbose", action="store_true", help="debug logging")
    common.add_argument("--config", help="user config.ini layered over the defaults")

    parser = argparse.ArgumentParser(
        prog="dynsym_entanglement",
        description="Entanglement relative to a dynamic symmetry group.")
    commands = parser.add_subparsers(dest="command", required=True)
    state_help = "state file or fixture ({})".format(", ".join(FIXTURE_NAMES))

    for name, func, text in (
            ("ce-check", cmd_ce_check, "is the state completely entangled"),
            ("classify", cmd_classify, "three-qubit SLOCC class"),
            ("embed", cmd_embed, "map a qutrit onto the symmetric two-qubit subspace"),
            ("normal-form", cmd_normal_form, "local filtering normal form of a qubit state")):
        sub = commands.add_parser(name, parents=[common], help=text)
        sub.add_argument("state", help=state_help)
        sub.set_defaults(func=func)

    sub = commands.add_parser("variance", parents=[common],
                              help="variances, total variance and CE verdict")
    sub.add_argument("state", help=state_help)
    sub.add_argument("--remoteness", action="store_true",
                     help="also report the distance from coherent states, needs a Casimir")
    sub.set_defaults(func=cmd_variance)

    sub = commands.add_parser("measure", parents=[common], help="entanglement measure")
    sub.add_argument("state", help=state_help)
    sub.add_argument("--kind", choices=MEASURE_KINDS, required=True)
    sub.set_defaults(func=cmd_measure)

    sub = commands.add_parser("find-ce", parents=[common], help="search for a CE state")
    sub.add_argument("--starts", type=int, help="number of random starts")
    sub.set_defaults(func=cmd_find_ce)

    sub = commands.add_parser("simulate", parents=[common], help="cavity trajectory ensemble")
    sub.add_argument("--params", help="INI file with a [Stabilization] section")
    sub.add_argument("--trajectories", type=int, default=100)
    sub.add_argument("--workers", type=int, default=1)
    sub.add_argument("--individual-jumps", action="store_true",
                     help="one Stokes channel per atom instead of the collective one")
    sub.set_defaults(func=cmd_simulate)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    configs = load_config(args.config)
    setup_logging(configs, args.verbose)
    try:
        if args.seed is not None and args.seed < 0:
            raise ParseError("--seed must be >= 0, got {}".format(args.seed))
        return args.func(args, configs)
    except QdsysError as e:
        logging.error("{}: {}".format(type(e).__name__, e))
        return exit_code_for(e)
