# GNU General Public License v3.0+ (see LICENSES/GPL-3.0-or-later.txt or
# https://www.gnu.org/licenses/gpl-3.0.txt)
# SPDX-License-Identifier: GPL-3.0-or-later
# SPDX-FileCopyrightText: 2026, forceroute contributors

# PYTHON_ARGCOMPLETE_OK

"""Entrypoint to the forceroute script."""

from __future__ import annotations

import argparse
import logging
import os.path
import sys
import typing as t
from collections.abc import Callable

import pydantic as _p

from . import __version__
from ._pydantic import get_formatted_error_messages as _get_formatted_error_messages
from .circuit.qasm import serialize_qasm
from .config import (
    RunSpec,
    load_config_data,
    merge_config_data,
)
from .errors import ConvergenceError, ForceRouteError, VerificationError
from .harness import (
    cmd_route,
    cmd_rsweep,
    cmd_scale,
    cmd_sweep,
    cmd_verify,
    dump_routed,
)
from .reporting import Artifact, write_artifact

try:
    import argcomplete

    HAS_ARGCOMPLETE = True
except ImportError:
    HAS_ARGCOMPLETE = False


_LOG_FORMAT = "%(levelname)s %(name)s: %(message)s"


class InvalidArgumentError(Exception):
    """
    Error while parsing arguments.
    """


def _comma_list(convert: Callable[[str], t.Any]) -> Callable[[str], list[t.Any]]:
    def parse(value: str) -> list[t.Any]:
        try:
            return [convert(part) for part in value.split(",") if part.strip()]
        except ValueError as exc:
            raise argparse.ArgumentTypeError(
                f"invalid list {value!r}: {exc}"
            ) from exc

    return parse


def _build_spec(args: argparse.Namespace) -> RunSpec:
    data: dict[str, t.Any] = {}
    if args.config is not None:
        data = load_config_data(args.config)
    overrides = {
        "run": {
            "benchmark": args.benchmark,
            "topology": args.topology,
            "trials": args.trials,
            "seed": args.seed,
            "jobs": args.jobs,
            "random_fidelities": args.random_fidelities,
            "sizes": getattr(args, "sizes", None),
        },
        "router": {
            "k": args.k,
            "p": args.p,
            "r": args.r,
            "weight_mode": args.weight_mode,
            "perturb_rho": args.perturb_rho,
            "stall_window": args.stall_window,
            "max_iterations": args.max_iterations,
        },
        "metrics": {
            "swap_cost_mode": args.swap_cost_mode,
            "statevector_max_qubits": args.max_qubits,
        },
        "output": {
            "path": args.out,
            "format": args.format,
            "omit_timing": args.omit_timing,
            "emit_routed": getattr(args, "emit_routed", None),
        },
    }
    return RunSpec.model_validate(merge_config_data(data, overrides))


def _guarded(
    command: Callable[[argparse.Namespace], int],
) -> Callable[[argparse.Namespace], int]:
    def run_command(args: argparse.Namespace) -> int:
        try:
            return command(args)
        except (VerificationError, ConvergenceError) as exc:
            print(f"Error: {exc}", file=sys.stderr)
            return 1
        except _p.ValidationError as exc:
            errors = "\n".join(_get_formatted_error_messages(exc))
            print(f"Error: invalid run configuration:\n{errors}", file=sys.stderr)
            return 2
        except (ForceRouteError, ValueError, OSError) as exc:
            print(f"Error: {exc}", file=sys.stderr)
            return 2

    return run_command


def _write(spec: RunSpec, artifact: Artifact) -> int:
    write_artifact(artifact, spec.output.format, spec.output.path)
    return 0


@_guarded
def route(args: argparse.Namespace) -> int:
    """
    Route a benchmark once per trial.
    """
    spec = _build_spec(args)
    artifact, results = cmd_route(spec)
    if (path := spec.output.emit_routed) is not None:
        routed = results[0].routed
        assert routed is not None
        if path.endswith(".qasm"):
            with open(path, "w", encoding="utf-8") as f:
                f.write(serialize_qasm(routed.to_circuit()))
        else:
            dump_routed(routed, path)
    return _write(spec, artifact)


@_guarded
def sweep(args: argparse.Namespace) -> int:
    """
    Sweep lookahead and penalization.
    """
    spec = _build_spec(args)
    return _write(spec, cmd_sweep(spec))


@_guarded
def rsweep(args: argparse.Namespace) -> int:
    """
    Sweep the fidelity exponent.
    """
    spec = _build_spec(args)
    return _write(spec, cmd_rsweep(spec))


@_guarded
def scale(args: argparse.Namespace) -> int:
    """
    Measure compile time on growing grids.
    """
    spec = _build_spec(args)
    return _write(spec, cmd_scale(spec))


@_guarded
def verify(args: argparse.Namespace) -> int:
    """
    Verify a routed circuit file.
    """
    report = cmd_verify(args.original, args.routed, args.topology, args.max_qubits)
    if report.ok:
        overlap = (
            "skipped"
            if report.fidelity_overlap is None
            else f"{report.fidelity_overlap:.12g}"
        )
        print(f"OK (statevector overlap: {overlap})")
        return 0
    assert report.first_violation is not None
    index, reason = report.first_violation
    print(f"Verification failed at output gate {index}: {reason}", file=sys.stderr)
    return 1


# Mapping from command line subcommand names to functions which implement those.
# The functions need to take a single argument, the processed list of args.
ARGS_MAP: dict[str, Callable[[argparse.Namespace], int]] = {
    "route": route,
    "sweep": sweep,
    "rsweep": rsweep,
    "scale": scale,
    "verify": verify,
}


def _add_run_arguments(parser: argparse.ArgumentParser, *, ranges: bool) -> None:
    parser.add_argument(
        "--config", help="TOML run file; command line flags override its values"
    )
    parser.add_argument(
        "--benchmark",
        help="random:N[:DEPTH[:FRACTION]], qft:N, qvolume:N[:DEPTH], adder:BITS"
        " or qasm:PATH",
    )
    parser.add_argument(
        "--topology",
        help="grid:RxC, multicore:R,C,X,Y,INTER[,INTRA], file:PATH or a .json path",
    )
    number_list = "Comma-separated list" if ranges else "Single value"
    parser.add_argument(
        "--k", type=_comma_list(int), help=f"{number_list} of lookahead depths"
    )
    parser.add_argument(
        "--p", type=_comma_list(float), help=f"{number_list} of SWAP thresholds"
    )
    parser.add_argument(
        "--r", type=_comma_list(float), help=f"{number_list} of fidelity exponents"
    )
    parser.add_argument("--trials", type=int, help="Number of trials per setting")
    parser.add_argument("--seed", type=int, help="Seed base; trial i uses base + i")
    parser.add_argument(
        "--jobs", type=int, help="Number of worker processes for trials"
    )
    parser.add_argument(
        "--weight-mode",
        choices=["halving", "diameter"],
        help="Layer weight decay base",
    )
    parser.add_argument(
        "--perturb-rho", type=float, help="Base probability of order perturbation"
    )
    parser.add_argument(
        "--stall-window",
        type=int,
        help="Iterations without progress before the perturbation doubles",
    )
    parser.add_argument(
        "--max-iterations", type=int, help="Iteration limit per routing run"
    )
    parser.add_argument(
        "--swap-cost-mode",
        choices=["single-factor", "three-cx"],
        help="How a SWAP contributes to the estimated success probability",
    )
    parser.add_argument(
        "--random-fidelities",
        metavar="LO,HI",
        type=_comma_list(float),
        help="Overlay uniform random edge fidelities",
    )
    parser.add_argument(
        "--max-qubits",
        type=int,
        help="Largest active qubit count checked with the statevector simulator",
    )
    parser.add_argument("--out", help="Output file; standard output if not given")
    parser.add_argument("--format", choices=["csv", "json"], help="Output format")
    parser.add_argument(
        "--omit-timing",
        default=None,
        action="store_true",
        help="Drop wall-clock columns for reproducible artifacts",
    )


def parse_args(program_name: str, args: list[str]) -> argparse.Namespace:
    """
    Parse the command line arguments.
    """

    toplevel_parser = argparse.ArgumentParser(
        prog=program_name,
        description="Force-directed qubit routing experiments",
    )
    toplevel_parser.add_argument(
        "--version",
        action="version",
        version=__version__,
        help="Print the forceroute version",
    )
    toplevel_parser.add_argument(
        "-v",
        "--verbose",
        action="count",
        default=0,
        help="Show progress (-v) or debug output (-vv) on standard error",
    )
    subparsers = toplevel_parser.add_subparsers(
        title="Subcommands", dest="command", help="for help use: `SUBCOMMANDS -h`"
    )
    subparsers.required = True

    route_parser = subparsers.add_parser(
        "route", description="Route a benchmark once per trial"
    )
    _add_run_arguments(route_parser, ranges=False)
    route_parser.add_argument(
        "--emit-routed",
        metavar="PATH",
        help="Write the routed circuit of the first trial as JSON (or as"
        " OpenQASM if PATH ends with .qasm)",
    )

    sweep_parser = subparsers.add_parser(
        "sweep", description="Sweep all (k, p) combinations"
    )
    _add_run_arguments(sweep_parser, ranges=True)

    rsweep_parser = subparsers.add_parser(
        "rsweep", description="Sweep the fidelity exponent r"
    )
    _add_run_arguments(rsweep_parser, ranges=True)

    scale_parser = subparsers.add_parser(
        "scale", description="Measure compile time on square grids of growing size"
    )
    _add_run_arguments(scale_parser, ranges=False)
    scale_parser.add_argument(
        "--sizes",
        type=_comma_list(int),
        help="Comma-separated grid side lengths",
    )

    verify_parser = subparsers.add_parser(
        "verify", description="Check a routed circuit against its original"
    )
    verify_parser.add_argument(
        "--original", required=True, help="Original circuit in OpenQASM 2.0"
    )
    verify_parser.add_argument(
        "--routed", required=True, help="Routed circuit JSON from route --emit-routed"
    )
    verify_parser.add_argument(
        "--topology", required=True, help="Topology selector used for routing"
    )
    verify_parser.add_argument(
        "--max-qubits",
        type=int,
        default=10,
        help="Largest active qubit count checked with the statevector simulator",
    )

    # This must come after all parser setup
    if HAS_ARGCOMPLETE:
        argcomplete.autocomplete(toplevel_parser)

    parsed_args: argparse.Namespace = toplevel_parser.parse_args(args)
    return parsed_args


def setup_logging(verbosity: int) -> None:
    """
    Configure the root logger for the command line.
    """
    level = logging.WARNING
    if verbosity == 1:
        level = logging.INFO
    elif verbosity > 1:
        level = logging.DEBUG
    logging.basicConfig(level=level, format=_LOG_FORMAT, stream=sys.stderr)


def run(args: list[str]) -> int:
    """
    Run the program.
    """
    program_name = os.path.basename(args[0])
    try:
        parsed_args: argparse.Namespace = parse_args(program_name, args[1:])
    except InvalidArgumentError as e:
        print(e, file=sys.stderr)
        return 2

    setup_logging(parsed_args.verbose)
    return ARGS_MAP[parsed_args.command](parsed_args)


def main() -> int:
    """
    Entrypoint called from the script.

    Return codes:
        :0: Success
        :1: A routed circuit failed verification, or routing did not converge
        :2: There was a problem with the command line arguments or the inputs
    """
    return run(sys.argv)


if __name__ == "__main__":
    sys.exit(main())
