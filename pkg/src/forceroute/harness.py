# GNU General Public License v3.0+ (see LICENSES/GPL-3.0-or-later.txt or
# https://www.gnu.org/licenses/gpl-3.0.txt)
# SPDX-License-Identifier: GPL-3.0-or-later
# SPDX-FileCopyrightText: 2026, forceroute contributors

"""
Trial execution for the command line subcommands.

Trial ``i`` of a run uses seed ``seed + i`` both for its random initial
placement and for the router. Generated benchmark circuits use the seed base,
so all trials route the same circuit. Every routed circuit is verified before
its metrics are kept.
"""

from __future__ import annotations

import dataclasses
import itertools
import json
import logging
import os
import time
import typing as t
from collections.abc import Sequence
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .circuit import Circuit
from .circuit.qasm import load_qasm
from .config import RunSpec
from .errors import VerificationError
from .metrics import (
    MetricsReport,
    SwapCostMode,
    figure_of_merit,
    mean_and_stddev,
    measure,
    normalize_series,
)
from .reporting import Artifact
from .router import (
    RoutedCircuit,
    RouterConfig,
    random_placement,
    route,
    routed_from_dict,
    routed_to_dict,
)
from .topology import (
    Topology,
    assign_random_fidelities,
    build_grid,
    parse_topology_selector,
)
from .verify import VerificationReport, verify_routed

logger = logging.getLogger(__name__)

TIMING_COLUMNS = (
    "compile_time",
    "mean_compile_time",
    "stddev_compile_time",
)

ROUTE_COLUMNS = [
    "trial",
    "seed",
    "n",
    "m",
    "gates",
    "swaps",
    "depth",
    "esp",
    "inter_core_uses",
    "compile_time",
    "legal",
    "equivalent",
    "overlap",
]

SWEEP_COLUMNS = [
    "k",
    "p",
    "r",
    "mean_swaps",
    "mean_depth",
    "mean_compile_time",
    "mean_esp",
    "norm_time",
    "norm_depth",
    "norm_swaps",
    "fom",
    "optimal",
]

RSWEEP_COLUMNS = [
    "r",
    "k",
    "p",
    "mean_esp",
    "norm_esp",
    "mean_swaps",
    "mean_depth",
    "mean_inter_core_uses",
    "mean_compile_time",
]

SCALE_COLUMNS = [
    "size",
    "m",
    "n",
    "gates",
    "mean_swaps",
    "mean_depth",
    "mean_compile_time",
    "status",
]


@dataclasses.dataclass(frozen=True)
class TrialResult:
    """
    Verified outcome of one trial.
    """

    trial: int
    seed: int
    report: MetricsReport
    verification: VerificationReport
    routed: RoutedCircuit | None = None


@dataclasses.dataclass(frozen=True)
class _TrialTask:
    circuit: Circuit
    topology: Topology
    cfg: RouterConfig
    trial: int
    swap_cost_mode: SwapCostMode
    max_qubits: int
    keep_routed: bool


def run_trial(
    circuit: Circuit,
    topology: Topology,
    cfg: RouterConfig,
    *,
    trial: int = 0,
    swap_cost_mode: SwapCostMode = "single-factor",
    max_qubits: int = 10,
    keep_routed: bool = False,
) -> TrialResult:
    """
    Route once from a random placement drawn with ``cfg.seed`` and verify.

    Raises :class:`VerificationError` if the routed circuit fails a check.
    """
    placement = random_placement(circuit.num_qubits, topology, cfg.seed)
    start = time.perf_counter()
    routed = route(circuit, topology, placement, cfg)
    compile_time = time.perf_counter() - start
    verification = verify_routed(circuit, routed, topology, max_qubits)
    if not verification.ok:
        assert verification.first_violation is not None
        index, reason = verification.first_violation
        logger.error(
            "Trial %d (seed %d) failed verification at output gate %d: %s",
            trial,
            cfg.seed,
            index,
            reason,
        )
        raise VerificationError(
            f"Trial {trial} (seed {cfg.seed}) failed verification"
            f" at output gate {index}: {reason}"
        )
    report = measure(
        routed,
        topology,
        compile_time=compile_time,
        swap_cost_mode=swap_cost_mode,
        config={"k": cfg.k, "p": cfg.p, "r": cfg.r, "seed": cfg.seed},
    )
    logger.info(
        "Trial %d (seed %d): %d SWAPs, depth %d, %.3fs, verified",
        trial,
        cfg.seed,
        report.swaps_added,
        report.depth,
        compile_time,
    )
    return TrialResult(
        trial=trial,
        seed=cfg.seed,
        report=report,
        verification=verification,
        routed=routed if keep_routed else None,
    )


def _run_task(task: _TrialTask) -> TrialResult:
    return run_trial(
        task.circuit,
        task.topology,
        task.cfg,
        trial=task.trial,
        swap_cost_mode=task.swap_cost_mode,
        max_qubits=task.max_qubits,
        keep_routed=task.keep_routed,
    )


def run_trials(
    spec: RunSpec,
    circuit: Circuit,
    topology: Topology,
    k: int,
    p: float,
    r: float,
    *,
    keep_routed: bool = False,
) -> list[TrialResult]:
    """
    Run ``spec.run.trials`` trials of one router configuration.

    With more than one job the trials run in worker processes; results are
    returned in trial order either way.
    """
    tasks = [
        _TrialTask(
            circuit=circuit,
            topology=topology,
            cfg=spec.router.router_config(k, p, r, spec.run.seed + trial),
            trial=trial,
            swap_cost_mode=spec.metrics.swap_cost_mode,
            max_qubits=spec.metrics.statevector_max_qubits,
            keep_routed=keep_routed,
        )
        for trial in range(spec.run.trials)
    ]
    if spec.run.jobs == 1 or len(tasks) == 1:
        return [_run_task(task) for task in tasks]
    with ProcessPoolExecutor(max_workers=spec.run.jobs) as executor:
        return list(executor.map(_run_task, tasks))


def _mean(results: Sequence[TrialResult], name: str) -> float | None:
    values = [getattr(result.report, name) for result in results]
    if not values or any(value is None for value in values):
        return None
    return mean_and_stddev(values)[0]


def aggregate(results: Sequence[TrialResult]) -> dict[str, t.Any]:
    """
    Mean and standard deviation of the per-trial metrics.
    """
    result: dict[str, t.Any] = {}
    for name in ("swaps_added", "depth", "esp", "inter_core_uses", "compile_time"):
        values = [getattr(trial.report, name) for trial in results]
        if not values or any(value is None for value in values):
            continue
        mean, stddev = mean_and_stddev(values)
        result[name] = {"mean": mean, "stddev": stddev}
    return result


def build_topology(spec: RunSpec) -> Topology:
    """
    The topology of a run, with the random fidelity overlay applied.
    """
    topology = parse_topology_selector(spec.run.topology)
    if spec.run.random_fidelities is not None:
        lo, hi = spec.run.random_fidelities
        topology = assign_random_fidelities(topology, lo, hi, spec.run.seed)
    return topology


def build_circuit(spec: RunSpec, topology: Topology) -> Circuit:
    """
    The benchmark circuit of a run; an open qubit count uses all qubits.
    """
    circuit = spec.benchmark.build(spec.run.seed, num_qubits=topology.m)
    if circuit.num_qubits > topology.m:
        raise ValueError(
            f"Benchmark needs {circuit.num_qubits} qubits,"
            f" topology {spec.run.topology} has {topology.m}"
        )
    return circuit


def _single(spec: RunSpec, *names: str) -> list[t.Any]:
    values = []
    for name in names:
        candidates = getattr(spec.router, name)
        if len(candidates) != 1:
            raise ValueError(f"Expected a single value for {name}, got {candidates}")
        values.append(candidates[0])
    return values


def _finish(spec: RunSpec, artifact: Artifact) -> Artifact:
    if spec.output.omit_timing:
        artifact.drop_columns(TIMING_COLUMNS)
    return artifact


def cmd_route(spec: RunSpec) -> tuple[Artifact, list[TrialResult]]:
    """
    Route the benchmark once per trial.
    """
    k, p, r = _single(spec, "k", "p", "r")
    topology = build_topology(spec)
    circuit = build_circuit(spec, topology)
    keep_routed = spec.output.emit_routed is not None
    results = run_trials(spec, circuit, topology, k, p, r, keep_routed=keep_routed)
    artifact = Artifact(config=spec.echo(), columns=list(ROUTE_COLUMNS))
    for result in results:
        report = result.report
        artifact.rows.append(
            {
                "trial": result.trial,
                "seed": result.seed,
                "n": report.n,
                "m": report.m,
                "gates": report.gates,
                "swaps": report.swaps_added,
                "depth": report.depth,
                "esp": report.esp,
                "inter_core_uses": report.inter_core_uses,
                "compile_time": report.compile_time,
                "legal": result.verification.legal,
                "equivalent": result.verification.equivalent,
                "overlap": result.verification.fidelity_overlap,
            }
        )
    summary = aggregate(results)
    if spec.output.omit_timing:
        summary.pop("compile_time", None)
    artifact.notes["aggregate"] = summary
    return _finish(spec, artifact), results


def cmd_sweep(spec: RunSpec) -> Artifact:
    """
    Sweep all ``(k, p)`` combinations and compute the figure of merit.

    Without timing, compile time does not enter the figure of merit.
    """
    (r,) = _single(spec, "r")
    topology = build_topology(spec)
    circuit = build_circuit(spec, topology)
    cells = []
    for k, p in itertools.product(spec.router.k, spec.router.p):
        results = run_trials(spec, circuit, topology, k, p, r)
        cells.append(
            {
                "k": k,
                "p": p,
                "r": r,
                "mean_swaps": _mean(results, "swaps_added"),
                "mean_depth": _mean(results, "depth"),
                "mean_compile_time": _mean(results, "compile_time"),
                "mean_esp": _mean(results, "esp"),
            }
        )
        logger.info("Configuration k=%d p=%g done", k, p)
    # Min-max normalization ignores a shift, so the +1 only keeps zero SWAP
    # counts positive.
    table = figure_of_merit(
        [
            (
                1.0 if spec.output.omit_timing else cell["mean_compile_time"],
                cell["mean_depth"] + 1.0,
                cell["mean_swaps"] + 1.0,
            )
            for cell in cells
        ],
        labels=[(cell["k"], cell["p"]) for cell in cells],
    )
    artifact = Artifact(config=spec.echo(), columns=list(SWEEP_COLUMNS))
    for index, (cell, row) in enumerate(zip(cells, table.rows)):
        artifact.rows.append(
            {
                **cell,
                "norm_time": row.norm_time,
                "norm_depth": row.norm_depth,
                "norm_swaps": row.norm_swaps,
                "fom": row.fom,
                "optimal": index == table.best,
            }
        )
    k_best, p_best = table.optimum.label
    artifact.notes["optimum"] = {"k": k_best, "p": p_best, "fom": table.optimum.fom}
    return _finish(spec, artifact)


def cmd_rsweep(spec: RunSpec) -> Artifact:
    """
    Sweep the fidelity exponent.
    """
    k, p = _single(spec, "k", "p")
    topology = build_topology(spec)
    circuit = build_circuit(spec, topology)
    rows = []
    for r in spec.router.r:
        results = run_trials(spec, circuit, topology, k, p, r)
        rows.append(
            {
                "r": r,
                "k": k,
                "p": p,
                "mean_esp": _mean(results, "esp"),
                "mean_swaps": _mean(results, "swaps_added"),
                "mean_depth": _mean(results, "depth"),
                "mean_inter_core_uses": _mean(results, "inter_core_uses"),
                "mean_compile_time": _mean(results, "compile_time"),
            }
        )
        logger.info("Exponent r=%g done", r)
    for row, norm in zip(rows, normalize_series([row["mean_esp"] for row in rows])):
        row["norm_esp"] = norm
    artifact = Artifact(config=spec.echo(), columns=list(RSWEEP_COLUMNS), rows=rows)
    return _finish(spec, artifact)


def log_log_slope(sizes: Sequence[float], times: Sequence[float]) -> float | None:
    """
    Slope of a least-squares line through ``(log size, log time)``.

    ``None`` with fewer than two distinct sizes.
    """
    points = [(s, x) for s, x in zip(sizes, times) if s > 0 and x > 0]
    if len({s for s, _ in points}) < 2:
        return None
    slope, _ = np.polyfit(
        np.log([s for s, _ in points]), np.log([x for _, x in points]), 1
    )
    return float(slope)


def cmd_scale(spec: RunSpec) -> Artifact:
    """
    Route on square grids of growing size and fit the compile-time growth.

    Running out of memory on one size is recorded and the next size is tried.
    """
    k, p, r = _single(spec, "k", "p", "r")
    selector = spec.benchmark
    artifact = Artifact(config=spec.echo(), columns=list(SCALE_COLUMNS))
    for size in spec.run.sizes:
        row: dict[str, t.Any] = {"size": size, "m": size * size}
        try:
            topology = build_grid(size, size)
            circuit = selector.build(spec.run.seed, num_qubits=topology.m)
            if circuit.num_qubits > topology.m:
                raise ValueError(
                    f"Benchmark needs {circuit.num_qubits} qubits,"
                    f" grid {size}x{size} has {topology.m}"
                )
            row["n"] = circuit.num_qubits
            row["gates"] = len(circuit)
            results = run_trials(spec, circuit, topology, k, p, r)
        except MemoryError:
            logger.error("Out of memory on the %dx%d grid", size, size)
            row["status"] = "memory-error"
            artifact.rows.append(row)
            continue
        row.update(
            mean_swaps=_mean(results, "swaps_added"),
            mean_depth=_mean(results, "depth"),
            mean_compile_time=_mean(results, "compile_time"),
            status="ok",
        )
        logger.info("Grid %dx%d done", size, size)
        artifact.rows.append(row)
    if not spec.output.omit_timing:
        finished = [row for row in artifact.rows if row["status"] == "ok"]
        slope = log_log_slope(
            [row["m"] for row in finished],
            [row["mean_compile_time"] for row in finished],
        )
        if slope is None:
            logger.warning("Fewer than two sizes finished, no slope fitted")
            artifact.notes["slope"] = {"value": None, "note": "fewer than two sizes"}
        else:
            artifact.notes["slope"] = {"value": slope}
    return _finish(spec, artifact)


def dump_routed(routed: RoutedCircuit, path: str | os.PathLike[str]) -> None:
    """
    Write a routed circuit as JSON.
    """
    with open(path, "w", encoding="utf-8") as f:
        json.dump(routed_to_dict(routed), f, indent=2)
        f.write("\n")


def load_routed(path: str | os.PathLike[str]) -> RoutedCircuit:
    """
    Read a routed circuit written by :func:`dump_routed`.
    """
    with open(path, encoding="utf-8") as f:
        try:
            data = json.load(f)
        except json.JSONDecodeError as exc:
            raise ValueError(f"Error while reading {path}: {exc}") from exc
    return routed_from_dict(data)


def cmd_verify(
    original_path: str,
    routed_path: str,
    topology_selector: str,
    max_qubits: int = 10,
) -> VerificationReport:
    """
    Check a routed circuit file against its original OpenQASM file.
    """
    original = load_qasm(original_path)
    routed = load_routed(routed_path)
    topology = parse_topology_selector(topology_selector)
    if routed.num_physical != topology.m:
        raise VerificationError(
            f"Routed circuit uses {routed.num_physical} physical qubits,"
            f" topology has {topology.m}"
        )
    return verify_routed(original, routed, topology, max_qubits)


__all__ = (
    "ROUTE_COLUMNS",
    "RSWEEP_COLUMNS",
    "SCALE_COLUMNS",
    "SWEEP_COLUMNS",
    "TIMING_COLUMNS",
    "TrialResult",
    "aggregate",
    "build_circuit",
    "build_topology",
    "cmd_route",
    "cmd_rsweep",
    "cmd_scale",
    "cmd_sweep",
    "cmd_verify",
    "dump_routed",
    "load_routed",
    "log_log_slope",
    "run_trial",
    "run_trials",
)
