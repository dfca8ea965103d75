# GNU General Public License v3.0+ (see LICENSES/GPL-3.0-or-later.txt or
# https://www.gnu.org/licenses/gpl-3.0.txt)
# SPDX-License-Identifier: GPL-3.0-or-later
# SPDX-FileCopyrightText: 2026, forceroute contributors

"""
Quality metrics of routed circuits and the sweep figure of merit.
"""

from __future__ import annotations

import dataclasses
import math
import typing as t
from collections.abc import Iterable, Sequence

from .circuit import Circuit, Gate, GateKind
from .errors import TopologyError
from .router import RoutedCircuit, RoutedGate
from .topology import Topology

SwapCostMode = t.Literal["single-factor", "three-cx"]

SWAP_COST_MODES: tuple[SwapCostMode, ...] = ("single-factor", "three-cx")


def asap_layers(
    gates: Iterable[Gate | RoutedGate], num_qubits: int
) -> list[int]:
    """
    ASAP layer of every gate with unit durations, starting at 0.
    """
    busy = [0] * num_qubits
    result = []
    for gate in gates:
        layer = max(busy[q] for q in gate.qubits)
        for q in gate.qubits:
            busy[q] = layer + 1
        result.append(layer)
    return result


def circuit_depth(circuit: Circuit) -> int:
    """
    Critical path length of an unrouted circuit.
    """
    return max(asap_layers(circuit.gates, circuit.num_qubits), default=-1) + 1


def depth(routed: RoutedCircuit) -> int:
    """
    Critical path length of a routed circuit, SWAPs included.
    """
    return max(asap_layers(routed.gates, routed.num_physical), default=-1) + 1


def esp(
    routed: RoutedCircuit,
    topology: Topology,
    swap_cost_mode: SwapCostMode = "single-factor",
) -> float:
    """
    Estimated success probability: product of the gate fidelities.

    Single-qubit gates count as perfect. A SWAP costs the edge fidelity once in
    ``single-factor`` mode and cubed in ``three-cx`` mode.
    """
    if swap_cost_mode not in SWAP_COST_MODES:
        raise ValueError(f"Unknown SWAP cost mode {swap_cost_mode!r}")
    factors = []
    for gate in routed.gates:
        if len(gate.qubits) != 2:
            continue
        fidelity = topology.fidelity(*gate.qubits)
        if gate.kind is GateKind.SWAP and swap_cost_mode == "three-cx":
            fidelity = fidelity**3
        factors.append(fidelity)
    return math.prod(factors)


def inter_core_uses(routed: RoutedCircuit, topology: Topology) -> int:
    """
    Number of output gates acting across two cores.
    """
    if topology.cores is None:
        raise TopologyError("Inter-core uses need a topology with core labels")
    return sum(
        1
        for gate in routed.gates
        if len(gate.qubits) == 2 and topology.is_inter_core(*gate.qubits)
    )


@dataclasses.dataclass(frozen=True)
class MetricsReport:
    """
    Metrics of one routing trial.
    """

    n: int
    m: int
    gates: int
    swaps_added: int
    depth: int
    esp: float
    inter_core_uses: int | None
    compile_time: float | None
    config: dict[str, t.Any] = dataclasses.field(default_factory=dict)


def measure(
    routed: RoutedCircuit,
    topology: Topology,
    *,
    compile_time: float | None = None,
    swap_cost_mode: SwapCostMode = "single-factor",
    config: dict[str, t.Any] | None = None,
) -> MetricsReport:
    """
    Collect all metrics of a routed circuit.
    """
    return MetricsReport(
        n=routed.num_virtual,
        m=routed.num_physical,
        gates=len(routed.gates) - routed.swap_count,
        swaps_added=routed.swap_count,
        depth=depth(routed),
        esp=esp(routed, topology, swap_cost_mode),
        inter_core_uses=(
            None if topology.cores is None else inter_core_uses(routed, topology)
        ),
        compile_time=compile_time,
        config=dict(config or {}),
    )


@dataclasses.dataclass(frozen=True)
class FomRow:
    """
    One configuration of a figure-of-merit table.
    """

    label: tuple[t.Any, ...]
    time: float
    depth: float
    swaps: float
    norm_time: float
    norm_depth: float
    norm_swaps: float
    fom: float


@dataclasses.dataclass(frozen=True)
class FomTable:
    """
    Normalized metrics and figure of merit per configuration.
    """

    rows: tuple[FomRow, ...]
    best: int

    @property
    def optimum(self) -> FomRow:
        """
        The row with the highest figure of merit.
        """
        return self.rows[self.best]


def _normalize_to_range(
    values: Sequence[float], low: float, degenerate: float
) -> list[float]:
    lo, hi = min(values), max(values)
    if hi == lo:
        return [degenerate] * len(values)
    return [low + (value - lo) / (hi - lo) for value in values]


def figure_of_merit(
    rows: Sequence[tuple[float, float, float]],
    labels: Sequence[tuple[t.Any, ...]] | None = None,
) -> FomTable:
    """
    Combine ``(time, depth, swaps)`` rows into a figure of merit.

    Every metric is min-max normalized over all rows into ``[1, 2]`` (all 1 if
    constant); the figure of merit is the inverse of the product of the three
    normalized values. The first row with the highest value is the optimum.
    """
    if not rows:
        raise ValueError("Figure of merit needs at least one row")
    if labels is None:
        labels = [(index,) for index in range(len(rows))]
    if len(labels) != len(rows):
        raise ValueError(f"Got {len(labels)} labels for {len(rows)} rows")
    for row in rows:
        if min(row) <= 0:
            raise ValueError(f"Figure of merit needs positive metrics, got {row}")
    columns = [
        _normalize_to_range([row[index] for row in rows], 1.0, 1.0)
        for index in range(3)
    ]
    result = []
    for index, (row, label) in enumerate(zip(rows, labels)):
        norm_time, norm_depth, norm_swaps = (column[index] for column in columns)
        result.append(
            FomRow(
                label=tuple(label),
                time=float(row[0]),
                depth=float(row[1]),
                swaps=float(row[2]),
                norm_time=norm_time,
                norm_depth=norm_depth,
                norm_swaps=norm_swaps,
                fom=1.0 / (norm_time * norm_depth * norm_swaps),
            )
        )
    best = max(range(len(result)), key=lambda index: (result[index].fom, -index))
    return FomTable(rows=tuple(result), best=best)


def normalize_series(values: Sequence[float]) -> list[float]:
    """
    Min-max normalize into ``[0, 1]``; a constant series maps to 0.5.
    """
    if not values:
        raise ValueError("Cannot normalize an empty series")
    return _normalize_to_range(values, 0.0, 0.5)


def mean_and_stddev(values: Sequence[float]) -> tuple[float, float]:
    """
    Mean and population standard deviation, independent of value order.
    """
    if not values:
        raise ValueError("Need at least one value")
    mean = math.fsum(values) / len(values)
    variance = math.fsum((value - mean) ** 2 for value in values) / len(values)
    return mean, math.sqrt(variance)


__all__ = (
    "SWAP_COST_MODES",
    "FomRow",
    "FomTable",
    "MetricsReport",
    "SwapCostMode",
    "asap_layers",
    "circuit_depth",
    "depth",
    "esp",
    "figure_of_merit",
    "inter_core_uses",
    "mean_and_stddev",
    "measure",
    "normalize_series",
)
