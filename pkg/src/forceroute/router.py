# GNU General Public License v3.0+ (see LICENSES/GPL-3.0-or-later.txt or
# https://www.gnu.org/licenses/gpl-3.0.txt)
# SPDX-License-Identifier: GPL-3.0-or-later
# SPDX-FileCopyrightText: 2026, forceroute contributors

"""
The force-directed SWAP insertion pass.

Every iteration first executes all gates that are ready and whose qubits are
coupled under the current placement. For the remaining two-qubit gates of the
first ``k + 1`` DAG layers, the operands attract each other; projecting these
attraction forces onto the incident coupling edges yields one SWAP coefficient
per edge. The best edges are then swapped greedily in parallel.
"""

from __future__ import annotations

import dataclasses
import logging
import math
import typing as t
from collections.abc import Iterator, Sequence

import numpy as np
import pydantic

from .circuit import Circuit, Gate, GateKind
from .dag import OpDag, build_dag
from .errors import ConvergenceError, PlacementError
from .topology import Topology

logger = logging.getLogger(__name__)

#: Marks a physical qubit that holds no virtual qubit.
SPARE = -1

# Second entropy word of the router's random stream; keeps it independent of
# the placement drawn from the same trial seed.
_ROUTER_STREAM = 0x726F757465

_STALL_RHO_START = 0.05
_STALL_RHO_CAP = 0.5


class Placement:
    """
    Injective assignment of virtual qubits to physical qubits.
    """

    def __init__(self, virt_to_phys: Sequence[int], num_physical: int) -> None:
        self._v2p = [int(q) for q in virt_to_phys]
        self._p2v = [SPARE] * num_physical
        for virt, phys in enumerate(self._v2p):
            if not 0 <= phys < num_physical:
                raise PlacementError(
                    f"Virtual qubit {virt} placed on {phys},"
                    f" outside of [0, {num_physical})"
                )
            if self._p2v[phys] != SPARE:
                raise PlacementError(
                    f"Virtual qubits {self._p2v[phys]} and {virt}"
                    f" share physical qubit {phys}"
                )
            self._p2v[phys] = virt

    @classmethod
    def identity(cls, n: int, m: int) -> Placement:
        """
        Place virtual qubit ``i`` on physical qubit ``i``.
        """
        if n > m:
            raise PlacementError(f"Cannot place {n} virtual qubits on {m} physical")
        return cls(range(n), m)

    @property
    def num_virtual(self) -> int:
        """
        Number of placed virtual qubits.
        """
        return len(self._v2p)

    @property
    def num_physical(self) -> int:
        """
        Number of physical qubits.
        """
        return len(self._p2v)

    @property
    def virt_to_phys(self) -> tuple[int, ...]:
        """
        Physical qubit of each virtual qubit.
        """
        return tuple(self._v2p)

    @property
    def phys_to_virt(self) -> tuple[int, ...]:
        """
        Virtual qubit on each physical qubit, :data:`SPARE` if none.
        """
        return tuple(self._p2v)

    def phys(self, virt: int) -> int:
        """
        Physical qubit holding ``virt``.
        """
        return self._v2p[virt]

    def virt(self, phys: int) -> int:
        """
        Virtual qubit held by ``phys``, or :data:`SPARE`.
        """
        return self._p2v[phys]

    def swap_physical(self, a: int, b: int) -> None:
        """
        Exchange the contents of physical qubits ``a`` and ``b``.
        """
        va, vb = self._p2v[a], self._p2v[b]
        self._p2v[a], self._p2v[b] = vb, va
        if va != SPARE:
            self._v2p[va] = b
        if vb != SPARE:
            self._v2p[vb] = a

    def copy(self) -> Placement:
        """
        Independent copy.
        """
        return Placement(self._v2p, len(self._p2v))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Placement):
            return NotImplemented
        return self._v2p == other._v2p and len(self._p2v) == len(other._p2v)

    def __hash__(self) -> int:
        return hash((tuple(self._v2p), len(self._p2v)))

    def __repr__(self) -> str:
        return f"Placement({self._v2p!r}, num_physical={len(self._p2v)})"


class RouterConfig(pydantic.BaseModel):
    """
    Parameters of one routing run.
    """

    model_config = pydantic.ConfigDict(
        frozen=True, extra="forbid", validate_default=True
    )

    # Number of DAG layers after the front that contribute forces.
    k: int = pydantic.Field(default=1, ge=0)
    # Minimum coefficient an edge needs to be swapped.
    p: float = 0.0
    # Exponent applied to edge fidelities.
    r: float = pydantic.Field(default=0.0, ge=0.0)
    weight_mode: t.Literal["halving", "diameter"] = "diameter"
    seed: int = pydantic.Field(default=0, ge=0)
    perturb_rho: float = pydantic.Field(default=0.05, ge=0.0, lt=1.0)
    stall_window: int = pydantic.Field(default=8, ge=1)
    max_iterations: int = pydantic.Field(default=10_000_000, gt=0)

    @pydantic.field_validator("p")
    @classmethod
    def _validate_p(cls, value: float) -> float:
        if math.isnan(value):
            raise ValueError("p must not be NaN")
        return value


@dataclasses.dataclass(frozen=True)
class RoutedGate:
    """
    Output gate on physical qubits.

    ``origin`` is the id of the original gate, or ``None`` for an inserted SWAP.
    """

    kind: GateKind
    qubits: tuple[int, ...]
    params: tuple[float, ...] = ()
    origin: int | None = None

    @property
    def inserted(self) -> bool:
        """
        Whether the router inserted this gate.
        """
        return self.origin is None


@dataclasses.dataclass(frozen=True)
class TraceEntry:
    """
    What happened in one router iteration.
    """

    executed: tuple[int, ...]
    swaps: tuple[tuple[int, int], ...]


@dataclasses.dataclass(frozen=True)
class RoutedCircuit:
    """
    Result of the routing pass.
    """

    num_physical: int
    num_virtual: int
    gates: tuple[RoutedGate, ...]
    initial: tuple[int, ...]
    final: tuple[int, ...]
    trace: tuple[TraceEntry, ...] = ()

    @property
    def swaps(self) -> list[tuple[int, int]]:
        """
        Inserted SWAPs in output order.
        """
        return [
            (gate.qubits[0], gate.qubits[1]) for gate in self.gates if gate.inserted
        ]

    @property
    def swap_count(self) -> int:
        """
        Number of inserted SWAPs.
        """
        return sum(1 for gate in self.gates if gate.inserted)

    def initial_placement(self) -> Placement:
        """
        The placement routing started from.
        """
        return Placement(self.initial, self.num_physical)

    def final_placement(self) -> Placement:
        """
        The placement after the last SWAP.
        """
        return Placement(self.final, self.num_physical)

    def to_circuit(self) -> Circuit:
        """
        The routed gates as a circuit over the physical qubits.
        """
        return Circuit(
            num_qubits=self.num_physical,
            gates=tuple(
                Gate(id=index, kind=gate.kind, qubits=gate.qubits, params=gate.params)
                for index, gate in enumerate(self.gates)
            ),
        )


class ForceField:
    """
    Accumulated SWAP coefficient per edge index.

    Edges nothing pulls on are absent.
    """

    def __init__(self, topology: Topology) -> None:
        self.topology = topology
        self.coefficients: dict[int, float] = {}

    def add(self, edge: int, value: float) -> None:
        """
        Add a contribution to an edge's coefficient.
        """
        self.coefficients[edge] = self.coefficients.get(edge, 0.0) + value

    def __getitem__(self, edge: int) -> float:
        return self.coefficients.get(edge, 0.0)

    def __len__(self) -> int:
        return len(self.coefficients)

    def items(self) -> t.ItemsView[int, float]:
        """
        ``(edge index, coefficient)`` pairs.
        """
        return self.coefficients.items()


def random_placement(n: int, topology: Topology, seed: int) -> Placement:
    """
    Uniformly random injective placement of ``n`` virtual qubits.
    """
    if n > topology.m:
        raise PlacementError(
            f"Cannot place {n} virtual qubits on {topology.m} physical qubits"
        )
    rng = np.random.default_rng(seed)
    return Placement(rng.permutation(topology.m)[:n].tolist(), topology.m)


def identity_placement(n: int, topology: Topology) -> Placement:
    """
    Place virtual qubit ``i`` on physical qubit ``i``.
    """
    return Placement.identity(n, topology.m)


def attraction_force(
    placement: Placement, gate: Gate, topology: Topology
) -> tuple[tuple[int, int], tuple[int, int]]:
    """
    Forces pulling the two operands of ``gate`` toward each other.
    """
    if not gate.is_two_qubit:
        raise ValueError(f"Gate {gate.id} is not a two-qubit gate")
    ax, ay = topology.coords[placement.phys(gate.qubits[0])]
    bx, by = topology.coords[placement.phys(gate.qubits[1])]
    return (bx - ax, by - ay), (ax - bx, ay - by)


def layer_weight(
    layer: int, diameter: int, mode: t.Literal["halving", "diameter"]
) -> float:
    """
    Weight of forces from DAG layer ``layer``.

    ``halving`` gives ``2**-layer``, ``diameter`` gives ``diameter**-layer``.
    """
    if layer < 0:
        raise ValueError("Layer index must not be negative")
    if diameter < 1:
        raise ValueError("Diameter must be at least 1")
    if mode == "halving":
        return 2.0**-layer
    if mode == "diameter":
        return float(diameter) ** -layer
    raise ValueError(f"Unknown weight mode {mode!r}")


def _fidelity_scale(topology: Topology, r: float) -> list[float]:
    return [fidelity**r for fidelity in topology.fidelities]


def _accumulate(
    field: ForceField,
    layers: Sequence[Sequence[int]],
    dag: OpDag,
    placement: Placement,
    weights: Sequence[float],
    scale: Sequence[float],
) -> None:
    topology = field.topology
    coords = topology.coords
    for weight, layer in zip(weights, layers):
        for gate_id in layer:
            gate = dag.gate(gate_id)
            if not gate.is_two_qubit:
                continue
            pa = placement.phys(gate.qubits[0])
            pb = placement.phys(gate.qubits[1])
            (ax, ay), (bx, by) = coords[pa], coords[pb]
            fx, fy = bx - ax, by - ay
            for nb in topology.neighbors(pa):
                vx, vy = nb.vector
                field.add(nb.edge, (fx * vx + fy * vy) * weight * scale[nb.edge])
            for nb in topology.neighbors(pb):
                vx, vy = nb.vector
                field.add(nb.edge, -(fx * vx + fy * vy) * weight * scale[nb.edge])


def accumulate_coefficients(
    dag: OpDag, placement: Placement, topology: Topology, cfg: RouterConfig
) -> ForceField:
    """
    Project the attraction forces of the first ``cfg.k + 1`` layers onto edges.

    A gate in layer ``l`` adds ``f . e * w(l) * F_e**r`` to every edge ``e``
    incident to one of its operands, with ``f`` the force on that operand.
    Single-qubit gates contribute nothing.
    """
    field = ForceField(topology)
    weights = [
        layer_weight(layer, max(topology.diameter, 1), cfg.weight_mode)
        for layer in range(cfg.k + 1)
    ]
    _accumulate(
        field,
        dag.front_layers(cfg.k),
        dag,
        placement,
        weights,
        _fidelity_scale(topology, cfg.r),
    )
    return field


def select_swaps(
    field: ForceField,
    placement: Placement,
    cfg: RouterConfig,
    rng: np.random.Generator,
    *,
    rho: float | None = None,
    relaxed: bool = False,
    skip: float = 0.0,
) -> list[int]:
    """
    Pick a conflict-free set of edges to swap, best first.

    Only edges with a positive coefficient of at least ``cfg.p`` qualify
    (any positive one if ``relaxed``). A coefficient of zero or below never
    shortens a pending interaction. Candidates are sorted by decreasing
    coefficient, ties by edge index. One left-to-right pass exchanges each
    adjacent pair with probability ``rho`` (default ``cfg.perturb_rho``).
    The list is then scanned; an edge is taken if none of its endpoints is
    taken already. With ``skip`` above zero, every edge after the first taken
    one is dropped with that probability, so that fewer SWAPs run in parallel.
    """
    if rho is None:
        rho = cfg.perturb_rho
    candidates = [
        (e, c) for e, c in field.items() if c > 0.0 and (relaxed or c >= cfg.p)
    ]
    candidates.sort(key=lambda item: (-item[1], item[0]))
    order = [edge for edge, _ in candidates]
    if rho > 0.0 and len(order) > 1:
        flips = rng.random(len(order) - 1) < rho
        for i in np.flatnonzero(flips).tolist():
            order[i], order[i + 1] = order[i + 1], order[i]
    edges = field.topology.edges
    touched: set[int] = set()
    selected: list[int] = []
    for edge in order:
        a, b = edges[edge]
        if a in touched or b in touched:
            continue
        if placement.virt(a) == SPARE and placement.virt(b) == SPARE:
            continue
        if selected and skip > 0.0 and rng.random() < skip:
            continue
        touched.add(a)
        touched.add(b)
        selected.append(edge)
    return selected


@dataclasses.dataclass(frozen=True)
class RouteStep:
    """
    One router iteration as seen from outside.
    """

    iteration: int
    executed: tuple[int, ...]
    swaps: tuple[tuple[int, int], ...]
    placement: Placement


class Router:
    """
    State of one routing run.

    Use :func:`route` or :func:`route_steps` instead of driving this directly.
    """

    def __init__(
        self,
        circuit: Circuit,
        topology: Topology,
        initial: Placement,
        cfg: RouterConfig,
    ) -> None:
        if circuit.num_qubits > topology.m:
            raise PlacementError(
                f"Circuit needs {circuit.num_qubits} qubits,"
                f" topology has only {topology.m}"
            )
        if initial.num_virtual != circuit.num_qubits:
            raise PlacementError(
                f"Placement covers {initial.num_virtual} virtual qubits,"
                f" circuit has {circuit.num_qubits}"
            )
        if initial.num_physical != topology.m:
            raise PlacementError(
                f"Placement covers {initial.num_physical} physical qubits,"
                f" topology has {topology.m}"
            )
        self.circuit = circuit
        self.topology = topology
        self.cfg = cfg
        self.initial = initial.copy()
        self.placement = initial.copy()
        self.dag = build_dag(circuit)
        self.gates: list[RoutedGate] = []
        self.trace: list[TraceEntry] = []
        self._rng = np.random.default_rng([cfg.seed, _ROUTER_STREAM])
        self._weights = [
            layer_weight(layer, max(topology.diameter, 1), cfg.weight_mode)
            for layer in range(cfg.k + 1)
        ]
        self._scale = _fidelity_scale(topology, cfg.r)
        self._rho = cfg.perturb_rho
        self._stalled = 0
        self._distance: int | None = None

    def _executable(self, gate: Gate) -> bool:
        if not gate.is_two_qubit:
            return True
        return self.topology.has_edge(
            self.placement.phys(gate.qubits[0]), self.placement.phys(gate.qubits[1])
        )

    def _drain(self) -> list[int]:
        executed: list[int] = []
        candidates = self.dag.ready
        while candidates:
            unlocked: set[int] = set()
            for gate_id in candidates:
                gate = self.dag.gate(gate_id)
                if not self._executable(gate):
                    continue
                self.dag.remove(gate_id)
                self.gates.append(
                    RoutedGate(
                        kind=gate.kind,
                        qubits=tuple(self.placement.phys(q) for q in gate.qubits),
                        params=gate.params,
                        origin=gate_id,
                    )
                )
                executed.append(gate_id)
                unlocked.update(
                    succ
                    for succ in self.dag.successors(gate_id)
                    if self.dag.is_ready(succ)
                )
            candidates = sorted(unlocked)
        return executed

    def _front_distance(self) -> int:
        coords = self.topology.coords
        total = 0
        for gate_id in self.dag.ready:
            gate = self.dag.gate(gate_id)
            if not gate.is_two_qubit:
                continue
            ax, ay = coords[self.placement.phys(gate.qubits[0])]
            bx, by = coords[self.placement.phys(gate.qubits[1])]
            total += abs(ax - bx) + abs(ay - by)
        return total

    def _field(self, k: int) -> ForceField:
        field = ForceField(self.topology)
        _accumulate(
            field,
            self.dag.front_layers(k),
            self.dag,
            self.placement,
            self._weights[: k + 1],
            self._scale,
        )
        return field

    def _update_stall(self, progressed: bool) -> None:
        if progressed:
            if self._stalled >= self.cfg.stall_window:
                logger.debug("Progress resumed, restoring rho=%g", self.cfg.perturb_rho)
            self._stalled = 0
            self._rho = self.cfg.perturb_rho
            return
        self._stalled += 1
        if self._stalled % self.cfg.stall_window == 0:
            rho = self._rho * 2 if self._rho > 0.0 else _STALL_RHO_START
            self._rho = min(rho, max(_STALL_RHO_CAP, self.cfg.perturb_rho))
            logger.debug(
                "No gate executed for %d iterations, raising rho to %g",
                self._stalled,
                self._rho,
            )

    def _escape(self) -> list[int]:
        edges = self.topology.edges
        candidates = [
            (edge, c)
            for edge, c in self._field(0).items()
            if self.placement.virt(edges[edge][0]) != SPARE
            or self.placement.virt(edges[edge][1]) != SPARE
        ]
        if not candidates:
            return []
        best = max(c for _, c in candidates)
        choices = [edge for edge, c in candidates if c == best]
        logger.debug("No positive coefficient left, picking one of edges %s", choices)
        return [choices[int(self._rng.integers(len(choices)))]]

    def _select(self, executed: list[int], stuck: bool) -> list[int]:
        # Opposite edges around a diagonal pair tie and are always both taken,
        # which recreates the diagonal. Once the front layer stops getting
        # closer only the best SWAP runs; longer stalls also thin the set.
        skip = self._rho if self._stalled >= self.cfg.stall_window else 0.0
        selected = select_swaps(
            self._field(self.cfg.k),
            self.placement,
            self.cfg,
            self._rng,
            rho=self._rho,
            skip=skip,
        )
        if not selected and not executed:
            logger.debug(
                "No edge reaches p=%g, relaxing to positive front-layer coefficients",
                self.cfg.p,
            )
            selected = select_swaps(
                self._field(0),
                self.placement,
                self.cfg,
                self._rng,
                rho=self._rho,
                relaxed=True,
                skip=skip,
            )
        if not selected and not executed:
            selected = self._escape()
        if stuck:
            del selected[1:]
        return selected

    def steps(self) -> Iterator[RouteStep]:
        """
        Run the pass, yielding after every iteration.
        """
        iteration = 0
        while True:
            executed = self._drain()
            if self.dag.empty:
                if executed or not self.trace:
                    self.trace.append(TraceEntry(tuple(executed), ()))
                    yield RouteStep(
                        iteration, tuple(executed), (), self.placement.copy()
                    )
                break
            if iteration >= self.cfg.max_iterations:
                raise ConvergenceError(
                    f"Routing did not finish within {self.cfg.max_iterations}"
                    f" iterations ({len(self.dag)} gates left)",
                    list(self.trace),
                )
            self._update_stall(bool(executed))
            distance = self._front_distance()
            stuck = (
                not executed
                and self._distance is not None
                and distance >= self._distance
            )
            self._distance = distance
            swaps: list[tuple[int, int]] = []
            for edge in self._select(executed, stuck):
                a, b = self.topology.edges[edge]
                self.placement.swap_physical(a, b)
                self.gates.append(RoutedGate(kind=GateKind.SWAP, qubits=(a, b)))
                swaps.append((a, b))
            self.trace.append(TraceEntry(tuple(executed), tuple(swaps)))
            yield RouteStep(
                iteration, tuple(executed), tuple(swaps), self.placement.copy()
            )
            iteration += 1
        logger.debug(
            "Routed %d gates with %d SWAPs in %d iterations",
            len(self.circuit),
            len(self.gates) - len(self.circuit),
            len(self.trace),
        )

    def result(self) -> RoutedCircuit:
        """
        The routed circuit. Only valid once :meth:`steps` is exhausted.
        """
        return RoutedCircuit(
            num_physical=self.topology.m,
            num_virtual=self.circuit.num_qubits,
            gates=tuple(self.gates),
            initial=self.initial.virt_to_phys,
            final=self.placement.virt_to_phys,
            trace=tuple(self.trace),
        )


def route_steps(
    circuit: Circuit, topology: Topology, initial: Placement, cfg: RouterConfig
) -> Iterator[RouteStep]:
    """
    Route ``circuit`` step by step; see :func:`route`.
    """
    return Router(circuit, topology, initial, cfg).steps()


def route(
    circuit: Circuit, topology: Topology, initial: Placement, cfg: RouterConfig
) -> RoutedCircuit:
    """
    Insert SWAPs so that every two-qubit gate of ``circuit`` acts on coupled
    physical qubits.

    Raises :class:`ConvergenceError` if the DAG is not empty after
    ``cfg.max_iterations`` iterations.
    """
    router = Router(circuit, topology, initial, cfg)
    for _ in router.steps():
        pass
    return router.result()


def routed_to_dict(routed: RoutedCircuit) -> dict[str, t.Any]:
    """
    Serialize a routed circuit to plain JSON data.
    """
    return {
        "num_physical": routed.num_physical,
        "num_virtual": routed.num_virtual,
        "initial": list(routed.initial),
        "final": list(routed.final),
        "gates": [
            {
                "kind": gate.kind.value,
                "qubits": list(gate.qubits),
                "params": list(gate.params),
                "origin": gate.origin,
            }
            for gate in routed.gates
        ],
        "trace": [
            {
                "executed": list(entry.executed),
                "swaps": [list(swap) for swap in entry.swaps],
            }
            for entry in routed.trace
        ],
    }


def routed_from_dict(data: t.Any) -> RoutedCircuit:
    """
    Restore a routed circuit from :func:`routed_to_dict` data.
    """
    try:
        return RoutedCircuit(
            num_physical=int(data["num_physical"]),
            num_virtual=int(data["num_virtual"]),
            initial=tuple(int(q) for q in data["initial"]),
            final=tuple(int(q) for q in data["final"]),
            gates=tuple(
                RoutedGate(
                    kind=GateKind(gate["kind"]),
                    qubits=tuple(int(q) for q in gate["qubits"]),
                    params=tuple(float(v) for v in gate.get("params", ())),
                    origin=None if gate.get("origin") is None else int(gate["origin"]),
                )
                for gate in data["gates"]
            ),
            trace=tuple(
                TraceEntry(
                    executed=tuple(int(g) for g in entry["executed"]),
                    swaps=tuple((int(a), int(b)) for a, b in entry["swaps"]),
                )
                for entry in data.get("trace", ())
            ),
        )
    except KeyError as exc:
        raise ValueError(f"Routed circuit data lacks {exc.args[0]!r}") from exc
    except (TypeError, AttributeError) as exc:
        raise ValueError(f"Malformed routed circuit data: {exc}") from exc


__all__ = (
    "SPARE",
    "ForceField",
    "Placement",
    "RouteStep",
    "RoutedCircuit",
    "RoutedGate",
    "Router",
    "RouterConfig",
    "TraceEntry",
    "accumulate_coefficients",
    "attraction_force",
    "identity_placement",
    "layer_weight",
    "random_placement",
    "route",
    "route_steps",
    "routed_from_dict",
    "routed_to_dict",
)
