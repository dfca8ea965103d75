# GNU General Public License v3.0+ (see LICENSES/GPL-3.0-or-later.txt or
# https://www.gnu.org/licenses/gpl-3.0.txt)
# SPDX-License-Identifier: GPL-3.0-or-later
# SPDX-FileCopyrightText: 2026, forceroute contributors

"""
Gate dependency DAG.

Every gate depends on the previous gate touching each of its qubits. Gates
whose predecessors have all been removed form the ready set (layer 0); a gate
that is not ready sits one layer below its deepest live predecessor.
"""

from __future__ import annotations

from .circuit import Circuit, Gate
from .errors import DagError


class OpDag:
    """
    Mutable dependency DAG over the gates of a circuit.

    Use :func:`build_dag` to create one.
    """

    def __init__(self, circuit: Circuit) -> None:
        count = len(circuit.gates)
        self.circuit = circuit
        self._preds: list[list[int]] = [[] for _ in range(count)]
        self._succs: list[list[int]] = [[] for _ in range(count)]
        last_on_qubit = [-1] * circuit.num_qubits
        for gate in circuit.gates:
            for qubit in gate.qubits:
                pred = last_on_qubit[qubit]
                if pred >= 0 and pred not in self._preds[gate.id]:
                    self._preds[gate.id].append(pred)
                    self._succs[pred].append(gate.id)
                last_on_qubit[qubit] = gate.id
        self._indegree = [len(preds) for preds in self._preds]
        self._removed = [False] * count
        self._ready = {gate_id for gate_id in range(count) if not self._preds[gate_id]}
        self._remaining = count
        self._layer_cache: dict[int, int] | None = None

    def __len__(self) -> int:
        return self._remaining

    @property
    def empty(self) -> bool:
        """
        Whether all gates have been removed.
        """
        return self._remaining == 0

    @property
    def ready(self) -> list[int]:
        """
        Ready gate ids in ascending order.
        """
        return sorted(self._ready)

    def is_ready(self, gate_id: int) -> bool:
        """
        Whether the gate is in the ready set.
        """
        return gate_id in self._ready

    def gate(self, gate_id: int) -> Gate:
        """
        Look up a gate by id.
        """
        return self.circuit.gates[gate_id]

    def nodes(self) -> list[int]:
        """
        Ids of the gates not removed yet, ascending.
        """
        return [gate_id for gate_id, removed in enumerate(self._removed) if not removed]

    def edges(self) -> list[tuple[int, int]]:
        """
        Dependency edges between gates not removed yet.
        """
        return [
            (gate_id, succ)
            for gate_id in self.nodes()
            for succ in self._succs[gate_id]
        ]

    def predecessors(self, gate_id: int) -> list[int]:
        """
        Live immediate predecessors of a gate.
        """
        return [pred for pred in self._preds[gate_id] if not self._removed[pred]]

    def successors(self, gate_id: int) -> list[int]:
        """
        Immediate successors of a gate.
        """
        return list(self._succs[gate_id])

    def front_layers(self, k: int) -> list[list[int]]:
        """
        Return the gate ids of layers ``0..k``, each list ascending.

        Only the part of the DAG within ``k`` layers of the ready set is visited.
        """
        if k < 0:
            raise ValueError("Lookahead must not be negative")
        current = self.ready
        layers = [current]
        pending: dict[int, int] = {}
        for _ in range(k):
            following: list[int] = []
            for gate_id in current:
                for succ in self._succs[gate_id]:
                    left = pending.get(succ, self._indegree[succ]) - 1
                    pending[succ] = left
                    if left == 0:
                        following.append(succ)
            following.sort()
            layers.append(following)
            current = following
        return layers

    def remove(self, gate_id: int) -> None:
        """
        Remove a ready gate and unlock its successors.
        """
        if gate_id not in self._ready:
            if 0 <= gate_id < len(self._removed) and self._removed[gate_id]:
                raise DagError(f"Gate {gate_id} has already been removed")
            raise DagError(f"Gate {gate_id} is not ready and cannot be removed")
        self._ready.remove(gate_id)
        self._removed[gate_id] = True
        self._remaining -= 1
        for succ in self._succs[gate_id]:
            self._indegree[succ] -= 1
            if self._indegree[succ] == 0:
                self._ready.add(succ)
        self._layer_cache = None

    def layers(self) -> dict[int, int]:
        """
        Layer index of every live gate.

        Recomputed after removals and cached until the next one.
        """
        if self._layer_cache is None:
            cache: dict[int, int] = {}
            pending: dict[int, int] = {}
            current = self.ready
            layer = 0
            while current:
                following: list[int] = []
                for gate_id in current:
                    cache[gate_id] = layer
                    for succ in self._succs[gate_id]:
                        left = pending.get(succ, self._indegree[succ]) - 1
                        pending[succ] = left
                        if left == 0:
                            following.append(succ)
                current = following
                layer += 1
            self._layer_cache = cache
        return self._layer_cache

    def layer(self, gate_id: int) -> int:
        """
        Layer index of a live gate.
        """
        try:
            return self.layers()[gate_id]
        except KeyError:
            raise DagError(f"Gate {gate_id} is not part of the DAG") from None

    def to_dot(self, name: str = "ops") -> str:
        """
        Export the live DAG as Graphviz DOT text.
        """
        lines = [f"digraph {name} {{"]
        layers = self.layers()
        for gate_id in self.nodes():
            gate = self.gate(gate_id)
            operands = ",".join(f"q{q}" for q in gate.qubits)
            lines.append(
                f'  g{gate_id} [label="{gate_id}: {gate.kind.value} {operands}'
                f' (l={layers[gate_id]})"];'
            )
        for pred, succ in self.edges():
            lines.append(f"  g{pred} -> g{succ};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def build_dag(circuit: Circuit) -> OpDag:
    """
    Build the dependency DAG of a circuit.
    """
    return OpDag(circuit)


def front_layers(dag: OpDag, k: int) -> list[list[int]]:
    """
    Gate ids of layers ``0..k``.
    """
    return dag.front_layers(k)


def remove(dag: OpDag, gate_id: int) -> None:
    """
    Remove a ready gate from the DAG.
    """
    dag.remove(gate_id)


__all__ = (
    "OpDag",
    "build_dag",
    "front_layers",
    "remove",
)
