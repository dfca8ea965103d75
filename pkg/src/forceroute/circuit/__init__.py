# GNU General Public License v3.0+ (see LICENSES/GPL-3.0-or-later.txt or
# https://www.gnu.org/licenses/gpl-3.0.txt)
# SPDX-License-Identifier: GPL-3.0-or-later
# SPDX-FileCopyrightText: 2026, forceroute contributors

"""
Circuit intermediate representation.
"""

from __future__ import annotations

import enum
from collections.abc import Iterable, Sequence
from dataclasses import dataclass


class GateKind(enum.Enum):
    """
    Gate opcode. The value is the OpenQASM name.
    """

    GENERIC_1Q = "g1"
    GENERIC_2Q = "g2"
    H = "h"
    X = "x"
    T = "t"
    TDG = "tdg"
    S = "s"
    SDG = "sdg"
    CX = "cx"
    CP = "cp"
    CZ = "cz"
    SWAP = "swap"

    @property
    def arity(self) -> int:
        """
        Number of qubit operands.
        """
        return 2 if self in _TWO_QUBIT_KINDS else 1

    @property
    def num_params(self) -> int:
        """
        Number of angle parameters.
        """
        return 1 if self is GateKind.CP else 0

    @property
    def symmetric(self) -> bool:
        """
        Whether exchanging the two operands leaves the gate unchanged.
        """
        return self in _SYMMETRIC_KINDS


_TWO_QUBIT_KINDS = frozenset(
    {GateKind.GENERIC_2Q, GateKind.CX, GateKind.CP, GateKind.CZ, GateKind.SWAP}
)
_SYMMETRIC_KINDS = frozenset({GateKind.CP, GateKind.CZ, GateKind.SWAP})


@dataclass(frozen=True)
class Gate:
    """
    A gate acting on one or two virtual qubits.
    """

    id: int
    kind: GateKind
    qubits: tuple[int, ...]
    params: tuple[float, ...] = ()

    def __post_init__(self) -> None:
        if len(self.qubits) != self.kind.arity:
            raise ValueError(
                f"Gate {self.id} ({self.kind.value}) needs {self.kind.arity}"
                f" operand(s), got {len(self.qubits)}"
            )
        if self.kind.arity == 2 and self.qubits[0] == self.qubits[1]:
            raise ValueError(
                f"Gate {self.id} ({self.kind.value}) has identical operands"
            )
        if len(self.params) != self.kind.num_params:
            raise ValueError(
                f"Gate {self.id} ({self.kind.value}) needs {self.kind.num_params}"
                f" parameter(s), got {len(self.params)}"
            )

    @property
    def is_two_qubit(self) -> bool:
        """
        Whether the gate acts on two qubits.
        """
        return self.kind.arity == 2


@dataclass(frozen=True)
class Circuit:
    """
    An ordered list of gates over ``num_qubits`` virtual qubits.
    """

    num_qubits: int
    gates: tuple[Gate, ...] = ()

    def __post_init__(self) -> None:
        if self.num_qubits < 0:
            raise ValueError("Number of qubits must not be negative")
        for position, gate in enumerate(self.gates):
            if gate.id != position:
                raise ValueError(
                    f"Gate at position {position} has id {gate.id}"
                    " (ids must equal positions)"
                )
            for qubit in gate.qubits:
                if not 0 <= qubit < self.num_qubits:
                    raise ValueError(
                        f"Gate {gate.id} uses qubit {qubit} outside of"
                        f" [0, {self.num_qubits})"
                    )

    def __len__(self) -> int:
        return len(self.gates)

    @property
    def two_qubit_count(self) -> int:
        """
        Number of two-qubit gates.
        """
        return sum(1 for gate in self.gates if gate.is_two_qubit)

    def count_ops(self) -> dict[GateKind, int]:
        """
        Count gates per kind.
        """
        result: dict[GateKind, int] = {}
        for gate in self.gates:
            result[gate.kind] = result.get(gate.kind, 0) + 1
        return result


class CircuitBuilder:
    """
    Incrementally assemble a circuit; gate ids are assigned in order.
    """

    def __init__(self, num_qubits: int) -> None:
        self.num_qubits = num_qubits
        self._gates: list[Gate] = []

    def append(
        self, kind: GateKind, qubits: Sequence[int], params: Iterable[float] = ()
    ) -> CircuitBuilder:
        """
        Append a gate.
        """
        self._gates.append(
            Gate(
                id=len(self._gates),
                kind=kind,
                qubits=tuple(int(q) for q in qubits),
                params=tuple(float(v) for v in params),
            )
        )
        return self

    # pylint: disable=missing-function-docstring

    def h(self, q: int) -> CircuitBuilder:
        return self.append(GateKind.H, (q,))

    def x(self, q: int) -> CircuitBuilder:
        return self.append(GateKind.X, (q,))

    def t(self, q: int) -> CircuitBuilder:
        return self.append(GateKind.T, (q,))

    def tdg(self, q: int) -> CircuitBuilder:
        return self.append(GateKind.TDG, (q,))

    def s(self, q: int) -> CircuitBuilder:
        return self.append(GateKind.S, (q,))

    def cx(self, control: int, target: int) -> CircuitBuilder:
        return self.append(GateKind.CX, (control, target))

    def cp(self, angle: float, control: int, target: int) -> CircuitBuilder:
        return self.append(GateKind.CP, (control, target), (angle,))

    def cz(self, a: int, b: int) -> CircuitBuilder:
        return self.append(GateKind.CZ, (a, b))

    def swap(self, a: int, b: int) -> CircuitBuilder:
        return self.append(GateKind.SWAP, (a, b))

    # pylint: enable=missing-function-docstring

    def ccx(self, a: int, b: int, target: int) -> CircuitBuilder:
        """
        Append a Toffoli gate, decomposed into 6 CX, 7 T/Tdg and 2 H gates.
        """
        self.h(target)
        self.cx(b, target)
        self.tdg(target)
        self.cx(a, target)
        self.t(target)
        self.cx(b, target)
        self.tdg(target)
        self.cx(a, target)
        self.t(b)
        self.t(target)
        self.h(target)
        self.cx(a, b)
        self.t(a)
        self.tdg(b)
        self.cx(a, b)
        return self

    def build(self) -> Circuit:
        """
        Create the circuit.
        """
        return Circuit(num_qubits=self.num_qubits, gates=tuple(self._gates))


__all__ = (
    "Circuit",
    "CircuitBuilder",
    "Gate",
    "GateKind",
)
