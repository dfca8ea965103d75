# GNU General Public License v3.0+ (see LICENSES/GPL-3.0-or-later.txt or
# https://www.gnu.org/licenses/gpl-3.0.txt)
# SPDX-License-Identifier: GPL-3.0-or-later
# SPDX-FileCopyrightText: 2026, forceroute contributors

"""
Correctness oracles for routed circuits.
"""

from __future__ import annotations

import dataclasses
import math
import typing as t
from collections.abc import Iterable, Sequence

import numpy as np

from .circuit import Circuit, Gate, GateKind
from .errors import VerificationError
from .router import SPARE, RoutedCircuit, RoutedGate
from .topology import Topology

DEFAULT_MAX_QUBITS = 10

OVERLAP_TOLERANCE = 1e-9


@dataclasses.dataclass(frozen=True)
class VerificationReport:
    """
    Outcome of one or more checks.

    ``legal`` and ``equivalent`` are ``None`` for checks that were not run.
    ``first_violation`` is ``(output gate index, reason)``.
    """

    legal: bool | None = None
    equivalent: bool | None = None
    first_violation: tuple[int, str] | None = None
    fidelity_overlap: float | None = None

    def __post_init__(self) -> None:
        failed = self.legal is False or self.equivalent is False
        if failed and self.first_violation is None:
            raise ValueError("A failed check must name its first violation")

    @property
    def ok(self) -> bool:
        """
        Whether no check that ran has failed.
        """
        return self.legal is not False and self.equivalent is not False


def check_legality(routed: RoutedCircuit, topology: Topology) -> VerificationReport:
    """
    Check that every two-qubit output gate acts on a coupling edge.
    """
    for index, gate in enumerate(routed.gates):
        if any(not 0 <= q < topology.m for q in gate.qubits):
            return VerificationReport(
                legal=False,
                first_violation=(index, f"qubits {gate.qubits} outside of topology"),
            )
        if len(gate.qubits) == 2 and not topology.has_edge(*gate.qubits):
            return VerificationReport(
                legal=False,
                first_violation=(
                    index,
                    f"{gate.kind.value} on uncoupled qubits"
                    f" {gate.qubits[0]} and {gate.qubits[1]}",
                ),
            )
    return VerificationReport(legal=True)


def _same_operands(gate: Gate, operands: tuple[int, ...]) -> bool:
    if gate.kind.symmetric:
        return sorted(gate.qubits) == sorted(operands)
    return gate.qubits == operands


def check_permutation_equivalence(
    original: Circuit, routed: RoutedCircuit
) -> VerificationReport:
    """
    Replay the SWAPs over the initial placement and map every emitted gate
    back to virtual qubits.

    Each original gate must appear once, on its own virtual operands (in any
    order for symmetric gates), after the previous gates on those qubits.
    Raises :class:`VerificationError` on unknown or repeated gate ids.
    """
    if routed.num_virtual != original.num_qubits:
        raise VerificationError(
            f"Routed circuit has {routed.num_virtual} virtual qubits,"
            f" original circuit {original.num_qubits}"
        )
    placement = routed.initial_placement()
    last_on_qubit = [-1] * original.num_qubits
    seen: set[int] = set()
    violation: tuple[int, str] | None = None
    for index, out in enumerate(routed.gates):
        if out.origin is None:
            if out.kind is not GateKind.SWAP or len(out.qubits) != 2:
                raise VerificationError(
                    f"Output gate {index} is untagged but not a SWAP"
                )
            placement.swap_physical(*out.qubits)
            continue
        if not 0 <= out.origin < len(original.gates):
            raise VerificationError(
                f"Output gate {index} refers to unknown gate {out.origin}"
            )
        if out.origin in seen:
            raise VerificationError(
                f"Output gate {index} repeats gate {out.origin}"
            )
        seen.add(out.origin)
        if violation is not None:
            continue
        gate = original.gates[out.origin]
        operands = tuple(placement.virt(q) for q in out.qubits)
        if gate.kind is not out.kind or gate.params != out.params:
            violation = (index, f"gate {gate.id} changed kind or parameters")
        elif SPARE in operands or not _same_operands(gate, operands):
            violation = (
                index,
                f"gate {gate.id} expects virtual qubits {gate.qubits},"
                f" placement gives {operands}",
            )
        elif any(last_on_qubit[q] > gate.id for q in gate.qubits):
            violation = (index, f"gate {gate.id} emitted after a later dependent gate")
        for q in gate.qubits:
            last_on_qubit[q] = max(last_on_qubit[q], gate.id)
    if violation is None and len(seen) != len(original.gates):
        missing = min(set(range(len(original.gates))) - seen)
        violation = (len(routed.gates), f"gate {missing} was never emitted")
    if violation is None and placement.virt_to_phys != tuple(routed.final):
        violation = (len(routed.gates), "replayed placement differs from final one")
    if violation is not None:
        return VerificationReport(equivalent=False, first_violation=violation)
    return VerificationReport(equivalent=True)


_SQRT_HALF = 1 / math.sqrt(2)

_SINGLE_QUBIT_MATRICES: dict[GateKind, np.ndarray] = {
    GateKind.H: np.array([[1, 1], [1, -1]], dtype=complex) * _SQRT_HALF,
    GateKind.X: np.array([[0, 1], [1, 0]], dtype=complex),
    GateKind.T: np.diag([1, np.exp(1j * math.pi / 4)]),
    GateKind.TDG: np.diag([1, np.exp(-1j * math.pi / 4)]),
    GateKind.S: np.diag([1, 1j]),
    GateKind.SDG: np.diag([1, -1j]),
}


def _two_qubit_matrix(kind: GateKind, params: tuple[float, ...]) -> np.ndarray:
    # Basis order |first operand, second operand>.
    if kind is GateKind.CX:
        matrix = np.eye(4, dtype=complex)[[0, 1, 3, 2]]
    elif kind is GateKind.CZ:
        matrix = np.diag([1, 1, 1, -1]).astype(complex)
    elif kind is GateKind.CP:
        matrix = np.diag([1, 1, 1, np.exp(1j * params[0])])
    elif kind is GateKind.SWAP:
        matrix = np.eye(4, dtype=complex)[[0, 2, 1, 3]]
    else:
        raise VerificationError(f"Cannot simulate {kind.value} gates")
    return matrix.reshape(2, 2, 2, 2)


def _check_simulable(gates: Iterable[Gate | RoutedGate]) -> None:
    for gate in gates:
        if gate.kind in (GateKind.GENERIC_1Q, GateKind.GENERIC_2Q):
            raise VerificationError(f"Cannot simulate {gate.kind.value} gates")


def _apply(
    state: np.ndarray,
    num_qubits: int,
    gate: Gate | RoutedGate,
    qubits: Sequence[int],
) -> np.ndarray:
    axes = [num_qubits - 1 - q for q in qubits]
    if len(qubits) == 1:
        matrix = _SINGLE_QUBIT_MATRICES.get(gate.kind)
        if matrix is None:
            raise VerificationError(f"Cannot simulate {gate.kind.value} gates")
        result = np.tensordot(matrix, state, axes=([1], axes))
        return np.moveaxis(result, 0, axes[0])
    matrix = _two_qubit_matrix(gate.kind, gate.params)
    result = np.tensordot(matrix, state, axes=([2, 3], axes))
    return np.moveaxis(result, [0, 1], axes)


def _run(
    gates: Iterable[tuple[Gate | RoutedGate, Sequence[int]]],
    num_qubits: int,
    initial: int,
) -> np.ndarray:
    state = np.zeros(2**num_qubits, dtype=complex)
    state[initial] = 1.0
    tensor = state.reshape((2,) * num_qubits) if num_qubits else state
    for gate, qubits in gates:
        tensor = _apply(tensor, num_qubits, gate, qubits)
    return tensor.reshape(-1)


def simulate_statevector(circuit: Circuit, initial: int = 0) -> np.ndarray:
    """
    Apply ``circuit`` to the basis state ``initial``.

    Qubit ``q`` is bit ``q`` of a basis-state index.
    """
    _check_simulable(circuit.gates)
    if not 0 <= initial < 2**circuit.num_qubits:
        raise ValueError(f"Basis state {initial} out of range")
    return _run(
        ((gate, gate.qubits) for gate in circuit.gates), circuit.num_qubits, initial
    )


def basis_state_of(registers: Iterable[tuple[Sequence[int], int]]) -> int:
    """
    Basis-state index holding ``value`` in each ``(qubits, value)`` register.

    Register qubits are listed from the least significant bit.
    """
    index = 0
    for qubits, value in registers:
        if value >> len(qubits):
            raise ValueError(f"Value {value} does not fit into {len(qubits)} qubits")
        for position, qubit in enumerate(qubits):
            if (value >> position) & 1:
                index |= 1 << qubit
    return index


def read_register(index: int, qubits: Sequence[int]) -> int:
    """
    Value of a register within a basis-state index.
    """
    return sum(
        ((index >> qubit) & 1) << position for position, qubit in enumerate(qubits)
    )


def active_qubits(routed: RoutedCircuit) -> list[int]:
    """
    Physical qubits that hold a virtual qubit initially or are touched by a gate.
    """
    active = set(routed.initial)
    for gate in routed.gates:
        active.update(gate.qubits)
    return sorted(active)


def statevector_feasible(
    original: Circuit, routed: RoutedCircuit, max_qubits: int = DEFAULT_MAX_QUBITS
) -> bool:
    """
    Whether :func:`statevector_oracle` can check this pair.
    """
    if original.num_qubits > max_qubits or len(active_qubits(routed)) > max_qubits:
        return False
    return not any(
        gate.kind in (GateKind.GENERIC_1Q, GateKind.GENERIC_2Q)
        for gate in original.gates
    )


def _embed(state: np.ndarray, target: Sequence[int], width: int) -> np.ndarray:
    # Virtual qubit v goes to tensor axis target[v]; all other axes are |0>.
    n = len(target)
    embedded = np.zeros((2,) * width, dtype=complex)
    index: list[t.Any] = [0] * width
    for axis in target:
        index[axis] = slice(None)
    order = sorted(range(n), key=lambda v: target[v])
    embedded[tuple(index)] = np.transpose(
        state.reshape((2,) * n), [n - 1 - v for v in order]
    )
    return embedded.reshape(-1)


def statevector_oracle(
    original: Circuit,
    routed: RoutedCircuit,
    max_qubits: int = DEFAULT_MAX_QUBITS,
) -> VerificationReport:
    """
    Compare the states both circuits produce from ``|0...0>``.

    Only physical qubits that are used are simulated; the others stay in
    ``|0>``. The routed state is compared with the original one moved to the
    final placement. Raises :class:`VerificationError` when the circuits are
    too large or contain gates without a matrix.
    """
    n = original.num_qubits
    active = active_qubits(routed)
    if n > max_qubits or len(active) > max_qubits:
        raise VerificationError(
            f"Statevector check needs {max(n, len(active))} qubits,"
            f" limit is {max_qubits}"
        )
    _check_simulable(original.gates)
    _check_simulable(routed.gates)
    compact = {phys: index for index, phys in enumerate(active)}
    width = len(active)

    target = [width - 1 - compact[routed.final[v]] for v in range(n)]
    expected = _embed(simulate_statevector(original), target, width)
    actual = _run(
        ((gate, [compact[q] for q in gate.qubits]) for gate in routed.gates),
        width,
        0,
    )
    overlap = float(abs(np.vdot(expected, actual)) ** 2)
    if overlap >= 1.0 - OVERLAP_TOLERANCE:
        return VerificationReport(equivalent=True, fidelity_overlap=overlap)
    return VerificationReport(
        equivalent=False,
        first_violation=(len(routed.gates), f"state overlap {overlap:.12g}"),
        fidelity_overlap=overlap,
    )


def verify_routed(
    original: Circuit,
    routed: RoutedCircuit,
    topology: Topology,
    max_qubits: int = DEFAULT_MAX_QUBITS,
) -> VerificationReport:
    """
    Run legality and replay checks, and the statevector check where feasible.
    """
    legality = check_legality(routed, topology)
    equivalence = check_permutation_equivalence(original, routed)
    overlap: float | None = None
    violation = legality.first_violation or equivalence.first_violation
    equivalent = equivalence.equivalent
    if equivalent and statevector_feasible(original, routed, max_qubits):
        state = statevector_oracle(original, routed, max_qubits)
        overlap = state.fidelity_overlap
        equivalent = state.equivalent
        violation = violation or state.first_violation
    return VerificationReport(
        legal=legality.legal,
        equivalent=equivalent,
        first_violation=violation,
        fidelity_overlap=overlap,
    )


__all__ = (
    "DEFAULT_MAX_QUBITS",
    "OVERLAP_TOLERANCE",
    "VerificationReport",
    "active_qubits",
    "basis_state_of",
    "check_legality",
    "check_permutation_equivalence",
    "read_register",
    "simulate_statevector",
    "statevector_feasible",
    "statevector_oracle",
    "verify_routed",
)
