# GNU General Public License v3.0+ (see LICENSES/GPL-3.0-or-later.txt or
# https://www.gnu.org/licenses/gpl-3.0.txt)
# SPDX-License-Identifier: GPL-3.0-or-later
# SPDX-FileCopyrightText: 2026, forceroute contributors

"""
Benchmark circuit generators.

All generators only emit one- and two-qubit gates. Seeded generators are
deterministic for equal arguments.
"""

from __future__ import annotations

import math

import numpy as np

from . import Circuit, CircuitBuilder, GateKind

# Single-qubit gates drawn by the random circuit generator. All of them are
# understood by the statevector oracle.
_RANDOM_1Q_KINDS: tuple[GateKind, ...] = (
    GateKind.H,
    GateKind.X,
    GateKind.T,
    GateKind.TDG,
    GateKind.S,
    GateKind.SDG,
)


def gen_random(n: int, depth: int, two_q_fraction: float, seed: int) -> Circuit:
    """
    Layered random circuit.

    In every layer the qubits are shuffled. Walking the shuffled order, each
    slot becomes a CX on the slot and the next one with probability
    ``two_q_fraction`` (if a next slot exists), otherwise a random
    single-qubit gate on the slot.
    """
    if n < 2:
        raise ValueError("Random circuits need at least 2 qubits")
    if depth < 1:
        raise ValueError("Depth must be at least 1")
    if not 0.0 <= two_q_fraction <= 1.0:
        raise ValueError("two_q_fraction must lie in [0, 1]")
    rng = np.random.default_rng(seed)
    builder = CircuitBuilder(n)
    for _ in range(depth):
        order = rng.permutation(n)
        slot = 0
        while slot < n:
            if slot + 1 < n and rng.random() < two_q_fraction:
                builder.cx(int(order[slot]), int(order[slot + 1]))
                slot += 2
            else:
                kind = _RANDOM_1Q_KINDS[int(rng.integers(len(_RANDOM_1Q_KINDS)))]
                builder.append(kind, (int(order[slot]),))
                slot += 1
    return builder.build()


def gen_qft(n: int) -> Circuit:
    """
    Quantum Fourier transform without the final qubit reversal.

    Qubit ``i`` gets an H followed by controlled-phase rotations by
    ``pi / 2**(j - i)`` controlled by every ``j > i``.
    """
    if n < 1:
        raise ValueError("QFT needs at least 1 qubit")
    builder = CircuitBuilder(n)
    for i in range(n):
        builder.h(i)
        for j in range(i + 1, n):
            builder.cp(math.pi / 2 ** (j - i), j, i)
    return builder.build()


def gen_quantum_volume(n: int, depth: int, seed: int) -> Circuit:
    """
    Quantum-volume interaction structure.

    Every layer pairs up a random permutation of the qubits; each pair gets
    one parameterless generic two-qubit gate standing in for an SU(4) block.
    """
    if n < 2:
        raise ValueError("Quantum volume circuits need at least 2 qubits")
    if depth < 1:
        raise ValueError("Depth must be at least 1")
    rng = np.random.default_rng(seed)
    builder = CircuitBuilder(n)
    for _ in range(depth):
        order = rng.permutation(n)
        for pair in range(n // 2):
            builder.append(
                GateKind.GENERIC_2Q,
                (int(order[2 * pair]), int(order[2 * pair + 1])),
            )
    return builder.build()


def cuccaro_layout(bits: int) -> tuple[int, list[int], list[int], int]:
    """
    Qubit roles of :func:`gen_cuccaro_adder`.

    Returns ``(carry_in, a_qubits, b_qubits, carry_out)``; register lists are
    ordered from the least significant bit.
    """
    a_qubits = [2 + 2 * i for i in range(bits)]
    b_qubits = [1 + 2 * i for i in range(bits)]
    return 0, a_qubits, b_qubits, 2 * bits + 1


def _maj(builder: CircuitBuilder, c: int, b: int, a: int) -> None:
    builder.cx(a, b)
    builder.cx(a, c)
    builder.ccx(c, b, a)


def _uma(builder: CircuitBuilder, c: int, b: int, a: int) -> None:
    builder.ccx(c, b, a)
    builder.cx(a, c)
    builder.cx(c, b)


def gen_cuccaro_adder(bits: int) -> Circuit:
    """
    Ripple-carry adder computing ``b := a + b`` on ``2 * bits + 2`` qubits.

    The carry-out qubit receives the final carry; ``a`` and the carry-in are
    restored. Toffolis are expanded into Clifford+T gates.
    """
    if bits < 1:
        raise ValueError("Adder needs at least 1 bit")
    carry_in, a_qubits, b_qubits, carry_out = cuccaro_layout(bits)
    builder = CircuitBuilder(2 * bits + 2)
    _maj(builder, carry_in, b_qubits[0], a_qubits[0])
    for i in range(1, bits):
        _maj(builder, a_qubits[i - 1], b_qubits[i], a_qubits[i])
    builder.cx(a_qubits[-1], carry_out)
    for i in range(bits - 1, 0, -1):
        _uma(builder, a_qubits[i - 1], b_qubits[i], a_qubits[i])
    _uma(builder, carry_in, b_qubits[0], a_qubits[0])
    return builder.build()


__all__ = (
    "cuccaro_layout",
    "gen_cuccaro_adder",
    "gen_qft",
    "gen_quantum_volume",
    "gen_random",
)
