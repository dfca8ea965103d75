# GNU General Public License v3.0+ (see LICENSES/GPL-3.0-or-later.txt or
# https://www.gnu.org/licenses/gpl-3.0.txt)
# SPDX-License-Identifier: GPL-3.0-or-later
# SPDX-FileCopyrightText: 2026, forceroute contributors

"""
Reading and writing the supported OpenQASM 2.0 subset.

Supported are a single ``qreg``, the gates of :class:`GateKind` (plus the
aliases ``CX`` and ``cu1``), ``include "qelib1.inc"``, ``creg``
declarations, ``opaque`` declarations and ``//`` or ``/* */`` comments.
``measure`` and ``barrier`` statements are ignored with a warning.
"""

from __future__ import annotations

import logging
import math
import operator
import os
import typing as t
from collections.abc import Callable
from dataclasses import dataclass

import pyparsing as pp

from ..errors import Location, QasmError
from . import Circuit, CircuitBuilder, GateKind

logger = logging.getLogger(__name__)

_GATE_NAMES: dict[str, GateKind] = {kind.value: kind for kind in GateKind}
_GATE_NAMES.update(
    {
        "CX": GateKind.CX,
        "cu1": GateKind.CP,
    }
)

_ALLOWED_INCLUDES = frozenset({"qelib1.inc"})

_BINARY_OPS: dict[str, Callable[[float, float], float]] = {
    "+": operator.add,
    "-": operator.sub,
    "*": operator.mul,
    "/": operator.truediv,
}


@dataclass(frozen=True)
class _Statement:
    kind: str
    location: Location
    tokens: list[t.Any]


def _located(kind: str) -> Callable[[str, int, pp.ParseResults], _Statement]:
    def action(text: str, loc: int, toks: pp.ParseResults) -> _Statement:
        return _Statement(
            kind=kind,
            location=Location(line=pp.lineno(loc, text), column=pp.col(loc, text)),
            tokens=toks.as_list(),
        )

    return action


def _unary(toks: pp.ParseResults) -> float:
    sign, value = toks[0]
    return -value if sign == "-" else value


def _binary(toks: pp.ParseResults) -> float:
    items = toks[0]
    value = items[0]
    for op, rhs in zip(items[1::2], items[2::2]):
        value = _BINARY_OPS[op](value, rhs)
    return value


def _make_grammar() -> pp.ParserElement:
    lbrack, rbrack, lpar, rpar, semi = map(pp.Suppress, "[]();")
    ident = pp.Word(pp.alphas + "_", pp.alphanums + "_")
    integer = pp.Word(pp.nums).set_parse_action(lambda toks: int(toks[0]))
    real = pp.Regex(r"(\d+\.\d*|\.\d+|\d+)([eE][-+]?\d+)?").set_parse_action(
        lambda toks: float(toks[0])
    )
    pi = pp.Keyword("pi").set_parse_action(lambda: math.pi)
    expr = pp.infix_notation(
        real | pi,
        [
            (pp.one_of("+ -"), 1, pp.OpAssoc.RIGHT, _unary),
            (pp.one_of("* /"), 2, pp.OpAssoc.LEFT, _binary),
            (pp.one_of("+ -"), 2, pp.OpAssoc.LEFT, _binary),
        ],
    )
    qubit = pp.Group(ident + lbrack + integer + rbrack)
    register = ident + lbrack + integer + rbrack + semi
    rest = pp.SkipTo(";") + semi
    params = pp.Optional(lpar + pp.Optional(pp.DelimitedList(expr)) + rpar)

    def keyword(kind: str, tail: pp.ParserElement) -> pp.ParserElement:
        return (pp.Keyword(kind) + tail).set_parse_action(_located(kind))

    header = pp.Keyword("OPENQASM") + pp.Regex(r"\d+(\.\d+)?") + semi
    header.set_parse_action(_located("header"))
    call = ident + pp.Group(params) + pp.Group(pp.DelimitedList(qubit)) + semi
    call.set_parse_action(_located("call"))
    statement = pp.MatchFirst(
        [
            keyword("include", pp.QuotedString('"') + semi),
            keyword("qreg", register),
            keyword("creg", register),
            keyword("opaque", ident + rest),
            keyword("measure", rest),
            keyword("barrier", rest),
            keyword("reset", rest),
            keyword("if", rest),
            keyword("gate", pp.SkipTo("}") + pp.Suppress("}")),
            call,
        ]
    )
    program = header + pp.ZeroOrMore(statement) + pp.StringEnd()
    program.ignore(pp.cpp_style_comment)
    return program


_GRAMMAR = _make_grammar()


class _CircuitAssembler:
    def __init__(self) -> None:
        self.register: tuple[str, int] | None = None
        self.builder: CircuitBuilder | None = None

    def _qubit_index(self, ref: list[t.Any], location: Location) -> int:
        name, index = ref
        if self.register is None or self.builder is None:
            raise QasmError("Gate used before a quantum register is declared", location)
        if name != self.register[0]:
            raise QasmError(f"Unknown quantum register {name!r}", location)
        if index >= self.register[1]:
            raise QasmError(
                f"Qubit index {index} out of range for register"
                f" {name}[{self.register[1]}]",
                location,
            )
        return index

    def _handle_call(self, statement: _Statement) -> None:
        name, params, args = statement.tokens
        if len(args) >= 3:
            raise QasmError(
                f"{len(args)}-qubit gate unsupported ({name});"
                " decompose into one- and two-qubit gates first",
                statement.location,
            )
        kind = _GATE_NAMES.get(name)
        if kind is None:
            raise QasmError(f"Unsupported gate {name!r}", statement.location)
        if len(args) != kind.arity:
            raise QasmError(
                f"Gate {name!r} needs {kind.arity} qubit(s), got {len(args)}",
                statement.location,
            )
        if len(params) != kind.num_params:
            raise QasmError(
                f"Gate {name!r} needs {kind.num_params} parameter(s),"
                f" got {len(params)}",
                statement.location,
            )
        qubits = [self._qubit_index(arg, statement.location) for arg in args]
        assert self.builder is not None
        try:
            self.builder.append(kind, qubits, params)
        except ValueError as exc:
            raise QasmError(str(exc), statement.location) from exc

    def handle(self, statement: _Statement) -> None:
        """
        Process one parsed statement.
        """
        kind = statement.kind
        if kind == "header":
            version = statement.tokens[1]
            if version not in ("2", "2.0"):
                raise QasmError(
                    f"Unsupported OpenQASM version {version}", statement.location
                )
        elif kind == "include":
            if statement.tokens[1] not in _ALLOWED_INCLUDES:
                raise QasmError(
                    f"Cannot include {statement.tokens[1]!r}", statement.location
                )
        elif kind == "qreg":
            if self.register is not None:
                raise QasmError(
                    "Multiple quantum registers are not supported", statement.location
                )
            self.register = (statement.tokens[1], statement.tokens[2])
            self.builder = CircuitBuilder(statement.tokens[2])
        elif kind in ("creg", "opaque"):
            pass
        elif kind in ("measure", "barrier"):
            logger.warning("Ignoring %s statement at %s", kind, statement.location)
        elif kind == "reset":
            raise QasmError("reset is not supported", statement.location)
        elif kind == "if":
            raise QasmError("Classical control is not supported", statement.location)
        elif kind == "gate":
            raise QasmError(
                "Custom gate definitions are not supported", statement.location
            )
        else:
            self._handle_call(statement)

    def result(self) -> Circuit:
        """
        Return the assembled circuit.
        """
        if self.builder is None:
            raise QasmError("No quantum register declared")
        return self.builder.build()


def parse_qasm(text: str) -> Circuit:
    """
    Parse OpenQASM 2.0 text into a circuit.

    Raises :class:`QasmError` with a source location on syntax errors,
    unsupported gates, gates with three or more qubits, and multiple
    quantum registers.
    """
    try:
        statements = _GRAMMAR.parse_string(text, parse_all=True)
    except pp.ParseBaseException as exc:
        raise QasmError(
            f"Syntax error: {exc.msg}", Location(line=exc.lineno, column=exc.col)
        ) from None
    assembler = _CircuitAssembler()
    for statement in statements:
        assembler.handle(statement)
    return assembler.result()


def load_qasm(path: str | os.PathLike[str]) -> Circuit:
    """
    Read and parse an OpenQASM file.
    """
    with open(path, encoding="utf-8") as f:
        text = f.read()
    try:
        return parse_qasm(text)
    except QasmError as exc:
        raise QasmError(f"{path}: {exc.message}", exc.location) from None


def _format_param(value: float) -> str:
    if not math.isfinite(value):
        raise ValueError(f"Cannot serialize non-finite angle {value!r}")
    return repr(float(value))


def serialize_qasm(circuit: Circuit, register: str = "q") -> str:
    """
    Write a circuit as OpenQASM 2.0 text.

    The output is byte-deterministic and is read back unchanged by
    :func:`parse_qasm`.
    """
    kinds = {gate.kind for gate in circuit.gates}
    lines = ["OPENQASM 2.0;", 'include "qelib1.inc";']
    if GateKind.GENERIC_1Q in kinds:
        lines.append(f"opaque {GateKind.GENERIC_1Q.value} a;")
    if GateKind.GENERIC_2Q in kinds:
        lines.append(f"opaque {GateKind.GENERIC_2Q.value} a,b;")
    lines.append(f"qreg {register}[{circuit.num_qubits}];")
    for gate in circuit.gates:
        params = ""
        if gate.params:
            params = "(" + ",".join(_format_param(v) for v in gate.params) + ")"
        operands = ",".join(f"{register}[{q}]" for q in gate.qubits)
        lines.append(f"{gate.kind.value}{params} {operands};")
    return "\n".join(lines) + "\n"


__all__ = (
    "load_qasm",
    "parse_qasm",
    "serialize_qasm",
)
