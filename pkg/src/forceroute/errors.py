# GNU General Public License v3.0+ (see LICENSES/GPL-3.0-or-later.txt or
# https://www.gnu.org/licenses/gpl-3.0.txt)
# SPDX-License-Identifier: GPL-3.0-or-later
# SPDX-FileCopyrightText: 2026, forceroute contributors

"""
Error types.
"""

from __future__ import annotations

import dataclasses
import typing as t

if t.TYPE_CHECKING:  # pragma: no cover
    from .router import TraceEntry


@dataclasses.dataclass(frozen=True, order=True)
class Location:
    """
    A location in a source file. Lines and columns are 1-based.
    """

    line: int
    column: int | None = None

    def __str__(self) -> str:
        if self.column is None:
            return f"line {self.line}"
        return f"line {self.line}, column {self.column}"


class ForceRouteError(Exception):
    """
    Base class of all errors raised by forceroute.
    """


class QasmError(ForceRouteError, ValueError):
    """
    Problem while reading OpenQASM text.
    """

    def __init__(self, message: str, location: Location | None = None) -> None:
        self.message = message
        self.location = location
        super().__init__(f"{location}: {message}" if location else message)

    def __reduce__(self) -> tuple[t.Any, ...]:
        return (type(self), (self.message, self.location))


class TopologyError(ForceRouteError, ValueError):
    """
    Invalid coupling graph or topology description.
    """


class DagError(ForceRouteError, ValueError):
    """
    Contract violation on the operations DAG.
    """


class PlacementError(ForceRouteError, ValueError):
    """
    Invalid placement of virtual onto physical qubits.
    """


class SelectorError(ForceRouteError, ValueError):
    """
    Malformed benchmark or topology selector string.
    """


class VerificationError(ForceRouteError):
    """
    A routed circuit failed verification or cannot be checked at all.
    """


class ConvergenceError(ForceRouteError, RuntimeError):
    """
    The router did not empty the DAG within the iteration limit.
    """

    def __init__(self, message: str, trace: list[TraceEntry]) -> None:
        super().__init__(message)
        self.trace = trace

    def __reduce__(self) -> tuple[t.Any, ...]:
        return (type(self), (self.args[0], self.trace))


__all__ = (
    "ConvergenceError",
    "DagError",
    "ForceRouteError",
    "Location",
    "PlacementError",
    "QasmError",
    "SelectorError",
    "TopologyError",
    "VerificationError",
)
