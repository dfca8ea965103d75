# GNU General Public License v3.0+ (see LICENSES/GPL-3.0-or-later.txt or
# https://www.gnu.org/licenses/gpl-3.0.txt)
# SPDX-License-Identifier: GPL-3.0-or-later
# SPDX-FileCopyrightText: 2026, forceroute contributors

"""
Force-directed qubit routing.
"""

from __future__ import annotations

__version__ = "0.1.0.post0"

# pylint: disable=wrong-import-position
from .circuit import Circuit, CircuitBuilder, Gate, GateKind  # noqa: E402
from .router import (  # noqa: E402
    Placement,
    RoutedCircuit,
    RouterConfig,
    identity_placement,
    random_placement,
    route,
)
from .topology import Topology, build_grid, build_multicore  # noqa: E402

__all__ = (
    "__version__",
    "Circuit",
    "CircuitBuilder",
    "Gate",
    "GateKind",
    "Placement",
    "RoutedCircuit",
    "RouterConfig",
    "Topology",
    "build_grid",
    "build_multicore",
    "identity_placement",
    "random_placement",
    "route",
)
