# GNU General Public License v3.0+ (see LICENSES/GPL-3.0-or-later.txt or
# https://www.gnu.org/licenses/gpl-3.0.txt)
# SPDX-License-Identifier: GPL-3.0-or-later
# SPDX-FileCopyrightText: 2026, forceroute contributors

"""
Coupling graphs with 2D geometry, per-edge fidelities and core labels.
"""

from __future__ import annotations

import dataclasses
import functools
import json
import os
import re
import typing as t

import networkx as nx
import numpy as np

from .errors import SelectorError, TopologyError


class Neighbor(t.NamedTuple):
    """
    One incident edge of a physical qubit, seen from that qubit.
    """

    qubit: int
    fidelity: float
    vector: tuple[int, int]
    edge: int


@dataclasses.dataclass(frozen=True)
class Topology:
    """
    A connected coupling graph over ``m`` physical qubits.

    Edges are stored as ``(a, b)`` with ``a < b``; the position of an edge in
    :attr:`edges` is its edge index. ``grid_shape`` is set by the builders when
    the edges form a full ``rows x cols`` grid.
    """

    coords: tuple[tuple[int, int], ...]
    edges: tuple[tuple[int, int], ...]
    fidelities: tuple[float, ...]
    cores: tuple[int, ...] | None = None
    grid_shape: tuple[int, int] | None = None

    def __post_init__(self) -> None:
        m = len(self.coords)
        if m < 1:
            raise TopologyError("Topology needs at least one qubit")
        if len(set(self.coords)) != m:
            raise TopologyError("Qubit coordinates must be unique")
        if len(self.fidelities) != len(self.edges):
            raise TopologyError(
                f"Got {len(self.fidelities)} fidelities for {len(self.edges)} edges"
            )
        seen: set[tuple[int, int]] = set()
        for a, b in self.edges:
            if not 0 <= a < b < m:
                raise TopologyError(
                    f"Edge ({a}, {b}) must satisfy 0 <= a < b < {m}"
                )
            if (a, b) in seen:
                raise TopologyError(f"Duplicate edge ({a}, {b})")
            seen.add((a, b))
        for (a, b), fidelity in zip(self.edges, self.fidelities):
            if not 0.0 < fidelity <= 1.0:
                raise TopologyError(
                    f"Fidelity {fidelity} of edge ({a}, {b}) is not in (0, 1]"
                )
        if self.cores is not None and len(self.cores) != m:
            raise TopologyError(f"Got {len(self.cores)} core labels for {m} qubits")
        if m > 1 and not nx.is_connected(self.graph()):
            raise TopologyError("Coupling graph is not connected")

    @property
    def m(self) -> int:
        """
        Number of physical qubits.
        """
        return len(self.coords)

    def graph(self) -> nx.Graph:
        """
        The coupling graph as a networkx graph with ``fidelity`` edge data.
        """
        graph = nx.Graph()
        graph.add_nodes_from(range(len(self.coords)))
        for (a, b), fidelity in zip(self.edges, self.fidelities):
            graph.add_edge(a, b, fidelity=fidelity)
        return graph

    @functools.cached_property
    def diameter(self) -> int:
        """
        Hop count of the longest shortest path.
        """
        if self.m == 1:
            return 0
        if self.grid_shape is not None:
            rows, cols = self.grid_shape
            return (rows - 1) + (cols - 1)
        return int(nx.diameter(self.graph()))

    @functools.cached_property
    def _edge_lookup(self) -> dict[tuple[int, int], int]:
        return {edge: index for index, edge in enumerate(self.edges)}

    @functools.cached_property
    def _adjacency(self) -> tuple[tuple[Neighbor, ...], ...]:
        adjacency: list[list[Neighbor]] = [[] for _ in self.coords]
        for index, ((a, b), fidelity) in enumerate(zip(self.edges, self.fidelities)):
            (ax, ay), (bx, by) = self.coords[a], self.coords[b]
            adjacency[a].append(Neighbor(b, fidelity, (bx - ax, by - ay), index))
            adjacency[b].append(Neighbor(a, fidelity, (ax - bx, ay - by), index))
        return tuple(tuple(entries) for entries in adjacency)

    def neighbors(self, q: int) -> tuple[Neighbor, ...]:
        """
        Incident edges of physical qubit ``q``.

        The edge vector is the neighbor's coordinates minus ``q``'s.
        """
        if not 0 <= q < self.m:
            raise TopologyError(f"Physical qubit {q} out of range [0, {self.m})")
        return self._adjacency[q]

    def edge_index(self, a: int, b: int) -> int | None:
        """
        Index of the edge between ``a`` and ``b``, or ``None`` if uncoupled.
        """
        return self._edge_lookup.get((a, b) if a < b else (b, a))

    def has_edge(self, a: int, b: int) -> bool:
        """
        Whether ``a`` and ``b`` are coupled.
        """
        return self.edge_index(a, b) is not None

    def fidelity(self, a: int, b: int) -> float:
        """
        Fidelity of the edge between ``a`` and ``b``.
        """
        index = self.edge_index(a, b)
        if index is None:
            raise TopologyError(f"Qubits {a} and {b} are not coupled")
        return self.fidelities[index]

    def is_inter_core(self, a: int, b: int) -> bool:
        """
        Whether ``a`` and ``b`` carry different core labels.
        """
        if self.cores is None:
            raise TopologyError("Topology has no core labels")
        return self.cores[a] != self.cores[b]

    @property
    def inter_core_edges(self) -> list[int]:
        """
        Indices of all edges joining different cores.
        """
        if self.cores is None:
            raise TopologyError("Topology has no core labels")
        cores = self.cores
        return [
            index for index, (a, b) in enumerate(self.edges) if cores[a] != cores[b]
        ]


def _grid_edges(rows: int, cols: int) -> list[tuple[int, int]]:
    edges = []
    for r in range(rows):
        for c in range(cols):
            q = r * cols + c
            if c + 1 < cols:
                edges.append((q, q + 1))
            if r + 1 < rows:
                edges.append((q, q + cols))
    return edges


def _grid_coords(rows: int, cols: int) -> tuple[tuple[int, int], ...]:
    return tuple((c, r) for r in range(rows) for c in range(cols))


def build_grid(rows: int, cols: int, fidelity: float = 1.0) -> Topology:
    """
    A ``rows x cols`` grid; qubit ``(r, c)`` has index ``r * cols + c`` and
    coordinates ``(c, r)``.
    """
    if rows < 1 or cols < 1 or rows * cols < 2:
        raise ValueError(f"Grid {rows}x{cols} must contain at least 2 qubits")
    edges = _grid_edges(rows, cols)
    return Topology(
        coords=_grid_coords(rows, cols),
        edges=tuple(edges),
        fidelities=(float(fidelity),) * len(edges),
        grid_shape=(rows, cols),
    )


def build_multicore(
    core_rows: int,
    core_cols: int,
    cores_x: int,
    cores_y: int,
    intra_f: float = 1.0,
    inter_f: float = 1.0,
) -> Topology:
    """
    Cores of ``core_rows x core_cols`` qubits tiled ``cores_x`` wide and
    ``cores_y`` high on one global grid.

    Edges between qubits of different cores get ``inter_f``, all others
    ``intra_f``.
    """
    if min(core_rows, core_cols, cores_x, cores_y) < 1:
        raise ValueError("All core and core-grid dimensions must be at least 1")
    rows = core_rows * cores_y
    cols = core_cols * cores_x
    if rows * cols < 2:
        raise ValueError("Multi-core topology must contain at least 2 qubits")
    cores = tuple(
        (r // core_rows) * cores_x + (c // core_cols)
        for r in range(rows)
        for c in range(cols)
    )
    edges = _grid_edges(rows, cols)
    fidelities = tuple(
        float(inter_f if cores[a] != cores[b] else intra_f) for a, b in edges
    )
    return Topology(
        coords=_grid_coords(rows, cols),
        edges=tuple(edges),
        fidelities=fidelities,
        cores=cores,
        grid_shape=(rows, cols),
    )


def assign_random_fidelities(
    topology: Topology, lo: float, hi: float, seed: int
) -> Topology:
    """
    Copy of ``topology`` with every edge fidelity drawn uniformly from ``[lo, hi]``.
    """
    if not 0.0 < lo <= hi <= 1.0:
        raise ValueError(f"Need 0 < lo <= hi <= 1, got lo={lo}, hi={hi}")
    rng = np.random.default_rng(seed)
    draws = rng.uniform(lo, hi, size=len(topology.edges))
    fidelities = tuple(min(float(value), hi) for value in draws)
    return dataclasses.replace(topology, fidelities=fidelities)


def topology_to_dict(topology: Topology) -> dict[str, t.Any]:
    """
    Serialize a topology to the JSON file structure.
    """
    result: dict[str, t.Any] = {
        "m": topology.m,
        "coords": [list(xy) for xy in topology.coords],
        "edges": [
            [a, b, fidelity]
            for (a, b), fidelity in zip(topology.edges, topology.fidelities)
        ],
    }
    if topology.cores is not None:
        result["cores"] = list(topology.cores)
    return result


def topology_from_dict(data: t.Any) -> Topology:
    """
    Create a topology from the JSON file structure.
    """
    if not isinstance(data, dict):
        raise TopologyError("Topology description must be an object")
    try:
        m = int(data["m"])
        coords = tuple((int(x), int(y)) for x, y in data["coords"])
        edges: list[tuple[int, int]] = []
        fidelities: list[float] = []
        for a, b, fidelity in data["edges"]:
            a, b = int(a), int(b)
            edges.append((a, b) if a < b else (b, a))
            fidelities.append(float(fidelity))
        cores_data = data.get("cores")
        cores = None if cores_data is None else tuple(int(c) for c in cores_data)
    except KeyError as exc:
        raise TopologyError(f"Topology description lacks {exc.args[0]!r}") from exc
    except (TypeError, ValueError) as exc:
        raise TopologyError(f"Malformed topology description: {exc}") from exc
    if m != len(coords):
        raise TopologyError(f"m = {m}, but {len(coords)} coordinates are given")
    return Topology(
        coords=coords, edges=tuple(edges), fidelities=tuple(fidelities), cores=cores
    )


def load_topology(path: str | os.PathLike[str]) -> Topology:
    """
    Read a topology JSON file.
    """
    try:
        with open(path, encoding="utf-8") as f:
            data = json.load(f)
    except json.JSONDecodeError as exc:
        raise TopologyError(f"Error while reading {path}: {exc}") from exc
    try:
        return topology_from_dict(data)
    except TopologyError as exc:
        raise TopologyError(f"{path}: {exc}") from exc


def dump_topology(topology: Topology, path: str | os.PathLike[str]) -> None:
    """
    Write a topology JSON file.
    """
    with open(path, "w", encoding="utf-8") as f:
        json.dump(topology_to_dict(topology), f, indent=2)
        f.write("\n")


_GRID_SELECTOR = re.compile(r"^grid:(\d+)x(\d+)$")
_FLOAT = r"(\d+(?:\.\d*)?|\.\d+)"
_MULTICORE_SELECTOR = re.compile(
    rf"^multicore:(\d+),(\d+),(\d+),(\d+),{_FLOAT}(?:,{_FLOAT})?$"
)


def parse_topology_selector(selector: str) -> Topology:
    """
    Build the topology named by a selector.

    Accepted are ``grid:RxC``, ``multicore:R,C,X,Y,interF[,intraF]``,
    ``file:PATH`` and bare paths ending in ``.json``.
    """
    try:
        if match := _GRID_SELECTOR.match(selector):
            return build_grid(int(match.group(1)), int(match.group(2)))
        if match := _MULTICORE_SELECTOR.match(selector):
            intra = match.group(6)
            return build_multicore(
                int(match.group(1)),
                int(match.group(2)),
                int(match.group(3)),
                int(match.group(4)),
                intra_f=1.0 if intra is None else float(intra),
                inter_f=float(match.group(5)),
            )
    except TopologyError:
        raise
    except ValueError as exc:
        raise SelectorError(f"Invalid topology selector {selector!r}: {exc}") from exc
    if selector.startswith("file:"):
        return load_topology(selector[len("file:") :])
    if selector.endswith(".json"):
        return load_topology(selector)
    raise SelectorError(
        f"Invalid topology selector {selector!r}; expected grid:RxC,"
        " multicore:R,C,X,Y,interF[,intraF], file:PATH or a .json path"
    )


__all__ = (
    "Neighbor",
    "Topology",
    "assign_random_fidelities",
    "build_grid",
    "build_multicore",
    "dump_topology",
    "load_topology",
    "parse_topology_selector",
    "topology_from_dict",
    "topology_to_dict",
)
