# GNU General Public License v3.0+ (see LICENSES/GPL-3.0-or-later.txt or
# https://www.gnu.org/licenses/gpl-3.0.txt)
# SPDX-License-Identifier: GPL-3.0-or-later
# SPDX-FileCopyrightText: 2026, forceroute contributors

# pylint: disable=missing-function-docstring

"""
Test coupling graphs.
"""

from __future__ import annotations

import re
import typing as t
from pathlib import Path

import pytest

from forceroute.errors import SelectorError, TopologyError
from forceroute.topology import (
    Neighbor,
    Topology,
    assign_random_fidelities,
    build_grid,
    build_multicore,
    dump_topology,
    load_topology,
    parse_topology_selector,
    topology_from_dict,
    topology_to_dict,
)


def _path(length: int) -> Topology:
    return Topology(
        coords=tuple((x, 0) for x in range(length)),
        edges=tuple((x, x + 1) for x in range(length - 1)),
        fidelities=(1.0,) * (length - 1),
    )


def test_build_grid() -> None:
    grid = build_grid(2, 3)
    assert grid.m == 6
    assert grid.coords == ((0, 0), (1, 0), (2, 0), (0, 1), (1, 1), (2, 1))
    assert grid.edges == ((0, 1), (0, 3), (1, 2), (1, 4), (2, 5), (3, 4), (4, 5))
    assert grid.diameter == 3
    assert grid.edge_index(4, 1) == 3
    assert grid.edge_index(0, 4) is None
    assert grid.has_edge(5, 4)
    assert not grid.has_edge(0, 5)
    assert grid.neighbors(1) == (
        Neighbor(qubit=0, fidelity=1.0, vector=(-1, 0), edge=0),
        Neighbor(qubit=2, fidelity=1.0, vector=(1, 0), edge=2),
        Neighbor(qubit=4, fidelity=1.0, vector=(0, 1), edge=3),
    )
    with pytest.raises(TopologyError, match="out of range"):
        grid.neighbors(6)


@pytest.mark.parametrize(
    "rows, cols",
    [(1, 2), (4, 4), (3, 7), (8, 8)],
)
def test_grid_diameter_matches_bfs(rows: int, cols: int) -> None:
    grid = build_grid(rows, cols)
    general = Topology(coords=grid.coords, edges=grid.edges, fidelities=grid.fidelities)
    assert grid.diameter == general.diameter == rows + cols - 2


def test_build_grid_fail() -> None:
    with pytest.raises(ValueError, match="at least 2 qubits"):
        build_grid(1, 1)
    with pytest.raises(ValueError, match="at least 2 qubits"):
        build_grid(0, 5)


def test_path_topology() -> None:
    path = _path(4)
    assert path.diameter == 3
    assert path.grid_shape is None
    single = Topology(coords=((0, 0),), edges=(), fidelities=())
    assert single.diameter == 0


TOPOLOGY_FAIL_DATA: list[tuple[dict[str, t.Any], str]] = [
    (
        {"coords": (), "edges": (), "fidelities": ()},
        "at least one qubit",
    ),
    (
        {"coords": ((0, 0), (0, 0)), "edges": ((0, 1),), "fidelities": (1.0,)},
        "coordinates must be unique",
    ),
    (
        {"coords": ((0, 0), (1, 0)), "edges": ((1, 0),), "fidelities": (1.0,)},
        "must satisfy 0 <= a < b < 2",
    ),
    (
        {"coords": ((0, 0), (1, 0)), "edges": ((0, 1),), "fidelities": ()},
        "Got 0 fidelities for 1 edges",
    ),
    (
        {
            "coords": ((0, 0), (1, 0)),
            "edges": ((0, 1), (0, 1)),
            "fidelities": (1.0, 1.0),
        },
        "Duplicate edge (0, 1)",
    ),
    (
        {"coords": ((0, 0), (1, 0)), "edges": ((0, 1),), "fidelities": (0.0,)},
        "is not in (0, 1]",
    ),
    (
        {"coords": ((0, 0), (1, 0), (2, 0)), "edges": ((0, 1),), "fidelities": (1.0,)},
        "not connected",
    ),
    (
        {
            "coords": ((0, 0), (1, 0)),
            "edges": ((0, 1),),
            "fidelities": (1.0,),
            "cores": (0,),
        },
        "Got 1 core labels for 2 qubits",
    ),
]


@pytest.mark.parametrize(
    "kwargs, expected",
    TOPOLOGY_FAIL_DATA,
)
def test_topology_fail(kwargs: dict[str, t.Any], expected: str) -> None:
    with pytest.raises(TopologyError, match=re.escape(expected)):
        Topology(**kwargs)


def test_fidelity() -> None:
    grid = build_grid(2, 2, fidelity=0.99)
    assert grid.fidelity(2, 0) == 0.99
    with pytest.raises(TopologyError, match="not coupled"):
        grid.fidelity(0, 3)
    with pytest.raises(TopologyError, match="no core labels"):
        grid.is_inter_core(0, 1)
    with pytest.raises(TopologyError, match="no core labels"):
        grid.inter_core_edges  # pylint: disable=pointless-statement


def test_build_multicore() -> None:
    topology = build_multicore(2, 2, 2, 1, intra_f=0.999, inter_f=0.9)
    assert topology.m == 8
    assert topology.grid_shape == (2, 4)
    assert topology.cores == (0, 0, 1, 1, 0, 0, 1, 1)
    assert topology.inter_core_edges == [2, 8]
    assert topology.edges[2] == (1, 2)
    assert topology.edges[8] == (5, 6)
    assert topology.is_inter_core(1, 2)
    assert not topology.is_inter_core(0, 5)
    assert topology.fidelity(1, 2) == 0.9
    assert topology.fidelity(0, 1) == 0.999
    assert topology.diameter == 4


def test_build_multicore_sixteen_cores() -> None:
    topology = build_multicore(4, 4, 4, 4, inter_f=0.98)
    assert topology.m == 256
    assert sorted(set(topology.cores or ())) == list(range(16))
    assert all(topology.cores.count(core) == 16 for core in range(16))  # type: ignore
    # 4 core rows with 3 boundaries of 16 edges each, in both directions.
    assert len(topology.inter_core_edges) == 2 * 3 * 16
    for index in topology.inter_core_edges:
        assert topology.fidelities[index] == 0.98


def test_assign_random_fidelities() -> None:
    grid = build_grid(4, 4)
    noisy = assign_random_fidelities(grid, 0.999, 0.9999, 5)
    assert noisy.edges == grid.edges
    assert all(0.999 <= f <= 0.9999 for f in noisy.fidelities)
    assert len(set(noisy.fidelities)) > 1
    assert noisy == assign_random_fidelities(grid, 0.999, 0.9999, 5)
    assert noisy != assign_random_fidelities(grid, 0.999, 0.9999, 6)
    flat = assign_random_fidelities(grid, 0.95, 0.95, 1)
    assert set(flat.fidelities) == {0.95}
    with pytest.raises(ValueError, match="Need 0 < lo <= hi <= 1"):
        assign_random_fidelities(grid, 0.9, 0.8, 0)


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_assign_random_fidelities_mean(seed: int) -> None:
    line = build_grid(1, 1001)
    assert len(line.edges) == 1000
    noisy = assign_random_fidelities(line, 0.999, 0.9999, seed)
    mean = sum(noisy.fidelities) / len(noisy.fidelities)
    assert 0.9992 <= mean <= 0.9997


def test_topology_dict() -> None:
    topology = build_multicore(1, 2, 2, 1, inter_f=0.5)
    data = topology_to_dict(topology)
    assert data == {
        "m": 4,
        "coords": [[0, 0], [1, 0], [2, 0], [3, 0]],
        "edges": [[0, 1, 1.0], [1, 2, 0.5], [2, 3, 1.0]],
        "cores": [0, 0, 1, 1],
    }
    restored = topology_from_dict(data)
    assert restored.edges == topology.edges
    assert restored.cores == topology.cores
    assert restored.grid_shape is None
    assert restored.diameter == 3


TOPOLOGY_DICT_FAIL_DATA: list[tuple[t.Any, str]] = [
    ([], "must be an object"),
    ({"coords": [], "edges": []}, "lacks 'm'"),
    ({"m": 2, "coords": [[0, 0], [1, 0]], "edges": [[0, 1]]}, "Malformed"),
    ({"m": 3, "coords": [[0, 0], [1, 0]], "edges": [[0, 1, 1.0]]}, "m = 3"),
]


@pytest.mark.parametrize(
    "data, expected",
    TOPOLOGY_DICT_FAIL_DATA,
)
def test_topology_from_dict_fail(data: t.Any, expected: str) -> None:
    with pytest.raises(TopologyError, match=re.escape(expected)):
        topology_from_dict(data)


def test_topology_file(tmp_path: Path) -> None:
    path = tmp_path / "line.json"
    dump_topology(_path(5), path)
    loaded = load_topology(path)
    assert loaded.edges == _path(5).edges
    assert parse_topology_selector(str(path)).m == 5
    assert parse_topology_selector(f"file:{path}").m == 5
    path.write_text("{")
    with pytest.raises(TopologyError, match="Error while reading"):
        load_topology(path)


SELECTOR_DATA: list[tuple[str, int, tuple[int, ...] | None]] = [
    ("grid:4x4", 16, None),
    ("grid:1x3", 3, None),
    ("multicore:2,2,2,2,0.98", 16, (0, 0, 1, 1, 0, 0, 1, 1, 2, 2, 3, 3, 2, 2, 3, 3)),
    ("multicore:1,1,2,1,.5,0.9", 2, (0, 1)),
]


@pytest.mark.parametrize(
    "selector, m, cores",
    SELECTOR_DATA,
)
def test_parse_topology_selector(
    selector: str, m: int, cores: tuple[int, ...] | None
) -> None:
    topology = parse_topology_selector(selector)
    assert topology.m == m
    assert topology.cores == cores


def test_parse_topology_selector_fidelities() -> None:
    topology = parse_topology_selector("multicore:1,1,2,1,.5,0.9")
    assert topology.fidelities == (0.5,)
    topology = parse_topology_selector("multicore:1,2,2,1,0.5")
    assert topology.fidelities == (1.0, 0.5, 1.0)


SELECTOR_FAIL_DATA: list[tuple[str, type[Exception], str]] = [
    ("ring:5", SelectorError, "Invalid topology selector 'ring:5'"),
    ("grid:4", SelectorError, "Invalid topology selector"),
    ("grid:1x1", SelectorError, "at least 2 qubits"),
    ("multicore:1,1,1,1,0.9", SelectorError, "at least 2 qubits"),
    ("multicore:2,2,2,1,1.5", TopologyError, "is not in (0, 1]"),
]


@pytest.mark.parametrize(
    "selector, error, expected",
    SELECTOR_FAIL_DATA,
)
def test_parse_topology_selector_fail(
    selector: str, error: type[Exception], expected: str
) -> None:
    with pytest.raises(error, match=re.escape(expected)):
        parse_topology_selector(selector)
