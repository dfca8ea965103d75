# GNU General Public License v3.0+ (see LICENSES/GPL-3.0-or-later.txt or
# https://www.gnu.org/licenses/gpl-3.0.txt)
# SPDX-License-Identifier: GPL-3.0-or-later
# SPDX-FileCopyrightText: 2026, forceroute contributors

# pylint: disable=missing-function-docstring

"""
Test trial execution and the subcommand drivers.
"""

from __future__ import annotations

import logging
import math
import re
import typing as t
from pathlib import Path

import pytest

from forceroute import harness
from forceroute.circuit import CircuitBuilder, GateKind
from forceroute.circuit.generators import gen_qft
from forceroute.circuit.qasm import serialize_qasm
from forceroute.config import RunSpec
from forceroute.errors import VerificationError
from forceroute.harness import (
    ROUTE_COLUMNS,
    RSWEEP_COLUMNS,
    SCALE_COLUMNS,
    SWEEP_COLUMNS,
    aggregate,
    build_circuit,
    build_topology,
    cmd_route,
    cmd_rsweep,
    cmd_scale,
    cmd_sweep,
    cmd_verify,
    dump_routed,
    load_routed,
    log_log_slope,
    run_trial,
    run_trials,
)
from forceroute.router import RoutedCircuit, RoutedGate, RouterConfig
from forceroute.topology import build_grid


def _spec(**sections: dict[str, t.Any]) -> RunSpec:
    return RunSpec.model_validate(sections)


def test_run_trial() -> None:
    line = build_grid(1, 4)
    circuit = CircuitBuilder(4).cx(0, 3).h(1).cx(1, 2).build()
    result = run_trial(circuit, line, RouterConfig(seed=4), trial=2)
    assert result.trial == 2
    assert result.seed == 4
    assert result.routed is None
    assert result.verification.ok
    assert result.verification.fidelity_overlap == pytest.approx(1.0)
    report = result.report
    assert (report.n, report.m, report.gates) == (4, 4, 3)
    assert report.compile_time is not None and report.compile_time > 0
    assert report.config == {"k": 1, "p": 0.0, "r": 0.0, "seed": 4}

    kept = run_trial(circuit, line, RouterConfig(seed=4), keep_routed=True)
    assert kept.routed is not None
    assert kept.routed.swap_count == report.swaps_added


def test_run_trial_fail(
    monkeypatch: pytest.MonkeyPatch, caplog: pytest.LogCaptureFixture
) -> None:
    line = build_grid(1, 4)
    circuit = CircuitBuilder(4).cx(0, 3).build()
    broken = RoutedCircuit(
        num_physical=4,
        num_virtual=4,
        gates=(RoutedGate(GateKind.CX, (0, 3), origin=0),),
        initial=(0, 1, 2, 3),
        final=(0, 1, 2, 3),
    )
    monkeypatch.setattr(harness, "route", lambda *args: broken)
    message = (
        "Trial 2 (seed 9) failed verification at output gate 0:"
        " cx on uncoupled qubits 0 and 3"
    )
    with caplog.at_level(logging.ERROR, logger="forceroute.harness"):
        with pytest.raises(VerificationError, match=re.escape(message)):
            run_trial(circuit, line, RouterConfig(seed=9), trial=2)
    assert [record.getMessage() for record in caplog.records] == [message]


def test_run_trials() -> None:
    spec = _spec(run={"trials": 3, "seed": 5})
    grid = build_grid(2, 3)
    circuit = gen_qft(5)
    results = run_trials(spec, circuit, grid, 1, 0.0, 0.0)
    assert [result.trial for result in results] == [0, 1, 2]
    assert [result.seed for result in results] == [5, 6, 7]
    assert all(result.verification.ok for result in results)

    again = run_trials(spec, circuit, grid, 1, 0.0, 0.0)
    assert [result.report.swaps_added for result in again] == [
        result.report.swaps_added for result in results
    ]


def test_run_trials_parallel() -> None:
    grid = build_grid(2, 3)
    circuit = gen_qft(6)
    serial = run_trials(_spec(run={"trials": 3}), circuit, grid, 1, 0.0, 0.0)
    parallel = run_trials(
        _spec(run={"trials": 3, "jobs": 2}), circuit, grid, 1, 0.0, 0.0
    )
    assert [result.seed for result in parallel] == [0, 1, 2]
    for one, other in zip(serial, parallel):
        assert one.report.swaps_added == other.report.swaps_added
        assert one.report.depth == other.report.depth


def test_aggregate() -> None:
    results = run_trials(
        _spec(run={"trials": 2}), gen_qft(4), build_grid(2, 2), 0, 0.0, 0.0
    )
    summary = aggregate(results)
    assert sorted(summary) == ["compile_time", "depth", "esp", "swaps_added"]
    swaps = [result.report.swaps_added for result in results]
    assert summary["swaps_added"]["mean"] == sum(swaps) / 2
    assert summary["swaps_added"]["stddev"] == abs(swaps[0] - swaps[1]) / 2
    assert aggregate([]) == {}


def test_build_topology() -> None:
    plain = build_topology(_spec(run={"topology": "grid:3x3"}))
    assert set(plain.fidelities) == {1.0}
    noisy = build_topology(
        _spec(run={"topology": "grid:3x3", "random_fidelities": [0.9, 0.95]})
    )
    assert noisy.edges == plain.edges
    assert all(0.9 <= value <= 0.95 for value in noisy.fidelities)
    assert noisy == build_topology(
        _spec(run={"topology": "grid:3x3", "random_fidelities": [0.9, 0.95]})
    )


def test_build_circuit() -> None:
    spec = _spec(run={"benchmark": "qft", "topology": "grid:2x3"})
    assert build_circuit(spec, build_topology(spec)).num_qubits == 6
    spec = _spec(run={"benchmark": "qft:20", "topology": "grid:2x2"})
    with pytest.raises(
        ValueError,
        match=re.escape("Benchmark needs 20 qubits, topology grid:2x2 has 4"),
    ):
        build_circuit(spec, build_topology(spec))


def test_cmd_route() -> None:
    spec = _spec(run={"benchmark": "qft:5", "topology": "grid:2x3", "trials": 2})
    artifact, results = cmd_route(spec)
    assert artifact.columns == ROUTE_COLUMNS
    assert len(artifact.rows) == 2
    for row, result in zip(artifact.rows, results):
        assert row["seed"] == result.seed
        assert row["swaps"] == result.report.swaps_added
        assert (row["n"], row["m"], row["gates"]) == (5, 6, len(gen_qft(5)))
        assert row["legal"] is True
        assert row["equivalent"] is True
        assert row["overlap"] == pytest.approx(1.0)
        assert row["inter_core_uses"] is None
        assert result.routed is None
    assert artifact.config == spec.echo()
    assert "compile_time" in artifact.notes["aggregate"]


def test_cmd_route_multicore() -> None:
    spec = _spec(
        run={"benchmark": "random::10", "topology": "multicore:2,2,2,1,0.9"},
        output={"omit_timing": True, "emit_routed": "routed.json"},
    )
    artifact, results = cmd_route(spec)
    assert "compile_time" not in artifact.columns
    assert "compile_time" not in artifact.rows[0]
    assert "compile_time" not in artifact.notes["aggregate"]
    assert artifact.rows[0]["inter_core_uses"] is not None
    assert results[0].routed is not None


def test_cmd_route_fail() -> None:
    with pytest.raises(
        ValueError, match=re.escape("Expected a single value for k, got [0, 1]")
    ):
        cmd_route(_spec(router={"k": [0, 1]}))


def test_cmd_sweep() -> None:
    spec = _spec(
        run={"benchmark": "qft:6", "topology": "grid:3x3", "trials": 2},
        router={"k": [0, 1], "p": [0.0, 0.5]},
    )
    artifact = cmd_sweep(spec)
    assert artifact.columns == SWEEP_COLUMNS
    assert [(row["k"], row["p"]) for row in artifact.rows] == [
        (0, 0.0),
        (0, 0.5),
        (1, 0.0),
        (1, 0.5),
    ]
    optimal = [row for row in artifact.rows if row["optimal"]]
    assert len(optimal) == 1
    assert optimal[0]["fom"] == max(row["fom"] for row in artifact.rows)
    assert artifact.notes["optimum"] == {
        "k": optimal[0]["k"],
        "p": optimal[0]["p"],
        "fom": optimal[0]["fom"],
    }
    for row in artifact.rows:
        for name in ("norm_time", "norm_depth", "norm_swaps"):
            assert 1.0 <= row[name] <= 2.0


def test_cmd_sweep_omit_timing() -> None:
    spec = _spec(
        run={"benchmark": "qft:4", "topology": "grid:2x2"},
        router={"k": [0, 2]},
        output={"omit_timing": True},
    )
    artifact = cmd_sweep(spec)
    assert "mean_compile_time" not in artifact.columns
    # Compile time does not enter the figure of merit.
    assert all(row["norm_time"] == 1.0 for row in artifact.rows)
    assert cmd_sweep(spec).rows == artifact.rows


def test_cmd_rsweep() -> None:
    spec = _spec(
        run={
            "benchmark": "random:8:10",
            "topology": "multicore:2,2,2,2,0.9",
            "random_fidelities": [0.9, 0.999],
            "trials": 2,
        },
        router={"r": [0, 1, 4]},
    )
    artifact = cmd_rsweep(spec)
    assert artifact.columns == RSWEEP_COLUMNS
    assert [row["r"] for row in artifact.rows] == [0.0, 1.0, 4.0]
    norms = [row["norm_esp"] for row in artifact.rows]
    assert all(0.0 <= value <= 1.0 for value in norms)
    assert 0.0 in norms or norms == [0.5, 0.5, 0.5]
    for row in artifact.rows:
        assert 0.0 < row["mean_esp"] <= 1.0
        assert row["mean_inter_core_uses"] is not None


def test_cmd_rsweep_fail() -> None:
    with pytest.raises(ValueError, match=re.escape("Expected a single value for p")):
        cmd_rsweep(_spec(router={"p": [0.0, 1.0]}))


LOG_LOG_SLOPE_DATA: list[tuple[list[float], list[float], float | None]] = [
    ([10, 100], [1.0, 100.0], 2.0),
    ([4, 16, 64], [3.0, 6.0, 12.0], 0.5),
    ([10], [1.0], None),
    ([10, 10], [1.0, 2.0], None),
    ([0, 10], [1.0, 2.0], None),
    ([], [], None),
]


@pytest.mark.parametrize("sizes, times, expected", LOG_LOG_SLOPE_DATA)
def test_log_log_slope(
    sizes: list[float], times: list[float], expected: float | None
) -> None:
    slope = log_log_slope(sizes, times)
    if expected is None:
        assert slope is None
    else:
        assert slope == pytest.approx(expected)


def test_cmd_scale() -> None:
    spec = _spec(
        run={"benchmark": "random::6:0.5", "sizes": [2, 3]},
        router={"k": [0]},
    )
    artifact = cmd_scale(spec)
    assert artifact.columns == SCALE_COLUMNS
    assert [(row["size"], row["m"], row["n"]) for row in artifact.rows] == [
        (2, 4, 4),
        (3, 9, 9),
    ]
    assert all(row["status"] == "ok" for row in artifact.rows)
    assert math.isfinite(artifact.notes["slope"]["value"])


def test_cmd_scale_single_size(caplog: pytest.LogCaptureFixture) -> None:
    spec = _spec(run={"benchmark": "qft:4", "sizes": [2]})
    with caplog.at_level(logging.WARNING, logger="forceroute.harness"):
        artifact = cmd_scale(spec)
    assert artifact.notes["slope"] == {"value": None, "note": "fewer than two sizes"}
    assert [record.getMessage() for record in caplog.records] == [
        "Fewer than two sizes finished, no slope fitted"
    ]

    spec = _spec(
        run={"benchmark": "qft:4", "sizes": [2]}, output={"omit_timing": True}
    )
    artifact = cmd_scale(spec)
    assert "slope" not in artifact.notes
    assert "mean_compile_time" not in artifact.columns


def test_cmd_scale_memory_error(monkeypatch: pytest.MonkeyPatch) -> None:
    run = harness.run_trials

    def run_or_fail(
        spec: RunSpec, circuit: t.Any, topology: t.Any, *args: t.Any, **kwargs: t.Any
    ) -> t.Any:
        if topology.m > 4:
            raise MemoryError
        return run(spec, circuit, topology, *args, **kwargs)

    monkeypatch.setattr(harness, "run_trials", run_or_fail)
    spec = _spec(run={"benchmark": "random::4", "sizes": [2, 3]})
    artifact = cmd_scale(spec)
    assert [row["status"] for row in artifact.rows] == ["ok", "memory-error"]
    assert "mean_swaps" not in artifact.rows[1]
    assert artifact.notes["slope"]["value"] is None


def test_dump_and_load_routed(tmp_path: Path) -> None:
    _, results = cmd_route(
        _spec(
            run={"benchmark": "qft:4", "topology": "grid:2x3"},
            output={"emit_routed": "x.json"},
        )
    )
    routed = results[0].routed
    assert routed is not None
    path = tmp_path / "routed.json"
    dump_routed(routed, path)
    assert load_routed(path) == routed


def test_load_routed_fail(tmp_path: Path) -> None:
    path = tmp_path / "routed.json"
    path.write_text("{")
    with pytest.raises(ValueError, match=re.escape(f"Error while reading {path}: ")):
        load_routed(path)


def _write_routed(tmp_path: Path) -> tuple[Path, Path, RoutedCircuit]:
    spec = _spec(
        run={"benchmark": "random:5:8", "topology": "grid:2x3", "seed": 2},
        output={"emit_routed": "x.json"},
    )
    _, results = cmd_route(spec)
    routed = results[0].routed
    assert routed is not None
    original = tmp_path / "original.qasm"
    original.write_text(serialize_qasm(build_circuit(spec, build_topology(spec))))
    routed_path = tmp_path / "routed.json"
    dump_routed(routed, routed_path)
    return original, routed_path, routed


def test_cmd_verify(tmp_path: Path) -> None:
    original, routed_path, _ = _write_routed(tmp_path)
    report = cmd_verify(str(original), str(routed_path), "grid:2x3")
    assert report.ok
    assert report.legal is True
    assert report.fidelity_overlap == pytest.approx(1.0)

    report = cmd_verify(str(original), str(routed_path), "grid:2x3", max_qubits=3)
    assert report.ok
    assert report.fidelity_overlap is None


def test_cmd_verify_fail(tmp_path: Path) -> None:
    original, routed_path, routed = _write_routed(tmp_path)
    with pytest.raises(
        VerificationError,
        match=re.escape("Routed circuit uses 6 physical qubits, topology has 9"),
    ):
        cmd_verify(str(original), str(routed_path), "grid:3x3")

    final = list(routed.final)
    final[0], final[1] = final[1], final[0]
    tampered = tmp_path / "tampered.json"
    dump_routed(RoutedCircuit(**{**routed.__dict__, "final": tuple(final)}), tampered)
    report = cmd_verify(str(original), str(tampered), "grid:2x3")
    assert not report.ok
    assert report.first_violation == (
        len(routed.gates),
        "replayed placement differs from final one",
    )
