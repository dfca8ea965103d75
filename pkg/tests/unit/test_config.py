# GNU General Public License v3.0+ (see LICENSES/GPL-3.0-or-later.txt or
# https://www.gnu.org/licenses/gpl-3.0.txt)
# SPDX-License-Identifier: GPL-3.0-or-later
# SPDX-FileCopyrightText: 2026, forceroute contributors

# pylint: disable=missing-function-docstring

"""
Test run file loading and benchmark selectors.
"""

from __future__ import annotations

import re
import typing as t
from pathlib import Path

import pydantic as p
import pytest

from forceroute._pydantic import get_formatted_error_messages
from forceroute.circuit.generators import gen_quantum_volume, gen_random
from forceroute.config import (
    BenchmarkSelector,
    RunSpec,
    load_config_data,
    load_config_from_toml,
    merge_config_data,
    parse_benchmark_selector,
)
from forceroute.errors import SelectorError
from forceroute.router import RouterConfig

SELECTOR_DATA: list[tuple[str, BenchmarkSelector]] = [
    ("random", BenchmarkSelector(kind="random")),
    ("random:8", BenchmarkSelector(kind="random", num_qubits=8)),
    ("random::20", BenchmarkSelector(kind="random", depth=20)),
    (
        "random:8:20:0.3",
        BenchmarkSelector(kind="random", num_qubits=8, depth=20, fraction=0.3),
    ),
    (
        "random:8:20:1",
        BenchmarkSelector(kind="random", num_qubits=8, depth=20, fraction=1.0),
    ),
    ("qft", BenchmarkSelector(kind="qft")),
    ("qft:5", BenchmarkSelector(kind="qft", num_qubits=5)),
    ("qvolume:6", BenchmarkSelector(kind="qvolume", num_qubits=6)),
    ("qvolume:6:3", BenchmarkSelector(kind="qvolume", num_qubits=6, depth=3)),
    ("adder:4", BenchmarkSelector(kind="adder", num_qubits=4)),
    ("qasm:a b.qasm", BenchmarkSelector(kind="qasm", path="a b.qasm")),
    ("qasm:prog.txt", BenchmarkSelector(kind="qasm", path="prog.txt")),
    ("bench/ghz.qasm", BenchmarkSelector(kind="qasm", path="bench/ghz.qasm")),
]


@pytest.mark.parametrize("selector, expected", SELECTOR_DATA)
def test_parse_benchmark_selector(selector: str, expected: BenchmarkSelector) -> None:
    assert parse_benchmark_selector(selector) == expected


SELECTOR_FAIL_DATA: list[tuple[str, str]] = [
    ("", "Invalid benchmark selector ''"),
    ("foo", "Invalid benchmark selector 'foo'"),
    ("qft:x", "Invalid benchmark selector 'qft:x'"),
    ("qasm:", "Invalid benchmark selector 'qasm:'"),
    ("adder", "Invalid benchmark selector 'adder'"),
    ("random:4:10:1.5", "Two-qubit fraction in 'random:4:10:1.5' exceeds 1"),
    ("adder:0", "Adder needs at least 1 bit"),
    ("random:4:0", "Depth in 'random:4:0' must be at least 1"),
    ("qvolume:4:0", "Depth in 'qvolume:4:0' must be at least 1"),
]


@pytest.mark.parametrize("selector, message", SELECTOR_FAIL_DATA)
def test_parse_benchmark_selector_fail(selector: str, message: str) -> None:
    with pytest.raises(SelectorError, match=re.escape(message)):
        parse_benchmark_selector(selector)


def test_benchmark_selector_build(tmp_path: Path) -> None:
    assert parse_benchmark_selector("qft:5").build(0).num_qubits == 5
    assert parse_benchmark_selector("qft").build(0, num_qubits=6).num_qubits == 6
    # A fixed size wins over the one offered.
    assert parse_benchmark_selector("qft:5").build(0, num_qubits=9).num_qubits == 5
    assert parse_benchmark_selector("random:4").build(3) == gen_random(4, 40, 0.5, 3)
    assert parse_benchmark_selector("random:4:7:0.25").build(3) == gen_random(
        4, 7, 0.25, 3
    )
    assert parse_benchmark_selector("qvolume:4").build(1) == gen_quantum_volume(
        4, 4, 1
    )
    assert parse_benchmark_selector("adder:2").build(0).num_qubits == 6

    path = tmp_path / "bell.qasm"
    path.write_text('OPENQASM 2.0;\ninclude "qelib1.inc";\nqreg q[2];\ncx q[0],q[1];\n')
    circuit = parse_benchmark_selector(str(path)).build(0, num_qubits=16)
    assert circuit.num_qubits == 2
    assert len(circuit) == 1


def test_benchmark_selector_build_fail() -> None:
    with pytest.raises(
        SelectorError, match=re.escape("Benchmark 'qft' needs a qubit count")
    ):
        parse_benchmark_selector("qft").build(0)


def test_benchmark_selector_sized() -> None:
    assert parse_benchmark_selector("qft:5").sized
    assert parse_benchmark_selector("adder:2").sized
    assert parse_benchmark_selector("x.qasm").sized
    assert not parse_benchmark_selector("qft").sized
    assert not parse_benchmark_selector("random::12").sized


def test_run_spec_defaults() -> None:
    spec = RunSpec()
    assert spec.run.benchmark == "qft:16"
    assert spec.run.topology == "grid:4x4"
    assert spec.run.trials == 1
    assert spec.run.random_fidelities is None
    assert spec.router.k == [1]
    assert spec.router.p == [0.0]
    assert spec.router.r == [0.0]
    assert spec.router.weight_mode == "diameter"
    assert spec.metrics.swap_cost_mode == "single-factor"
    assert spec.metrics.statevector_max_qubits == 10
    assert spec.output.format == "csv"
    assert spec.output.path is None
    assert not spec.output.omit_timing
    assert spec.benchmark == BenchmarkSelector(kind="qft", num_qubits=16)


def test_run_spec_ranges() -> None:
    spec = RunSpec.model_validate(
        {
            "run": {"random_fidelities": "0.9,0.99"},
            "router": {"k": 3, "p": [0.0, 0.5, -1], "r": [0, 2.5]},
        }
    )
    assert spec.router.k == [3]
    assert spec.router.p == [0.0, 0.5, -1.0]
    assert spec.router.r == [0.0, 2.5]
    assert spec.run.random_fidelities == (0.9, 0.99)


def test_run_spec_router_config() -> None:
    spec = RunSpec.model_validate(
        {"router": {"weight_mode": "halving", "perturb_rho": 0.1, "stall_window": 3}}
    )
    cfg = spec.router.router_config(2, 0.5, 1.0, 7)
    assert cfg == RouterConfig(
        k=2,
        p=0.5,
        r=1.0,
        weight_mode="halving",
        seed=7,
        perturb_rho=0.1,
        stall_window=3,
        max_iterations=10_000_000,
    )


def test_run_spec_echo() -> None:
    spec = RunSpec.model_validate(
        {"run": {"random_fidelities": [0.9, 1.0]}, "output": {"omit_timing": True}}
    )
    echo = spec.echo()
    assert echo["run"]["random_fidelities"] == [0.9, 1.0]
    assert echo["router"]["k"] == [1]
    assert echo["output"]["omit_timing"] is True
    assert RunSpec.model_validate(echo) == spec


RUN_SPEC_FAIL_DATA: list[tuple[dict[str, t.Any], list[str]]] = [
    (
        {"run": {"benchmark": "foo"}},
        ["run -> benchmark: Value error, Invalid benchmark selector 'foo'"],
    ),
    ({"run": {"trials": 0}}, ["run -> trials: Input should be greater than"]),
    ({"run": {"random_fidelities": "0.9"}}, ["Must be of the form 'LO,HI'"]),
    ({"run": {"random_fidelities": [0.99, 0.9]}}, ["Need 0 < LO <= HI <= 1"]),
    ({"run": {"random_fidelities": [0.0, 0.9]}}, ["Need 0 < LO <= HI <= 1"]),
    ({"router": {"k": []}}, ["at least 1 item"]),
    ({"router": {"p": []}}, ["at least 1 item"]),
    ({"router": {"k": [-1]}}, ["router -> k -> 0: Input should be greater than"]),
    (
        {"router": {"r": [1.0, -0.5]}},
        ["router -> r: Value error, Fidelity exponents must not be negative"],
    ),
    ({"router": {"weight_mode": "linear"}}, ["router -> weight_mode: Input should be"]),
    ({"router": {"perturb_rho": 1.0}}, ["router -> perturb_rho: Input should be less"]),
    ({"metrics": {"swap_cost_mode": "x"}}, ["metrics -> swap_cost_mode: Input should"]),
    ({"output": {"format": "xml"}}, ["output -> format: Input should be 'csv' or"]),
    ({"foo": {}}, ["foo: Extra inputs are not permitted"]),
    ({"run": {"bar": 1}}, ["run -> bar: Extra inputs are not permitted"]),
]


@pytest.mark.parametrize("data, messages", RUN_SPEC_FAIL_DATA)
def test_run_spec_fail(data: dict[str, t.Any], messages: list[str]) -> None:
    with pytest.raises(p.ValidationError) as exc:
        RunSpec.model_validate(data)
    formatted = get_formatted_error_messages(exc.value)
    assert len(formatted) == len(messages)
    for line, message in zip(formatted, messages):
        assert message in line


def test_load_config_from_toml(tmp_path: Path) -> None:
    path = tmp_path / "forceroute.toml"
    path.write_text(
        """
[run]
benchmark = "random:9:20"
topology = "multicore:2,2,2,2,0.9"
trials = 4
seed = 10

[router]
k = [0, 1, 2]
p = 0.5

[output]
format = "json"
omit_timing = true
"""
    )
    spec = load_config_from_toml(path)
    assert spec.run.benchmark == "random:9:20"
    assert spec.run.trials == 4
    assert spec.run.seed == 10
    assert spec.router.k == [0, 1, 2]
    assert spec.router.p == [0.5]
    assert spec.output.format == "json"
    assert spec.output.omit_timing


def test_load_config_data_fail(tmp_path: Path) -> None:
    path = tmp_path / "forceroute.toml"
    path.write_text("[run\n")
    with pytest.raises(ValueError, match=re.escape(f"Error while reading {path}: ")):
        load_config_data(path)


def test_merge_config_data() -> None:
    base = {"run": {"trials": 3, "seed": 1}, "router": {"k": [2]}}
    merged = merge_config_data(
        base,
        {
            "run": {"trials": None, "seed": 5},
            "output": {"format": "json", "path": None},
        },
    )
    assert merged == {
        "run": {"trials": 3, "seed": 5},
        "router": {"k": [2]},
        "output": {"format": "json"},
    }
    assert base == {"run": {"trials": 3, "seed": 1}, "router": {"k": [2]}}
    assert merge_config_data({}, {}) == {}
