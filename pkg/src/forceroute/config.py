# GNU General Public License v3.0+ (see LICENSES/GPL-3.0-or-later.txt or
# https://www.gnu.org/licenses/gpl-3.0.txt)
# SPDX-License-Identifier: GPL-3.0-or-later
# SPDX-FileCopyrightText: 2026, forceroute contributors

"""
Run file schema and benchmark selectors.
"""

from __future__ import annotations

import dataclasses
import os
import re
import typing as t

# The router section has a field named ``p``, so pydantic is not aliased here.
import pydantic

from .circuit import Circuit
from .circuit.generators import (
    gen_cuccaro_adder,
    gen_qft,
    gen_quantum_volume,
    gen_random,
)
from .circuit.qasm import load_qasm
from .errors import SelectorError
from .metrics import SwapCostMode
from .router import RouterConfig

try:
    from tomllib import load as _load_toml
except ImportError:
    from tomli import load as _load_toml  # type: ignore


CONFIG_FILENAME = "forceroute.toml"

DEFAULT_RANDOM_DEPTH = 40
DEFAULT_RANDOM_FRACTION = 0.5


@dataclasses.dataclass(frozen=True)
class BenchmarkSelector:
    """
    A parsed benchmark selector.

    ``num_qubits`` is ``None`` when the selector leaves the size open; it then
    has to be supplied when building the circuit.
    """

    kind: t.Literal["random", "qft", "qvolume", "adder", "qasm"]
    num_qubits: t.Optional[int] = None
    depth: t.Optional[int] = None
    fraction: t.Optional[float] = None
    path: t.Optional[str] = None

    def build(self, seed: int, num_qubits: int | None = None) -> Circuit:
        """
        Generate or load the circuit.
        """
        n = self.num_qubits if self.num_qubits is not None else num_qubits
        if self.kind == "qasm":
            assert self.path is not None
            return load_qasm(self.path)
        if self.kind == "adder":
            assert self.num_qubits is not None
            return gen_cuccaro_adder(self.num_qubits)
        if n is None:
            raise SelectorError(f"Benchmark {self.kind!r} needs a qubit count")
        if self.kind == "qft":
            return gen_qft(n)
        if self.kind == "qvolume":
            return gen_quantum_volume(
                n, self.depth if self.depth is not None else n, seed
            )
        return gen_random(
            n,
            self.depth if self.depth is not None else DEFAULT_RANDOM_DEPTH,
            self.fraction if self.fraction is not None else DEFAULT_RANDOM_FRACTION,
            seed,
        )

    @property
    def sized(self) -> bool:
        """
        Whether the selector fixes the circuit size.
        """
        return self.kind in ("adder", "qasm") or self.num_qubits is not None


_RANDOM_SELECTOR = re.compile(
    r"^random(?::(\d*)(?::(\d+)(?::(\d+(?:\.\d*)?|\.\d+))?)?)?$"
)
_QFT_SELECTOR = re.compile(r"^qft(?::(\d*))?$")
_QVOLUME_SELECTOR = re.compile(r"^qvolume(?::(\d*)(?::(\d+))?)?$")
_ADDER_SELECTOR = re.compile(r"^adder:(\d+)$")


def _opt_int(value: str | None) -> int | None:
    return int(value) if value else None


def parse_benchmark_selector(selector: str) -> BenchmarkSelector:
    """
    Parse ``random:N[:DEPTH[:FRACTION]]``, ``qft:N``, ``qvolume:N[:DEPTH]``,
    ``adder:BITS``, ``qasm:PATH`` or a bare ``.qasm`` path.

    The qubit count ``N`` may be left empty.
    """
    if match := _RANDOM_SELECTOR.match(selector):
        fraction = match.group(3)
        result = BenchmarkSelector(
            kind="random",
            num_qubits=_opt_int(match.group(1)),
            depth=_opt_int(match.group(2)),
            fraction=None if fraction is None else float(fraction),
        )
        if result.fraction is not None and result.fraction > 1.0:
            raise SelectorError(f"Two-qubit fraction in {selector!r} exceeds 1")
    elif match := _QFT_SELECTOR.match(selector):
        result = BenchmarkSelector(kind="qft", num_qubits=_opt_int(match.group(1)))
    elif match := _QVOLUME_SELECTOR.match(selector):
        result = BenchmarkSelector(
            kind="qvolume",
            num_qubits=_opt_int(match.group(1)),
            depth=_opt_int(match.group(2)),
        )
    elif match := _ADDER_SELECTOR.match(selector):
        result = BenchmarkSelector(kind="adder", num_qubits=int(match.group(1)))
        if result.num_qubits == 0:
            raise SelectorError("Adder needs at least 1 bit")
    elif selector.startswith("qasm:") and len(selector) > len("qasm:"):
        result = BenchmarkSelector(kind="qasm", path=selector[len("qasm:") :])
    elif selector.endswith(".qasm"):
        result = BenchmarkSelector(kind="qasm", path=selector)
    else:
        raise SelectorError(
            f"Invalid benchmark selector {selector!r}; expected"
            " random:N[:DEPTH[:FRACTION]], qft:N, qvolume:N[:DEPTH],"
            " adder:BITS or qasm:PATH"
        )
    if result.depth == 0:
        raise SelectorError(f"Depth in {selector!r} must be at least 1")
    return result


def _as_list(value: t.Any) -> t.Any:
    if isinstance(value, (list, tuple)):
        return list(value)
    return [value]


def _validate_benchmark(value: str) -> str:
    try:
        parse_benchmark_selector(value)
    except SelectorError as exc:
        raise ValueError(str(exc)) from exc
    return value


def _validate_fidelity_range(value: t.Any) -> t.Any:
    if isinstance(value, str):
        parts = value.split(",")
        if len(parts) != 2:
            raise ValueError("Must be of the form 'LO,HI'")
        return parts
    return value


BenchmarkString = t.Annotated[str, pydantic.AfterValidator(_validate_benchmark)]
IntRange = t.Annotated[
    list[pydantic.NonNegativeInt],
    pydantic.BeforeValidator(_as_list),
    pydantic.Field(min_length=1),
]
FloatRange = t.Annotated[
    list[float], pydantic.BeforeValidator(_as_list), pydantic.Field(min_length=1)
]
FidelityRange = t.Annotated[
    tuple[float, float], pydantic.BeforeValidator(_validate_fidelity_range)
]


class _BaseModel(pydantic.BaseModel):
    model_config = pydantic.ConfigDict(
        frozen=True, extra="forbid", validate_default=True
    )


class RunSection(_BaseModel):
    """
    What to route and how often.
    """

    benchmark: BenchmarkString = "qft:16"
    topology: str = "grid:4x4"
    trials: int = pydantic.Field(default=1, ge=1)
    seed: int = pydantic.Field(default=0, ge=0)
    jobs: int = pydantic.Field(default=1, ge=1)
    # Overlay uniform random edge fidelities drawn from [lo, hi].
    random_fidelities: t.Optional[FidelityRange] = None
    # Grid side lengths for scaling runs.
    sizes: list[pydantic.PositiveInt] = [10, 20, 40, 70, 100]

    @pydantic.field_validator("random_fidelities")
    @classmethod
    def _check_fidelities(
        cls, value: t.Optional[tuple[float, float]]
    ) -> t.Optional[tuple[float, float]]:
        if value is not None and not 0.0 < value[0] <= value[1] <= 1.0:
            raise ValueError("Need 0 < LO <= HI <= 1")
        return value


class RouterSection(_BaseModel):
    """
    Router parameters. ``k``, ``p`` and ``r`` may be lists for sweeps.
    """

    k: IntRange = [1]
    p: FloatRange = [0.0]
    r: FloatRange = [0.0]
    weight_mode: t.Literal["halving", "diameter"] = "diameter"
    perturb_rho: float = pydantic.Field(default=0.05, ge=0.0, lt=1.0)
    stall_window: int = pydantic.Field(default=8, ge=1)
    max_iterations: int = pydantic.Field(default=10_000_000, gt=0)

    @pydantic.field_validator("r")
    @classmethod
    def _check_r(cls, value: list[float]) -> list[float]:
        if any(r < 0 for r in value):
            raise ValueError("Fidelity exponents must not be negative")
        return value

    def router_config(self, k: int, p: float, r: float, seed: int) -> RouterConfig:
        """
        Router configuration for one point of the parameter ranges.
        """
        return RouterConfig(
            k=k,
            p=p,
            r=r,
            weight_mode=self.weight_mode,
            seed=seed,
            perturb_rho=self.perturb_rho,
            stall_window=self.stall_window,
            max_iterations=self.max_iterations,
        )


class MetricsSection(_BaseModel):
    """
    Metric options.
    """

    swap_cost_mode: SwapCostMode = "single-factor"
    statevector_max_qubits: int = pydantic.Field(default=10, ge=1)


class OutputSection(_BaseModel):
    """
    Where and how to write the artifact.
    """

    # Standard output if not set.
    path: t.Optional[str] = None
    format: t.Literal["csv", "json"] = "csv"
    omit_timing: bool = False
    emit_routed: t.Optional[str] = None


class RunSpec(_BaseModel):
    """
    The contents of a forceroute run file.
    """

    run: RunSection = RunSection()
    router: RouterSection = RouterSection()
    metrics: MetricsSection = MetricsSection()
    output: OutputSection = OutputSection()

    @property
    def benchmark(self) -> BenchmarkSelector:
        """
        The parsed benchmark selector.
        """
        return parse_benchmark_selector(self.run.benchmark)

    def echo(self) -> dict[str, t.Any]:
        """
        JSON-compatible copy of the configuration for artifact headers.
        """
        return self.model_dump(mode="json")


def load_config_data(path: str | os.PathLike[str]) -> dict[str, t.Any]:
    """
    Read a run file without validating it.
    """
    with open(path, "rb") as f:
        try:
            return _load_toml(f)
        except ValueError as exc:
            raise ValueError(f"Error while reading {path}: {exc}") from exc


def merge_config_data(
    base: t.Mapping[str, t.Any], overrides: t.Mapping[str, t.Mapping[str, t.Any]]
) -> dict[str, t.Any]:
    """
    Overlay section values; ``None`` override values are skipped.
    """
    result: dict[str, t.Any] = {key: value for key, value in base.items()}
    for section, values in overrides.items():
        merged = dict(result.get(section) or {})
        merged.update(
            {key: value for key, value in values.items() if value is not None}
        )
        result[section] = merged
    return result


def load_config_from_toml(path: str | os.PathLike[str]) -> RunSpec:
    """
    Load a run file.
    """
    return RunSpec.model_validate(load_config_data(path))


__all__ = (
    "CONFIG_FILENAME",
    "BenchmarkSelector",
    "MetricsSection",
    "OutputSection",
    "RouterSection",
    "RunSection",
    "RunSpec",
    "load_config_data",
    "load_config_from_toml",
    "merge_config_data",
    "parse_benchmark_selector",
)
