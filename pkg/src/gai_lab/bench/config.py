"""Experiment configuration: YAML/JSON ingestion, presets and validation.

A config is a mapping with an optional ``defaults`` block merged into every
entry of ``cells``.  See the README for the full schema.
"""
from __future__ import annotations

import copy
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any, Mapping

import yaml

from ..engine import DEFAULT_MAX_ROUNDS, EngineConfig
from ..eprocess import DEFAULT_B, DEFAULT_PRIOR_WEIGHT
from ..labeling import StoppingKind
from ..policies import DEFAULT_ALPHA, PolicyKind
from ..rewards import ArmKind, BanditInstance


class ConfigError(ValueError):
    pass


DOSE_FINDING_MEANS = (0.36, 0.34, 0.469, 0.465, 0.537)

# (count at xi+0.1, xi+0.05, xi-0.05, xi-0.1)
SYNTHETIC_LAYOUT = {
    "synthetic-k4": (1, 1, 1, 1),
    "synthetic-k10": (1, 1, 4, 4),
    "synthetic-k20": (1, 1, 9, 9),
}
PRESETS = (*SYNTHETIC_LAYOUT, "dose-finding")


def preset_means(name: str, xi: float = 0.5) -> tuple[float, ...]:
    if name == "dose-finding":
        return DOSE_FINDING_MEANS
    try:
        layout = SYNTHETIC_LAYOUT[name]
    except KeyError:
        raise ConfigError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}") from None
    offsets = (0.1, 0.05, -0.05, -0.1)
    means: list[float] = []
    for count, off in zip(layout, offsets):
        means.extend([round(xi + off, 12)] * count)
    return tuple(means)


def describe_preset(name: str) -> str:
    means = preset_means(name)
    return f"{name}: K={len(means)}, xi=0.5, means={list(means)}"


@dataclass(frozen=True)
class CellConfig:
    name: str
    engine: EngineConfig
    replications: int
    master_seed: int
    preset: str | None = None

    @property
    def instance(self) -> BanditInstance:
        return self.engine.instance


@dataclass
class ExperimentConfig:
    cells: list[CellConfig]
    output: str | None = None
    jobs: int | None = None
    exclude_mislabeled_from_times: bool = False
    std_ddof: int = 0
    write_json: bool = True
    raw: dict[str, Any] = field(default_factory=dict, repr=False)


_CELL_KEYS = {
    "name", "preset", "means", "xi", "dgp", "policy", "stopping", "delta", "b",
    "m", "reset_variant", "replications", "master_seed", "max_rounds", "K",
}
_TOP_KEYS = {"cells", "defaults", "output", "jobs", "exclude_mislabeled_from_times",
             "std_ddof", "write_json"}


def _where(i: int, key: str) -> str:
    return f"cells[{i}].{key}"


def _number(value: Any, where: str, kind: type = float) -> Any:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{where}: expected a number, got {value!r}")
    if kind is int:
        if float(value) != int(value):
            raise ConfigError(f"{where}: expected an integer, got {value!r}")
        return int(value)
    return float(value)


def _kind_block(value: Any, where: str) -> tuple[str, dict[str, Any]]:
    if isinstance(value, str):
        return value, {}
    if isinstance(value, Mapping) and "kind" in value:
        params = {k: v for k, v in value.items() if k != "kind"}
        return str(value["kind"]), params
    raise ConfigError(f"{where}: expected a kind name or a mapping with 'kind', got {value!r}")


def _parse_cell(i: int, spec: Mapping[str, Any]) -> CellConfig:
    unknown = set(spec) - _CELL_KEYS
    if unknown:
        raise ConfigError(f"cells[{i}]: unknown field(s) {sorted(unknown)}")
    for key in ("name", "delta"):
        if key not in spec or spec[key] is None:
            raise ConfigError(f"{_where(i, key)}: missing required field {key!r}")
    name = str(spec["name"])

    xi = _number(spec.get("xi", 0.5), _where(i, "xi"))
    if not 0.0 < xi < 1.0:
        raise ConfigError(f"{_where(i, 'xi')}: must lie in (0, 1), got {xi}")

    preset = spec.get("preset")
    if preset is not None and "means" in spec:
        raise ConfigError(f"cells[{i}]: give either 'preset' or 'means', not both")
    if preset is not None:
        means = preset_means(str(preset), xi)
    elif "means" in spec:
        raw = spec["means"]
        if not isinstance(raw, (list, tuple)) or not raw:
            raise ConfigError(f"{_where(i, 'means')}: expected a nonempty list of numbers")
        means = tuple(_number(v, f"{_where(i, 'means')}[{j}]") for j, v in enumerate(raw))
    else:
        raise ConfigError(f"cells[{i}]: one of 'preset' or 'means' is required")
    if "K" in spec and _number(spec["K"], _where(i, "K"), int) != len(means):
        raise ConfigError(f"{_where(i, 'K')}: says {spec['K']} but there are {len(means)} means")

    try:
        dgp = ArmKind(spec.get("dgp", "bernoulli"))
    except ValueError:
        raise ConfigError(f"{_where(i, 'dgp')}: unknown DGP {spec.get('dgp')!r}; "
                          f"choose from {[k.value for k in ArmKind]}") from None
    try:
        instance = BanditInstance.from_means(means, xi, dgp)
    except ValueError as exc:
        raise ConfigError(f"{_where(i, 'means')}: {exc}") from None

    pol_name, pol_params = _kind_block(spec.get("policy", "moss"), _where(i, "policy"))
    try:
        policy = PolicyKind(pol_name)
    except ValueError:
        raise ConfigError(f"{_where(i, 'policy')}: unknown policy {pol_name!r}; "
                          f"choose from {[k.value for k in PolicyKind]}") from None
    if set(pol_params) - {"alpha"}:
        raise ConfigError(f"{_where(i, 'policy')}: unknown parameter(s) "
                          f"{sorted(set(pol_params) - {'alpha'})}")
    alpha = _number(pol_params.get("alpha", DEFAULT_ALPHA), _where(i, "policy.alpha"))

    stop_name, stop_params = _kind_block(spec.get("stopping", "eprocess"), _where(i, "stopping"))
    try:
        stopping = StoppingKind(stop_name)
    except ValueError:
        raise ConfigError(f"{_where(i, 'stopping')}: unknown stopping rule {stop_name!r}; "
                          f"choose from {[k.value for k in StoppingKind]}") from None
    if set(stop_params) - {"prior_weight"}:
        raise ConfigError(f"{_where(i, 'stopping')}: unknown parameter(s) "
                          f"{sorted(set(stop_params) - {'prior_weight'})}")
    prior_weight = _number(stop_params.get("prior_weight", DEFAULT_PRIOR_WEIGHT),
                           _where(i, "stopping.prior_weight"))

    delta = _number(spec["delta"], _where(i, "delta"))
    if not 0.0 < delta < 1.0:
        raise ConfigError(f"{_where(i, 'delta')}: must lie in (0, 1), got {delta}")
    b = _number(spec.get("b", DEFAULT_B), _where(i, "b"))
    if not 0.0 < b < 1.0:
        raise ConfigError(f"{_where(i, 'b')}: must lie in (0, 1), got {b}")
    m = spec.get("m")
    if m is not None:
        m = _number(m, _where(i, "m"), int)
        if not 1 <= m <= instance.K:
            raise ConfigError(f"{_where(i, 'm')}: must lie in [1, {instance.K}], got {m}")
    reps = _number(spec.get("replications", 200), _where(i, "replications"), int)
    if reps < 1:
        raise ConfigError(f"{_where(i, 'replications')}: must be at least 1, got {reps}")
    seed = _number(spec.get("master_seed", 0), _where(i, "master_seed"), int)
    if not 0 <= seed < 2**64:
        raise ConfigError(f"{_where(i, 'master_seed')}: must be a 64-bit unsigned integer")
    max_rounds = _number(spec.get("max_rounds", DEFAULT_MAX_ROUNDS), _where(i, "max_rounds"), int)
    if max_rounds < instance.K:
        raise ConfigError(f"{_where(i, 'max_rounds')}: must be at least K={instance.K}")
    reset_variant = spec.get("reset_variant", False)
    if not isinstance(reset_variant, bool):
        raise ConfigError(f"{_where(i, 'reset_variant')}: expected true or false")

    try:
        engine = EngineConfig(
            instance=instance, policy=policy, stopping=stopping, delta=delta, b=b,
            alpha=alpha, prior_weight=prior_weight, m=m, reset_variant=reset_variant,
            max_rounds=max_rounds,
        )
    except ValueError as exc:
        raise ConfigError(f"cells[{i}]: {exc}") from None
    return CellConfig(name, engine, reps, seed, None if preset is None else str(preset))


def parse_config(data: Any) -> ExperimentConfig:
    if not isinstance(data, Mapping):
        raise ConfigError("config root must be a mapping")
    unknown = set(data) - _TOP_KEYS
    if unknown:
        raise ConfigError(f"unknown top-level field(s) {sorted(unknown)}")
    cells_raw = data.get("cells")
    if not isinstance(cells_raw, list) or not cells_raw:
        raise ConfigError("cells: expected a nonempty list of cells")
    defaults = data.get("defaults") or {}
    if not isinstance(defaults, Mapping):
        raise ConfigError("defaults: expected a mapping")

    cells = []
    seen: set[str] = set()
    for i, raw in enumerate(cells_raw):
        if not isinstance(raw, Mapping):
            raise ConfigError(f"cells[{i}]: expected a mapping")
        merged = {**copy.deepcopy(dict(defaults)), **raw}
        cell = _parse_cell(i, merged)
        if cell.name in seen:
            raise ConfigError(f"{_where(i, 'name')}: duplicate cell name {cell.name!r}")
        seen.add(cell.name)
        cells.append(cell)

    jobs = data.get("jobs")
    if jobs is not None:
        jobs = _number(jobs, "jobs", int)
        if jobs < 1:
            raise ConfigError("jobs: must be at least 1")
    std_ddof = _number(data.get("std_ddof", 0), "std_ddof", int)
    if std_ddof not in (0, 1):
        raise ConfigError("std_ddof: must be 0 (population) or 1 (sample)")
    exclude = data.get("exclude_mislabeled_from_times", False)
    write_json = data.get("write_json", True)
    for key, value in (("exclude_mislabeled_from_times", exclude), ("write_json", write_json)):
        if not isinstance(value, bool):
            raise ConfigError(f"{key}: expected true or false")
    output = data.get("output")
    return ExperimentConfig(
        cells=cells,
        output=None if output is None else str(output),
        jobs=jobs,
        exclude_mislabeled_from_times=exclude,
        std_ddof=std_ddof,
        write_json=write_json,
        raw=dict(data),
    )


def builtin_suites() -> list[str]:
    root = resources.files("gai_lab.bench") / "suites"
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".yaml"))


def load_config(source: str | Path) -> ExperimentConfig:
    """Load a config from a file path, a built-in suite name, or YAML/JSON text."""
    text: str
    path = Path(str(source))
    if isinstance(source, Path) or (("\n" not in str(source)) and path.is_file()):
        text = path.read_text(encoding="utf-8")
    elif "\n" not in str(source) and str(source) in builtin_suites():
        text = (resources.files("gai_lab.bench") / "suites" / f"{source}.yaml").read_text(
            encoding="utf-8")
    elif "\n" in str(source) or str(source).lstrip().startswith("{"):
        text = str(source)
    else:
        raise ConfigError(f"config {source!r} is neither a file nor a built-in suite "
                          f"({', '.join(builtin_suites())})")
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"malformed config: {exc}") from None
    return parse_config(data)
