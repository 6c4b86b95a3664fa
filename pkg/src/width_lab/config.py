from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path
from typing import Any, Literal, Mapping

from width_lab.errors import ConfigError

Subcommand = Literal["width-growth", "so2-witness", "lemma3-rates", "bset-build", "norm-axioms"]
OutputFormat = Literal["csv", "jsonl"]


@dataclass(frozen=True)
class Paths:
    root: Path
    data: Path
    runs: Path
    golden: Path


def make_paths(root: Path) -> Paths:
    data = root / "data"
    paths = Paths(root=root, data=data, runs=data / "runs", golden=data / "golden")
    for path in [paths.runs, paths.golden]:
        path.mkdir(parents=True, exist_ok=True)
    return paths


ROOT_DIR = Path(__file__).resolve().parents[2]


@dataclass(frozen=True)
class LabSettings:
    """Caps and sample sizes shared by every experiment; each can be overridden as a param."""

    validation_samples: int = 500
    max_doublings: int = 16
    refine_cap: int = 6
    gamma_cap: int = 1_000_000
    enumeration_cap: int = 1_000_000
    census_cap: int = 1 << 16
    embedding_exhaustive_cap: int = 4096
    spot_checks: int = 32

    @classmethod
    def keys(cls) -> set[str]:
        return {f.name for f in fields(cls)}

    def updated(self, params: Mapping[str, str]) -> LabSettings:
        changes = {}
        for k in self.keys() & params.keys():
            try:
                changes[k] = int(params[k])
            except ValueError as exc:
                raise ConfigError(f"{k} must be an integer, got {params[k]!r}") from exc
        return replace(self, **changes)


# every value is kept as exact text; the harness parses what it needs
SUBCOMMAND_PARAMS: dict[str, dict[str, str]] = {
    "width-growth": {"k_min": "1", "k_max": "8", "r": "1", "sign": "-1"},
    "so2-witness": {"n_min": "0", "n_max": "6", "mode": "valuation", "generate_max_n": "3", "k_slack": "2"},
    "lemma3-rates": {"p": "2", "e_max": "3", "f_max": "3", "trials": "10000"},
    "bset-build": {"p": "2", "e0": "3", "depth": "2", "f_schedule": "2,3", "budget": "10000"},
    "norm-axioms": {"mode": "valuation", "samples": "1000", "p": "2", "tol": "1/32"},
}


@dataclass(frozen=True)
class ExperimentConfig:
    subcommand: Subcommand
    seed: int = 0
    params: dict[str, str] = field(default_factory=dict)
    out_path: Path | None = None
    format: OutputFormat = "csv"

    @classmethod
    def from_sources(
        cls,
        subcommand: str,
        *,
        file_values: Mapping[str, str] | None = None,
        overrides: Mapping[str, str] | None = None,
        seed: int | None = None,
        out_path: Path | None = None,
        fmt: str | None = None,
    ) -> ExperimentConfig:
        """Defaults, then the key=value file, then command-line values."""
        if subcommand not in SUBCOMMAND_PARAMS:
            raise ConfigError(f"unknown subcommand {subcommand!r}")
        allowed = SUBCOMMAND_PARAMS[subcommand].keys() | LabSettings.keys()
        merged: dict[str, str] = dict(SUBCOMMAND_PARAMS[subcommand])
        top: dict[str, str] = {}
        for source in (file_values or {}, overrides or {}):
            for k, v in source.items():
                if k in ("seed", "out", "format"):
                    top[k] = v
                elif k in allowed:
                    merged[k] = v
                else:
                    raise ConfigError(f"unknown key {k!r} for {subcommand}")
        if seed is None:
            try:
                seed = int(top.get("seed", "0"))
            except ValueError as exc:
                raise ConfigError(f"seed must be an integer, got {top['seed']!r}") from exc
        if not 0 <= seed < 2**64:
            raise ConfigError("seed must fit in 64 bits")
        fmt = fmt or top.get("format", "csv")
        if fmt not in ("csv", "jsonl"):
            raise ConfigError(f"format must be csv or jsonl, got {fmt!r}")
        if out_path is None and "out" in top:
            out_path = Path(top["out"])
        cfg = cls(subcommand, seed, merged, out_path, fmt)  # type: ignore[arg-type]
        cfg.settings()
        return cfg

    def settings(self) -> LabSettings:
        return LabSettings().updated(self.params)

    def param(self, key: str) -> str:
        try:
            return self.params[key]
        except KeyError as exc:
            raise ConfigError(f"missing parameter {key!r}") from exc

    def int_param(self, key: str) -> int:
        try:
            return int(self.param(key))
        except ValueError as exc:
            raise ConfigError(f"{key} must be an integer, got {self.params[key]!r}") from exc

    def int_list_param(self, key: str) -> list[int]:
        try:
            return [int(x) for x in self.param(key).split(",") if x.strip()]
        except ValueError as exc:
            raise ConfigError(f"{key} must be a comma-separated integer list, got {self.params[key]!r}") from exc

    def as_dict(self) -> dict[str, Any]:
        d = asdict(self)
        d["out_path"] = str(self.out_path) if self.out_path is not None else None
        return d

    def canonical_json(self) -> str:
        """Sorted keys, no whitespace; the output path is left out so reruns elsewhere match."""
        d = self.as_dict()
        d.pop("out_path")
        return json.dumps(d, sort_keys=True, separators=(",", ":"))
