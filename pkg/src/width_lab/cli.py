"""``width-lab`` command line: one subcommand per experiment.

Exit codes: 0 success, 1 verification failure or library error,
2 configuration error, 3 search budget or enumeration cap exhausted.
"""
from __future__ import annotations

import logging
from pathlib import Path
from typing import Annotated, Optional

import pandera.errors
import typer

from width_lab.config import ExperimentConfig
from width_lab.errors import ConfigError, ExhaustionError, WidthLabError
from width_lab.harness import run
from width_lab.io import read_key_value_file

log = logging.getLogger(__name__)

app = typer.Typer(add_completion=False, no_args_is_help=True, help="Width certificates and finite-field generating-set experiments.")

SeedOpt = Annotated[Optional[int], typer.Option("--seed", help="Master seed (64-bit).")]
OutOpt = Annotated[Optional[Path], typer.Option("--out", help="Output file; defaults to data/runs/<subcommand>-seed<seed>.<format>.")]
FormatOpt = Annotated[Optional[str], typer.Option("--format", help="csv or jsonl.")]
ParamsOpt = Annotated[Optional[list[str]], typer.Option("--params", help="key=value, repeatable.")]
ConfigOpt = Annotated[Optional[Path], typer.Option("--config", help="Plain-text key=value file.")]

EXIT_VERIFY, EXIT_CONFIG, EXIT_EXHAUSTED = 1, 2, 3


@app.callback()
def main(verbose: Annotated[bool, typer.Option("--verbose", "-v", help="Debug logging.")] = False) -> None:
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.INFO,
        format="%(asctime)s | %(levelname)s | %(name)s: %(message)s",
    )


def parse_params(items: list[str] | None) -> dict[str, str]:
    out: dict[str, str] = {}
    for item in items or []:
        if "=" not in item:
            raise ConfigError(f"--params expects key=value, got {item!r}")
        k, v = item.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def _execute(subcommand: str, seed: int | None, out: Path | None, fmt: str | None, params: list[str] | None, config: Path | None) -> None:
    try:
        file_values = read_key_value_file(config) if config is not None else {}
        cfg = ExperimentConfig.from_sources(
            subcommand,
            file_values=file_values,
            overrides=parse_params(params),
            seed=seed,
            out_path=out,
            fmt=fmt,
        )
    except (ConfigError, OSError) as exc:
        log.error("config error: %s", exc)
        raise typer.Exit(EXIT_CONFIG) from exc
    try:
        result = run(cfg)
    except ConfigError as exc:
        log.error("config error: %s", exc)
        raise typer.Exit(EXIT_CONFIG) from exc
    except ExhaustionError as exc:
        log.error("%s exhausted: %s (history: %d entries)", subcommand, exc, len(exc.history))
        raise typer.Exit(EXIT_EXHAUSTED) from exc
    except (WidthLabError, pandera.errors.SchemaError, AssertionError) as exc:
        log.error("%s failed with params %s: %s: %s", subcommand, cfg.params, type(exc).__name__, exc)
        raise typer.Exit(EXIT_VERIFY) from exc
    if not result.verified:
        log.error("%s: verification failed, see %s", subcommand, result.out_path)
        raise typer.Exit(EXIT_VERIFY)


@app.command("width-growth")
def width_growth(seed: SeedOpt = None, out: OutOpt = None, fmt: FormatOpt = None, params: ParamsOpt = None, config: ConfigOpt = None) -> None:
    """E12(t^-k) certificates: lower bound and explicit word per k."""
    _execute("width-growth", seed, out, fmt, params, config)


@app.command("so2-witness")
def so2_witness(seed: SeedOpt = None, out: OutOpt = None, fmt: FormatOpt = None, params: ParamsOpt = None, config: ConfigOpt = None) -> None:
    """Rotation witnesses with lower bound 2^n, generated words for small n."""
    _execute("so2-witness", seed, out, fmt, params, config)


@app.command("lemma3-rates")
def lemma3_rates(seed: SeedOpt = None, out: OutOpt = None, fmt: FormatOpt = None, params: ParamsOpt = None, config: ConfigOpt = None) -> None:
    """Complement acceptance portions against their exact values and d."""
    _execute("lemma3-rates", seed, out, fmt, params, config)


@app.command("bset-build")
def bset_build(seed: SeedOpt = None, out: OutOpt = None, fmt: FormatOpt = None, params: ParamsOpt = None, config: ConfigOpt = None) -> None:
    """Build B_0 c B_1 c ... and verify it exhaustively."""
    _execute("bset-build", seed, out, fmt, params, config)


@app.command("norm-axioms")
def norm_axioms(seed: SeedOpt = None, out: OutOpt = None, fmt: FormatOpt = None, params: ParamsOpt = None, config: ConfigOpt = None) -> None:
    """Norm axiom suites: valuation, galois or p_adic."""
    _execute("norm-axioms", seed, out, fmt, params, config)


if __name__ == "__main__":
    app()
