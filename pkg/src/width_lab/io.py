from __future__ import annotations

import json
import math
from decimal import ROUND_CEILING, ROUND_FLOOR, Context, Decimal
from fractions import Fraction
from pathlib import Path
from typing import Any, Literal

import pandas as pd

from width_lab import __version__
from width_lab.errors import ConfigError


def header_line(config_json: str) -> str:
    return f"# width-lab v{__version__} config={config_json}\n"


def write_table(df: pd.DataFrame, path: Path, fmt: Literal["csv", "jsonl"], header: str) -> None:
    """Header line, then the rows; LF line endings so reruns are byte-identical."""
    path.parent.mkdir(parents=True, exist_ok=True)
    if fmt == "csv":
        body = df.to_csv(index=False, lineterminator="\n")
    else:
        records = df.astype(object).where(df.notna(), None).to_dict(orient="records")
        body = "".join(json.dumps(rec, sort_keys=True) + "\n" for rec in records)
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        fh.write(header)
        fh.write(body)


def read_table(path: Path) -> pd.DataFrame:
    """Inverse of ``write_table`` for CSV output (header line skipped, every cell as text)."""
    return pd.read_csv(path, skiprows=1, dtype="string", keep_default_na=False)


def write_json(obj: Any, path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(obj, sort_keys=True, indent=2) + "\n", encoding="utf-8")


def read_key_value_file(path: Path) -> dict[str, str]:
    """``key=value`` per line; blank lines and ``#`` comments are skipped."""
    out: dict[str, str] = {}
    for n, line in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{n}: expected key=value, got {line!r}")
        k, v = line.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def write_run_meta(path: Path, *, config: dict[str, Any], rows: int, summary: dict[str, Any]) -> None:
    meta = {"rows": int(rows), "config": config, "summary": summary}
    write_json(meta, path)


def decimal_outward(q: Fraction, direction: Literal["down", "up"], digits: int = 6) -> str:
    """q to ``digits`` significant digits, rounded away from the enclosed value."""
    if q == 0:
        return "0"
    rounding = ROUND_FLOOR if direction == "down" else ROUND_CEILING
    exponent = math.floor(math.log10(abs(q.numerator)) - math.log10(q.denominator))
    ctx = Context(prec=digits + 30, rounding=rounding)
    exact = ctx.divide(Decimal(q.numerator), Decimal(q.denominator))
    quantum = Decimal(1).scaleb(exponent - digits + 1)
    out = exact.quantize(quantum, rounding=rounding)
    # the floating estimate of the exponent can be one off
    if len(out.as_tuple().digits) > digits:
        out = exact.quantize(quantum.scaleb(1), rounding=rounding)
    return format(out.normalize(), "f") if abs(exponent) < 12 else format(out.normalize(), "E")


def enclosure_decimals(lower: Fraction, upper: Fraction, digits: int = 6) -> str:
    return f"[{decimal_outward(lower, 'down', digits)}, {decimal_outward(upper, 'up', digits)}]"
