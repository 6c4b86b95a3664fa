"""Row checks and pandera schemas for every table the harness writes."""
from __future__ import annotations

import pandas as pd
import pandera.pandas as pa

VERDICTS = ["pass", "fail", "inconclusive"]


def require_columns(df: pd.DataFrame, cols: list[str], table: str = "table") -> None:
    absent = sorted(set(cols) - set(df.columns))
    assert not absent, f"{table}: columns {absent} were not produced"


def assert_non_empty(df: pd.DataFrame, table: str = "table") -> None:
    assert not df.empty, f"{table}: experiment produced no rows"


def assert_unique_key(df: pd.DataFrame, key: str | list[str], *, table: str = "table", allow_na: bool = False) -> None:
    """The row key identifies a row; output files are sorted on it."""
    keys = [key] if isinstance(key, str) else list(key)
    if not allow_na:
        assert df[keys].notna().all(axis=None), f"{table}: missing key values in {keys}"
    repeated = int(df.duplicated(subset=keys).sum())
    assert repeated == 0, f"{table}: key {keys} repeats in {repeated} rows"


WIDTH_GROWTH = pa.DataFrameSchema(
    {
        "k": pa.Column(int, pa.Check.ge(0)),
        "target": pa.Column(str),
        "lower_bound": pa.Column(int, pa.Check.ge(0)),
        "word_length": pa.Column(int, pa.Check.ge(0)),
        "verified": pa.Column(bool),
    },
    strict=True,
)

SO2_WITNESS = pa.DataFrameSchema(
    {
        "n": pa.Column(int, pa.Check.ge(0)),
        "mode": pa.Column(str, pa.Check.isin(["valuation", "galois"])),
        "lower_bound": pa.Column(int, pa.Check.ge(0)),
        "generation_k": pa.Column("Int64", nullable=True),
        "generation_word_length": pa.Column("Int64", nullable=True),
        "tower_degree": pa.Column(int, pa.Check.ge(1)),
        "radius_enclosure": pa.Column(str),
        "verified": pa.Column(bool),
    },
    strict=True,
)

LEMMA3_RATES = pa.DataFrameSchema(
    {
        "p": pa.Column(int),
        "e": pa.Column(int, pa.Check.ge(1)),
        "f": pa.Column(int, pa.Check.ge(1)),
        "method": pa.Column(str, pa.Check.isin(["census", "sampled"])),
        "exact_portion": pa.Column(str),
        "d_lower": pa.Column(str),
        "empirical_rate": pa.Column(str),
        "trials": pa.Column(int, pa.Check.ge(1)),
        "within_3_sigma": pa.Column(bool),
        "above_lower": pa.Column(bool),
        "success_bound": pa.Column(str),
        "positivity_passed": pa.Column(bool),
    },
    strict=True,
)

BSET_LEVELS = pa.DataFrameSchema(
    {
        "level": pa.Column(int, pa.Check.ge(0)),
        "b": pa.Column(int, pa.Check.ge(1)),
        "f": pa.Column(int, pa.Check.ge(1)),
        "P_E": pa.Column(int, pa.Check.ge(0)),
        "stratification_checks": pa.Column(int, pa.Check.ge(0)),
        "stratification_violations": pa.Column(int, pa.Check.ge(0)),
        "count": pa.Column(int, pa.Check.ge(0)),
        "bound": pa.Column(int, pa.Check.ge(0)),
        "field_size": pa.Column(int, pa.Check.ge(2)),
        "separating": pa.Column(bool),
    },
    strict=True,
)

NORM_AXIOMS = pa.DataFrameSchema(
    {
        "suite": pa.Column(str),
        "axiom": pa.Column(str, pa.Check.isin(["i", "ii", "iii", "iv", "v", "unit"])),
        "index": pa.Column(int, pa.Check.ge(-1)),
        "verdict": pa.Column(str, pa.Check.isin(VERDICTS)),
        "inputs": pa.Column(str),
        "enclosures": pa.Column(str),
        "decimal": pa.Column(str),
    },
    strict=True,
)

SCHEMAS: dict[str, pa.DataFrameSchema] = {
    "width-growth": WIDTH_GROWTH,
    "so2-witness": SO2_WITNESS,
    "lemma3-rates": LEMMA3_RATES,
    "bset-build": BSET_LEVELS,
    "norm-axioms": NORM_AXIOMS,
}

KEYS: dict[str, list[str]] = {
    "width-growth": ["k"],
    "so2-witness": ["n"],
    "lemma3-rates": ["e", "f"],
    "bset-build": ["level"],
    "norm-axioms": ["suite", "index", "axiom"],
}


def validate_table(df: pd.DataFrame, subcommand: str) -> pd.DataFrame:
    schema = SCHEMAS[subcommand]
    require_columns(df, list(schema.columns), subcommand)
    assert_non_empty(df, subcommand)
    assert_unique_key(df, KEYS[subcommand], table=subcommand)
    return schema.validate(df)
