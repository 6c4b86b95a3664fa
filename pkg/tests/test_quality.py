import pandas as pd
import pandera.errors
import pytest

from width_lab.quality import KEYS, SCHEMAS, assert_non_empty, assert_unique_key, require_columns, validate_table


def width_rows(**overrides):
    row = {"k": 1, "target": "[[1, t^-1], [0, 1]]", "lower_bound": 1, "word_length": 1, "verified": True}
    return pd.DataFrame([{**row, **overrides}])


def test_every_subcommand_has_schema_and_key():
    assert SCHEMAS.keys() == KEYS.keys()
    for name, key in KEYS.items():
        assert set(key) <= set(SCHEMAS[name].columns)


def test_valid_table_passes():
    assert len(validate_table(width_rows(), "width-growth")) == 1


def test_duplicate_key_fails():
    df = pd.concat([width_rows(), width_rows()], ignore_index=True)
    with pytest.raises(AssertionError, match="repeats"):
        validate_table(df, "width-growth")


def test_schema_rejects_negative_bound():
    with pytest.raises(pandera.errors.SchemaError):
        validate_table(width_rows(lower_bound=-1), "width-growth")


def test_schema_is_strict():
    with pytest.raises(pandera.errors.SchemaError):
        validate_table(width_rows(extra="x"), "width-growth")


def test_missing_column_is_named():
    with pytest.raises(AssertionError, match=r"width-growth: columns \[.word_length.\]"):
        validate_table(width_rows().drop(columns="word_length"), "width-growth")


def test_helpers():
    df = pd.DataFrame({"a": [1, None]})
    require_columns(df, ["a"])
    with pytest.raises(AssertionError, match="not produced"):
        require_columns(df, ["b"])
    with pytest.raises(AssertionError, match="no rows"):
        assert_non_empty(df.iloc[0:0])
    with pytest.raises(AssertionError, match="missing key values"):
        assert_unique_key(df, "a")
    assert_unique_key(df, "a", allow_na=True)
