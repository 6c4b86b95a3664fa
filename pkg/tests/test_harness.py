import json

import pytest

from width_lab.config import ExperimentConfig
from width_lab.errors import BudgetExhausted, ConfigError
from width_lab.harness import run
from width_lab.io import read_table


def config(subcommand, tmp_path, fmt="csv", seed=0, **params):
    return ExperimentConfig.from_sources(
        subcommand,
        overrides={k: str(v) for k, v in params.items()},
        seed=seed,
        out_path=tmp_path / f"{subcommand}.{fmt}",
        fmt=fmt,
    )


def test_width_growth(tmp_path):
    result = run(config("width-growth", tmp_path, k_max=8))
    assert result.verified
    table = result.table
    assert table["lower_bound"].tolist() == list(range(1, 9))
    assert all(n in (k, k + 1) for k, n in zip(table["k"], table["word_length"]))
    meta = json.loads((tmp_path / "width-growth_run_meta.json").read_text())
    assert meta["rows"] == 8 and meta["summary"]["verified"]
    assert read_table(result.out_path)["k"].tolist() == [str(k) for k in range(1, 9)]


def test_width_growth_positive_powers_stay_bounded(tmp_path):
    result = run(config("width-growth", tmp_path, sign=1, k_max=4))
    assert result.verified
    assert set(result.table["lower_bound"]) == {0}


def test_width_growth_rejects_sign(tmp_path):
    with pytest.raises(ConfigError):
        run(config("width-growth", tmp_path, sign=2))


def test_so2_witness(tmp_path):
    result = run(config("so2-witness", tmp_path, n_max=3, generate_max_n=2, validation_samples=100))
    assert result.verified
    assert result.table["lower_bound"].tolist() == [1, 2, 4, 8]
    assert result.table["generation_word_length"].isna().tolist() == [False, False, False, True]


def test_so2_witness_galois_jsonl(tmp_path):
    result = run(config("so2-witness", tmp_path, fmt="jsonl", mode="galois", n_max=3))
    assert result.verified
    assert result.table["lower_bound"].tolist()[1:] == [2, 3, 5]
    assert all(text.startswith("[") for text in result.table["radius_enclosure"])
    lines = result.out_path.read_text().splitlines()
    assert lines[0].startswith("# width-lab")
    assert all(json.loads(line)["generation_k"] is None for line in lines[1:])


def test_lemma3_rates(tmp_path):
    result = run(config("lemma3-rates", tmp_path, e_max=2, f_max=2))
    assert result.verified
    assert result.table["method"].tolist() == ["census", "census"]
    assert result.table["empirical_rate"].tolist() == ["1/2", "3/8"]


def test_bset_build(tmp_path):
    result = run(config("bset-build", tmp_path, depth=1, seed=3))
    assert result.verified
    assert result.table["b"].tolist() == [3, 6]
    state = json.loads((tmp_path / "bset-build.state.json").read_text())
    assert len(state["state"]["levels"]) == 2
    assert state["stratification"]["violations"] == []


@pytest.mark.slow
def test_bset_build_default_separates_at_level_two(tmp_path):
    result = run(config("bset-build", tmp_path, seed=7))
    assert result.verified
    assert result.summary["separating_level"] == 2


def test_bset_build_budget(tmp_path):
    with pytest.raises(BudgetExhausted):
        run(config("bset-build", tmp_path, budget=0))


@pytest.mark.parametrize("mode", ["valuation", "p_adic", "galois"])
def test_norm_axioms(tmp_path, mode):
    result = run(config("norm-axioms", tmp_path, mode=mode, samples=10))
    assert result.verified
    assert result.summary["violations"] == 0
    assert set(result.table["verdict"]) <= {"pass", "inconclusive"}


def test_norm_axioms_galois_reports_witness_decimal(tmp_path):
    result = run(config("norm-axioms", tmp_path, mode="galois", samples=3))
    decimal = result.table.loc[result.table["axiom"] == "v", "decimal"].iloc[0]
    lo, hi = decimal[1:-1].split(", ")
    assert float(lo) < 2 < float(hi)


def test_norm_axioms_unknown_mode(tmp_path):
    with pytest.raises(ConfigError):
        run(config("norm-axioms", tmp_path, mode="sup"))


RERUN_PARAMS = [
    ("width-growth", {"k_max": 5}),
    ("so2-witness", {"n_max": 2, "generate_max_n": 1, "validation_samples": 100}),
    ("so2-witness", {"mode": "galois", "n_max": 1}),
    ("lemma3-rates", {"e_max": 2, "f_max": 2}),
    ("bset-build", {"depth": 1}),
    ("norm-axioms", {"mode": "valuation", "samples": 5, "validation_samples": 100}),
    ("norm-axioms", {"mode": "galois", "samples": 3}),
]


@pytest.mark.parametrize("subcommand, params", RERUN_PARAMS)
def test_reruns_are_byte_identical(tmp_path, subcommand, params):
    a = run(config(subcommand, tmp_path / "a", seed=11, **params))
    b = run(config(subcommand, tmp_path / "b", seed=11, **params))
    assert a.out_path.read_bytes() == b.out_path.read_bytes()
    for name in (f"{subcommand}_run_meta.json", f"{subcommand}.state.json"):
        if (tmp_path / "a" / name).exists():
            assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


@pytest.mark.slow
def test_width_growth_to_32(tmp_path):
    result = run(config("width-growth", tmp_path, k_max=32))
    assert result.verified
    table = result.table
    assert table["lower_bound"].tolist() == list(range(1, 33))
    assert all(n in (k, k + 1) for k, n in zip(table["k"], table["word_length"]))
