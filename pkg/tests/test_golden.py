from fractions import Fraction
from pathlib import Path

from width_lab.config import ExperimentConfig, make_paths
from width_lab.fields import QQ, to_text
from width_lab.harness import run
from width_lab.io import read_key_value_file
from width_lab.matrices import E
from width_lab.polynomials import UniPolynomial
from width_lab.ratfunc import RationalFunction
from width_lab.towers import Q_TOWER, QT_TOWER, tower_adjoin_sqrt

GOLDEN = make_paths(Path(__file__).resolve().parents[1]).golden


def canonical_elements():
    k2 = tower_adjoin_sqrt(tower_adjoin_sqrt(Q_TOWER, 2).tower, 3).tower
    sqrt2, sqrt3 = k2.generator(1), k2.generator()
    qt = tower_adjoin_sqrt(QT_TOWER, RationalFunction.t_power(1)).tower
    inverse_two_t = RationalFunction.from_coeffs([1], [0, 2])
    return {
        "half": Fraction(1, 2),
        "poly": UniPolynomial((1, 0, Fraction(-1, 2)), QQ),
        "t_over_one_plus_t": RationalFunction.from_coeffs([0, 1], [1, 1]),
        "inverse_two_t": inverse_two_t,
        "sqrt2": sqrt2,
        "sqrt3": sqrt3,
        "sqrt6": sqrt2 * sqrt3,
        "half_minus_sqrt3": sqrt3 * -1 + Fraction(1, 2),
        "sqrt_t_plus_inverse_two_t": qt.generator() + inverse_two_t,
        "elementary_half": E(Fraction(1, 2)),
    }


def test_canonical_text_matches_golden():
    golden = read_key_value_file(GOLDEN / "canonical_text.txt")
    got = {name: to_text(x) for name, x in canonical_elements().items()}
    assert got == golden


def test_width_growth_csv_matches_golden(tmp_path):
    cfg = ExperimentConfig.from_sources("width-growth", overrides={"k_max": "4"}, out_path=tmp_path / "wg.csv")
    result = run(cfg)
    assert result.out_path.read_text(encoding="utf-8") == (GOLDEN / "width_growth_k4.csv").read_text(encoding="utf-8")
