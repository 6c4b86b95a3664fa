from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable

import pandas as pd

from width_lab.axioms import AxiomReport, galois_suite, valuation_suite
from width_lab.bset import (
    complement_acceptance_rate,
    complement_census,
    complement_portion,
    corollary4_build,
    counting_check,
    lemma3_positivity,
    verify_stratification,
)
from width_lab.certificates import GeneratorSpec, certify, factor_E12, width_lower_bound
from width_lab.config import ROOT_DIR, ExperimentConfig, Paths, make_paths
from width_lab.errors import ConfigError
from width_lab.galois_norm import eisenstein_near, galois_radius
from width_lab.io import enclosure_decimals, header_line, write_json, write_run_meta, write_table
from width_lab.matrices import E
from width_lab.multipoly import MPoly, PolySet, default_family
from width_lab.quality import KEYS, validate_table
from width_lab.ratfunc import RationalFunction
from width_lab.so2 import galois_witness_check, so2_generate, so2_witness_data
from width_lab.valuations import base_valuation_map, extend_to_tower

log = logging.getLogger(__name__)


@dataclass
class RunResult:
    table: pd.DataFrame
    verified: bool
    summary: dict[str, Any] = field(default_factory=dict)
    attachment: dict[str, Any] | None = None
    out_path: Path | None = None


def width_growth(cfg: ExperimentConfig) -> RunResult:
    """E12(t^(sign k)) against the valuation ball of radius r, k = k_min..k_max."""
    sign = cfg.int_param("sign")
    if sign not in (-1, 1):
        raise ConfigError("sign must be -1 or 1")
    spec = GeneratorSpec.valuation_ball(r=Fraction(cfg.param("r")))
    t = RationalFunction.t_power(1)
    rows = []
    for k in range(cfg.int_param("k_min"), cfg.int_param("k_max") + 1):
        alpha = RationalFunction.t_power(sign * k)
        word = factor_E12(alpha, t, spec)
        cert = certify(E(alpha), spec, word)
        rows.append(
            {
                "k": k,
                "target": cert.target.text(),
                "lower_bound": cert.lower_bound,
                "word_length": len(word),
                "verified": cert.verified(),
            }
        )
    df = pd.DataFrame(rows)
    return RunResult(df, bool(df["verified"].all()), {"rows": len(df)})


def so2_witness(cfg: ExperimentConfig) -> RunResult:
    """Lower bounds for the witness family, plus generated words for small n."""
    settings = cfg.settings()
    mode = cfg.param("mode")
    if mode not in ("valuation", "galois"):
        raise ConfigError(f"so2-witness mode must be valuation or galois, got {mode!r}")
    generate_max_n = cfg.int_param("generate_max_n") if mode == "valuation" else -1
    rows = []
    ok = True
    for n in range(cfg.int_param("n_min"), cfg.int_param("n_max") + 1):
        data = so2_witness_data(n, mode)  # type: ignore[arg-type]
        if mode == "valuation":
            vmap = extend_to_tower(base_valuation_map("t_adic"), data.tower, samples=settings.validation_samples, seed=cfg.seed)
            spec = GeneratorSpec.valuation_ball(vmap)
        else:
            spec = GeneratorSpec.radius_ball(2, max_doublings=settings.max_doublings, refine_cap=settings.refine_cap)
        lower = width_lower_bound(data.matrix, spec)
        row: dict[str, Any] = {
            "n": n,
            "mode": mode,
            "lower_bound": lower,
            "generation_k": None,
            "generation_word_length": None,
            "tower_degree": data.tower.degree,
            "radius_enclosure": "",
        }
        if mode == "valuation":
            verified = lower == 2**n
        else:
            check = galois_witness_check(data, spec.C, max_doublings=settings.max_doublings)
            row["radius_enclosure"] = enclosure_decimals(check.radius.lower, check.radius.upper)
            verified = check.radius_grows and check.admits(lower)
        if n <= generate_max_n:
            word = so2_generate(
                data.matrix,
                spec,
                n + cfg.int_param("k_slack"),
                validation_samples=settings.validation_samples,
                seed=cfg.seed,
            )
            row["generation_word_length"] = len(word)
            row["generation_k"] = len(word).bit_length() - 1
            verified = verified and certify(data.matrix, spec, word).verified()
        row["verified"] = verified
        ok = ok and verified
        rows.append(row)
    df = pd.DataFrame(rows).astype({"generation_k": "Int64", "generation_word_length": "Int64"})
    return RunResult(df, ok, {"rows": len(df), "mode": mode})


def lemma3_rates(cfg: ExperimentConfig) -> RunResult:
    settings = cfg.settings()
    p = cfg.int_param("p")
    trials = cfg.int_param("trials")
    P = PolySet.of([MPoly.variable(1, 1, p)], 1, 1, p)
    rows = []
    for e in range(1, cfg.int_param("e_max") + 1):
        for f in range(2, cfg.int_param("f_max") + 1):
            bound = complement_portion(p, e, f)
            k = e * (f - 1)
            if p ** (e * f * k) <= settings.census_cap:
                census = complement_census(p, e, f, cap=settings.census_cap, seed=cfg.seed)
                method, rate, n = "census", census.portion, census.total
                within = rate == bound.exact
            else:
                report = complement_acceptance_rate(p, e, f, trials=trials, seed=cfg.seed)
                method, rate, n = "sampled", report.empirical, report.trials
                within = report.within_3_sigma
            positivity = lemma3_positivity(P, e, f, seed=cfg.seed)
            rows.append(
                {
                    "p": p,
                    "e": e,
                    "f": f,
                    "method": method,
                    "exact_portion": str(bound.exact),
                    "d_lower": str(bound.lower),
                    "empirical_rate": str(rate),
                    "trials": n,
                    "within_3_sigma": within,
                    "above_lower": rate >= bound.lower,
                    "success_bound": str(positivity.bound.success_exact),
                    "positivity_passed": positivity.passed,
                }
            )
    df = pd.DataFrame(rows)
    ok = bool(df["within_3_sigma"].all() and df["above_lower"].all() and df["positivity_passed"].all())
    return RunResult(df, ok, {"rows": len(df)})


def bset_build(cfg: ExperimentConfig) -> RunResult:
    settings = cfg.settings()
    p, depth = cfg.int_param("p"), cfg.int_param("depth")
    family = default_family(depth, p)
    state = corollary4_build(
        p,
        family,
        depth,
        cfg.int_param("e0"),
        cfg.int_list_param("f_schedule"),
        cfg.int_param("budget"),
        cfg.seed,
    )
    strat = verify_stratification(state, family, 0, cap=settings.enumeration_cap)
    counting = counting_check(state, family[-1], cap=settings.enumeration_cap)
    found = {h["level"]: h for h in state.history if h["found"]}
    per_level = {r["level"]: r for r in strat.per_level}
    rows = []
    for row in counting.rows:
        i = row["level"]
        rows.append(
            {
                "level": i,
                "b": row["b"],
                "f": state.levels[i].f,
                "P_E": found[i]["P_E"] if i in found else 0,
                "stratification_checks": per_level[i]["checks"] if i in per_level else 0,
                "stratification_violations": per_level[i]["violations"] if i in per_level else 0,
                "count": row["count"],
                "bound": row["bound"],
                "field_size": row["field_size"],
                "separating": row["separating"],
            }
        )
    ok = strat.passed and counting.passed and counting.separating_level is not None
    attachment = {
        "state": state.as_dict(),
        "stratification": {"checks": strat.checks, "violations": strat.violations, "per_level": strat.per_level},
        "counting": {"rows": counting.rows, "separating_level": counting.separating_level},
    }
    return RunResult(pd.DataFrame(rows), ok, {"rows": len(rows), "separating_level": counting.separating_level}, attachment)


def _axiom_rows(report: AxiomReport, witness_decimal: str = "") -> list[dict[str, Any]]:
    return [
        {
            "suite": report.norm_name,
            "axiom": rec["axiom"],
            "index": rec["index"],
            "verdict": rec["verdict"],
            "inputs": json.dumps(rec["inputs"], sort_keys=True),
            "enclosures": json.dumps(rec["enclosures"], sort_keys=True),
            "decimal": witness_decimal if rec["axiom"] == "v" else "",
        }
        for rec in report.records()
    ]


def norm_axioms(cfg: ExperimentConfig) -> RunResult:
    settings = cfg.settings()
    mode = cfg.param("mode")
    samples = cfg.int_param("samples")
    rows: list[dict[str, Any]] = []
    if mode == "galois":
        tol = Fraction(cfg.param("tol"))
        report = galois_suite(samples=samples, seed=cfg.seed, tol=tol)
        rows += _axiom_rows(report, _witness_decimal(tol, settings.max_doublings))
        reports = [report]
    elif mode in ("valuation", "p_adic"):
        kind = "t_adic" if mode == "valuation" else "p_adic"
        reports = valuation_suite(
            kind,
            p=cfg.int_param("p"),
            samples=samples,
            seed=cfg.seed,
            validation_samples=settings.validation_samples,
        )
        for report in reports:
            rows += _axiom_rows(report)
    else:
        raise ConfigError(f"norm-axioms mode must be valuation, galois or p_adic, got {mode!r}")
    df = pd.DataFrame(rows)
    violations = sum(len(r.violations) for r in reports)
    return RunResult(df, violations == 0, {"rows": len(df), "violations": violations, "suites": [r.norm_name for r in reports]})


def _witness_decimal(tol: Fraction, max_doublings: int) -> str:
    """Radius of the Eisenstein small root near 1/2, as outward-rounded decimals."""
    q = eisenstein_near(Fraction(1, 2), Fraction(2), Fraction(1, 1000), 2)
    enc = galois_radius(q.small_root(), tol, max_doublings=max_doublings)
    return enclosure_decimals(enc.lower, enc.upper)


EXPERIMENTS: dict[str, Callable[[ExperimentConfig], RunResult]] = {
    "width-growth": width_growth,
    "so2-witness": so2_witness,
    "lemma3-rates": lemma3_rates,
    "bset-build": bset_build,
    "norm-axioms": norm_axioms,
}


def default_out_path(cfg: ExperimentConfig, paths: Paths) -> Path:
    return paths.runs / f"{cfg.subcommand}-seed{cfg.seed}.{cfg.format}"


def run(cfg: ExperimentConfig, paths: Paths | None = None) -> RunResult:
    log.info("starting %s (seed=%d)", cfg.subcommand, cfg.seed)
    result = EXPERIMENTS[cfg.subcommand](cfg)
    df = result.table.sort_values(KEYS[cfg.subcommand], kind="stable").reset_index(drop=True)
    result.table = validate_table(df, cfg.subcommand)

    out = cfg.out_path or default_out_path(cfg, paths or make_paths(ROOT_DIR))
    write_table(result.table, out, cfg.format, header_line(cfg.canonical_json()))
    if result.attachment is not None:
        write_json(result.attachment, out.with_name(f"{out.stem}.state.json"))
    write_run_meta(
        out.with_name(f"{out.stem}_run_meta.json"),
        config=json.loads(cfg.canonical_json()),
        rows=len(result.table),
        summary={**result.summary, "verified": result.verified},
    )
    result.out_path = out
    log.info("finished %s: %d rows -> %s (verified=%s)", cfg.subcommand, len(result.table), out, result.verified)
    return result
