"""Command-line front end: run configured experiments, emit reports.

Exit codes: 0 on success, 1 on input or I/O errors, 2 when any sampled
verdict contradicts its algebraic prediction (self-inconsistency in the
run itself).
"""

from __future__ import annotations

import argparse
import dataclasses
import sys

import numpy as np

from . import fock as fock_mod
from . import measure as measure_mod
from .config import EXPERIMENT_KINDS, ExperimentConfig, load
from .errors import ConfigError, QlabError
from .gaussian import ComplexMode, PhasePoint
from .knight import (
    DefectReport,
    KnightVerdict,
    SamplerSpec,
    coherent_locality_check,
    knight_verdict,
    licht_pair_test,
    one_quantum_defect,
)
from .models import Region, build_chain, build_custom, build_discrete_klein_gordon
from .report import ReportBundle, emit_report
from .spectral import localizable_modes, spectral_decompose

SCHEMA_VERSION = 1

#: residual growth beyond this slack counts as a monotonicity violation
MONOTONE_SLACK = 1e-12


def _build_model(config: ExperimentConfig):
    params = dict(config.model_params)
    if config.model_kind == "chain":
        return build_chain(
            params["n"], params["coupling"], params["pinning"], params["periodic"]
        )
    if config.model_kind == "klein_gordon":
        return build_discrete_klein_gordon(
            params["grid_points"], params["mass"], params["spacing"]
        )
    return build_custom([list(row) for row in params["entries"]])


def _region_dict(region: Region) -> dict:
    return {"n": region.n, "members": list(region.members)}


def _defect_dict(report: DefectReport) -> dict:
    return {
        "region": _region_dict(report.region),
        "algebraic_distance": report.algebraic_distance,
        "sampled_defect": report.sampled_defect,
        "samples": report.samples,
        "verdict": report.verdict.value,
        "note": report.note,
    }


def _sampler(config: ExperimentConfig) -> SamplerSpec:
    return SamplerSpec(
        count=config.sampler_count,
        amplitude=config.sampler_amplitude,
        seed=config.sampler_seed,
    )


def _run_locality(s, region, config):
    report = localizable_modes(s, region)
    section = {
        "region": _region_dict(report.region),
        "sigma_min_offblock": report.sigma_min_offblock,
        "strongly_nonlocal": report.strongly_nonlocal,
        "localizable_dim": report.localizable_dim,
        "localizable_basis": [
            [complex(v) for v in vec] for vec in report.localizable_basis
        ],
    }
    consistent = (report.localizable_dim > 0) == (not report.strongly_nonlocal)
    return section, consistent, None, None


def _run_knight(s, region, config):
    verdict = knight_verdict(s, region)
    loc = localizable_modes(s, region)
    if loc.localizable_dim > 0:
        xi = ComplexMode(loc.localizable_basis[0])
        xi_source = "localizable_basis[0]"
    else:
        values = np.zeros(s.n, dtype=complex)
        values[region.members[0]] = 1.0
        xi = ComplexMode(values)
        xi_source = "unit vector at first region site"
    report = one_quantum_defect(s, xi, region, _sampler(config))
    section = {
        "verdict": verdict.value,
        "localizable_dim": loc.localizable_dim,
        "xi_source": xi_source,
        "one_quantum": _defect_dict(report),
        "seed": config.sampler_seed,
    }
    verdict_matches_dim = (
        verdict is KnightVerdict.NO_FINITE_PARTICLE_LOCAL_STATE
    ) == (loc.localizable_dim == 0)
    return section, verdict_matches_dim and report.consistent, None, None


def _run_coherent(s, region, config):
    x = PhasePoint(np.array(config.coherent_q), np.array(config.coherent_p))
    report = coherent_locality_check(s, x, region, _sampler(config))
    section = _defect_dict(report)
    section["seed"] = config.sampler_seed
    return section, report.consistent, None, None


def _run_licht(s, region, config):
    x1 = PhasePoint(np.array(config.licht_x1_q), np.array(config.licht_x1_p))
    x2 = PhasePoint(np.array(config.licht_x2_q), np.array(config.licht_x2_p))
    for label, x in (("licht.x1", x1), ("licht.x2", x2)):
        if not x.is_supported_in(region):
            raise ConfigError(f"{label} must be supported in the region")
    report = licht_pair_test(
        s, x1, x2, region, list(config.licht_coeff_grid), _sampler(config)
    )
    section = {
        "region": _region_dict(report.region),
        "verdict": report.verdict.value,
        "max_defect": report.max_defect,
        "algebraic_all_local": report.algebraic_all_local,
        "samples": report.samples,
        "grid_size": report.grid_size,
        "degenerate_pairs": report.degenerate_pairs,
        "seed": config.sampler_seed,
    }
    return section, report.consistent, None, None


def _run_cyclicity(s, region, config, fockspace):
    target_index = 1  # one quantum in the last (highest frequency) mode
    target_label = fockspace.basis_label(target_index)
    rows = []
    by_label: dict[str, list[float]] = {}
    target_trajectory = []
    for degree in range(config.fock_max_degree + 1):
        residuals = fock_mod.cyclicity_residuals(fockspace, region, degree)
        for label, value in residuals:
            rows.append((label, degree, value))
            by_label.setdefault(label, []).append(value)
        target_trajectory.append(dict(residuals)[target_label])
    monotone = all(
        later <= earlier + MONOTONE_SLACK
        for seq in by_label.values()
        for earlier, later in zip(seq, seq[1:])
    )
    section = {
        "region": _region_dict(region),
        "truncation": fockspace.truncation,
        "max_degree": config.fock_max_degree,
        "target_label": target_label,
        "target_residuals": target_trajectory,
        "monotone_in_degree": monotone,
        "csv": "cyclicity.csv",
    }
    return section, monotone, rows, None


def _run_separability(s, region, config, fockspace):
    rng = np.random.default_rng(config.sampler_seed)
    norms = []
    for _ in range(config.separability_draws):
        poly = fock_mod.random_local_polynomial(
            region, config.separability_max_degree, rng
        )
        norms.append(fock_mod.separability_check(fockspace, region, poly))
    section = {
        "region": _region_dict(region),
        "draws": config.separability_draws,
        "max_degree": config.separability_max_degree,
        "min_norm": min(norms),
        "max_norm": max(norms),
        "seed": config.sampler_seed,
    }
    consistent = min(norms) > 1e-12
    if config.window_site in region.members:
        window = measure_mod.WindowEvent(
            config.window_site, config.window_lo, config.window_hi
        )
        projected = fock_mod.separability_check(fockspace, region, window)
        probability = measure_mod.window_probability(s, window)
        section["window"] = {
            "site": window.site,
            "lo": window.lo,
            "hi": window.hi,
            "projected_norm_sq": projected**2,
            "probability": probability,
            "abs_difference": abs(projected**2 - probability),
        }
    else:
        section["window"] = None
    return section, consistent, None, None


def _run_measure(s, region, config):
    window = measure_mod.WindowEvent(
        config.window_site, config.window_lo, config.window_hi
    )
    probability = measure_mod.window_probability(s, window)
    cov = s.omega_inv / 2.0
    profile = measure_mod.deviation_profile(s, window)
    rows = []
    for site, rel in profile:
        mean, second = measure_mod.conditional_moments(s, window, site)
        rows.append((site, float(cov[site, site]), second - mean**2, rel))
    section = {
        "window": {"site": window.site, "lo": window.lo, "hi": window.hi},
        "probability": probability,
        "max_relative_deviation": max(rel for _, rel in profile),
        "profile": [{"site": site, "relative_deviation": rel} for site, rel in profile],
        "csv": "profile.csv",
    }
    consistent = 0.0 < probability < 1.0
    if window.lo == -window.hi:
        # symmetric windows leave every conditional mean at zero
        means = [measure_mod.conditional_moments(s, window, t)[0] for t in range(s.n)]
        consistent = consistent and max(abs(m) for m in means) <= 1e-12
    return section, consistent, None, rows


def run(config: ExperimentConfig) -> ReportBundle:
    """Execute the configured experiments and assemble the report."""
    model = _build_model(config)
    s = spectral_decompose(model)
    region = Region(s.n, config.region_members)
    if region.is_full:
        raise ConfigError("region.members must leave a nonempty complement")

    kinds = list(EXPERIMENT_KINDS) if config.experiment == "all" else [config.experiment]
    needs_fock = {"cyclicity", "separability"} & set(kinds)
    fockspace = fock_mod.build_fock(s, config.fock_truncation) if needs_fock else None

    results: dict = {}
    consistency: dict = {}
    cyclicity_rows = None
    profile_rows = None
    for kind in kinds:
        if kind == "locality":
            section, ok, _, _ = _run_locality(s, region, config)
        elif kind == "knight":
            section, ok, _, _ = _run_knight(s, region, config)
        elif kind == "coherent":
            section, ok, _, _ = _run_coherent(s, region, config)
        elif kind == "licht":
            section, ok, _, _ = _run_licht(s, region, config)
        elif kind == "cyclicity":
            section, ok, cyclicity_rows, _ = _run_cyclicity(s, region, config, fockspace)
        elif kind == "separability":
            section, ok, _, _ = _run_separability(s, region, config, fockspace)
        else:
            section, ok, _, profile_rows = _run_measure(s, region, config)
        results[kind] = section
        consistency[kind] = ok

    overall = all(consistency.values())
    report = {
        "schema": SCHEMA_VERSION,
        "config": config.to_dict(),
        "results": results,
        "consistency": consistency,
        "consistent": overall,
    }
    return ReportBundle(
        report=report,
        cyclicity_rows=cyclicity_rows,
        profile_rows=profile_rows,
        consistent=overall,
    )


class _Parser(argparse.ArgumentParser):
    # treat command line misuse as an input error (exit code 1)
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        raise SystemExit(1)


def main(argv=None) -> int:
    parser = _Parser(
        prog="qlab",
        description="Run locality experiments on a finite harmonic system.",
    )
    parser.add_argument("config", help="TOML experiment configuration file")
    parser.add_argument(
        "--experiment",
        choices=("all",) + EXPERIMENT_KINDS,
        help="override experiment.kind from the config file",
    )
    parser.add_argument("--seed", type=int, help="override sampler.seed")
    parser.add_argument("--out-dir", help="override output.dir")
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    try:
        config, config_out_dir = load(args.config)
        if args.experiment is not None:
            config = dataclasses.replace(config, experiment=args.experiment)
        if args.seed is not None:
            config = dataclasses.replace(config, sampler_seed=args.seed)
        out_dir = args.out_dir or config_out_dir or "out"
        bundle = run(config)
        emit_report(bundle, out_dir)
    except ConfigError as exc:
        print(f"qlab: {exc}", file=sys.stderr)
        return 1
    except QlabError as exc:
        print(f"qlab: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"qlab: cannot write output: {exc}", file=sys.stderr)
        return 1
    if not bundle.consistent:
        print(
            "qlab: sampled verdict contradicts an algebraic prediction",
            file=sys.stderr,
        )
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
