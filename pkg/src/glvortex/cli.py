"""Command-line driver: sweeps, certification suites and single-case passthroughs.

Exit codes: 0 when every check passes, 1 on a failed check or a solver
failure, 2 on a configuration error.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from .config import ScanConfig, format_float, load_config, parse_eps_list
from .energy import (
    FAMILIES,
    SectorPerturbation,
    bump,
    compute_c_N,
    energy_gap,
    make_perturbation,
    quartic_remainder,
    random_coefficient,
    verify_step2_identity,
)
from .exceptions import ConfigurationError, GLVortexError, InputError
from .oracles import dirichlet_lambda1, shoot_profile
from .potential import parse_potential
from .radial import (
    SolveOptions,
    _check_profile_invariants,
    ball_volume,
    build_mesh,
    continuation_solve,
    integrate_radial,
    load_profile,
    profile_residual,
    save_profile,
    solve_profile,
    sphere_area,
)
from .spectral import (
    build_sector_operator,
    convexity_threshold,
    critical_dimension,
    cross_term_density,
    hardy_gap,
    harmonic_map_gap,
    lowest_eigen,
    verify_step3_chain,
)

logger = logging.getLogger("glvortex")

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2
STEP1_FAMILIES = ("RadialAligned", "OrthogonalComponent", "SingleAngle")
STEP3_WINDOWS = ((0.2, 0.8), (0.05, 0.5), (0.4, 0.95))
CROSS_TOL = 1e-12
ROUNDING_ULPS = 16
SPECTRUM_HEADER = ("N", "eps", "ell", "weight", "mu", "c_N", "margin")
ENERGY_HEADER = ("family", "ell", "seed", "gap", "F", "hardy_integral", "slack1", "slack4")


# -- output helpers ---------------------------------------------------------


def _cell(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format_float(float(value))
    return "" if value is None else str(value)


def write_csv(path: Path, header, rows, config: dict) -> Path:
    """CSV with a leading ``# config = {...}`` comment line."""
    lines = ["# config = " + json.dumps(config, sort_keys=True), ",".join(header)]
    lines += [",".join(_cell(v) for v in row) for row in rows]
    path.write_text("\n".join(lines) + "\n")
    return path


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else format_float(x)
    return obj


def write_json(path: Path, payload: dict) -> Path:
    path.write_text(json.dumps(_jsonable(payload), indent=2, sort_keys=True) + "\n")
    return path


def _eps_tag(eps: float) -> str:
    return "inf" if math.isinf(eps) else repr(float(eps))


def _check(name, passed, value, tolerance, **detail) -> dict:
    return {"name": name, "passed": bool(passed), "value": value, "tolerance": tolerance, **detail}


def _pool_map(func, items, workers: int):
    """Ordered map; results come back in input order whatever the pool size."""
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [func(item) for item in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items))


def _cases(cfg: ScanConfig):
    return [(N, eps) for N in cfg.N_list for eps in cfg.eps_list]


def _solve(cfg: ScanConfig, N: int, eps: float):
    mesh = build_mesh(cfg.n, cfg.grading)
    return continuation_solve(N, eps, cfg.potential, mesh, SolveOptions(tolerance=cfg.tol_solve))


def _spectrum_rows(scan, weight="hardy"):
    return [
        (scan.N, scan.eps, res.ell, weight, res.mu, scan.c_N, res.mu - scan.c_N)
        for res in scan.results
    ]


def _energy_row(rep):
    return (rep.family, rep.ell, rep.seed, rep.gap, rep.F_value, rep.hardy_integral,
            rep.slack_step1, rep.slack_step4)


# -- per-case workers (module level so a process pool can pickle them) -------


def _certify_case(job):
    cfg_dict, N, eps = job
    cfg = ScanConfig(**cfg_dict)
    prof = _solve(cfg, N, eps)
    mesh = prof.mesh
    quadratic = parse_potential(cfg.potential).kind == "quadratic"
    checks = []

    scan = hardy_gap(prof, cfg.ell_max, cfg.tol_hardy)
    checks.append(_check("hardy_gap", scan.certified, scan.margin, cfg.tol_hardy,
                         mu_min=scan.mu_min, ell_argmin=scan.ell_argmin, c_N=scan.c_N))
    checks.append(_check("sector_monotone", scan.monotone, None, None))

    worst, worst_rec = 0.0, None
    for ell in (0, 1, 2):
        for k in range(cfg.step2_seeds):
            seed = cfg.seed + k
            w = SectorPerturbation(mesh, random_coefficient(mesh, ell, seed), ell, "Scalar", seed=seed)
            d = verify_step2_identity(prof, w)
            if d >= worst:
                worst, worst_rec = d, {"ell": ell, "seed": seed}
    checks.append(_check("step2_identity", worst <= cfg.tol_identity, worst, cfg.tol_identity, worst_case=worst_rec))

    density_min = float(cross_term_density(prof).min())
    checks.append(_check("cross_term_density", density_min >= -CROSS_TOL, density_min, CROSS_TOL))
    recon, cross_min, slack3 = 0.0, math.inf, math.inf
    for ell in (0, 1, 2):
        for lo, hi in STEP3_WINDOWS:
            g = SectorPerturbation(mesh, bump(mesh, lo, hi), ell, "Scalar")
            rep = verify_step3_chain(prof, g)
            recon = max(recon, rep.reconstruction_discrepancy)
            cross_min = min(cross_min, rep.cross_term_min_node)
            slack3 = min(slack3, rep.bound_slack)
    checks.append(_check("step3_reconstruction", recon <= cfg.tol_chain, recon, cfg.tol_chain))
    checks.append(_check("step3_cross_term", cross_min >= -CROSS_TOL, cross_min, CROSS_TOL))
    checks.append(_check("step3_bound", slack3 >= -cfg.tol_inequality, slack3, cfg.tol_inequality))

    energy_rows = []
    slack1 = {"value": math.inf, "record": None}
    slack4 = {"value": math.inf, "record": None}
    exact = {"value": 0.0, "excess": 0.0, "record": None}
    for family in STEP1_FAMILIES:
        for k in range(cfg.step1_seeds):
            seed = cfg.seed + k
            v = make_perturbation(mesh, family, seed, N)
            rep = energy_gap(prof, v)
            energy_rows.append(_energy_row(rep))
            rec = {"family": family, "ell": v.ell, "seed": seed}
            if rep.slack_step1 < slack1["value"]:
                slack1 = {"value": rep.slack_step1, "record": rec}
            if rep.slack_step4 < slack4["value"]:
                slack4 = {"value": rep.slack_step4, "record": rec}
            if quadratic and family == "OrthogonalComponent":
                q = quartic_remainder(prof, v.a)
                diff = abs(rep.slack_step1 - q)
                # gap and F/2 are summed independently; their difference
                # cannot be resolved below a few ulps of the totals
                floor = ROUNDING_ULPS * np.finfo(float).eps * (abs(rep.gap) + 0.5 * abs(rep.F_value))
                rel = diff / abs(q) if q else diff
                excess = max(diff - floor, 0.0) / abs(q) if q else max(diff - floor, 0.0)
                if excess >= exact["excess"]:
                    exact = {"value": rel, "excess": excess, "record": {**rec, "rounding_floor": floor}}
    checks.append(_check("step1_gap", slack1["value"] >= -cfg.tol_inequality, slack1["value"],
                         cfg.tol_inequality, worst_case=slack1["record"]))
    checks.append(_check("step4_form_bound", slack4["value"] >= -cfg.tol_inequality, slack4["value"],
                         cfg.tol_inequality, worst_case=slack4["record"]))
    if quadratic:
        checks.append(_check("quadratic_exactness", exact["excess"] <= cfg.tol_exactness, exact["value"],
                             cfg.tol_exactness, beyond_rounding=exact["excess"], worst_case=exact["record"]))
    else:
        checks.append(_check("quadratic_exactness", True, None, cfg.tol_exactness,
                             skipped="potential is not quadratic"))

    return {
        "N": N,
        "eps": eps,
        "residual_sup": prof.residual_sup,
        "checks": checks,
        "passed": all(c["passed"] for c in checks),
        "spectrum_rows": _spectrum_rows(scan),
        "energy_rows": energy_rows,
    }


def _explore_case(job):
    cfg_dict, N, eps = job
    cfg = ScanConfig(**cfg_dict)
    prof = _solve(cfg, N, eps)
    scan = hardy_gap(prof, cfg.ell_max, cfg.tol_hardy)
    s1, s4 = math.inf, math.inf
    for family in STEP1_FAMILIES:
        for k in range(cfg.step1_seeds):
            rep = energy_gap(prof, make_perturbation(prof.mesh, family, cfg.seed + k, N))
            s1, s4 = min(s1, rep.slack_step1), min(s4, rep.slack_step4)
    return {
        "row": (N, eps, scan.c_N, scan.mu_min, scan.ell_argmin, scan.margin, s1, s4),
        "spectrum_rows": _spectrum_rows(scan),
    }


def _profile_case(job):
    cfg_dict, N, eps = job
    cfg = ScanConfig(**cfg_dict)
    try:
        prof = _solve(cfg, N, eps)
    except GLVortexError as exc:
        return {"N": N, "eps": eps, "error": f"{type(exc).__name__}: {exc}"}
    return {"N": N, "eps": eps, "profile": prof}


# -- commands -----------------------------------------------------------------


def cmd_profile(cfg: ScanConfig) -> int:
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    config = cfg.resolved()
    jobs = [(vars(cfg), N, eps) for N, eps in _cases(cfg)]
    records, failures = [], []
    for res in _pool_map(_profile_case, jobs, cfg.workers):
        N, eps = res["N"], res["eps"]
        if "error" in res:
            failures.append({"N": N, "eps": eps, "reason": res["error"]})
            continue
        prof = res["profile"]
        stem = out / f"profile_N{N}_eps{_eps_tag(eps)}"
        csv_path, _ = save_profile(prof, stem, extra={"config": config})
        residual = profile_residual(prof)
        problem = _check_profile_invariants(np.asarray(prof.f))
        if residual > cfg.tol_solve:
            problem = f"residual {residual:.3e} above tolerance {cfg.tol_solve:.3e}"
        rec = {"N": N, "eps": eps, "file": csv_path.name, "residual_sup": residual,
               "iterations": prof.iterations}
        records.append(rec)
        if problem:
            failures.append({"N": N, "eps": eps, "reason": problem})
    write_json(out / "profile_summary.json",
               {"config": config, "profiles": records, "failures": failures, "passed": not failures})
    if failures:
        write_json(out / "failures.json", {"config": config, "failures": failures})
        for f in failures:
            logger.error("profile N=%s eps=%s failed: %s", f["N"], _eps_tag(f["eps"]), f["reason"])
        return EXIT_FAIL
    return EXIT_OK


def cmd_certify(cfg: ScanConfig) -> int:
    low = [N for N in cfg.N_list if N < 7]
    if low:
        raise ConfigurationError(f"certify needs N >= 7 (got {low}); use 'explore' for smaller N")
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    config = cfg.resolved()
    jobs = [(vars(cfg), N, eps) for N, eps in _cases(cfg)]
    results = _pool_map(_certify_case, jobs, cfg.workers)

    spectrum = [row for res in results for row in res["spectrum_rows"]]
    write_csv(out / "spectrum.csv", SPECTRUM_HEADER, spectrum, config)
    for res in results:
        rows = sorted(res["energy_rows"], key=lambda r: (r[0], r[1], r[2]))
        write_csv(out / f"energy_N{res['N']}_eps{_eps_tag(res['eps'])}.csv", ENERGY_HEADER, rows, config)
    cases = [{k: res[k] for k in ("N", "eps", "residual_sup", "checks", "passed")} for res in results]
    passed = all(c["passed"] for c in cases)
    write_json(out / "certify_summary.json", {"config": config, "cases": cases, "passed": passed})
    for case in cases:
        for chk in case["checks"]:
            if not chk["passed"]:
                logger.error("N=%s eps=%s %s failed: %s", case["N"], _eps_tag(case["eps"]), chk["name"],
                             json.dumps(_jsonable(chk), sort_keys=True))
    return EXIT_OK if passed else EXIT_FAIL


def cmd_explore(cfg: ScanConfig) -> int:
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    config = cfg.resolved()
    jobs = [(vars(cfg), N, eps) for N, eps in _cases(cfg)]
    results = _pool_map(_explore_case, jobs, cfg.workers)
    thresholds = {}
    mesh = build_mesh(cfg.n, cfg.grading)
    for N in cfg.N_list:
        try:
            thresholds[N] = convexity_threshold(N, cfg.potential, mesh)
        except InputError:
            thresholds[N] = math.nan
    rows = [res["row"][:6] + (thresholds[res["row"][0]],) + res["row"][6:] for res in results]
    write_csv(out / "explore.csv",
              ("N", "eps", "c_N", "mu_min", "ell_argmin", "margin", "eps_star", "min_slack1", "min_slack4"),
              rows, config)
    write_csv(out / "spectrum.csv", SPECTRUM_HEADER,
              [row for res in results for row in res["spectrum_rows"]], config)
    return EXIT_OK


def _verify_suite(cfg: ScanConfig) -> list[dict]:
    checks = []
    mesh = build_mesh(2000)

    for N in (2, 3, 7, 10):
        prof = solve_profile(N, math.inf, "quadratic", mesh)
        dev = float(np.max(np.abs(prof.f - mesh.nodes)))
        checks.append(_check(f"harmonic_exact_N{N}", dev <= 1e-12, dev, 1e-12))

    for N in (7, 8):
        for eps in (0.3, 1.0):
            prof = continuation_solve(N, eps, "quadratic", mesh)
            ref = shoot_profile(N, eps, "quadratic")
            dev = float(np.max(np.abs(prof.f - ref(mesh.nodes))))
            checks.append(_check(f"shooting_oracle_N{N}_eps{_eps_tag(eps)}", dev <= 1e-6, dev, 1e-6))

    sols = {n: continuation_solve(7, 0.5, "quadratic", build_mesh(n)) for n in (250, 500, 1000, 2000)}
    diffs = [float(np.max(np.abs(sols[n].f - sols[2 * n].f[:: 2]))) for n in (250, 500, 1000)]
    ratios = [diffs[0] / diffs[1], diffs[1] / diffs[2]]
    checks.append(_check("mesh_convergence", min(ratios) >= 3.5, min(ratios), 3.5, ratios=ratios))

    for N, tol in ((3, 1e-4), (2, 1e-3), (7, 1e-4)):
        lam = lowest_eigen(build_sector_operator(solve_profile(N, math.inf, "quadratic", mesh), 0), "identity").mu
        ref = dirichlet_lambda1(N)
        rel = abs(lam - ref) / ref
        checks.append(_check(f"dirichlet_lambda1_N{N}", rel <= tol, rel, tol))
    eps_star = convexity_threshold(3, "quadratic", mesh)
    checks.append(_check("convexity_threshold_N3", abs(eps_star - 1 / math.pi) <= 1e-4,
                         abs(eps_star - 1 / math.pi), 1e-4))

    for amp in (0.1, 0.3, 0.5):
        a = amp * mesh.nodes * (1.0 - mesh.nodes)
        a[-1] = 0.0
        w = SectorPerturbation(mesh, a, 0, "OrthogonalComponent", M=8, component=8)
        rep = harmonic_map_gap(7, 8, w, mesh)
        checks.append(_check(f"harmonic_map_identity_a{amp}", rep.identity_discrepancy <= 1e-7,
                             rep.identity_discrepancy, 1e-7))
        checks.append(_check(f"harmonic_map_bound_a{amp}", rep.bound_margin >= -1e-6, rep.bound_margin, 1e-6))

    checks.append(_check("critical_dimension", critical_dimension() == 7, critical_dimension(), None))
    exact = all(compute_c_N(N) == (N - 2) ** 2 / 4 - (N - 1) for N in range(2, 13))
    checks.append(_check("c_N_formula", exact, None, None))

    areas = {2: 2 * math.pi, 3: 4 * math.pi, 4: 2 * math.pi**2}
    area_err = max(abs(sphere_area(N) - v) / v for N, v in areas.items())
    vol_err = abs(ball_volume(7) - 16 * math.pi**3 / 105) / (16 * math.pi**3 / 105)
    quad_err = max(abs(integrate_radial(mesh, np.ones(mesh.n + 1), N) - ball_volume(N)) / ball_volume(N)
                   for N in (2, 3, 7, 10))
    checks.append(_check("sphere_area", area_err <= 1e-14, area_err, 1e-14))
    checks.append(_check("ball_volume", vol_err <= 1e-14, vol_err, 1e-14))
    checks.append(_check("radial_quadrature_volume", quad_err <= 1e-5, quad_err, 1e-5))

    gaps = []
    for n in (500, 1000, 2000):
        prof = solve_profile(7, math.inf, "quadratic", build_mesh(n))
        gaps.append(lowest_eigen(build_sector_operator(prof, 0), "hardy").mu - 6.25)
    ok = all(g > 0 for g in gaps) and gaps[0] > gaps[1] > gaps[2]
    checks.append(_check("pure_hardy_limit", ok, gaps[-1], None, excess=gaps))
    return checks


def _replay_profile(path) -> list[dict]:
    try:
        prof = load_profile(path)
    except (OSError, ValueError, KeyError) as exc:
        return [_check("profile_readable", False, None, None, reason=f"{type(exc).__name__}: {exc}")]
    residual = profile_residual(prof)
    problem = _check_profile_invariants(np.asarray(prof.f))
    return [
        _check("profile_readable", True, None, None),
        _check("profile_residual", residual <= max(prof.residual_sup, 1e-7) * 10, residual,
               max(prof.residual_sup, 1e-7) * 10),
        _check("profile_invariants", problem is None, None, None, reason=problem),
    ]


def cmd_verify(cfg: ScanConfig, profile_file=None) -> int:
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    checks = _replay_profile(profile_file) if profile_file else _verify_suite(cfg)
    passed = all(c["passed"] for c in checks)
    write_json(out / "verify.json", {"config": cfg.resolved(), "checks": checks, "passed": passed,
                                     "profile_file": str(profile_file) if profile_file else None})
    for chk in checks:
        if not chk["passed"]:
            logger.error("verify check %s failed: %s", chk["name"], json.dumps(_jsonable(chk), sort_keys=True))
    return EXIT_OK if passed else EXIT_FAIL


def cmd_energy_gap(cfg: ScanConfig, family: str, seed: int, ell=None, M=None) -> int:
    if family not in FAMILIES or family == "Scalar":
        raise ConfigurationError(f"family must be one of {STEP1_FAMILIES}")
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    config = cfg.resolved()
    ok = True
    for N, eps in _cases(cfg):
        prof = _solve(cfg, N, eps)
        v = make_perturbation(prof.mesh, family, seed, N, ell=ell, M=M)
        rep = energy_gap(prof, v)
        tag = f"N{N}_eps{_eps_tag(eps)}"
        write_csv(out / f"energy_{tag}.csv", ENERGY_HEADER, [_energy_row(rep)], config)
        write_json(out / f"energy_{tag}.json", {"config": config, "N": N, "eps": eps, "report": rep.as_dict()})
        ok &= rep.slack_step1 >= -cfg.tol_inequality
        print(json.dumps(_jsonable({"N": N, "eps": eps, **rep.as_dict()}), sort_keys=True))
    return EXIT_OK if ok else EXIT_FAIL


def cmd_spectrum(cfg: ScanConfig, weight: str = "hardy") -> int:
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    rows = []
    for N, eps in _cases(cfg):
        prof = _solve(cfg, N, eps)
        cN = compute_c_N(N)
        for ell in range(cfg.ell_max + 1):
            mu = lowest_eigen(build_sector_operator(prof, ell), weight).mu
            rows.append((N, eps, ell, weight, mu, cN, mu - cN))
    write_csv(out / "spectrum.csv", SPECTRUM_HEADER, rows, cfg.resolved())
    return EXIT_OK


# -- argument parsing ---------------------------------------------------------

_EXPLORE_BASE = dict(N_list=[2, 3, 4, 5, 6], eps_list=parse_eps_list("logspace:0.05:5:7"))


def _common(p: argparse.ArgumentParser):
    p.add_argument("--config", help="flat key = value config file")
    p.add_argument("--N", dest="N_list", help="dimensions, e.g. 7,8 or 2..6")
    p.add_argument("--eps", dest="eps_list", help="eps values, e.g. 0.3,1,inf or logspace:0.05:5:7")
    p.add_argument("--potential", help="quadratic | huber:<delta> | file:<path>")
    p.add_argument("--n", type=int, help="mesh size")
    p.add_argument("--grading", type=float)
    p.add_argument("--ell-max", dest="ell_max", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--step1-seeds", dest="step1_seeds", type=int)
    p.add_argument("--step2-seeds", dest="step2_seeds", type=int)
    p.add_argument("--tol-solve", dest="tol_solve", type=float)
    p.add_argument("--tol-identity", dest="tol_identity", type=float)
    p.add_argument("--tol-inequality", dest="tol_inequality", type=float)
    p.add_argument("--tol-hardy", dest="tol_hardy", type=float)
    p.add_argument("--output-dir", "-o", dest="output_dir")
    p.add_argument("--workers", type=int)


_CONFIG_KEYS = ("N_list", "eps_list", "potential", "n", "grading", "ell_max", "seed", "step1_seeds",
                "step2_seeds", "tol_solve", "tol_identity", "tol_inequality", "tol_hardy", "output_dir",
                "workers")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="glvortex", description="Radial Ginzburg-Landau vortex minimality checks")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("profile", "solve profiles over the (N, eps) grid"),
        ("certify", "run the full certification suite (N >= 7)"),
        ("explore", "report margins for any N without sign assertions"),
        ("verify", "run the invariant suite or replay a stored profile"),
        ("energy-gap", "energy gap of one seeded perturbation"),
        ("spectrum", "sector eigenvalues for the grid"),
    ):
        p = sub.add_parser(name, help=help_text)
        _common(p)
        if name == "verify":
            p.add_argument("--profile-file", help="profile CSV written by 'profile' to re-check")
        if name == "energy-gap":
            p.add_argument("--family", default="OrthogonalComponent", choices=STEP1_FAMILIES)
            p.add_argument("--ell", type=int)
            p.add_argument("--M", type=int)
        if name == "spectrum":
            p.add_argument("--weight", default="hardy", choices=("hardy", "identity"))
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    overrides = {key: getattr(args, key) for key in _CONFIG_KEYS}
    try:
        base = ScanConfig(**_EXPLORE_BASE) if args.command == "explore" else None
        cfg = load_config(args.config, overrides, base=base)
        if args.command == "profile":
            return cmd_profile(cfg)
        if args.command == "certify":
            return cmd_certify(cfg)
        if args.command == "explore":
            return cmd_explore(cfg)
        if args.command == "verify":
            return cmd_verify(cfg, args.profile_file)
        if args.command == "energy-gap":
            seed = cfg.seed
            return cmd_energy_gap(cfg, args.family, seed, ell=args.ell, M=args.M)
        return cmd_spectrum(cfg, args.weight)
    except InputError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except GLVortexError as exc:
        print(f"failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
