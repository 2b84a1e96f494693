"""Command-line front end.

Subcommands: fit, simulate, kl, influence. Every run writes its artifacts
plus a manifest.json sufficient to reproduce them byte-for-byte. Exit
codes: 0 success, 2 usage error, 3 data error, 4 numerical failure. The
GP_SEED environment variable overrides --seed when set.

Input data CSVs carry a header row with the response in a column named y;
all other columns are covariates in order (an optional outlier_flag column
is split off as metadata). The boston recipe instead expects the raw
columns cmedv, chas, crim, zn, indus, nox, rm, age, dis, rad, tax, ptratio,
b, lstat, lon, lat; the diabetes recipe expects y, age, sex, bmi, bp,
s1..s6.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np
import pandas as pd

from .artifacts import (dataset_from_table, write_draws_csv,
                        write_influence_csv, write_manifest, write_summary_csv,
                        write_table_csv)
from .diagnostics import influence_function, posterior_summary
from .experiments import (METHODS, child_seed, default_scenario, fit_method,
                          prepare_real_dataset, run_kl_experiment,
                          run_simulation_study, slm_scenario)
from .sampler import run_synthetic_sampler
from .types import (Contamination, ContaminationKind, GammaConfig,
                    NumericalError, PriorKind, PriorSpec)

SCENARIOS = {
    "none": ContaminationKind.NONE,
    "homo1": ContaminationKind.HOMO_I,
    "homo2": ContaminationKind.HOMO_II,
    "hetero1": ContaminationKind.HETERO_I,
    "hetero2": ContaminationKind.HETERO_II,
}


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="robustbayes",
                                description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--seed", type=int, default=1,
                        help="root RNG seed (GP_SEED env var overrides)")
        sp.add_argument("--out", required=True, help="output directory")
        sp.add_argument("--threads", type=int, default=None,
                        help="worker processes for replications")

    f = sub.add_parser("fit", help="fit one method to a CSV dataset")
    f.add_argument("input", help="input CSV path")
    f.add_argument("--method", choices=METHODS, default="rbl")
    f.add_argument("--gamma", type=float, default=0.2)
    f.add_argument("--burnin", type=int, default=1000)
    f.add_argument("--keep", type=int, default=2000)
    f.add_argument("--level", type=float, default=0.95)
    f.add_argument("--recipe", choices=["boston", "diabetes"], default=None,
                   help="preprocess a raw named dataset before fitting")
    f.add_argument("--no-intercept", action="store_true",
                   help="do not model a separate intercept")
    f.add_argument("--prior-s-alpha", type=float, default=100.0)
    f.add_argument("--prior-s-beta-scale", type=float, default=100.0,
                   help="S_beta = scale * I (normal prior methods only)")
    f.add_argument("--prior-a", type=float, default=1.0)
    f.add_argument("--prior-c1", type=float, default=1.0)
    f.add_argument("--prior-c2", type=float, default=1.0)
    common(f)

    s = sub.add_parser("simulate", help="replication study on simulated data")
    s.add_argument("--scenario", choices=sorted(SCENARIOS), default="homo2")
    s.add_argument("--omega", type=float, nargs="+", default=None,
                   help="contamination ratios (homo scenarios)")
    s.add_argument("--delta", type=float, nargs="+", default=None,
                   help="contamination multipliers (hetero scenarios)")
    s.add_argument("--a-scale", type=float, default=10.0,
                   help="outlier error scale for scenario homo1")
    s.add_argument("--methods", default="rbl,rhs,bl,tbl,cbl",
                   help="comma-separated method list")
    s.add_argument("--reps", type=int, default=50)
    s.add_argument("--n", type=int, default=100)
    s.add_argument("--p", type=int, default=20)
    s.add_argument("--rho", type=float, default=0.2)
    s.add_argument("--gamma", type=float, default=0.2)
    s.add_argument("--burnin", type=int, default=1000)
    s.add_argument("--keep", type=int, default=2000)
    common(s)

    k = sub.add_parser("kl", help="KL distance to the oracle posterior")
    k.add_argument("--omega", type=float, nargs="+", required=True)
    k.add_argument("--a", type=float, nargs="+", required=True,
                   help="outlier scale(s), paired with --omega")
    k.add_argument("--reps", type=int, default=50)
    k.add_argument("--keep", type=int, default=2000)
    common(k)

    i = sub.add_parser("influence", help="influence curves for the simple model")
    i.add_argument("--gamma", type=float, default=0.2)
    i.add_argument("--draws", type=int, default=10000)
    i.add_argument("--n", type=int, default=300)
    i.add_argument("--g-samples", type=int, default=2000)
    i.add_argument("--x", type=float, nargs="+", default=[-0.5, 1.0])
    i.add_argument("--z-min", type=float, default=-10.0)
    i.add_argument("--z-max", type=float, default=10.0)
    i.add_argument("--z-points", type=int, default=201)
    common(i)
    return p


def _resolve_seed(args) -> int:
    env = os.environ.get("GP_SEED")
    return int(env) if env else args.seed


def _cmd_fit(args) -> int:
    seed = _resolve_seed(args)
    raw = pd.read_csv(args.input)
    if args.recipe:
        data = prepare_real_dataset(raw, args.recipe)
    else:
        data = dataset_from_table(raw, has_intercept=not args.no_intercept)

    if args.method == "synthetic":
        prior = PriorSpec.normal_ig(data.p, scale=args.prior_s_beta_scale,
                                    S_alpha=args.prior_s_alpha, a=args.prior_a)
    else:
        kind = PriorKind.HORSESHOE if args.method == "rhs" else PriorKind.LAPLACE
        prior = PriorSpec(kind, S_alpha=args.prior_s_alpha, a=args.prior_a,
                          c1=args.prior_c1, c2=args.prior_c2)
    draws = fit_method(data, args.method, seed, gamma=args.gamma,
                       n_burn=args.burnin, n_keep=args.keep, prior=prior)

    os.makedirs(args.out, exist_ok=True)
    write_draws_csv(draws, os.path.join(args.out, "draws.csv"))
    if len(draws) >= 2:  # quantile summaries need at least two draws
        summary = posterior_summary(draws, args.level)
        write_summary_csv(summary, os.path.join(args.out, "summary.csv"))
    write_manifest(os.path.join(args.out, "manifest.json"), "fit", {
        "input": os.path.abspath(args.input), "method": args.method,
        "gamma": args.gamma, "burnin": args.burnin, "keep": args.keep,
        "level": args.level, "recipe": args.recipe,
        "has_intercept": not args.no_intercept,
        "n": data.n, "p": data.p,
        "prior": {"S_alpha": args.prior_s_alpha,
                  "S_beta_scale": args.prior_s_beta_scale, "a": args.prior_a,
                  "c1": args.prior_c1, "c2": args.prior_c2},
        "mm_nonconverged": draws.mm_nonconverged,
    }, seed)
    return 0


def _cmd_simulate(args) -> int:
    seed = _resolve_seed(args)
    kind = SCENARIOS[args.scenario]
    hetero = kind in (ContaminationKind.HETERO_I, ContaminationKind.HETERO_II)
    if hetero:
        if args.omega is not None:
            raise ValueError("hetero scenarios take --delta, not --omega")
        levels = args.delta if args.delta is not None else [1.0]
        conts = [Contamination(kind, delta=d) for d in levels]
    else:
        if args.delta is not None:
            raise ValueError("homo scenarios take --omega, not --delta")
        default_level = [0.0] if kind == ContaminationKind.NONE else [0.1]
        levels = args.omega if args.omega is not None else default_level
        if kind == ContaminationKind.NONE and any(v != 0 for v in levels):
            raise ValueError("scenario 'none' cannot take nonzero --omega")
        conts = [Contamination(kind, omega=w, a_scale=args.a_scale)
                 for w in levels]

    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    for m in methods:
        if m not in METHODS:
            raise ValueError(f"unknown method {m!r}")
    scenarios = [(f"{args.scenario}-{lv:g}",
                  default_scenario(c, n=args.n, p=args.p, rho=args.rho))
                 for lv, c in zip(levels, conts)]

    os.makedirs(args.out, exist_ok=True)
    df, agg = run_simulation_study(
        scenarios, methods, args.reps, seed, gamma=args.gamma,
        n_burn=args.burnin, n_keep=args.keep, n_jobs=args.threads,
        out_csv=os.path.join(args.out, "results.csv"))
    write_table_csv(agg, os.path.join(args.out, "aggregate.csv"))
    write_manifest(os.path.join(args.out, "manifest.json"), "simulate", {
        "scenario": args.scenario, "levels": list(map(float, levels)),
        "a_scale": args.a_scale, "methods": methods, "reps": args.reps,
        "n": args.n, "p": args.p, "rho": args.rho, "gamma": args.gamma,
        "burnin": args.burnin, "keep": args.keep,
    }, seed)
    return 0


def _cmd_kl(args) -> int:
    seed = _resolve_seed(args)
    omegas, scales = args.omega, args.a
    if len(scales) == 1:
        scales = scales * len(omegas)
    if len(omegas) == 1:
        omegas = omegas * len(scales)
    if len(omegas) != len(scales):
        raise ValueError("--omega and --a must pair up (equal lengths)")
    cells = list(zip(omegas, scales))

    os.makedirs(args.out, exist_ok=True)
    df, agg = run_kl_experiment(cells, args.reps, seed, n_keep=args.keep,
                                n_jobs=args.threads,
                                out_csv=os.path.join(args.out, "results.csv"))
    write_table_csv(agg, os.path.join(args.out, "aggregate.csv"))
    write_manifest(os.path.join(args.out, "manifest.json"), "kl", {
        "cells": [[float(o), float(a)] for o, a in cells],
        "reps": args.reps, "keep": args.keep,
    }, seed)
    return 0


def _cmd_influence(args) -> int:
    seed = _resolve_seed(args)
    from .experiments import SLM_FLAT_SCALE, generate_scenario, _slm_prior

    data = generate_scenario(slm_scenario(n=args.n),
                             np.random.default_rng(child_seed(seed, 0)))
    draws = run_synthetic_sampler(data, _slm_prior(),
                                  GammaConfig(gamma=args.gamma), args.draws,
                                  child_seed(seed, 1))
    z = np.linspace(args.z_min, args.z_max, args.z_points)
    curves = []
    for j, x in enumerate(args.x):
        rng = np.random.default_rng(child_seed(seed, 2, j))
        curves.append(influence_function(draws, z, x, args.gamma, rng,
                                         n=data.n, n_g=args.g_samples))
    os.makedirs(args.out, exist_ok=True)
    write_influence_csv(curves, os.path.join(args.out, "influence.csv"))
    write_manifest(os.path.join(args.out, "manifest.json"), "influence", {
        "gamma": args.gamma, "draws": args.draws, "n": args.n,
        "g_samples": args.g_samples, "x": list(map(float, args.x)),
        "z_min": args.z_min, "z_max": args.z_max, "z_points": args.z_points,
        "prior_scale": SLM_FLAT_SCALE,
    }, seed)
    return 0


_COMMANDS = {"fit": _cmd_fit, "simulate": _cmd_simulate, "kl": _cmd_kl,
             "influence": _cmd_influence}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except FileNotFoundError as e:
        print(f"error: {e}", file=sys.stderr)
        return 3
    except NumericalError as e:
        print(f"numerical failure: {e}", file=sys.stderr)
        return 4
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
