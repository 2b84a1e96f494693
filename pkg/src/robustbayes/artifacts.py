"""CSV and JSON artifact formats shared by the CLI and downstream tooling.

All numeric fields are serialized with 17 significant digits so 64-bit
floats round-trip exactly; no artifact embeds timestamps, keeping re-runs
byte-identical.
"""

from __future__ import annotations

import csv
import json
import platform

import numpy as np
import pandas as pd
import scipy

from . import __version__
from .diagnostics import InfluenceCurve, SummaryTable
from .types import Dataset, Draws

FLOAT_FMT = "%.17g"


def fmt(x: float) -> str:
    return FLOAT_FMT % float(x)


def dataset_from_table(table: pd.DataFrame, has_intercept: bool = True) -> Dataset:
    """Build a Dataset from a table with a response column named y.

    Remaining columns are covariates in their original order; an optional
    outlier_flag column is split off into Dataset.outlier_flags.
    """
    names = list(table.columns)
    if "y" not in names:
        raise ValueError("input table must contain a response column named 'y'")
    flags = None
    if "outlier_flag" in names:
        flags = table["outlier_flag"].to_numpy().astype(bool)
        names.remove("outlier_flag")
    names.remove("y")
    if not names:
        raise ValueError("input table has no covariate columns")
    try:
        y = table["y"].to_numpy(dtype=float)
        X = table[names].to_numpy(dtype=float)
    except (TypeError, ValueError) as e:
        raise ValueError(f"non-numeric data in input table: {e}") from e
    return Dataset(y, X, has_intercept=has_intercept, outlier_flags=flags)


def write_dataset_csv(data: Dataset, path: str) -> None:
    """Inverse of dataset_from_table, with generic covariate names x1..xp."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        header = ["y"] + [f"x{j}" for j in range(1, data.p + 1)]
        if data.outlier_flags is not None:
            header.append("outlier_flag")
        w.writerow(header)
        for i in range(data.n):
            row = [fmt(data.y[i])] + [fmt(v) for v in data.X[i]]
            if data.outlier_flags is not None:
                row.append(str(int(data.outlier_flags[i])))
            w.writerow(row)


def read_dataset_csv(path: str, has_intercept: bool = True) -> Dataset:
    return dataset_from_table(
        pd.read_csv(path, float_precision="round_trip"), has_intercept)


def write_draws_csv(draws: Draws, path: str) -> None:
    """One row per kept sample: alpha, beta_1..p, sigma2, lambda."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["alpha"] + [f"beta_{k}" for k in range(1, draws.p + 1)]
                   + ["sigma2", "lambda"])
        for s in draws.samples:
            w.writerow([fmt(s.params.alpha)] + [fmt(b) for b in s.params.beta]
                       + [fmt(s.params.sigma2), fmt(s.lam)])


def read_draws_csv(path: str) -> pd.DataFrame:
    return pd.read_csv(path, float_precision="round_trip")


def write_summary_csv(summary: SummaryTable, path: str) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["param", "median", "lower", "upper"])
        for name, med, lo, hi in zip(summary.names, summary.median,
                                     summary.lower, summary.upper):
            w.writerow([name, fmt(med), fmt(lo), fmt(hi)])


def write_influence_csv(curves: list[InfluenceCurve], path: str) -> None:
    """Long format: one row per (x, z) with IF columns for alpha and beta."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["x", "z", "if_alpha", "if_beta"])
        for curve in curves:
            a = curve.names.index("alpha")
            b = curve.names.index("beta_1")
            for i, z in enumerate(curve.z_grid):
                w.writerow([fmt(curve.x_eval), fmt(z),
                            fmt(curve.if_values[i, a]),
                            fmt(curve.if_values[i, b])])


def write_table_csv(df: pd.DataFrame, path: str) -> None:
    df.to_csv(path, index=False, float_format=FLOAT_FMT)


def write_manifest(path: str, command: str, config: dict, seed: int) -> None:
    """Reproduction manifest: command, full configuration, seed, versions."""
    payload = {
        "command": command,
        "config": config,
        "seed": int(seed),
        "versions": {
            "robustbayes": __version__,
            "numpy": np.__version__,
            "scipy": scipy.__version__,
            "pandas": pd.__version__,
            "python": platform.python_version(),
        },
    }
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
