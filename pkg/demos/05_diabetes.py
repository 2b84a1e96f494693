"""Diabetes data: the robust fit flags covariates the standard lasso
misses. Uses scikit-learn's bundled copy of the dataset to build the
input CSV, then runs the same pipeline the CLI exposes.

Run:  python demos/05_diabetes.py   (writes out/diabetes/{rbl,bl}/...)
"""

import os
import warnings

import pandas as pd
from sklearn.datasets import load_diabetes

from robustbayes.cli import main

warnings.simplefilter("ignore")
os.makedirs("out", exist_ok=True)

X, y = load_diabetes(return_X_y=True, scaled=False)
raw = pd.DataFrame(X, columns=["age", "sex", "bmi", "bp", "s1", "s2", "s3",
                               "s4", "s5", "s6"])
raw["y"] = y
raw.to_csv("out/diabetes_raw.csv", index=False)

for method in ("rbl", "bl"):
    rc = main(["fit", "out/diabetes_raw.csv", "--recipe", "diabetes",
               "--method", method, "--gamma", "0.2", "--burnin", "1000",
               "--keep", "4000", "--seed", "31",
               "--out", f"out/diabetes/{method}"])
    assert rc == 0
    s = pd.read_csv(f"out/diabetes/{method}/summary.csv")
    print(f"\n{method}: 95% intervals")
    for k in (5, 7):
        row = s[s.param == f"beta_{k}"].iloc[0]
        sig = "excludes 0" if row.lower > 0 or row.upper < 0 else "contains 0"
        print(f"  beta_{k} ({raw.columns[k - 1]}): "
              f"[{row.lower:8.2f}, {row.upper:8.2f}]  {sig}")

print("\ncompare the full interval plots with:\n"
      "  figures coef_intervals out/diabetes/bl/summary.csv "
      "out/diabetes/rbl/summary.csv --label bl --label rbl "
      "--out out/diabetes.png")
