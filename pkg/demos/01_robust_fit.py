"""Fit a contaminated regression with the robust sampler and the standard
Bayesian lasso, and compare what happens to the coefficient estimates.

Run:  python demos/01_robust_fit.py
"""

import numpy as np

from robustbayes import (Contamination, ContaminationKind, GammaConfig,
                         PriorSpec, posterior_summary, run_chain)
from robustbayes.baselines import bayesian_lasso_chain
from robustbayes.experiments import default_scenario, generate_scenario

rng = np.random.default_rng(1)
scenario = default_scenario(
    Contamination(ContaminationKind.HOMO_II, omega=0.15))
data = generate_scenario(scenario, rng)
truth = scenario.true_params()
print(f"n={data.n}, p={data.p}, outliers={int(data.outlier_flags.sum())} "
      f"(mean-shifted by +10)")

cfg = GammaConfig(gamma=0.2, mm_tol=1e-6)
robust = run_chain(data, PriorSpec.laplace(), cfg, n_burn=500, n_keep=1000,
                   seed=7)
plain = bayesian_lasso_chain(data, PriorSpec.laplace(), n_burn=500,
                             n_keep=1000, seed=8)

for name, draws in [("robust (gamma=0.2)", robust), ("standard lasso", plain)]:
    s = posterior_summary(draws, 0.95, truth)
    print(f"\n{name}: MSE={s.mse:.4f}  AL={s.al:.3f}  CP={s.cp:.2f}")
    for k in (1, 7, 10):
        i = 1 + (k - 1)
        print(f"  beta_{k}: median {s.median[i]:+.3f} "
              f"[{s.lower[i]:+.3f}, {s.upper[i]:+.3f}]  (truth "
              f"{truth.beta[k - 1]:+.1f})")
