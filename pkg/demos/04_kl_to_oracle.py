"""How close does each posterior stay to the oracle posterior (normal
likelihood on the uncontaminated rows) as outliers enter the sample?

Run:  python demos/04_kl_to_oracle.py
"""

import warnings

from robustbayes.experiments import run_kl_experiment

warnings.simplefilter("ignore")

df, agg = run_kl_experiment(cells=[(0.05, 10.0), (0.2, 20.0)], reps=5,
                            seed=17, n_keep=1000)
table = agg.pivot_table(index=["omega", "a_scale"], columns="method",
                        values="mean_kl")
print(table[["lm", "clm", "tlm", "rbr1", "rbr2"]].round(3).to_string())
print("\nlm = normal likelihood, clm/tlm = Cauchy/t3 errors, "
      "rbr1/rbr2 = density-power posteriors (gamma 0.2 / 0.5)")
