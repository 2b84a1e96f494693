"""Posterior summaries, KL-to-oracle comparison, influence functions and ACF."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from .objective import LOG_2PI
from .types import Draws, RegressionParams


@dataclass(frozen=True)
class SummaryTable:
    """Per-parameter medians and equal-tailed credible bounds.

    Rows cover alpha, beta_1..p, sigma2 in that order. mse, al and cp are
    the usual beta-block metrics, present only when truth was supplied.
    """

    names: tuple[str, ...]
    median: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    level: float
    mse: float | None = None
    al: float | None = None
    cp: float | None = None

    def __post_init__(self):
        if not (np.all(self.lower <= self.median + 1e-12)
                and np.all(self.median <= self.upper + 1e-12)):
            raise ValueError("expected lower <= median <= upper")

    def beta_rows(self) -> slice:
        return slice(1, len(self.names) - 1)


def posterior_summary(draws: Draws, level: float = 0.95,
                      truth: RegressionParams | None = None) -> SummaryTable:
    """Medians and equal-tailed intervals; MSE/AL/CP of beta when truth given."""
    if len(draws) < 2:
        raise ValueError("need at least 2 draws to summarize")
    if not 0.0 < level < 1.0:
        raise ValueError(f"level must lie in (0, 1), got {level}")
    mat = draws.param_matrix(("alpha", "beta", "sigma2"))
    lo_q, hi_q = (1.0 - level) / 2.0, 1.0 - (1.0 - level) / 2.0
    qs = np.quantile(mat, [lo_q, 0.5, hi_q], axis=0)
    names = ("alpha", *[f"beta_{k}" for k in range(1, draws.p + 1)], "sigma2")

    mse = al = cp = None
    if truth is not None:
        b = slice(1, 1 + draws.p)
        med, lo, hi = qs[1, b], qs[0, b], qs[2, b]
        mse = float(np.mean(np.square(med - truth.beta)))
        al = float(np.mean(hi - lo))
        cp = float(np.mean((truth.beta >= lo) & (truth.beta <= hi)))
    return SummaryTable(names, qs[1], qs[0], qs[2], level, mse, al, cp)


def estimate_kl_gaussian(draws_p: Draws, draws_q: Draws,
                         which=("alpha", "beta")) -> float:
    """KL(p || q) between moment-matched Gaussians fit to two draw clouds."""
    P = draws_p.param_matrix(which)
    Q = draws_q.param_matrix(which)
    d = P.shape[1]
    mu_p, mu_q = P.mean(axis=0), Q.mean(axis=0)
    S_p = np.atleast_2d(np.cov(P, rowvar=False, ddof=1))
    S_q = np.atleast_2d(np.cov(Q, rowvar=False, ddof=1))

    def _logdet_and_fix(S, name):
        sign, logdet = np.linalg.slogdet(S)
        if sign <= 0 or not np.isfinite(logdet):
            warnings.warn(f"singular {name} draw covariance; adding 1e-8 ridge")
            S = S + 1e-8 * np.eye(d)
            sign, logdet = np.linalg.slogdet(S)
        return S, logdet

    S_p, logdet_p = _logdet_and_fix(S_p, "first")
    S_q, logdet_q = _logdet_and_fix(S_q, "second")
    diff = mu_q - mu_p
    solved = np.linalg.solve(S_q, np.column_stack([S_p, diff]))
    kl = 0.5 * (np.trace(solved[:, :d]) + diff @ solved[:, d]
                - d + logdet_q - logdet_p)
    return float(max(kl, 0.0))


def _normal_logpdf_at(y, mean, sigma2):
    return -0.5 * (LOG_2PI + np.log(sigma2)) - np.square(y - mean) / (2.0 * sigma2)


def h_function(theta: RegressionParams, z: float, x: float, gamma: float,
               g_samples: np.ndarray) -> float:
    """Contamination derivative H(theta, z | x) of the (synthetic) likelihood.

    gamma=0 gives the log-likelihood form; gamma>0 the density-power form
    (1/g) { f(mu+z)^g / E_g[f^g] - 1 }. Integrals over the true conditional
    density g(.|x) are Monte Carlo means over g_samples.
    """
    g_samples = np.asarray(g_samples, dtype=float).ravel()
    if g_samples.size == 0:
        raise ValueError("g_samples must be nonempty")
    mu = theta.alpha + float(np.dot(theta.beta, np.atleast_1d(x)))
    s2 = theta.sigma2
    if gamma == 0.0:
        return float(_normal_logpdf_at(mu + z, mu, s2)
                     - np.mean(_normal_logpdf_at(g_samples, mu, s2)))
    log_num = gamma * _normal_logpdf_at(mu + z, mu, s2)
    log_den = logsumexp(gamma * _normal_logpdf_at(g_samples, mu, s2)) \
        - np.log(g_samples.size)
    return float((np.exp(log_num - log_den) - 1.0) / gamma)


@dataclass(frozen=True)
class InfluenceCurve:
    """Influence values per grid point; columns follow names."""

    z_grid: np.ndarray
    if_values: np.ndarray  # (len(z_grid), len(names))
    x_eval: float
    names: tuple[str, ...]

    def __post_init__(self):
        z = np.asarray(self.z_grid, dtype=float)
        if z.ndim != 1 or np.any(np.diff(z) <= 0):
            raise ValueError("z_grid must be strictly increasing")
        if self.if_values.shape != (z.size, len(self.names)):
            raise ValueError("if_values shape mismatch")


def influence_function(draws: Draws, z_grid: np.ndarray, x: float,
                       gamma: float, rng: np.random.Generator, n: int,
                       n_g: int = 2000, block: int = 1000) -> InfluenceCurve:
    """Bayesian influence curve IF_k(z|x) = n Cov_post(theta_k, H(theta, z|x)).

    draws come from the fitted posterior of the simple model; the reference
    integral uses n_g Monte Carlo samples from the true conditional density
    N(x, 1). Covariances are over the draw cloud, for alpha and each beta.
    """
    z_grid = np.asarray(z_grid, dtype=float)
    g = rng.normal(loc=x, scale=1.0, size=n_g)
    alpha = draws.alpha()
    beta = draws.beta()
    sigma2 = draws.sigma2()
    B = len(draws)
    mu = alpha + beta @ np.atleast_1d(x)

    # E_g[f^gamma] (or E_g[log f]) per draw, in blocks to bound memory
    ref = np.empty(B)
    for lo in range(0, B, block):
        hi = min(lo + block, B)
        lp = _normal_logpdf_at(g[None, :], mu[lo:hi, None], sigma2[lo:hi, None])
        if gamma == 0.0:
            ref[lo:hi] = lp.mean(axis=1)
        else:
            ref[lo:hi] = logsumexp(gamma * lp, axis=1) - np.log(n_g)

    lognum = -0.5 * (LOG_2PI + np.log(sigma2))[None, :] \
        - np.square(z_grid)[:, None] / (2.0 * sigma2)[None, :]
    if gamma == 0.0:
        H = lognum - ref[None, :]                      # (nz, B)
    else:
        H = (np.exp(gamma * lognum - ref[None, :]) - 1.0) / gamma

    theta = np.column_stack([alpha, beta])             # (B, 1+p)
    theta_c = theta - theta.mean(axis=0)
    H_c = H - H.mean(axis=1, keepdims=True)
    if_vals = n * (H_c @ theta_c) / (B - 1)            # (nz, 1+p)
    names = ("alpha", *[f"beta_{k}" for k in range(1, draws.p + 1)])
    return InfluenceCurve(z_grid, if_vals, float(x), names)


def acf(series: np.ndarray, max_lag: int) -> np.ndarray:
    """Sample autocorrelation at lags 0..max_lag; lag 0 is exactly 1."""
    x = np.asarray(series, dtype=float).ravel()
    if x.size < max_lag + 2:
        raise ValueError("series too short for requested max_lag")
    xc = x - x.mean()
    denom = float(xc @ xc)
    if denom == 0.0:
        raise ValueError("zero-variance series has no autocorrelation")
    out = np.empty(max_lag + 1)
    out[0] = 1.0
    for lag in range(1, max_lag + 1):
        out[lag] = float(xc[:-lag] @ xc[lag:]) / denom
    return out


def autocorrelation(draws: Draws, coef, max_lag: int) -> np.ndarray:
    """ACF of one parameter trace; coef is 'alpha', 'sigma2', 'lambda',
    or a 1-based beta index."""
    if coef == "alpha":
        series = draws.alpha()
    elif coef == "sigma2":
        series = draws.sigma2()
    elif coef == "lambda":
        series = draws.lam()
    else:
        k = int(coef)
        if not 1 <= k <= draws.p:
            raise ValueError(f"beta index must lie in 1..{draws.p}")
        series = draws.beta()[:, k - 1]
    return acf(series, max_lag)
