"""MM minimization of the bootstrap-weighted objective.

Alternates the density-power reweighting with exact minimization of the
quadratic-in-beta majorizer until the parameters stop moving. One call
produces one synthetic-posterior draw given a Dirichlet weight vector.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import linalg as sla

from .objective import (LOG_2PI, WeightVector, logsumexp1d,
                        weighted_objective)
from .types import (ChainState, Dataset, GammaConfig, NumericalError,
                    PriorKind, PriorSpec, RegressionParams)


@dataclass(frozen=True)
class MMReport:
    iterations: int
    final_objective: float
    converged: bool


def _weights_core(resid: np.ndarray, sigma2: float, logw: np.ndarray,
                  gamma: float, n: int) -> np.ndarray:
    """Density-power weights from residuals, normalized to sum to n."""
    with np.errstate(over="ignore"):
        logf = -0.5 * (LOG_2PI + np.log(sigma2)) \
            - np.square(resid) / (2.0 * sigma2)
    logterm = logw + gamma * logf
    total = logsumexp1d(logterm)
    if total == -np.inf:
        raise NumericalError("all weighted densities vanished; cannot form MM weights")
    return n * np.exp(logterm - total)


def _update_core(s, alpha, beta, sigma2, data: Dataset, P, S_alpha, a, gamma,
                 strict_majorizer, resid_beta=None):
    """One majorizer minimization from (alpha, beta, sigma2) given weights s.

    resid_beta = y - X beta at the current beta may be passed to skip a
    matrix-vector product. Returns (alpha', beta', sigma2', resid') with
    resid' = y - alpha' - X beta'.
    """
    X, y, n = data.X, data.y, data.n
    if data.has_intercept:
        if resid_beta is None:
            resid_beta = y - X @ beta
        alpha_new = (s @ resid_beta / sigma2) / (n / sigma2 + 1.0 / S_alpha)
    else:
        alpha_new = 0.0

    Xs = X * s[:, None]
    A = (Xs.T @ X) / sigma2 + P
    b = Xs.T @ (y - alpha_new) / sigma2
    try:
        c, low = sla.cho_factor(A, lower=True, check_finite=False)
        beta_new = sla.cho_solve((c, low), b, check_finite=False)
    except np.linalg.LinAlgError as e:
        raise NumericalError(
            f"singular MM system (n={n}, p={data.p}); prior precision may be degenerate"
        ) from e

    r = y - alpha_new - X @ beta_new
    num = (2.0 * a if strict_majorizer else a) + s @ np.square(r)
    sigma2_new = num / (2.0 + a + n / (1.0 + gamma))
    return alpha_new, beta_new, sigma2_new, r


def compute_mm_weights(params: RegressionParams, w: WeightVector,
                       data: Dataset, gamma: float) -> np.ndarray:
    """Density-power weights s_i = n * w_i f_i^gamma / sum_j w_j f_j^gamma.

    Computed as a log-space softmax; sums to n. gamma=0 returns w itself.
    """
    if gamma < 0:
        raise ValueError(f"gamma must be >= 0, got {gamma}")
    if gamma == 0.0:
        return w.w.copy()
    resid = data.y - params.predict(data)
    with np.errstate(divide="ignore"):
        logw = np.log(w.w)
    return _weights_core(resid, params.sigma2, logw, gamma, data.n)


def _prior_precision(state: ChainState, prior: PriorSpec, p: int) -> np.ndarray:
    if prior.kind == PriorKind.NORMAL_IG:
        try:
            return np.linalg.inv(prior.S_beta)
        except np.linalg.LinAlgError as e:
            raise NumericalError("S_beta is numerically singular") from e
    return np.diag(1.0 / state.u)


def mm_update(params: RegressionParams, s: np.ndarray, data: Dataset,
              state: ChainState, prior: PriorSpec, gamma: float,
              strict_majorizer: bool = False,
              prior_precision: np.ndarray | None = None) -> RegressionParams:
    """One majorizer minimization given weights s (sum s = n).

    With an intercept the update runs alpha, beta, sigma2 sequentially;
    without, beta and sigma2 only. strict_majorizer=True replaces the
    printed sigma2 numerator term a with 2a, the exact minimizer of the
    majorized objective carrying the a/sigma2 prior term. prior_precision
    lets callers reuse the (state, prior) precision across iterations.
    """
    n = data.n
    if abs(s.sum() - n) > 1e-6 * n:
        raise ValueError(f"MM weights must sum to n={n}, got {s.sum()!r}")
    P = prior_precision if prior_precision is not None \
        else _prior_precision(state, prior, data.p)
    alpha, beta, sigma2, _ = _update_core(
        s, params.alpha, params.beta, params.sigma2, data, P, prior.S_alpha,
        prior.a, gamma, strict_majorizer)
    return RegressionParams(alpha, beta, sigma2)


def least_squares_init(data: Dataset, ridge: float = 1e-6) -> RegressionParams:
    """Cold start: ridge least squares with a small stabilizing penalty."""
    X, y = data.X, data.y
    if data.has_intercept:
        Z = np.column_stack([np.ones(data.n), X])
    else:
        Z = X
    A = Z.T @ Z + ridge * np.eye(Z.shape[1])
    coef = np.linalg.solve(A, Z.T @ y)
    if data.has_intercept:
        alpha, beta = coef[0], coef[1:]
    else:
        alpha, beta = 0.0, coef
    rss = float(np.sum(np.square(y - alpha - X @ beta)))
    sigma2 = max(rss / max(data.n, 1), 1e-8)
    return RegressionParams(alpha, beta, sigma2)


def minimize_weighted_objective(init: RegressionParams, w: WeightVector,
                                data: Dataset, state: ChainState,
                                prior: PriorSpec, cfg: GammaConfig,
                                strict_majorizer: bool = False
                                ) -> tuple[RegressionParams, MMReport]:
    """Run the MM loop from init until the relative parameter change is small.

    Convergence: max over parameters of |change| / (|value| + 1e-8) below
    cfg.mm_tol. Returns the final iterate and a report; converged=False
    means the mm_max_iter cap was hit first (the iterate is still usable).
    """
    P = _prior_precision(state, prior, data.p)
    with np.errstate(divide="ignore"):
        logw = np.log(w.w)
    gamma, a, S_alpha, n = cfg.gamma, prior.a, prior.S_alpha, data.n

    alpha, beta, sigma2 = init.alpha, init.beta, init.sigma2
    resid = data.y - alpha - data.X @ beta
    converged = False
    iterations = 0
    for iterations in range(1, cfg.mm_max_iter + 1):
        if gamma == 0.0:
            s = w.w
        else:
            s = _weights_core(resid, sigma2, logw, gamma, n)
        alpha_new, beta_new, sigma2_new, resid = _update_core(
            s, alpha, beta, sigma2, data, P, S_alpha, a, gamma,
            strict_majorizer, resid_beta=resid + alpha)
        delta = max(
            abs(alpha_new - alpha) / (abs(alpha) + 1e-8),
            float(np.max(np.abs(beta_new - beta) / (np.abs(beta) + 1e-8))),
            abs(sigma2_new - sigma2) / (sigma2 + 1e-8))
        alpha, beta, sigma2 = alpha_new, beta_new, sigma2_new
        if delta < cfg.mm_tol:
            converged = True
            break
    params = RegressionParams(alpha, beta, sigma2)
    final = weighted_objective(params, state, w, data, prior, cfg.gamma)
    return params, MMReport(iterations, final, converged)
