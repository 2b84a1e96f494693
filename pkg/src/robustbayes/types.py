"""Shared value types: data, parameters, priors, chain state and draws.

All types validate their invariants at construction and are immutable
afterwards; they can be shared freely across threads and processes.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace

import numpy as np


class NumericalError(RuntimeError):
    """Linear algebra or optimization failure with diagnostic context."""


def _freeze(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float, copy=True)
    a.flags.writeable = False
    return a


def _check_finite(name: str, a) -> None:
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{name} must be finite")


class PriorKind(enum.Enum):
    NORMAL_IG = "normal_ig"
    LAPLACE = "laplace"
    HORSESHOE = "horseshoe"


@dataclass(frozen=True)
class Dataset:
    """Regression data: response y (n,), covariates X (n, p).

    has_intercept=True models a separate intercept alpha; otherwise any
    constant column must live inside X. outlier_flags optionally records
    which observations were generated as outliers (used by the oracle
    experiments only, never by the samplers).
    """

    y: np.ndarray
    X: np.ndarray
    has_intercept: bool = True
    outlier_flags: np.ndarray | None = None

    def __post_init__(self):
        y = np.asarray(self.y, dtype=float).ravel()
        X = np.asarray(self.X, dtype=float)
        if X.ndim == 1:
            X = X[:, None]
        if X.ndim != 2:
            raise ValueError("X must be a 2-d matrix")
        if X.shape[0] != y.shape[0]:
            raise ValueError(f"rows(X)={X.shape[0]} != len(y)={y.shape[0]}")
        if y.shape[0] < 1 or X.shape[1] < 1:
            raise ValueError("need n >= 1 and p >= 1")
        _check_finite("y", y)
        _check_finite("X", X)
        object.__setattr__(self, "y", _freeze(y))
        object.__setattr__(self, "X", _freeze(X))
        if self.outlier_flags is not None:
            flags = np.asarray(self.outlier_flags, dtype=bool).ravel()
            if flags.shape[0] != y.shape[0]:
                raise ValueError("outlier_flags length must equal n")
            flags = flags.copy()
            flags.flags.writeable = False
            object.__setattr__(self, "outlier_flags", flags)

    @property
    def n(self) -> int:
        return self.y.shape[0]

    @property
    def p(self) -> int:
        return self.X.shape[1]

    def clean_subset(self) -> "Dataset":
        """Observations not flagged as outliers (requires outlier_flags)."""
        if self.outlier_flags is None:
            raise ValueError("dataset has no outlier_flags")
        keep = ~self.outlier_flags
        return Dataset(self.y[keep], self.X[keep], self.has_intercept)


@dataclass(frozen=True)
class RegressionParams:
    """Point in parameter space: intercept alpha, slopes beta, variance sigma2."""

    alpha: float
    beta: np.ndarray
    sigma2: float

    def __post_init__(self):
        beta = np.asarray(self.beta, dtype=float).ravel()
        _check_finite("beta", beta)
        _check_finite("alpha", self.alpha)
        if not (np.isfinite(self.sigma2) and self.sigma2 > 0):
            raise ValueError(f"sigma2 must be positive, got {self.sigma2}")
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "sigma2", float(self.sigma2))
        object.__setattr__(self, "beta", _freeze(beta))

    @property
    def p(self) -> int:
        return self.beta.shape[0]

    def predict(self, data: Dataset) -> np.ndarray:
        return self.alpha + data.X @ self.beta


@dataclass(frozen=True)
class PriorSpec:
    """Prior configuration.

    kind=NORMAL_IG uses a fixed normal prior N(0, S_beta) on beta; the
    shrinkage kinds (LAPLACE, HORSESHOE) put scale-mixture-of-normal priors
    on beta with gamma hyperpriors Ga(c1, c2) on the global scale. The
    error-variance prior is (sigma2)^(-a/2-1) exp(-a / (2 sigma2)) in all
    cases; the intercept prior is N(0, S_alpha).
    """

    kind: PriorKind
    S_beta: np.ndarray | None = None
    S_alpha: float = 100.0
    a: float = 1.0
    c1: float = 1.0
    c2: float = 1.0

    def __post_init__(self):
        for name in ("S_alpha", "a", "c1", "c2"):
            v = getattr(self, name)
            if not (np.isfinite(v) and v > 0):
                raise ValueError(f"{name} must be positive, got {v}")
        if self.kind == PriorKind.NORMAL_IG:
            if self.S_beta is None:
                raise ValueError("NORMAL_IG prior requires S_beta")
            S = np.asarray(self.S_beta, dtype=float)
            if S.ndim == 0:
                raise ValueError("S_beta must be a matrix (use normal_ig(p, scale))")
            if S.ndim != 2 or S.shape[0] != S.shape[1]:
                raise ValueError("S_beta must be square")
            if not np.allclose(S, S.T):
                raise ValueError("S_beta must be symmetric")
            # positive definiteness via Cholesky
            try:
                np.linalg.cholesky(S)
            except np.linalg.LinAlgError as e:
                raise ValueError("S_beta must be positive definite") from e
            object.__setattr__(self, "S_beta", _freeze(S))
        elif self.S_beta is not None:
            raise ValueError("S_beta only applies to the NORMAL_IG prior")

    @classmethod
    def normal_ig(cls, p: int, scale: float = 100.0, S_alpha: float = 100.0,
                  a: float = 1.0) -> "PriorSpec":
        return cls(PriorKind.NORMAL_IG, S_beta=scale * np.eye(p),
                   S_alpha=S_alpha, a=a)

    @classmethod
    def laplace(cls, S_alpha: float = 100.0, a: float = 1.0, c1: float = 1.0,
                c2: float = 1.0) -> "PriorSpec":
        return cls(PriorKind.LAPLACE, S_alpha=S_alpha, a=a, c1=c1, c2=c2)

    @classmethod
    def horseshoe(cls, S_alpha: float = 100.0, a: float = 1.0, c1: float = 1.0,
                  c2: float = 1.0) -> "PriorSpec":
        return cls(PriorKind.HORSESHOE, S_alpha=S_alpha, a=a, c1=c1, c2=c2)


@dataclass(frozen=True)
class GammaConfig:
    """Robustness parameter and MM solver controls.

    gamma = 0 is permitted and dispatches to exact log-likelihood formulas
    (the gamma -> 0 limit) everywhere.
    """

    gamma: float = 0.2
    mm_tol: float = 1e-8
    mm_max_iter: int = 500

    def __post_init__(self):
        if not (np.isfinite(self.gamma) and self.gamma >= 0):
            raise ValueError(f"gamma must be >= 0, got {self.gamma}")
        if not (np.isfinite(self.mm_tol) and self.mm_tol > 0):
            raise ValueError("mm_tol must be positive")
        if int(self.mm_max_iter) < 1:
            raise ValueError("mm_max_iter must be >= 1")
        object.__setattr__(self, "mm_max_iter", int(self.mm_max_iter))


@dataclass(frozen=True)
class ChainState:
    """Current parameters plus latent prior scales.

    u holds the local prior variances of beta; xi the horseshoe auxiliaries
    (kept at 1 and unused under the Laplace prior); lam stores lambda^2 for
    the Laplace prior and lambda for the horseshoe.
    """

    params: RegressionParams
    u: np.ndarray
    xi: np.ndarray
    lam: float

    def __post_init__(self):
        u = np.asarray(self.u, dtype=float).ravel()
        xi = np.asarray(self.xi, dtype=float).ravel()
        if u.shape != (self.params.p,) or xi.shape != (self.params.p,):
            raise ValueError("u and xi must have length p")
        if not (np.all(u > 0) and np.all(np.isfinite(u))):
            raise ValueError("u entries must be positive")
        if not (np.all(xi > 0) and np.all(np.isfinite(xi))):
            raise ValueError("xi entries must be positive")
        if not (np.isfinite(self.lam) and self.lam > 0):
            raise ValueError(f"lam must be positive, got {self.lam}")
        object.__setattr__(self, "u", _freeze(u))
        object.__setattr__(self, "xi", _freeze(xi))
        object.__setattr__(self, "lam", float(self.lam))

    @classmethod
    def initial(cls, p: int, sigma2: float = 1.0) -> "ChainState":
        return cls(RegressionParams(0.0, np.zeros(p), sigma2),
                   u=np.ones(p), xi=np.ones(p), lam=1.0)

    def with_params(self, params: RegressionParams) -> "ChainState":
        return replace(self, params=params)


@dataclass(frozen=True)
class Draws:
    """Ordered post-burn-in posterior samples with reproducibility metadata.

    mm_nonconverged counts sweeps whose inner minimization hit its iteration
    cap (0 for exact-Gibbs baselines).
    """

    samples: tuple[ChainState, ...]
    burnin: int
    seed: int
    config: GammaConfig
    prior: PriorSpec
    mm_nonconverged: int = 0

    def __post_init__(self):
        samples = tuple(self.samples)
        if len(samples) < 1:
            raise ValueError("Draws needs at least one sample")
        object.__setattr__(self, "samples", samples)

    def __len__(self) -> int:
        return len(self.samples)

    @property
    def p(self) -> int:
        return self.samples[0].params.p

    def alpha(self) -> np.ndarray:
        return np.array([s.params.alpha for s in self.samples])

    def beta(self) -> np.ndarray:
        return np.array([s.params.beta for s in self.samples])

    def sigma2(self) -> np.ndarray:
        return np.array([s.params.sigma2 for s in self.samples])

    def lam(self) -> np.ndarray:
        return np.array([s.lam for s in self.samples])

    def param_matrix(self, which=("alpha", "beta")) -> np.ndarray:
        """Stack the selected parameter blocks into a (B, d) matrix."""
        cols = []
        for name in which:
            if name == "alpha":
                cols.append(self.alpha()[:, None])
            elif name == "beta":
                cols.append(self.beta())
            elif name == "sigma2":
                cols.append(self.sigma2()[:, None])
            elif name == "lambda":
                cols.append(self.lam()[:, None])
            else:
                raise ValueError(f"unknown parameter block {name!r}")
        return np.hstack(cols)


class ContaminationKind(enum.Enum):
    NONE = "none"
    HOMO_I = "homo_i"          # Bernoulli(omega) positions, f_c = N(0, a_scale^2)
    HOMO_II = "homo_ii"        # Bernoulli(omega) positions, f_c = N(10, 1)
    HETERO_I = "hetero_i"      # omega_i = delta * logistic(-3.3 + x_i10), f_c = N(0, 100)
    HETERO_II = "hetero_ii"    # same probabilities, f_c = N(10, 1)
    BLOCK_I = "block_i"        # first ceil(n*omega) observations, f_c = N(0, a_scale^2)


@dataclass(frozen=True)
class Contamination:
    kind: ContaminationKind = ContaminationKind.NONE
    omega: float = 0.0
    delta: float = 0.0
    a_scale: float = 10.0

    def __post_init__(self):
        if not 0.0 <= self.omega <= 1.0:
            raise ValueError(f"omega must lie in [0, 1], got {self.omega}")
        if self.delta < 0:
            raise ValueError(f"delta must be >= 0, got {self.delta}")

    @property
    def level(self) -> float:
        """The scenario's sweep parameter: omega (Homo/Block) or delta (Hetero)."""
        if self.kind in (ContaminationKind.HETERO_I, ContaminationKind.HETERO_II):
            return self.delta
        return self.omega


@dataclass(frozen=True)
class ScenarioSpec:
    """Full description of one simulated-data scenario."""

    n: int
    p: int
    alpha_true: float
    beta_true: np.ndarray
    rho: float
    contamination: Contamination = field(default_factory=Contamination)
    hetero_covariate: int = 10  # 1-based covariate index driving Hetero probability

    def __post_init__(self):
        if self.n < 1 or self.p < 1:
            raise ValueError("need n >= 1 and p >= 1")
        beta = np.asarray(self.beta_true, dtype=float).ravel()
        if beta.shape[0] != self.p:
            raise ValueError("beta_true must have length p")
        if not -1 < self.rho < 1:
            raise ValueError(f"rho must lie in (-1, 1), got {self.rho}")
        _check_finite("beta_true", beta)
        object.__setattr__(self, "beta_true", _freeze(beta))

    def true_params(self, sigma2: float = 1.0) -> RegressionParams:
        return RegressionParams(self.alpha_true, self.beta_true, sigma2)
