"""Random-variate generators with the parameterizations used by the samplers.

Every generator takes an explicit numpy Generator so that chains and
replications own independent, reproducible streams (spawn substreams with
numpy SeedSequence).
"""

from __future__ import annotations

import numpy as np

from .objective import WeightVector


def sample_dirichlet_weights(n: int, rng: np.random.Generator) -> WeightVector:
    """Draw w = n * Dirichlet(1,...,1) via normalized standard exponentials."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    g = rng.standard_exponential(n)
    return WeightVector(n * g / g.sum())


def sample_inverse_gaussian(mu, delta, rng: np.random.Generator):
    """Inverse-Gaussian draw(s) with mean mu and shape delta.

    Density sqrt(delta / (2 pi x^3)) exp{-delta (x - mu)^2 / (2 mu^2 x)} on
    x > 0. Uses the Michael-Schucany-Haas transformation with rejection;
    broadcasts over array parameters.
    """
    mu = np.asarray(mu, dtype=float)
    delta = np.asarray(delta, dtype=float)
    if np.any(mu <= 0) or np.any(delta <= 0):
        raise ValueError("mu and delta must be positive")
    scalar = mu.ndim == 0 and delta.ndim == 0
    shape = np.broadcast_shapes(mu.shape, delta.shape)
    mu, delta = np.broadcast_to(mu, shape), np.broadcast_to(delta, shape)

    # smaller root of the MSH quadratic, written without cancellation:
    # x = mu + mu^2 nu/(2 delta) - (mu/(2 delta)) sqrt(4 mu delta nu + mu^2 nu^2)
    #   = 4 mu delta w / (w + sqrt(w (w + 4 delta)))^2,  w = mu nu
    w = mu * np.square(rng.standard_normal(shape))
    with np.errstate(invalid="ignore", divide="ignore"):
        x = 4.0 * mu * delta * w / np.square(w + np.sqrt(w * (w + 4.0 * delta)))
    x = np.where(w == 0.0, mu, x)
    take_other = rng.random(shape) > mu / (mu + x)
    out = np.where(take_other, np.square(mu) / x, x)
    if scalar:
        return float(out)
    return out


def sample_gamma(shape_par, rate, rng: np.random.Generator):
    """Gamma draw(s) with shape and *rate* parameters."""
    shape_par = np.asarray(shape_par, dtype=float)
    rate = np.asarray(rate, dtype=float)
    if np.any(shape_par <= 0) or np.any(rate <= 0):
        raise ValueError("shape and rate must be positive")
    if shape_par.ndim == 0 and rate.ndim == 0:
        return float(rng.gamma(float(shape_par))) / float(rate)
    out_shape = np.broadcast_shapes(shape_par.shape, rate.shape)
    return rng.gamma(np.broadcast_to(shape_par, out_shape)) / np.broadcast_to(rate, out_shape)


def sample_inverse_gamma(shape_par, scale, rng: np.random.Generator):
    """Inverse-gamma draw(s) with shape and scale: reciprocal of Ga(shape, scale)."""
    return 1.0 / sample_gamma(shape_par, scale, rng)
