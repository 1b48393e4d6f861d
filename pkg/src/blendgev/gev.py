"""Generalised extreme value distribution in two parametrisations.

The classical triple ``(mu, sigma, xi)`` and the quantile-based triple
``(q_alpha, s_beta, xi)``, where ``q_alpha`` is the alpha-quantile and
``s_beta = q_{1-beta/2} - q_{beta/2}`` is a central quantile range.  Both
describe the same family; :func:`to_classic` and :func:`to_quantile` map
between them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numba as nb
import numpy as np

from ._rng import make_rng

# below this |xi| the Gumbel formulas are used
XI_EPS = 1e-8


@dataclass(frozen=True)
class ClassicParams:
    mu: float
    sigma: float
    xi: float

    def __post_init__(self):
        if not self.sigma > 0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")


@dataclass(frozen=True)
class QuantileParams:
    """GEV parameters expressed through a quantile and a quantile range."""

    q_alpha: float
    s_beta: float
    xi: float
    alpha: float = 0.5
    beta: float = 0.5

    def __post_init__(self):
        if not self.s_beta > 0:
            raise ValueError(f"s_beta must be positive, got {self.s_beta}")
        if not 0 < self.alpha < 1:
            raise ValueError(f"alpha must lie in (0, 1), got {self.alpha}")
        if not 0 < self.beta < 1:
            raise ValueError(f"beta must lie in (0, 1), got {self.beta}")


def gumbel_ell(a):
    """log(-log a), the Gumbel quantile offset of probability ``a``."""
    return np.log(-np.log(a))


@nb.njit(cache=True)
def _ell_m1(a, xi):
    # (-log a)^(-xi) - 1, evaluated in log space; divided by xi it tends to -log(-log a)
    return math.expm1(-xi * math.log(-math.log(a)))


@nb.njit(cache=True)
def _ell_ratio(p, xi, alpha, beta):
    # (q_p - q_alpha) / s_beta for any GEV with shape xi
    lo, hi = beta / 2.0, 1.0 - beta / 2.0
    if abs(xi) < XI_EPS:
        num = math.log(-math.log(alpha)) - math.log(-math.log(p))
        den = math.log(-math.log(lo)) - math.log(-math.log(hi))
    else:
        num = _ell_m1(p, xi) - _ell_m1(alpha, xi)
        den = _ell_m1(hi, xi) - _ell_m1(lo, xi)
    return num / den


@nb.njit(cache=True)
def quantile_q_scalar(p, q, s, xi, alpha, beta):
    return q + s * _ell_ratio(p, xi, alpha, beta)


@nb.njit(cache=True)
def classic_from_quantile(q, s, xi, alpha, beta):
    """(mu, sigma) for quantile-parametrised GEV values."""
    lo, hi = beta / 2.0, 1.0 - beta / 2.0
    if abs(xi) < XI_EPS:
        sigma = s / (math.log(-math.log(lo)) - math.log(-math.log(hi)))
        return q + sigma * math.log(-math.log(alpha)), sigma
    den = _ell_m1(hi, xi) - _ell_m1(lo, xi)
    return q - s * _ell_m1(alpha, xi) / den, xi * s / den


@nb.njit(cache=True)
def quantile_from_classic(mu, sigma, xi, alpha, beta):
    """(q_alpha, s_beta) for classical GEV values."""
    lo, hi = beta / 2.0, 1.0 - beta / 2.0
    if abs(xi) < XI_EPS:
        q = mu - sigma * math.log(-math.log(alpha))
        return q, sigma * (math.log(-math.log(lo)) - math.log(-math.log(hi)))
    q = mu + sigma * _ell_m1(alpha, xi) / xi
    return q, sigma * (_ell_m1(hi, xi) - _ell_m1(lo, xi)) / xi


def to_classic(qp: QuantileParams) -> ClassicParams:
    mu, sigma = classic_from_quantile(qp.q_alpha, qp.s_beta, qp.xi, qp.alpha, qp.beta)
    return ClassicParams(mu, sigma, qp.xi)


def to_quantile(p: ClassicParams, alpha: float = 0.5, beta: float = 0.5) -> QuantileParams:
    q, s = quantile_from_classic(p.mu, p.sigma, p.xi, alpha, beta)
    return QuantileParams(q, s, p.xi, alpha, beta)


@nb.njit(cache=True)
def gev_logcdf_scalar(x, mu, sigma, xi):
    z = (x - mu) / sigma
    if abs(xi) < XI_EPS:
        return -math.exp(-z)
    w = xi * z
    if w <= -1.0:
        return -np.inf if xi > 0 else 0.0
    return -math.exp(-math.log1p(w) / xi)


@nb.njit(cache=True)
def gev_logpdf_scalar(x, mu, sigma, xi):
    z = (x - mu) / sigma
    if abs(xi) < XI_EPS:
        return -math.log(sigma) - z - math.exp(-z)
    w = xi * z
    if w <= -1.0:
        return -np.inf
    lw = math.log1p(w)
    return -math.log(sigma) - (1.0 + 1.0 / xi) * lw - math.exp(-lw / xi)


@nb.njit(cache=True)
def _gev_logcdf_array(x, mu, sigma, xi):
    out = np.empty(x.shape[0])
    for i in range(x.shape[0]):
        out[i] = gev_logcdf_scalar(x[i], mu, sigma, xi)
    return out


@nb.njit(cache=True)
def _gev_logpdf_array(x, mu, sigma, xi):
    out = np.empty(x.shape[0])
    for i in range(x.shape[0]):
        out[i] = gev_logpdf_scalar(x[i], mu, sigma, xi)
    return out


@nb.njit(cache=True)
def gev_loglik_sum(x, mu, sigma, xi):
    total = 0.0
    for i in range(x.shape[0]):
        total += gev_logpdf_scalar(x[i], mu, sigma, xi)
        if total == -np.inf:
            return total
    return total


def _apply(kernel, x, *args):
    arr = np.asarray(x, dtype=float)
    out = kernel(np.ascontiguousarray(arr.ravel()), *args).reshape(arr.shape)
    return float(out) if out.ndim == 0 else out


def gev_logcdf(x, p: ClassicParams):
    return _apply(_gev_logcdf_array, x, p.mu, p.sigma, p.xi)


def gev_cdf(x, p: ClassicParams):
    """GEV distribution function, total on the real line."""
    return np.exp(gev_logcdf(x, p))


def gev_logpdf(x, p: ClassicParams):
    return _apply(_gev_logpdf_array, x, p.mu, p.sigma, p.xi)


def gev_pdf(x, p: ClassicParams):
    return np.exp(gev_logpdf(x, p))


def gev_quantile(prob, p: ClassicParams):
    prob = _check_prob(prob)
    ell = gumbel_ell(prob)
    if abs(p.xi) < XI_EPS:
        return p.mu - p.sigma * ell
    return p.mu + p.sigma * np.expm1(-p.xi * ell) / p.xi


def gev_cdf_q(x, qp: QuantileParams):
    return gev_cdf(x, to_classic(qp))


def gev_pdf_q(x, qp: QuantileParams):
    return gev_pdf(x, to_classic(qp))


@nb.njit(cache=True)
def _quantile_q_array(prob, q, s, xi, alpha, beta):
    out = np.empty(prob.shape[0])
    for i in range(prob.shape[0]):
        out[i] = quantile_q_scalar(prob[i], q, s, xi, alpha, beta)
    return out


def gev_quantile_q(prob, qp: QuantileParams):
    """Quantile function in the quantile parametrisation.

    Written relative to ``q_alpha`` so that ``gev_quantile_q(alpha) == q_alpha``
    holds exactly.
    """
    prob = _check_prob(prob)
    return _apply(_quantile_q_array, prob, qp.q_alpha, qp.s_beta, qp.xi, qp.alpha, qp.beta)


def lower_endpoint(p: ClassicParams) -> float:
    return p.mu - p.sigma / p.xi if p.xi >= XI_EPS else -math.inf


def upper_endpoint(p: ClassicParams) -> float:
    return p.mu - p.sigma / p.xi if p.xi <= -XI_EPS else math.inf


def gev_sample(n: int, qp: QuantileParams, seed=0) -> np.ndarray:
    """Inverse-CDF draws; ``seed`` is an int or a ``numpy.random.Generator``."""
    if n == 0:
        return np.empty(0)
    u = make_rng(seed).random(n)
    return gev_quantile_q(u, qp)


def frechet_block_max_params(n: int, alpha_f: float) -> ClassicParams:
    """Exact law of the maximum of ``n`` iid Frechet(0, 1, alpha_f) draws.

    Max-stability gives Frechet(0, n^(1/alpha_f), alpha_f), which in GEV terms
    is ``xi = 1/alpha_f`` with ``mu = scale`` and ``sigma = scale * xi``.
    """
    if n < 1 or alpha_f <= 0:
        raise ValueError("need n >= 1 and alpha_f > 0")
    scale = n ** (1.0 / alpha_f)
    xi = 1.0 / alpha_f
    return ClassicParams(scale, scale * xi, xi)


def _check_prob(prob):
    arr = np.asarray(prob, dtype=float)
    if np.any((arr <= 0) | (arr >= 1)) or np.any(np.isnan(arr)):
        raise ValueError("probabilities must lie strictly inside (0, 1)")
    return float(arr) if arr.ndim == 0 else arr
