"""Blended GEV distribution.

``H(x) = F(x)^p(x) * G(x)^(1 - p(x))`` where ``F`` is the Frechet-type GEV
with parameters ``(q_alpha, s_beta, xi >= 0)``, ``G`` is a Gumbel matched to
``F`` at the ``p_a``- and ``p_b``-quantiles ``a`` and ``b`` of ``F``, and the
weight ``p`` is a Beta CDF rescaled to ``[a, b]``.  Below ``a`` the law is
exactly ``G`` (unbounded support); above ``b`` it is exactly ``F``.

Every function dispatches on the three pieces instead of evaluating the
blend globally, which keeps ``log F = -inf`` below the Frechet endpoint out
of the arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numba as nb
import numpy as np

from . import gev
from ._rng import make_rng
from .gev import (
    XI_EPS,
    QuantileParams,
    classic_from_quantile,
    gev_logcdf_scalar,
    gev_logpdf_scalar,
    gumbel_ell,
    quantile_q_scalar,
)
from .numerics import BetaShape, beta_pdf_and_derivs, find_root, incbeta, reg_inc_beta


@dataclass(frozen=True)
class BlendConfig:
    """Hyperparameters of the blend; defaults are the usual application choice."""

    alpha: float = 0.5
    beta: float = 0.5
    p_a: float = 0.05
    p_b: float = 0.2
    c1: float = 5.0
    c2: float = 5.0

    def __post_init__(self):
        if not 0 < self.alpha < 1 or not 0 < self.beta < 1:
            raise ValueError("alpha and beta must lie in (0, 1)")
        if not 0 < self.p_a < self.p_b:
            raise ValueError(f"need 0 < p_a < p_b, got p_a={self.p_a}, p_b={self.p_b}")
        if self.p_b > min(self.alpha, self.beta / 2):
            raise ValueError(
                f"p_b={self.p_b} exceeds min(alpha, beta/2)={min(self.alpha, self.beta / 2)}"
            )
        # shape 3 is accepted so the c1 = c2 = 3 simulation cells can run;
        # the log-density is C2 at the seams only for shapes above 3
        if self.c1 < 3 or self.c2 < 3:
            raise ValueError(f"weight shapes must be >= 3, got ({self.c1}, {self.c2})")

    @property
    def shape(self) -> BetaShape:
        return BetaShape(self.c1, self.c2)


@dataclass(frozen=True)
class BlendDerived:
    """Mixing interval and the matched Gumbel component."""

    a: float
    b: float
    q_tilde: float
    s_tilde: float
    mu_g: float
    sigma_g: float


@nb.njit(cache=True)
def blend_scalars(q, s, xi, alpha, beta, p_a, p_b):
    """Kernel arguments ``(mu, sigma, xi, mu_g, sigma_g, a, b)`` of the blend.

    ``a`` and ``b`` are the ``p_a``- and ``p_b``-quantiles of the Frechet
    part; the Gumbel part is pinned by ``G(a) = p_a`` and ``G(b) = p_b``.
    """
    mu, sigma = classic_from_quantile(q, s, xi, alpha, beta)
    a = quantile_q_scalar(p_a, q, s, xi, alpha, beta)
    b = quantile_q_scalar(p_b, q, s, xi, alpha, beta)
    l_pa = math.log(-math.log(p_a))
    sigma_g = (b - a) / (l_pa - math.log(-math.log(p_b)))
    return mu, sigma, xi, a + sigma_g * l_pa, sigma_g, a, b


def derive_blend(qp: QuantileParams, cfg: BlendConfig) -> BlendDerived:
    if qp.xi < 0:
        raise ValueError(f"the blended GEV needs xi >= 0, got {qp.xi}")
    if (qp.alpha, qp.beta) != (cfg.alpha, cfg.beta):
        raise ValueError("QuantileParams and BlendConfig disagree on (alpha, beta)")
    _, _, _, mu_g, sigma_g, a, b = blend_scalars(
        qp.q_alpha, qp.s_beta, qp.xi, cfg.alpha, cfg.beta, cfg.p_a, cfg.p_b
    )
    l_pa = gumbel_ell(cfg.p_a)
    q_tilde = a - sigma_g * (gumbel_ell(cfg.alpha) - l_pa)
    s_tilde = sigma_g * (gumbel_ell(cfg.beta / 2) - gumbel_ell(1 - cfg.beta / 2))
    return BlendDerived(a, b, float(q_tilde), float(s_tilde), mu_g, sigma_g)


def _kernel_args(qp: QuantileParams, cfg: BlendConfig):
    d = derive_blend(qp, cfg)
    cp = gev.to_classic(qp)
    args = (cp.mu, cp.sigma, cp.xi, d.mu_g, d.sigma_g, d.a, d.b, cfg.c1, cfg.c2, cfg.shape.log_beta)
    return d, cp, args


@nb.njit(cache=True)
def _log_terms(x, mu, sigma, xi):
    # (log F, f/F) for a GEV component inside its support
    z = (x - mu) / sigma
    if abs(xi) < XI_EPS:
        t = math.exp(-z)
        return -t, t / sigma
    lw = math.log1p(xi * z)
    return -math.exp(-lw / xi), math.exp(-(1.0 + 1.0 / xi) * lw) / sigma


@nb.njit(cache=True)
def bgev_logcdf_scalar(x, mu, sigma, xi, mu_g, sigma_g, a, b, c1, c2, lbeta):
    if x <= a:
        return -math.exp(-(x - mu_g) / sigma_g)
    if x >= b:
        return gev_logcdf_scalar(x, mu, sigma, xi)
    p = incbeta((x - a) / (b - a), c1, c2, lbeta)
    log_f, _ = _log_terms(x, mu, sigma, xi)
    log_g = -math.exp(-(x - mu_g) / sigma_g)
    return p * log_f + (1.0 - p) * log_g


@nb.njit(cache=True)
def bgev_logpdf_scalar(x, mu, sigma, xi, mu_g, sigma_g, a, b, c1, c2, lbeta):
    if x <= a:
        z = (x - mu_g) / sigma_g
        return -math.log(sigma_g) - z - math.exp(-z)
    if x >= b:
        return gev_logpdf_scalar(x, mu, sigma, xi)
    width = b - a
    y = (x - a) / width
    p = incbeta(y, c1, c2, lbeta)
    dp = math.exp((c1 - 1.0) * math.log(y) + (c2 - 1.0) * math.log1p(-y) - lbeta) / width
    log_f, r_f = _log_terms(x, mu, sigma, xi)
    log_g, r_g = _log_terms(x, mu_g, sigma_g, 0.0)
    m = dp * (log_f - log_g) + p * r_f + (1.0 - p) * r_g
    return p * log_f + (1.0 - p) * log_g + math.log(m)


@nb.njit(cache=True)
def _logcdf_array(x, mu, sigma, xi, mu_g, sigma_g, a, b, c1, c2, lbeta):
    out = np.empty(x.shape[0])
    for i in range(x.shape[0]):
        out[i] = bgev_logcdf_scalar(x[i], mu, sigma, xi, mu_g, sigma_g, a, b, c1, c2, lbeta)
    return out


@nb.njit(cache=True)
def _logpdf_array(x, mu, sigma, xi, mu_g, sigma_g, a, b, c1, c2, lbeta):
    out = np.empty(x.shape[0])
    for i in range(x.shape[0]):
        out[i] = bgev_logpdf_scalar(x[i], mu, sigma, xi, mu_g, sigma_g, a, b, c1, c2, lbeta)
    return out


@nb.njit(cache=True)
def bgev_loglik_sum(x, mu, sigma, xi, mu_g, sigma_g, a, b, c1, c2, lbeta):
    total = 0.0
    for i in range(x.shape[0]):
        total += bgev_logpdf_scalar(x[i], mu, sigma, xi, mu_g, sigma_g, a, b, c1, c2, lbeta)
    return total


def weight(x, d: BlendDerived, shape: BetaShape):
    """Beta-CDF weight of the Frechet component; 0 below ``a``, 1 above ``b``."""
    y = np.clip((np.asarray(x, dtype=float) - d.a) / (d.b - d.a), 0.0, 1.0)
    return reg_inc_beta(y, shape)


def bgev_logcdf(x, qp: QuantileParams, cfg: BlendConfig = BlendConfig()):
    _, _, args = _kernel_args(qp, cfg)
    return gev._apply(_logcdf_array, x, *args)


def bgev_cdf(x, qp: QuantileParams, cfg: BlendConfig = BlendConfig()):
    return np.exp(bgev_logcdf(x, qp, cfg))


def bgev_logpdf(x, qp: QuantileParams, cfg: BlendConfig = BlendConfig()):
    _, _, args = _kernel_args(qp, cfg)
    return gev._apply(_logpdf_array, x, *args)


def bgev_pdf(x, qp: QuantileParams, cfg: BlendConfig = BlendConfig()):
    return np.exp(bgev_logpdf(x, qp, cfg))


def _gumbel_derivs(x, mu, sigma):
    # (G, g, g', g'') for a Gumbel law
    k = 1.0 / sigma
    t = np.exp(-(x - mu) * k)
    G = np.exp(-t)
    g = G * t * k
    dg = g * t * k - G * t * k**2
    d2g = dg * t * k - 2 * g * t * k**2 + G * t * k**3
    return G, g, dg, d2g


def _gev_derivs(x, mu, sigma, xi):
    # (F, f, f', f'') for a GEV law with xi > 0, inside the support
    if xi < XI_EPS:
        return _gumbel_derivs(x, mu, sigma)
    k = xi / sigma
    w = 1.0 + k * (x - mu)
    F = np.exp(-(w ** (-1.0 / xi)))
    f = F * w ** (-1.0 - 1.0 / xi) / sigma
    inner = f * w - (1.0 + 1.0 / xi) * F * k
    df = (k / xi) * w ** (-(2.0 + 1.0 / xi)) * inner
    d2f = (k / xi) * w ** (-(3.0 + 1.0 / xi)) * (
        -(2.0 + 1.0 / xi) * k * inner + w * (df * w - f * k / xi)
    )
    return F, f, df, d2f


def bgev_pdf_derivs(x, qp: QuantileParams, cfg: BlendConfig = BlendConfig()):
    """Density ``h`` and its first two derivatives ``(h, h', h'')``.

    On the mixing interval ``h = H m`` with ``m = (log H)'``, so
    ``h' = h m + H m'`` and ``h'' = h' m + 2 h m' + H m''``.  At the seams
    the outer (Gumbel or Frechet) piece is used.
    """
    d, cp, _ = _kernel_args(qp, cfg)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    h = np.empty_like(x)
    dh = np.empty_like(x)
    d2h = np.empty_like(x)

    left = x <= d.a
    right = x >= d.b
    mid = ~(left | right)
    if left.any():
        _, h[left], dh[left], d2h[left] = _gumbel_derivs(x[left], d.mu_g, d.sigma_g)
    if right.any():
        _, h[right], dh[right], d2h[right] = _gev_derivs(x[right], cp.mu, cp.sigma, cp.xi)
    if mid.any():
        xm = x[mid]
        width = d.b - d.a
        y = (xm - d.a) / width
        p = weight(xm, d, cfg.shape)
        fb, dfb, d2fb = beta_pdf_and_derivs(y, cfg.shape)
        p1, p2, p3 = fb / width, dfb / width**2, d2fb / width**3

        F, f, df, d2f = _gev_derivs(xm, cp.mu, cp.sigma, cp.xi)
        G, g, dg, d2g = _gumbel_derivs(xm, d.mu_g, d.sigma_g)
        log_f, log_g = np.log(F), np.log(G)
        rf, rg = f / F, g / G
        # first and second derivatives of f/F and g/G
        rf1 = df / F - rf**2
        rg1 = dg / G - rg**2
        rf2 = d2f / F - 3 * rf * df / F + 2 * rf**3
        rg2 = d2g / G - 3 * rg * dg / G + 2 * rg**3

        m = p1 * (log_f - log_g) + p * rf + (1 - p) * rg
        m1 = p2 * (log_f - log_g) + 2 * p1 * (rf - rg) + p * rf1 + (1 - p) * rg1
        m2 = (
            p3 * (log_f - log_g)
            + 3 * p2 * (rf - rg)
            + 3 * p1 * (rf1 - rg1)
            + p * rf2
            + (1 - p) * rg2
        )
        H = np.exp(p * log_f + (1 - p) * log_g)
        h[mid] = H * m
        dh[mid] = h[mid] * m + H * m1
        d2h[mid] = dh[mid] * m + 2 * h[mid] * m1 + H * m2

    if h.size == 1:
        return float(h[0]), float(dh[0]), float(d2h[0])
    return h, dh, d2h


def bgev_quantile(prob, qp: QuantileParams, cfg: BlendConfig = BlendConfig(), tol: float = 1e-13):
    """Quantile function: closed form outside ``(p_a, p_b)``, root finding inside."""
    prob = np.asarray(gev._check_prob(prob), dtype=float)
    d, cp, args = _kernel_args(qp, cfg)
    flat = prob.ravel()
    out = np.empty_like(flat)

    low = flat <= cfg.p_a
    high = flat >= cfg.p_b
    out[low] = d.mu_g - d.sigma_g * gumbel_ell(flat[low])
    out[high] = gev.gev_quantile_q(flat[high], qp)
    for i in np.flatnonzero(~(low | high)):
        target = math.log(flat[i])
        out[i] = find_root(
            lambda x: bgev_logcdf_scalar(x, *args) - target, d.a, d.b, tol=tol * max(1.0, d.b - d.a)
        )
    out = out.reshape(prob.shape)
    return float(out) if out.ndim == 0 else out


def bgev_sample(n: int, qp: QuantileParams, cfg: BlendConfig = BlendConfig(), seed=0) -> np.ndarray:
    if n == 0:
        return np.empty(0)
    u = make_rng(seed).random(n)
    return bgev_quantile(u, qp, cfg)
