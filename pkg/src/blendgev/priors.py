"""Penalised complexity prior for a positive tail shape and its truncation.

The PC prior (Gumbel base model, approximated through the generalised Pareto
shape) is an exponential distribution on ``u = xi / sqrt(1 - xi)`` with rate
``lambda / sqrt(2)``.  Truncating it to ``[0, upper)`` with ``upper = 0.5``
guarantees that the first two moments of the fitted law exist.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .numerics import integrate


def _check_xi(xi):
    arr = np.asarray(xi, dtype=float)
    if np.any((arr < 0) | (arr >= 1)) or np.any(np.isnan(arr)):
        raise ValueError("the PC prior is defined for 0 <= xi < 1")
    return arr


def pc_logdensity_scalar(xi: float, lam: float) -> float:
    rate = lam / math.sqrt(2.0)
    return (
        math.log(rate)
        - rate * xi / math.sqrt(1.0 - xi)
        + math.log1p(-xi / 2)
        - 1.5 * math.log1p(-xi)
    )


def pc_logdensity(xi, lam: float):
    xi = _check_xi(xi)
    if xi.ndim == 0:
        return pc_logdensity_scalar(float(xi), lam)
    rate = lam / math.sqrt(2.0)
    out = (
        math.log(rate)
        - rate * xi / np.sqrt(1.0 - xi)
        + np.log1p(-xi / 2)
        - 1.5 * np.log1p(-xi)
    )
    return out


def pc_density(xi, lam: float):
    return np.exp(pc_logdensity(xi, lam))


@dataclass(frozen=True)
class PcPrior:
    """PC prior truncated to ``[0, upper)``; the normaliser is computed once."""

    lam: float = 7.0
    upper: float = 0.5
    log_norm: float = field(init=False)

    def __post_init__(self):
        if not self.lam > 0:
            raise ValueError(f"lambda must be positive, got {self.lam}")
        if not 0 < self.upper <= 1:
            raise ValueError(f"upper must lie in (0, 1], got {self.upper}")
        if self.upper == 1:
            log_norm = 0.0
        else:
            z = integrate(lambda s: float(pc_density(s, self.lam)), 0.0, self.upper, tol=1e-13)
            log_norm = math.log(z)
        object.__setattr__(self, "log_norm", log_norm)

    def logpdf(self, xi):
        return p3c_logdensity(xi, self)

    def pdf(self, xi):
        return p3c_density(xi, self)


def p3c_logdensity(xi, prior: PcPrior):
    xi = np.asarray(xi, dtype=float)
    inside = (xi >= 0) & (xi < prior.upper)
    out = np.full(xi.shape, -np.inf)
    if np.any(inside):
        out[inside] = pc_logdensity(xi[inside], prior.lam) - prior.log_norm
    return float(out) if out.ndim == 0 else out


def p3c_density(xi, prior: PcPrior):
    return np.exp(p3c_logdensity(xi, prior))
