"""Probability integral transform checks for fitted GEV / bGEV models."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .bgev import BlendConfig, bgev_cdf
from .gev import QuantileParams, gev_cdf_q

# asymptotic 1% critical value of the one-sample KS statistic is 1.63 / sqrt(n)
KS_C99 = 1.63


@dataclass
class PitReport:
    pit: np.ndarray
    counts: np.ndarray
    ks: float

    @property
    def n(self) -> int:
        return self.pit.size

    def passes(self, slack: float = 1.5) -> bool:
        return self.ks <= ks_bound(self.n, slack)

    def to_csv(self, data) -> str:
        rows = ["index,observation,pit"]
        rows += [f"{i},{x!r},{u!r}" for i, (x, u) in enumerate(zip(map(float, data), map(float, self.pit)))]
        return "\n".join(rows) + "\n"


def ks_distance(u) -> float:
    """sup |ECDF(u) - t| over t in [0, 1] for values in [0, 1]."""
    u = np.sort(np.asarray(u, dtype=float))
    n = u.size
    i = np.arange(1, n + 1)
    return float(max(np.max(i / n - u), np.max(u - (i - 1) / n)))


def ks_bound(n: int, slack: float = 1.5) -> float:
    return slack * KS_C99 / math.sqrt(n)


def pit(
    data,
    model: str,
    params: QuantileParams,
    cfg: Optional[BlendConfig] = None,
    bins: int = 10,
) -> PitReport:
    """Plug-in PIT values ``CDF(data_i)`` with a histogram and KS distance."""
    x = np.asarray(data, dtype=float).ravel()
    if x.size == 0:
        raise ValueError("no observations")
    if model == "bgev":
        u = bgev_cdf(x, params, cfg or BlendConfig(params.alpha, params.beta))
    elif model == "gev":
        u = gev_cdf_q(x, params)
    else:
        raise ValueError(f"unknown model {model!r}")
    u = np.atleast_1d(np.asarray(u, dtype=float))
    counts, _ = np.histogram(u, bins=bins, range=(0.0, 1.0))
    return PitReport(u, counts, ks_distance(u))
