#!/usr/bin/env python
"""Fit GEV and bGEV to block maxima and compare return levels."""
import numpy as np

from blendgev import BlendConfig, QuantileParams, bgev_sample, to_quantile
from blendgev.estimation import fit, return_level
from blendgev.gev import frechet_block_max_params, gev_quantile
from blendgev.priors import PcPrior
from blendgev.simulation import frechet_block_maxima

# 100 maxima of blocks of 30 Frechet(alpha=10) variables; the exact law is known
n, N = 30, 100
x = frechet_block_maxima(n, N, 10.0, np.random.default_rng(2024))
truth = frechet_block_max_params(n, 10.0)
print("truth (classic):", truth)
print("truth (quantile):", to_quantile(truth))

gev_fit = fit(x, "gev")
bgev_fit = fit(x, "bgev", cfg=BlendConfig())
pen_fit = fit(x, "bgev", prior=PcPrior(lam=7.0))
for name, fr in (("GEV", gev_fit), ("bGEV", bgev_fit), ("bGEV + PC prior", pen_fit)):
    p = fr.params
    print(f"{name:16s} q={p.q_alpha:.4f} s={p.s_beta:.4f} xi={p.xi:.4f} loglik={fr.loglik:.3f} iters={fr.iterations}")

T = np.array([10.0, 50.0, 100.0])
print("\n    T      true       GEV      bGEV   bGEV+prior")
true_rl = gev_quantile(1 - 1 / T, truth)
for row in zip(T, true_rl, return_level(gev_fit, T), return_level(bgev_fit, T), return_level(pen_fit, T)):
    print("  ".join(f"{v:8.4f}" for v in row))

# the fit result serialises to a flat key=value block
print("\n" + bgev_fit.to_text())

# recovering known bGEV parameters from a large sample
y = bgev_sample(2000, QuantileParams(1.0, 2.0, 0.2), seed=3)
print("bGEV(1, 2, 0.2) sample of 2000 ->", fit(y, "bgev", prior=PcPrior()).params)
