#!/usr/bin/env python
"""GEV in classic (mu, sigma, xi) and quantile (q_alpha, s_beta, xi) form."""
import numpy as np

from blendgev import ClassicParams, QuantileParams, gev_cdf_q, gev_quantile_q, to_classic, to_quantile

# standard Gumbel: the median is -log(log 2) and the interquartile range about 1.57
gumbel = to_quantile(ClassicParams(0.0, 1.0, 0.0), alpha=0.5, beta=0.5)
print("Gumbel(0, 1) ->", gumbel)

# mu and sigma mean different things for different tail shapes
for xi in (-0.3, 0.0, 0.2, 0.5):
    qp = to_quantile(ClassicParams(0.0, 1.0, xi))
    print(f"mu=0, sigma=1, xi={xi:5.2f}:  median={qp.q_alpha:8.4f}  IQR={qp.s_beta:8.4f}")

# with (q, s) fixed the median and the spread stay put while xi moves the tail
for xi in (0.0, 1e-9, 0.2, 0.5):
    qp = QuantileParams(2.0, 1.0, xi)
    q25, q50, q75 = gev_quantile_q(np.array([0.25, 0.5, 0.75]), qp)
    q99 = gev_quantile_q(0.99, qp)
    print(f"q=2, s=1, xi={xi:g}: quartiles {q25:.4f} {q50:.4f} {q75:.4f}, 99% {q99:.3f}")

# round trip through both maps
cp = ClassicParams(3.0, 0.7, 0.15)
back = to_classic(to_quantile(cp, alpha=0.3, beta=0.8))
print("round trip error:", abs(back.mu - cp.mu), abs(back.sigma - cp.sigma), abs(back.xi - cp.xi))
print("F(q_alpha) with alpha=0.3:", gev_cdf_q(2.0, QuantileParams(2.0, 1.0, 0.3, alpha=0.3)))
