#!/usr/bin/env python
"""The PC prior on the tail shape and its truncation to [0, 0.5)."""
import math

import numpy as np

from blendgev.numerics import integrate
from blendgev.priors import PcPrior, p3c_density, pc_density

grid = np.round(np.arange(0.0, 0.5, 0.05), 2)
for lam in (1.0, 7.0, 20.0):
    prior = PcPrior(lam, upper=0.5)
    # the untruncated prior is exponential in xi / sqrt(1 - xi), so its mass on [0, 0.5) is 1 - exp(-lam / 2)
    z = math.exp(prior.log_norm)
    print(f"lambda={lam:4g}: mass on [0, 0.5) = {z:.6f} (closed form {-math.expm1(-lam / 2):.6f})")
    print("   pc :", np.round(pc_density(grid, lam), 4))
    print("   p3c:", np.round(p3c_density(grid, prior), 4))

prior = PcPrior()
print("\nintegral of the truncated prior:", integrate(lambda t: float(p3c_density(t, prior)), 0.0, 0.5))
print("density at and above the cut:", p3c_density(np.array([0.4999, 0.5, 0.7]), prior))
