#!/usr/bin/env python
"""Finite blocks of Cauchy data put mass where the Frechet limit has none.

The maximum of n standard Cauchy variables, divided by n / pi, tends to a
unit Frechet law with support (0, inf).  For every finite n it is negative
with probability 2^-n, and the fit of the limit near the lower endpoint is
poor: this is what motivates replacing the left tail.
"""
from blendgev.simulation import demo_cauchy

rep = demo_cauchy(n_list=(2, 5, 10, 20, 100, 1000, 10000), reps=100_000, seed=1)
print(rep.pretty())
