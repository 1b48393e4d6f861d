#!/usr/bin/env python
"""Small versions of the three simulation studies.

The full runs (M = 500) are ``blendgev simulate study1|study2|study3``; here
M is kept small so the script finishes in well under a minute.
"""
import time

from blendgev import simulation as sim

t0 = time.perf_counter()
s1 = sim.study1(ns=[30, 100], Ns=[30, 100], Ts=[30, 100], M=50, seed=1)
print(s1.pretty())

s2 = sim.study2(M=50, seed=1)
print(s2.pretty())

s3 = sim.study3(M=50, seed=1)
print(s3.pretty())
print(f"elapsed {time.perf_counter() - t0:.1f}s")
