"""Closed forms against a brute-force operator calculation.

Both sources are represented as density matrices on truncated Fock spaces
(a two-level system for the emitter) and the normally ordered correlation
is evaluated as a matrix trace.
"""

import time

import numpy as np

from photocorr import Pairing, g2, make_pair
from photocorr.fock_oracle import build_system, g2_numeric

t0 = time.perf_counter()
for pairing in Pairing:
    worst = 0.0
    for nbar in (0.0, 0.22, 0.5, 1.0, 2.0):
        pair = make_pair(pairing, nbar)
        for d in np.linspace(0.0, 2.0 * np.pi, 16, endpoint=False):
            exact = g2(pair, 0.0, d)
            worst = max(worst, abs(g2_numeric(pair, 0.0, d) - exact) / max(1.0, exact))
    dim = build_system(make_pair(pairing, 2.0)).system_dim
    print(f"{pairing.value:>5}: worst relative deviation {worst:.2e}  (dim at nbar=2: {dim})")
print(f"elapsed {time.perf_counter() - t0:.2f} s")
