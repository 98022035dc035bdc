"""Cauchy-Schwarz witness of nonclassicality.

The intensity covariance at two detector phases must be a positive
semidefinite matrix for any classical field. A negative determinant
certifies nonclassical light.
"""

import math

import numpy as np

from photocorr import Pairing, make_pair
from photocorr.nonclassicality import cs_violation_threshold, diagonal_zero_nbar, witness

for pairing in (Pairing.T, Pairing.PT, Pairing.C, Pairing.PC, Pairing.CLASS, Pairing.QQ):
    print(f"{pairing.value:>5}: {cs_violation_threshold(pairing).describe()}")
print()

# S_max blows up where the diagonal variance passes through zero
print("thermal partner:")
for nbar in np.linspace(0.1, 1.5, 8):
    rep = witness(make_pair(Pairing.T, nbar))
    s = "inf" if rep.s_max_infinite else f"{rep.s_max:.4g}"
    print(f"  nbar = {nbar:4.2f}   S_max = {s:>8}   {rep.status}")
print(f"diagonal zero for C at nbar = {diagonal_zero_nbar(Pairing.C):.6f}")
print(f"diagonal zero for T at nbar = {diagonal_zero_nbar(Pairing.T):.6f} (sqrt(2) - 1 = {math.sqrt(2) - 1:.6f})")
