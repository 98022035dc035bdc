"""CHSH test with the normalized photon-photon correlation.

The normalized correlation has the form V cos(dphi), so the largest CHSH
value is 2 sqrt(2) V and the inequality breaks once V > 1/sqrt(2).
"""

from photocorr import Pairing, make_pair
from photocorr.bell import (
    bell_threshold,
    chsh_max,
    correlation_from_rates,
    double_channel_rates,
)

for pairing in (Pairing.T, Pairing.PT, Pairing.C, Pairing.PC):
    th = bell_threshold(pairing)
    print(f"{pairing.value:>3}: violated below net = {th.net:.5f} (nbar = {th.nbar:.5f})")
print()

for nbar in (0.1, 0.3, 0.5, 1.0):
    rep = chsh_max(make_pair(Pairing.T, nbar))
    print(f"T, nbar = {nbar:3.1f}: V = {rep.visibility:.4f}  CHSH = {rep.chsh_value:.4f}  {rep.status}")
print()

# a double-channel setup measures the same correlation and is blind to
# detector efficiency
pair = make_pair(Pairing.PC, 0.2)
for eta in (1.0, 0.3, 0.05):
    rates = double_channel_rates(pair, 0.0, 0.5, eta1=eta, eta2=eta)
    print(f"eta = {eta:4.2f}: total rate = {rates.total:8.5f}  C = {correlation_from_rates(rates):.10f}")
