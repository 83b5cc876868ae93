"""
Noise thresholds for the Tiles bound entangled state
====================================================

Mix the Tiles state with white noise, ``rho_p = p rho + (1 - p) I/9``, and find
the smallest p each test still detects.  Witnesses built from a noisy member
of the family can beat the one built from the pure state.
"""

import numpy as np

from entwit.analysis import map_detector, mixture_threshold, realign_detector, witness_detector
from entwit.maps import from_witness
from entwit.states import noisy_mixture, upb_tiles_bes
from entwit.witness import realignment_witness

rho = upb_tiles_bes()

print("realignment criterion:       p* =", round(mixture_threshold(rho, realign_detector).p_star, 5))

W = realignment_witness(rho)
print("witness from rho itself:     p* =", round(mixture_threshold(rho, witness_detector(W)).p_star, 5))
print("its map, (Id x L) rho_p:     p* =", round(mixture_threshold(rho, map_detector(from_witness(W))).p_star, 5))

# Sweep the state the witness is built from
print("\n  p0    map threshold")
for p0 in np.round(np.arange(0.1, 1.01, 0.1), 2):
    L = from_witness(realignment_witness(noisy_mixture(rho, p0)))
    print(f"  {p0:.1f}   {mixture_threshold(rho, map_detector(L)).p_star:.5f}")
