"""
Realignment and PPT tests on standard states
============================================

Both criteria bound a quantity that every separable state keeps below 1.
Werner states are caught by both; the Tiles bound entangled state is PPT
and only realignment sees it.
"""

import numpy as np

from entwit.criteria import ppt_check, realignment_check
from entwit.states import horodecki_2x4, maximally_mixed, upb_tiles_bes, werner_2x2

# Werner family: entangled exactly for f < 0
for f in np.linspace(-1, 1, 9):
    rho = werner_2x2(f)
    r, p = realignment_check(rho), ppt_check(rho)
    print(f"f = {f:+.2f}   ||R|| = {r.value:.4f}   lambda_min(T_A) = {p.min_eigenvalue:+.4f}   "
          f"realign: {r.entangled!s:5}  ppt: {p.entangled}")

# Bound entangled examples: positive partial transpose, so PPT is blind
for name, rho in [("Tiles UPB 3x3", upb_tiles_bes()), ("Horodecki 2x4 b=0.5", horodecki_2x4(0.5))]:
    r, p = realignment_check(rho), ppt_check(rho)
    print(f"{name:20}  ||R|| = {r.value:.4f} ({'detected' if r.entangled else 'no'})"
          f"   lambda_min(T_A) = {p.min_eigenvalue:+.1e}")

# White noise sits deep inside the separable set
print("I/9:", realignment_check(maximally_mixed((3, 3))).value)
