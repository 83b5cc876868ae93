"""
Witnesses as maps, and a 4 -> 2 map on the Horodecki state
==========================================================

A block-positive witness is the Choi matrix of a positive map: block (i, j) of
``W`` is the image of ``|i><j|``.  Applying that map to one side of a state is
a second, often stronger, test.

The closing part evaluates the published ``M_4 -> M_2`` map with parameters
``u`` and ``eps``.  As printed it is not positive (a sampled input has a
negative image), so its detections are not certificates.
"""

import numpy as np

from entwit.maps import (
    detection_value,
    from_witness,
    indecomposability_certificate,
    positivity_check,
    tang_apply,
    tang_dual,
    tang_map,
)
from entwit.states import horodecki_2x4, upb_tiles_bes
from entwit.witness import optimize_witness, realignment_witness

rho = upb_tiles_bes()
L = from_witness(optimize_witness(realignment_witness(rho)))
print(L)
print("sampled positivity:", positivity_check(L))
print("detects the UPB state:", detection_value(L, rho).lambda_min)
print("certificate:", bool(indecomposability_certificate(L, rho)))

# The 4 -> 2 map on the 2x4 bound entangled family
u = 0.849
T = tang_map(u)
for b in (0.1, 0.218, 0.5, 0.9):
    print(f"b = {b:.3f}  f = {detection_value(T, horodecki_2x4(b)).f:+.4f}"
          f"   dual on A: {detection_value(tang_dual(u), horodecki_2x4(b)).f:+.4f}")

# Why nothing is certified: x = (1, 0, t, u) has a zero (2,2) output with a
# nonzero off-diagonal, so the image is indefinite
x = np.array([1, 0, 0.7, u])
out = tang_apply(np.outer(x, x), u, u * u / 6)
print("image of |x><x|:\n", np.round(out, 4), "\neigenvalues:", np.round(np.linalg.eigvalsh(out), 4))
print(positivity_check(T))
