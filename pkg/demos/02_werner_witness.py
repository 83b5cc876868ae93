"""
A single witness for every entangled Werner state
=================================================

The realignment construction turns a state into an observable ``W`` with
``Tr(W rho) = 1 - ||R(rho)||``.  For two-qubit Werner states with f < 1/2 it
always returns the swap operator, whose expectation is f itself.
"""

import numpy as np

from entwit.states import swap_operator, werner_2x2
from entwit.witness import evaluate, product_extremum, realignment_witness

W = realignment_witness(werner_2x2(-0.5))
print(np.round(W.mat.real, 12))
print("equals swap:", np.allclose(W.mat, swap_operator(2)))

# The same matrix comes back for any f below 1/2, and Tr(W rho_f) = f
for f in (-1, -0.5, 0, 0.4):
    Wf = realignment_witness(werner_2x2(f))
    print(f"f = {f:+.1f}  same W: {np.allclose(Wf.mat, W.mat)}  Tr(W rho) = {evaluate(Wf, werner_2x2(f)):+.6f}")

# Block positivity: <ab|V|ab> = |<a|b>|^2 >= 0, reached at orthogonal a, b
ext = product_extremum(W, restarts=10)
print("min over product states:", round(ext.value, 12), " grid check:", ext.certified)
