"""Poisson brackets of spectral quantities on a three-gap potential.

Gradients of lambda_n and gamma_n are exact (-|f_n|^2 and differences of
those); gradients of zeta_n and phi_n = arg zeta_n come from central
differences. The bracket matrices should be the identity, -i times the
identity, and zero.
"""

import numpy as np

from bobk import GradientEngine, from_poles
from bobk.io import load_fixture

u = from_poles(load_fixture("three_gap"))
eng = GradientEngine(u, 3)
print(f"J={eng.J} Fourier directions, truncation M={eng.M}")

idx = range(1, 4)
gp = np.array([[eng.bracket(("gamma", p), ("phi", n)) for n in idx] for p in idx])
zz = np.array([[eng.bracket(("zeta", p), ("zetabar", n)) for n in idx] for p in idx])
ll = np.array([[eng.bracket(("lambda", p), ("lambda", n)) for n in idx] for p in idx])
np.set_printoptions(precision=6, suppress=True)
print("{gamma_p, phi_n}:\n", gp.real)
print("{zeta_p, conj zeta_n}:\n", zz)
print("max |{lambda_p, lambda_n}|:", np.abs(ll).max())
