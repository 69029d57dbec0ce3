"""Two-gap dynamics: direct integration versus the angle rotation.

In Birkhoff coordinates the flow is zeta_n -> zeta_n exp(i omega_n t). We
compare with a pseudo-spectral solve, measure the frequencies from the
solver output, and search for near-returns of the quasi-periodic orbit.
"""

import numpy as np

from bobk import (
    SolverConfig,
    evolve_direct,
    evolve_quadrature,
    forward_map,
    frequencies,
    from_poles,
    l2_distance,
    measure_frequencies,
    reconstruct_finite_gap,
    recurrence_probe,
)
from bobk.io import load_fixture

u0 = from_poles(load_fixture("two_gap"))
z0 = forward_map(u0, 4).trimmed()
om = frequencies(z0.gammas)
print("actions :", z0.gammas)
print("omega   :", om)

trace = evolve_direct(u0, 1.0, SolverConfig(grid=128, checkpoints=10, track_lambdas=4))
for t, s in zip(trace.times[::5], trace.states[::5]):
    uq = reconstruct_finite_gap(evolve_quadrature(z0, t), K=u0.K)
    print(f"t={t:.1f}  direct vs quadrature {l2_distance(s.padded(u0.K), uq):.2e}")

lam = np.array(trace.diagnostics["lambdas"])
print("max lambda drift:", np.abs(lam - lam[0]).max())
print("measured omega  :", measure_frequencies(trace, z0.N))

times = recurrence_probe(z0, 400.0, 0.2)
print(f"near-returns below 0.2 up to t=400: {np.round(times, 3)}")
print("omega_1 t / 2pi at those times:", np.round(np.array(times) * om[0] / (2 * np.pi), 3))
print("omega_2 t / 2pi at those times:", np.round(np.array(times) * om[1] / (2 * np.pi), 3))
