"""Birkhoff coordinates for the Benjamin-Ono equation on the torus."""

from .errors import *  # noqa: F401,F403
from .evolution import (
    EvolutionTrace,
    SolverConfig,
    evolve_direct,
    evolve_quadrature,
    frequencies,
    hamiltonian_actions,
    hamiltonian_direct,
    lax_residual,
    measure_frequencies,
    recurrence_probe,
)
from .finite_gap import (
    FiniteGapSpec,
    OneGap,
    from_poles,
    one_gap_closed_form,
    poisson_form,
    traveling_wave_speed,
)
from .forward import (
    BirkhoffCoords,
    forward_map,
    generating_function,
    kappa_weights,
    trace_residuals,
)
from .fourier import (
    GridFunction,
    HardyCoeffs,
    Potential,
    analyze,
    hilbert_transform,
    l2_distance,
    lax_matrix,
    synthesize,
    toeplitz_matrix,
)
from .inverse import reconstruct_finite_gap, reconstruct_poles, reconstruct_resolvent
from .spectrum import LaxSpectrum, band_report, compute_spectrum
from .validation import (
    GradientEngine,
    ValidationReport,
    gradient_check,
    poisson_bracket,
    run_suite,
    symmetry_suite,
)

__version__ = "0.1.0"
