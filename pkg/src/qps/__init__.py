"""Discrete phase-space quasi-distributions for prime-dimensional quantum systems.

Wigner grids built from line operators over the N+1 mutually unbiased
bases, Kirkwood grids, conversion between the two, and reconstruction of
the Wigner grid from simulated two-probe von Neumann measurements.
"""
from .field import (REFERENCE, BasisIndex, Dimension, EvenOrTooSmall, NotPrime, ZeroDivisor,
                    line_point, line_points, mod_inverse, validate_dimension)
from .kirkwood import KirkwoodGrid, kirkwood, kirkwood_from_wigner, wigner_from_kirkwood
from .mub import MubFamily, momentum_state, mub_family, mub_state
from .operators import (DensityMatrix, random_density, schwinger_x, schwinger_z,
                        validate_density, xz_power)
from .probe import (CorrelationRecord, MeasurementProvider, ProbeConfig, SimulatedProbes,
                    kirkwood_from_correlations, probe_correlations, reconstruct_wigner, w11)
from .wigner import (WignerGrid, characteristic_function, inverse_wigner, line_operator,
                     overlap, radon_marginal, wigner_transform)

__version__ = "0.1.0"
