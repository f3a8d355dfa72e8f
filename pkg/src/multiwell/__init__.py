"""Quantum multi-well workbench.

Stationary and time-dependent Schrodinger solvers for one- and
two-dimensional multi-well potentials, cross-validated three ways: basis
diagonalization with an in-repo symmetric eigensolver, split-operator FFT
propagation with spectrum extraction from the autocorrelation, and exactly
solvable isospectral double/triple wells generated from the harmonic
oscillator by factorization-energy transformations.  Classical chaos
diagnostics (surfaces of section, tangent-map regularity estimates) and
nodal-domain analysis complete the toolbox.
"""

__version__ = "0.1.0"

from . import kernels  # noqa: F401

__all__ = ["kernels", "__version__"]
