"""Eigensolver kernels with a compiled core and a pure-Python fallback.

The compiled extension ``_ceig`` is preferred when importable; setting the
environment variable ``MULTIWELL_PURE=1`` forces the numpy fallback.  Both
implementations expose the same four routines and are interchangeable,
which is exactly what the kernel benchmark compares.
"""

import os

import numpy as np

from . import pyeig

try:
    from . import _ceig
except ImportError:  # pragma: no cover - depends on the build
    _ceig = None

if _ceig is not None and not os.environ.get("MULTIWELL_PURE"):
    _active = _ceig
else:
    _active = pyeig

HAVE_COMPILED = _ceig is not None
ACTIVE_IMPL = "compiled" if _active is _ceig else "pure"

EigenConvergenceError = pyeig.EigenConvergenceError


def implementations():
    """Available kernel implementations keyed by name."""
    impls = {"pure": pyeig}
    if _ceig is not None:
        impls["compiled"] = _ceig
    return impls


def householder_tridiag(a, vectors=True):
    return _active.householder_tridiag(a, vectors)


def tql(d, e, zt=None, max_sweeps=50):
    try:
        return _active.tql(d, e, zt, max_sweeps)
    except _active.EigenConvergenceError as exc:  # normalize exception type
        raise EigenConvergenceError(str(exc)) from exc


def band_to_tridiag(ab):
    return _active.band_to_tridiag(ab)


def tridiag_eigenvector(d, e, lam, b0, n_iter=3):
    return _active.tridiag_eigenvector(d, e, lam, b0, n_iter)


def symmetric_eigh(a, vectors=True, impl=None):
    """Eigenvalues (ascending) and eigenvectors of a symmetric matrix.

    Uses Householder reduction followed by implicit-shift QL.  Eigenvectors
    are returned as columns.  ``impl`` selects a specific kernel module
    (for benchmarking); default is the active one.
    """
    mod = _active if impl is None else impl
    a = np.asarray(a, dtype=float)
    d, e, qt = mod.householder_tridiag(a, vectors)
    w = mod.tql(d, e, qt if vectors else None)
    if vectors:
        return w, qt.T.copy()
    return w, None


def banded_eigvals(ab, impl=None):
    """Ascending eigenvalues of a symmetric band matrix (lower storage)."""
    mod = _active if impl is None else impl
    d, e = mod.band_to_tridiag(ab)
    return mod.tql(d, e, None)
