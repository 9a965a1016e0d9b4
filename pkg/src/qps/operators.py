"""Dense N x N operators in the position basis, Schwinger clock/shift, density matrices.

Operators are plain ``complex128`` numpy arrays; row index is the bra label
and column index the ket label, ``A[q, q'] = <q|A|q'>``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .field import Dimension, as_dimension

__all__ = [
    "DensityMatrix", "DensityError", "NotHermitian", "TraceNotOne", "NotPositive",
    "schwinger_z", "schwinger_x", "xz_power", "weyl", "validate_density",
    "random_density", "random_hermitian", "random_pure_state", "projector",
    "is_hermitian", "DEFAULT_TOL",
]

DEFAULT_TOL = 1e-10


class DensityError(ValueError):
    """Base for failed density-matrix checks; ``violation`` is the measured excess."""

    invariant = "density"

    def __init__(self, message: str, violation: float):
        super().__init__(message)
        self.violation = violation


class NotHermitian(DensityError):
    invariant = "hermitian"


class TraceNotOne(DensityError):
    invariant = "unit-trace"


class NotPositive(DensityError):
    invariant = "positive-semidefinite"


def _square(a, n: Dimension | None = None) -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if n is not None and a.shape[0] != int(n):
        raise ValueError(f"expected {int(n)}x{int(n)} matrix, got shape {a.shape}")
    return a


def schwinger_z(n: Dimension | int) -> np.ndarray:
    """Clock operator, Z|q> = omega^q |q>."""
    n = as_dimension(n)
    return np.diag([n.phase(q) for q in range(n.n)]).astype(complex)


def schwinger_x(n: Dimension | int) -> np.ndarray:
    """Shift operator, X|q> = |q+1 mod N>."""
    n = int(as_dimension(n))
    x = np.zeros((n, n), dtype=complex)
    x[(np.arange(n) + 1) % n, np.arange(n)] = 1.0
    return x


def weyl(k: int, l: int, n: Dimension | int) -> np.ndarray:
    """X^k Z^l built entry by entry, with the phase exponent reduced mod N."""
    n = as_dimension(n)
    out = np.zeros((n.n, n.n), dtype=complex)
    for q in range(n.n):
        out[(q + k) % n.n, q] = n.phase(l * q)
    return out


def xz_power(b: int, k: int, n: Dimension | int) -> np.ndarray:
    """(X Z^b)^k by repeated multiplication."""
    n = as_dimension(n)
    step = schwinger_x(n) @ np.linalg.matrix_power(schwinger_z(n), b % n.n)
    out = np.eye(n.n, dtype=complex)
    for _ in range(k):
        out = out @ step
    return out


def projector(vec) -> np.ndarray:
    v = np.asarray(vec, dtype=complex)
    return np.outer(v, v.conj())


def is_hermitian(a, tol: float = DEFAULT_TOL) -> bool:
    a = np.asarray(a)
    return bool(np.max(np.abs(a - a.conj().T), initial=0.0) <= tol)


@dataclass(frozen=True)
class DensityMatrix:
    """A validated density matrix; construct through :func:`validate_density`."""

    matrix: np.ndarray = field(repr=False)
    dim: Dimension
    tol: float = DEFAULT_TOL

    def __array__(self, dtype=None, copy=None):
        return self.matrix if dtype is None else self.matrix.astype(dtype)

    @property
    def diagonal(self) -> np.ndarray:
        return self.matrix.diagonal().real.copy()


def validate_density(m, tol: float = DEFAULT_TOL, n: Dimension | int | None = None) -> DensityMatrix:
    """Check Hermiticity, unit trace and positivity at absolute tolerance ``tol``.

    Raises the first failing :class:`DensityError` subclass, carrying the
    size of the violation.
    """
    if isinstance(m, DensityMatrix):
        m = m.matrix
    a = _square(m)
    dim = as_dimension(a.shape[0] if n is None else n)
    a = _square(a, dim)
    herm = float(np.max(np.abs(a - a.conj().T)))
    if herm > tol:
        raise NotHermitian(f"matrix is not Hermitian (max |A - A^dag| = {herm:.3e})", herm)
    tr = abs(np.trace(a) - 1.0)
    if tr > tol:
        raise TraceNotOne(f"trace differs from 1 by {tr:.3e}", tr)
    lowest = float(np.linalg.eigvalsh((a + a.conj().T) / 2)[0])
    if lowest < -tol:
        raise NotPositive(f"matrix has negative eigenvalue {lowest:.3e}", -lowest)
    a = a.copy()
    a.setflags(write=False)
    return DensityMatrix(a, dim, tol)


def _ginibre(n: int, rng: np.random.Generator, cols: int | None = None) -> np.ndarray:
    cols = n if cols is None else cols
    return (rng.standard_normal((n, cols)) + 1j * rng.standard_normal((n, cols))) / np.sqrt(2)


def random_density(n: Dimension | int, seed: int | np.random.Generator) -> DensityMatrix:
    """Ginibre-ensemble state G G^dag / Tr(G G^dag); full rank almost surely."""
    dim = as_dimension(n)
    rng = np.random.default_rng(seed)
    g = _ginibre(dim.n, rng)
    rho = g @ g.conj().T
    rho = rho / np.trace(rho).real
    return validate_density((rho + rho.conj().T) / 2, n=dim)


def random_pure_state(n: Dimension | int, seed: int | np.random.Generator) -> DensityMatrix:
    dim = as_dimension(n)
    rng = np.random.default_rng(seed)
    psi = _ginibre(dim.n, rng, 1)[:, 0]
    psi /= np.linalg.norm(psi)
    return validate_density(projector(psi), n=dim)


def random_hermitian(n: Dimension | int, seed: int | np.random.Generator) -> np.ndarray:
    dim = as_dimension(n)
    g = _ginibre(dim.n, np.random.default_rng(seed))
    return (g + g.conj().T) / 2
