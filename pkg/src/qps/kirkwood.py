"""Kirkwood quasi-distribution K(p, q) = Tr(rho |p><p|q><q|) and its conversion to/from Wigner grids.

Grid conventions differ on purpose: :class:`KirkwoodGrid` is indexed
``values[p, q]`` (momentum first), :class:`~qps.wigner.WignerGrid` is
indexed ``values[q, p]``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .field import Dimension, as_dimension
from .mub import momentum_state
from .operators import DensityMatrix
from .wigner import REALITY_LIMIT, WignerGrid

__all__ = [
    "KirkwoodGrid", "NonRealResult", "kirkwood", "cross_wt_projectors",
    "cross_wt_table", "kirkwood_from_wigner", "wigner_from_kirkwood", "momentum_matrix",
    "kirkwood_phase_sum",
]


class NonRealResult(ValueError):
    pass


@dataclass(frozen=True)
class KirkwoodGrid:
    values: np.ndarray
    dim: Dimension

    def __post_init__(self):
        n = self.dim.n
        if self.values.shape != (n, n):
            raise ValueError(f"Kirkwood grid must be {n}x{n}, got {self.values.shape}")

    @classmethod
    def from_array(cls, values) -> "KirkwoodGrid":
        v = np.asarray(values, dtype=complex)
        return cls(v, as_dimension(v.shape[0]))

    def position_marginal(self) -> np.ndarray:
        """sum_p K(p, q) = <q|rho|q>."""
        return self.values.sum(axis=0)

    def momentum_marginal(self) -> np.ndarray:
        """sum_q K(p, q) = <p|rho|p>."""
        return self.values.sum(axis=1)

    def total(self) -> complex:
        return complex(self.values.sum())


def momentum_matrix(n: Dimension | int) -> np.ndarray:
    """Columns are the momentum states |p>."""
    n = as_dimension(n)
    return np.column_stack([momentum_state(p, n) for p in range(n.n)])


def kirkwood(rho, n: Dimension | int | None = None) -> KirkwoodGrid:
    """K(p, q) = <q|rho|p><p|q>."""
    m = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)
    dim = as_dimension(m.shape[0] if n is None else n)
    f = momentum_matrix(dim)  # f[q, p] = <q|p>
    # (rho f)[q, p] = <q|rho|p>; <p|q> = conj(f[q, p])
    k = ((m @ f) * f.conj()).T
    return KirkwoodGrid(k, dim)


def cross_wt_projectors(qg: int, pg: int, p: int, q: int, n: Dimension | int) -> complex:
    """Wigner transform of |p><p|q><q| at the point (qg, pg), in closed form.

    (1/N) [d(q, qg) - d(2q, 2qg + 1) + exp(-2 pi i (p - pg)(2(q - qg) - 1) / N)]
    """
    dim = as_dimension(n)
    N = dim.n
    val = float(q % N == qg % N) - float((2 * q) % N == (2 * qg + 1) % N)
    return (val + dim.phase(-(p - pg) * (2 * (q - qg) - 1))) / N


def cross_wt_table(n: Dimension | int) -> np.ndarray:
    """``t[p, q, qg, pg]`` = :func:`cross_wt_projectors` (qg, pg, p, q)."""
    dim = as_dimension(n)
    N = dim.n
    p, q, qg, pg = np.ix_(*(np.arange(N),) * 4)
    roots = np.array(dim.roots)
    delta = (q == qg).astype(float) - ((2 * q) % N == (2 * qg + 1) % N)
    return (delta + roots[(-(p - pg) * (2 * (q - qg) - 1)) % N]) / N


def kirkwood_from_wigner(w: WignerGrid) -> KirkwoodGrid:
    """K(p, q) = (1/N) sum_{q', p'} W(q', p') W_{P_p P_q}(q', p')."""
    dim = w.dim
    k = np.einsum("ab,pqab->pq", w.values, cross_wt_table(dim)) / dim.n
    return KirkwoodGrid(k, dim)


def kirkwood_phase_sum(kvalues: np.ndarray, n: Dimension | int) -> np.ndarray:
    """sum_{q', p'} exp(2 pi i 2 (q - q' + h)(p - p') / N) K(p', q'), indexed [q, p]."""
    dim = as_dimension(n)
    N, h = dim.n, dim.half
    idx = np.arange(N)
    roots = np.array(dim.roots)
    # kernel[q, p, q', p']
    dq = idx[:, None, None, None] - idx[None, None, :, None] + h
    dp = idx[None, :, None, None] - idx[None, None, None, :]
    kernel = roots[(2 * dq * dp) % N]
    return np.einsum("qpab,ba->qp", kernel, np.asarray(kvalues))


def real_grid(vals: np.ndarray, dim: Dimension) -> WignerGrid:
    resid = float(np.max(np.abs(vals.imag)))
    if resid > REALITY_LIMIT:
        raise NonRealResult(f"reconstructed Wigner value has imaginary part {resid:.3e}")
    return WignerGrid(np.ascontiguousarray(vals.real), dim)


def wigner_from_kirkwood(k: KirkwoodGrid) -> WignerGrid:
    """Invert :func:`kirkwood` on grids.

    W(q, p) = sum_{q', p'} exp(2 pi i 2 (q - q' + h)(p - p') / N) K(p', q')
              + <q|rho|q> - <q+h|rho|q+h>,

    with h = (N+1)/2 and the position diagonal read off as sum_p K(p, q).
    """
    dim = k.dim
    idx = np.arange(dim.n)
    diag = k.position_marginal()
    vals = kirkwood_phase_sum(k.values, dim)
    vals = vals + (diag - diag[(idx + dim.half) % dim.n])[:, None]
    return real_grid(vals, dim)
