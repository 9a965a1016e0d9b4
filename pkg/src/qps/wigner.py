"""Line operators and the discrete Wigner transform.

The line operator for a phase-space point is

    P_{q,p} = sum over the N+1 bases b of |M_{q,p}(b); b><M_{q,p}(b); b| - I,

and the Wigner transform of an operator A is W_A(q, p) = Tr(A P_{q,p}).
Line operators are built from their closed-form position-basis matrix
elements; the basis-sum and explicit phase-sum constructions are kept as
independent cross-checks.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .field import BasisIndex, Dimension, as_dimension, line_point
from .mub import MubFamily
from .operators import DensityMatrix, xz_power, schwinger_z

__all__ = [
    "WignerGrid", "CharacteristicTable", "NonRealWignerValue", "DimensionMismatch",
    "line_operator", "line_operator_table", "line_mask", "line_operator_mub", "line_operator_explicit",
    "wigner_transform", "wigner_transform_complex", "characteristic_function",
    "wigner_from_characteristic", "inverse_wigner", "overlap", "radon_marginal",
    "REALITY_LIMIT",
]

# imaginary residue above which a Hermitian input is treated as corrupt
REALITY_LIMIT = 1e-8


class NonRealWignerValue(ValueError):
    pass


class DimensionMismatch(ValueError):
    pass


@dataclass(frozen=True)
class WignerGrid:
    """Real Wigner values, ``values[q, p]``."""

    values: np.ndarray
    dim: Dimension

    def __post_init__(self):
        n = self.dim.n
        if self.values.shape != (n, n):
            raise ValueError(f"Wigner grid must be {n}x{n}, got {self.values.shape}")

    @classmethod
    def from_array(cls, values) -> "WignerGrid":
        v = np.asarray(values, dtype=float)
        return cls(v, as_dimension(v.shape[0]))

    def normalization(self) -> float:
        """(1/N) sum_{q,p} W; equals the trace of the source operator."""
        return float(self.values.sum() / self.dim.n)


@dataclass(frozen=True)
class CharacteristicTable:
    """Traces against the Schwinger operator basis.

    ``kb[k - 1, b] = Tr(A [(X Z^b)^k]^dag)`` for k in 1..N-1, and
    ``l[l] = Tr(A (Z^l)^dag)``.
    """

    kb: np.ndarray
    l: np.ndarray
    dim: Dimension


def _as_matrix(a, n: Dimension | None) -> tuple[np.ndarray, Dimension]:
    if isinstance(a, DensityMatrix):
        return a.matrix, a.dim
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    dim = as_dimension(m.shape[0]) if n is None else as_dimension(n)
    if m.shape[0] != dim.n:
        raise DimensionMismatch(f"operator is {m.shape[0]}x{m.shape[0]}, dimension is {dim.n}")
    return m, dim


@lru_cache(maxsize=None)
def _table(n: int) -> np.ndarray:
    dim = Dimension(n)
    r = np.arange(n)[:, None]
    c = np.arange(n)[None, :]
    roots = np.array(dim.roots)
    table = np.zeros((n, n, n, n), dtype=complex)
    for q in range(n):
        target = (2 * q + 1) % n
        diag_hit = ((r == c) & ((2 * r) % n == target)).astype(float)
        anti = ((r + c) % n == target)
        for p in range(n):
            m = anti * roots[(p * (r - c)) % n] - diag_hit
            m[q, q] += 1.0
            table[q, p] = m
    table.setflags(write=False)
    return table


def line_operator_table(n: Dimension | int) -> np.ndarray:
    """All line operators, ``table[q, p]`` is the N x N matrix P_{q,p} (read-only, cached)."""
    return _table(int(as_dimension(n)))


def line_operator(q: int, p: int, n: Dimension | int) -> np.ndarray:
    """P_{q,p} from its closed-form matrix elements.

    <r|P_{q,p}|c> = d(r,q) d(c,q) - d(r,c) d(2r, 2q+1) + d(r+c, 2q+1) omega^{p(r-c)},
    all Kronecker deltas taken mod N.
    """
    dim = as_dimension(n)
    if not (0 <= q < dim.n and 0 <= p < dim.n):
        raise ValueError(f"phase-space point ({q}, {p}) outside [0, {dim.n - 1}]")
    return line_operator_table(dim)[q, p]


def line_operator_mub(q: int, p: int, mubs: MubFamily) -> np.ndarray:
    """P_{q,p} as the sum of one projector from each basis, minus the identity."""
    n = mubs.dim.n
    out = -np.eye(n, dtype=complex)
    for b in mubs.indices:
        out += mubs.projector(line_point(q, p, b, n), b)
    return out


def line_operator_explicit(q: int, p: int, mubs: MubFamily) -> np.ndarray:
    """P_{q,p} from the triple phase sum over (b, k, m) plus the reference-basis sum."""
    dim = mubs.dim
    n = dim.n
    out = np.zeros((n, n), dtype=complex)
    for b in range(n):
        basis = BasisIndex(b)
        for m in range(n):
            coeff = sum(dim.phase(k * (-p + b * q - m)) for k in range(1, n))
            out += coeff * mubs.projector(m, basis)
    for nn in range(n):
        coeff = sum(dim.phase(k * (q - nn)) for k in range(n))
        out[nn, nn] += coeff
    return out / n


def wigner_transform_complex(a, n: Dimension | int | None = None) -> np.ndarray:
    """Tr(A P_{q,p}) for every point, without discarding imaginary parts."""
    m, dim = _as_matrix(a, None if n is None else as_dimension(n))
    return np.einsum("ij,qpji->qp", m, line_operator_table(dim))


def wigner_transform(a, n: Dimension | int | None = None) -> WignerGrid:
    """Wigner grid W(q, p) = Tr(A P_{q,p}) of a Hermitian operator.

    Raises :class:`NonRealWignerValue` when the imaginary residue exceeds
    ``REALITY_LIMIT``; use :func:`wigner_transform_complex` for
    non-Hermitian operators.
    """
    vals = wigner_transform_complex(a, n)
    resid = float(np.max(np.abs(vals.imag)))
    if resid > REALITY_LIMIT:
        raise NonRealWignerValue(f"Wigner value has imaginary part {resid:.3e}; input not Hermitian?")
    return WignerGrid(np.ascontiguousarray(vals.real), as_dimension(vals.shape[0]))


def characteristic_function(a, n: Dimension | int | None = None) -> CharacteristicTable:
    m, dim = _as_matrix(a, None if n is None else as_dimension(n))
    N = dim.n
    kb = np.zeros((N - 1, N), dtype=complex)
    for b in range(N):
        for k in range(1, N):
            kb[k - 1, b] = np.trace(m @ xz_power(b, k, dim).conj().T)
    z = schwinger_z(dim)
    l = np.array([np.trace(m @ np.linalg.matrix_power(z, l).conj().T) for l in range(N)])
    return CharacteristicTable(kb, l, dim)


def wigner_from_characteristic(table: CharacteristicTable) -> np.ndarray:
    """Reassemble W(q, p) from the Schwinger-basis traces (complex result)."""
    dim = table.dim
    N = dim.n
    out = np.zeros((N, N), dtype=complex)
    for q in range(N):
        for p in range(N):
            s = 0j
            for b in range(N):
                for k in range(1, N):
                    s += table.kb[k - 1, b] * dim.phase(k * (-p + b * q))
            for l in range(N):
                s += table.l[l] * dim.phase(l * q)
            out[q, p] = s / N
    return out


def inverse_wigner(w: WignerGrid) -> np.ndarray:
    """A = (1/N) sum_{q,p} W(q,p) P_{q,p}."""
    if not isinstance(w, WignerGrid):
        w = WignerGrid.from_array(w)
    dim = w.dim
    return np.einsum("qp,qpij->ij", w.values, line_operator_table(dim)) / dim.n


def overlap(wa: WignerGrid, wb: WignerGrid) -> float:
    """(1/N) sum W_A W_B, equal to Tr(AB)."""
    if wa.dim != wb.dim:
        raise DimensionMismatch(f"grids have dimensions {wa.dim.n} and {wb.dim.n}")
    return float(np.sum(wa.values * wb.values) / wa.dim.n)


def line_mask(m: int, b: BasisIndex, n: Dimension | int) -> np.ndarray:
    """Boolean (q, p) mask of the phase-space line M_{q,p}(b) = m."""
    N = int(as_dimension(n))
    b.check(N)
    q = np.arange(N)[:, None]
    p = np.arange(N)[None, :]
    if b.is_reference:
        return np.broadcast_to(q == m, (N, N))
    return (-p + b.shift * q) % N == m


def radon_marginal(w: WignerGrid, m: int, b: BasisIndex, n: Dimension | int | None = None) -> float:
    """(1/N) times the sum of W over the line M_{q,p}(b) = m; equals <m;b|rho|m;b>."""
    dim = w.dim if n is None else as_dimension(n)
    if dim != w.dim:
        raise DimensionMismatch(f"grid has dimension {w.dim.n}, asked for {dim.n}")
    return float(w.values[line_mask(m, b, dim)].sum() / dim.n)
