"""The N+1 mutually unbiased bases for prime N.

The reference basis is the position basis ``|n>``.  For each shift ``b`` the
eigenvectors of ``X Z^b`` are

    |m; b> = N^{-1/2} sum_n omega^{b n(n-1)/2 - n m} |n>,

with ``X Z^b |m; b> = omega^m |m; b>``.  Shift 0 is the momentum basis,
relabelled: ``|m; 0> = |p = N - m>``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .field import REFERENCE, BasisIndex, Dimension, as_dimension, basis_indices
from .operators import schwinger_x, schwinger_z

__all__ = [
    "MubFamily", "ConstructionInvariantViolated", "mub_state", "momentum_state",
    "mub_family", "MUB_TOL",
]

MUB_TOL = 1e-10


class ConstructionInvariantViolated(RuntimeError):
    """A freshly built basis set failed its own invariants (implementation bug)."""


def _mub_phases(m: int, b: int, n: Dimension) -> np.ndarray:
    idx = np.arange(n.n)
    # n(n-1)/2 is an integer, so b * that equals (b/2) n(n-1) in the field
    expo = (b * (idx * (idx - 1) // 2) - idx * m) % n.n
    return np.array([n.phase(e) for e in expo])


def mub_state(m: int, b: BasisIndex, n: Dimension | int) -> np.ndarray:
    n = as_dimension(n)
    if not 0 <= m < n.n:
        raise ValueError(f"state label {m} outside [0, {n.n - 1}]")
    b.check(n)
    if b.is_reference:
        e = np.zeros(n.n, dtype=complex)
        e[m] = 1.0
        return e
    return _mub_phases(m, b.shift, n) / np.sqrt(n.n)


def momentum_state(p: int, n: Dimension | int) -> np.ndarray:
    """|p> = N^{-1/2} sum_q exp(2 pi i p q / N) |q>."""
    n = as_dimension(n)
    if not 0 <= p < n.n:
        raise ValueError(f"momentum {p} outside [0, {n.n - 1}]")
    return np.array([n.phase(p * q) for q in range(n.n)]) / np.sqrt(n.n)


@dataclass(frozen=True)
class MubFamily:
    """All N+1 bases.  ``bases[b][:, m]`` is the state ``|m; b>``."""

    dim: Dimension
    bases: dict[BasisIndex, np.ndarray] = field(repr=False)

    @property
    def indices(self) -> list[BasisIndex]:
        return basis_indices(self.dim)

    def basis(self, b: BasisIndex) -> np.ndarray:
        return self.bases[b]

    def state(self, m: int, b: BasisIndex) -> np.ndarray:
        return self.bases[b][:, m]

    def projector(self, m: int, b: BasisIndex) -> np.ndarray:
        v = self.state(m, b)
        return np.outer(v, v.conj())

    def expectation(self, rho, m: int, b: BasisIndex) -> float:
        """<m; b| rho |m; b>, real part."""
        v = self.state(m, b)
        return float(np.real(v.conj() @ np.asarray(rho) @ v))

    def max_violations(self) -> dict[str, float]:
        """Largest deviation from orthonormality, unbiasedness and the eigen-relation."""
        n = self.dim.n
        eye = np.eye(n)
        ortho = max(float(np.max(np.abs(u.conj().T @ u - eye))) for u in self.bases.values())
        unbiased = 0.0
        idx = self.indices
        for i, b1 in enumerate(idx):
            for b2 in idx[i + 1:]:
                ov = np.abs(self.bases[b1].conj().T @ self.bases[b2]) ** 2
                unbiased = max(unbiased, float(np.max(np.abs(ov - 1.0 / n))))
        x, z = schwinger_x(self.dim), schwinger_z(self.dim)
        eig = 0.0
        for b in idx[1:]:
            xzb = x @ np.linalg.matrix_power(z, b.shift)
            u = self.bases[b]
            eig = max(eig, float(np.max(np.abs(xzb @ u - u * np.array(self.dim.roots)))))
        ref = self.bases[REFERENCE]
        eig = max(eig, float(np.max(np.abs(z @ ref - ref * np.array(self.dim.roots)))))
        return {"orthonormal": ortho, "unbiased": unbiased, "eigen": eig}


@lru_cache(maxsize=None)
def _family(n: int) -> MubFamily:
    dim = Dimension(n)
    bases = {}
    for b in basis_indices(dim):
        u = np.column_stack([mub_state(m, b, dim) for m in range(n)])
        u.setflags(write=False)
        bases[b] = u
    fam = MubFamily(dim, bases)
    bad = {k: v for k, v in fam.max_violations().items() if v > MUB_TOL}
    if bad:
        raise ConstructionInvariantViolated(f"MUB construction for N={n} violates {bad}")
    return fam


def mub_family(n: Dimension | int) -> MubFamily:
    """Build (and cache) the full family, verifying every invariant."""
    return _family(int(as_dimension(n)))
